#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ots::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { LessEqual, Equal, GreaterEqual };

/// Sparse constraint row: sum(value[k] * x[index[k]]) <sense> rhs.
struct Row {
    std::vector<int> index;
    std::vector<double> value;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;

    void add(int col, double coef) {
        index.push_back(col);
        value.push_back(coef);
    }
    double activity(std::span<const double> x) const;
};

/// Minimisation LP over bounded columns. Bounds may be infinite.
class LinearProgram {
public:
    int add_column(double cost, double lower = 0.0, double upper = kInf, std::string name = {});
    int add_row(Row row);

    int num_cols() const { return static_cast<int>(cost_.size()); }
    int num_rows() const { return static_cast<int>(rows_.size()); }

    const Row& row(int i) const { return rows_[static_cast<std::size_t>(i)]; }
    const std::vector<Row>& rows() const { return rows_; }
    double cost(int j) const { return cost_[static_cast<std::size_t>(j)]; }
    double lower(int j) const { return lower_[static_cast<std::size_t>(j)]; }
    double upper(int j) const { return upper_[static_cast<std::size_t>(j)]; }
    const std::string& name(int j) const { return names_[static_cast<std::size_t>(j)]; }

    void set_bounds(int j, double lower, double upper);
    void set_cost(int j, double cost);

    double objective(std::span<const double> x) const;

    /// CPLEX LP text; `integer_cols` are listed in a Generals section.
    std::string to_lp_format(std::span<const int> integer_cols = {}) const;

private:
    std::vector<double> cost_;
    std::vector<double> lower_;
    std::vector<double> upper_;
    std::vector<std::string> names_;
    std::vector<Row> rows_;
};

/// Returns a copy of `lp` with `rows` appended verbatim.
LinearProgram add_rows(LinearProgram lp, std::span<const Row> rows);

enum class Status { Optimal, Infeasible, Unbounded };
const char* to_string(Status s);

enum class VarState : std::uint8_t { Basic, AtLower, AtUpper, AtZero };

/// Simplex basis over structural columns and row logicals.
struct Basis {
    std::vector<VarState> cols;
    std::vector<VarState> rows;

    bool empty() const { return cols.empty() && rows.empty(); }
};

/// Appends basic logicals for rows added after the basis was taken.
Basis extend_basis(Basis basis, std::size_t total_rows);

struct Options {
    double feas_tol = 1e-7;
    double opt_tol = 1e-7;
    double pivot_tol = 1e-9;
    int refactor_interval = 100;
    long max_iterations = 0;  // 0: 100 * (rows + cols) + 10000
};

struct Solution {
    Status status = Status::Infeasible;
    std::vector<double> x;
    std::vector<double> row_activity;
    std::vector<double> duals;           // one per row
    std::vector<double> reduced_costs;   // one per column
    double objective = 0.0;
    Basis basis;
    long iterations = 0;
};

class SimplexError : public std::runtime_error {
public:
    SimplexError(const std::string& what, long iterations)
        : std::runtime_error(what + " after " + std::to_string(iterations) + " iterations"),
          iterations_(iterations) {}
    long iterations() const { return iterations_; }

private:
    long iterations_;
};

/// Bounded-variable simplex. A warm basis that is dual feasible is continued
/// with the dual simplex (the usual case after adding rows or tightening
/// bounds); otherwise the primal simplex runs with a composite phase 1.
/// Pricing is Dantzig with a Bland fallback after 2*(rows+cols) consecutive
/// degenerate pivots.
Solution solve(const LinearProgram& lp, const Basis* warm = nullptr, const Options& opts = {});

}  // namespace ots::lp
