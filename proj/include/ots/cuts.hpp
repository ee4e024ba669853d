#pragma once

#include <span>
#include <string>
#include <vector>

#include "ots/cyclebasis.hpp"
#include "ots/formulations.hpp"
#include "ots/lp.hpp"

namespace ots {

/// Relaxation point restricted to one cycle, in scaled coordinates:
/// g_hat[a] = sigma_a f_a / B_a and w[a] = capacity_a / B_a, indexed by the
/// position of the line within the cycle.
struct SeparationContext {
    int cycle_id = 0;
    std::vector<double> w;
    std::vector<double> g_hat;
    std::vector<double> x_hat;
    double k = 0.0;
};

enum class Side { Left, Right };

/// One side of the cycle inequality for subset S (positions within the cycle).
struct CycleInequality {
    int cycle_id = 0;
    std::vector<std::size_t> subset;
    Side side = Side::Right;
    double delta = 0.0;
    double violation = 0.0;
};

inline constexpr double kViolationTol = 1e-6;

/// 2 w(S) - w(C).
double delta(std::span<const std::size_t> subset, std::span<const double> w);

/// 1 - sum(1 - x_hat).
double k_value(std::span<const double> x_hat);

SeparationContext make_context(const Cycle& c, const PowerNetwork& net, std::span<const double> flow,
                               std::span<const double> on, int cycle_id);

/// viol(S) = sum_S (g - w x) + Delta(S) K, with g negated for the left side.
double violation(const CycleInequality& ineq, const SeparationContext& ctx);

/// At most one inequality per side: S* = {a : v_a >= 0}.
std::vector<CycleInequality> separate_closed_form(const SeparationContext& ctx, double tol = kViolationTol);

/// The seed S* and every superset reached by adding the remaining lines in
/// cycle order, as long as the violation stays positive. Both sides.
std::vector<CycleInequality> separate_all(const SeparationContext& ctx, double tol = kViolationTol);

/// Sparse row over the model's flow and switch columns.
lp::Row inequality_row(const CycleInequality& ineq, const Cycle& c, const PowerNetwork& net,
                       const VariableMap& vars);

/// One audit line: cycle id, side, S as line ids, Delta(S), violation.
std::string format_cut(const CycleInequality& ineq, const Cycle& c, const PowerNetwork& net);

}  // namespace ots
