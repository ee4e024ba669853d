#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ots/network.hpp"

namespace ots {

/// Dense integer matrix, row-major. Used for incidence matrices and their
/// exact LU factors, whose entries stay in {0, +1, -1}.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static IntMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    long& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    long operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<const long> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    void swap_rows(std::size_t a, std::size_t b);

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
    friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<long> data_;
};

/// Line-by-bus incidence matrix: +1 at the from-bus, -1 at the to-bus.
IntMatrix incidence_matrix(const PowerNetwork& net);

/// P*A = L*U with unit lower triangular L. `lower_inv` is L^{-1}*P as
/// accumulated by the elimination (row swaps included), so
/// lower_inv * A == upper. `perm[i]` is the original row placed at position i.
struct LuFactors {
    std::vector<std::size_t> perm;
    IntMatrix lower;
    IntMatrix lower_inv;
    IntMatrix upper;
    std::size_t rank = 0;
};

/// Exact Gaussian elimination with partial pivoting (first nonzero row wins,
/// since every candidate pivot has magnitude one).
LuFactors lu_partial_pivot(const IntMatrix& a);

struct CycleEdge {
    std::size_t line = 0;  // line position in the network
    int sign = 1;          // +1 if traversal agrees with the line's orientation

    friend bool operator==(const CycleEdge&, const CycleEdge&) = default;
};

/// A closed walk visiting each of its buses once, as an ordered list of
/// signed lines.
struct Cycle {
    std::vector<CycleEdge> edges;

    std::size_t size() const { return edges.size(); }
    friend bool operator==(const Cycle&, const Cycle&) = default;
};

struct CycleSet {
    std::vector<Cycle> cycles;
    int generation = 0;

    std::size_t size() const { return cycles.size(); }
};

/// Checks the Cycle invariants against a network; empty string when valid.
std::string check_cycle(const Cycle& c, const PowerNetwork& net);

/// Signed incidence vector over all lines.
std::vector<int> incidence_vector(const Cycle& c, std::size_t num_lines);

/// Sorted, unsigned line set used for de-duplication.
std::vector<std::size_t> edge_key(const Cycle& c);

/// Orders a signed circulation vector into a Cycle. Returns nothing when the
/// support is not a single simple cycle.
std::optional<Cycle> cycle_from_incidence(std::span<const long> v, const PowerNetwork& net);

/// Orders an unsigned line set into a Cycle oriented along its first line.
/// Returns nothing when the set is not a single simple cycle.
std::optional<Cycle> cycle_from_lines(std::span<const std::size_t> lines, const PowerNetwork& net);

/// Sum of w = capacity/susceptance over the cycle.
double cycle_weight(const Cycle& c, const PowerNetwork& net);

/// |L| - |B| + 1 fundamental cycles read off the bottom rows of L^{-1} P.
CycleSet cycle_basis(const PowerNetwork& net);

/// Symmetric difference of two cycles sharing at least one line, when it is
/// a single simple cycle.
std::optional<Cycle> combine_cycles(const Cycle& a, const Cycle& b, const PowerNetwork& net);

/// C^{k+1} = C^k plus every pairwise combination, de-duplicated by edge set.
CycleSet expand_cycle_set(const CycleSet& cs, const PowerNetwork& net);

/// Uniform sample without replacement of ceil(fraction * |cs|) cycles; the
/// sampled cycles keep their relative order.
CycleSet sample_cycles(const CycleSet& cs, double fraction, std::uint64_t seed);

/// The cycle closed by `chord` and the path joining its endpoints in the
/// tree, traversing the chord in its own orientation.
Cycle cycle_of_chord(std::span<const std::size_t> tree_lines, std::size_t chord, const PowerNetwork& net);

/// Cycle cache format: {"generation": k, "cycles": [[[line_id, sign], ...], ...]}.
std::string cycles_to_json(const CycleSet& cs, const PowerNetwork& net);
CycleSet cycles_from_json(std::string_view text, const PowerNetwork& net);

}  // namespace ots
