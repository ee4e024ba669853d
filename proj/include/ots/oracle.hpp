#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ots/cyclebasis.hpp"
#include "ots/network.hpp"

namespace ots::oracle {

// Single-cycle polyhedra are handled in scaled coordinates: g_a = sigma_a f_a / B_a
// with |g_a| <= w_a x_a, so a point is (g, x) in R^{2|C|}.
struct ScPoint {
    std::vector<double> g;
    std::vector<double> x;
};

/// Vertices of the pieces of S_C (one per binary x), de-duplicated.
std::vector<ScPoint> enumerate_S_C_vertices(std::span<const double> w);

/// Whether (g, x) lies in S_C (x binary within 1e-9).
bool in_S_C(const ScPoint& p, std::span<const double> w, double tol = 1e-9);

/// Right (side = +1) or left (side = -1) cycle inequality, lhs - rhs.
double cycle_slack(const ScPoint& p, std::span<const double> w, std::span<const std::size_t> subset, int side);

/// Every S with Delta(S) > 0, as sorted position lists.
std::vector<std::vector<std::size_t>> positive_subsets(std::span<const double> w);

struct HullCheckReport {
    std::size_t cycle_size = 0;
    int trials = 0;
    double max_gap = 0.0;
    std::vector<double> worst_objective;
};

/// Random objectives: max over vertices versus LP max over the inequality
/// description. `dropped` removes the right inequality of one subset.
HullCheckReport check_hull_equality(std::span<const double> w, int trials, std::uint64_t seed,
                                    std::optional<std::vector<std::size_t>> dropped = std::nullopt);

/// Whether the extended (f1, f0, y) system admits a completion of (g, x).
bool membership_extended(const ScPoint& p, std::span<const double> w);

/// Random-objective gap between the extended system and its explicit
/// projection onto (g, x, y).
double check_projection(std::span<const double> w, int trials, std::uint64_t seed);

struct FacetReport {
    bool ok = false;
    int points = 0;
    int affine_rank = 0;        // dimension of the affine hull of the witness points
    int witness_linear_rank = 0;  // linear rank of the witness list before the supplementary point
    double epsilon = 0.0;
    std::string failure;
};

/// Builds the witness points for the right inequality of S and checks
/// feasibility, tightness and affine dimension 2|C|-1.
FacetReport check_facets(std::span<const double> w, std::span<const std::size_t> subset);

struct SubsetSumInstance {
    std::vector<int> a;
    int b = 1;
};

PowerNetwork reduce_subset_sum(const SubsetSumInstance& inst);
bool subset_sum_brute(const SubsetSumInstance& inst);

struct OpfEquivalence {
    bool feasible = false;
    double angle_objective = 0.0;
    double cycle_objective = 0.0;
    double gap = 0.0;
    double kvl_residual = 0.0;  // cycle-model flows checked against recovered angles
};

OpfEquivalence check_opf_equivalence(const PowerNetwork& net, const CycleSet& basis);

/// Every simple cycle as a signed incidence vector over lines.
std::vector<std::vector<int>> enumerate_all_cycles(const PowerNetwork& net);

struct BruteForceResult {
    bool feasible = false;
    double objective = 0.0;
    std::vector<double> x;
    long topologies = 0;
};

/// Minimum over every on/off pattern of the switchable lines of the OPF on
/// that topology (one LP each). `max_off` < 0 means no budget.
BruteForceResult brute_force_ots(const PowerNetwork& net, int max_off = -1);

/// Same enumeration when every generator has p_min == p_max: each topology
/// is decided by a DC power-flow solve per component plus a capacity check.
BruteForceResult brute_force_fixed_injection(const PowerNetwork& net, double tol = 1e-7);

struct RandomNetworkSpec {
    int min_buses = 4;
    int max_buses = 7;
    int max_lines = 10;
    int generators = 2;
    double cap_low = 0.2;  // line capacity range as a fraction of total load
    double cap_high = 0.6;
};

/// Connected network with at least one cycle. The first generator is cheap,
/// the others cost more, and each can cover the whole load alone, so line
/// capacities are what makes dispatch hard.
PowerNetwork random_network(std::mt19937_64& rng, const RandomNetworkSpec& spec);

/// Random spanning tree plus `extra` lines (parallel lines allowed).
PowerNetwork random_multigraph(std::mt19937_64& rng, int buses, int extra);

/// First network drawn from random_network(seed) whose all-on DC-OPF is
/// infeasible while some switching is feasible (checked by enumeration).
PowerNetwork braess_instance(std::uint64_t seed);

}  // namespace ots::oracle
