#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "ots/cuts.hpp"
#include "ots/formulations.hpp"
#include "ots/oracle.hpp"
#include "ots/solve.hpp"

using namespace ots;
using namespace ots::oracle;

namespace {

std::vector<double> random_weights(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.2, 3.0);
    std::vector<double> w(n);
    for (double& v : w) v = u(rng);
    return w;
}

bool satisfies_description(const ScPoint& p, std::span<const double> w, double tol) {
    for (std::size_t a = 0; a < w.size(); ++a) {
        if (p.x[a] > 1.0 + tol || std::abs(p.g[a]) > w[a] * p.x[a] + tol) return false;
    }
    for (const auto& s : positive_subsets(w))
        for (int side : {1, -1})
            if (cycle_slack(p, w, s, side) > tol) return false;
    return true;
}

bool has_vertex(const std::vector<ScPoint>& vs, std::vector<double> g, std::vector<double> x) {
    return std::any_of(vs.begin(), vs.end(), [&](const ScPoint& p) {
        for (std::size_t a = 0; a < g.size(); ++a)
            if (std::abs(p.g[a] - g[a]) > 1e-12 || std::abs(p.x[a] - x[a]) > 1e-12) return false;
        return true;
    });
}

}  // namespace

TEST(Vertices, ParallelPair) {
    const std::vector<double> w{1.0, 1.0};
    const auto vs = enumerate_S_C_vertices(w);
    EXPECT_TRUE(has_vertex(vs, {1.0, -1.0}, {1.0, 1.0}));
    EXPECT_TRUE(has_vertex(vs, {-1.0, 1.0}, {1.0, 1.0}));
    const auto on = std::count_if(vs.begin(), vs.end(), [](const ScPoint& p) { return p.x[0] == 1.0 && p.x[1] == 1.0; });
    EXPECT_EQ(on, 2);
}

TEST(Vertices, AllOffIsOrigin) {
    const std::vector<double> w{1.0, 2.0, 3.0};
    const auto vs = enumerate_S_C_vertices(w);
    const auto off = std::count_if(vs.begin(), vs.end(), [](const ScPoint& p) {
        return std::all_of(p.x.begin(), p.x.end(), [](double x) { return x == 0.0; });
    });
    EXPECT_EQ(off, 1);
    EXPECT_TRUE(has_vertex(vs, {0, 0, 0}, {0, 0, 0}));
}

TEST(Vertices, UnitTriangleAllOn) {
    const std::vector<double> w{1.0, 1.0, 1.0};
    const auto vs = enumerate_S_C_vertices(w);
    std::vector<ScPoint> on;
    for (const auto& p : vs)
        if (p.x == std::vector<double>{1, 1, 1}) on.push_back(p);
    ASSERT_EQ(on.size(), 6u);
    for (const auto& p : on) {
        int at_bound = 0;
        for (double g : p.g) at_bound += std::abs(std::abs(g) - 1.0) < 1e-12;
        EXPECT_GE(at_bound, 1);
        EXPECT_NEAR(p.g[0] + p.g[1] + p.g[2], 0.0, 1e-12);
    }
}

TEST(Vertices, SatisfyEveryCycleInequality) {
    std::mt19937_64 rng(11);
    for (std::size_t n = 2; n <= 6; ++n) {
        for (int rep = 0; rep < 5; ++rep) {
            const auto w = random_weights(rng, n);
            for (const auto& p : enumerate_S_C_vertices(w)) {
                ASSERT_TRUE(in_S_C(p, w));
                ASSERT_TRUE(satisfies_description(p, w, 1e-9));
            }
        }
    }
}

TEST(Hull, UnitTriangle) {
    const std::vector<double> w{1.0, 1.0, 1.0};
    EXPECT_LE(check_hull_equality(w, 200, 1).max_gap, 1e-7);
}

TEST(Hull, UnevenSquare) {
    const std::vector<double> w{1.0, 2.0, 3.0, 10.0};
    EXPECT_LE(check_hull_equality(w, 200, 2).max_gap, 1e-7);
}

TEST(Hull, RandomWeights) {
    std::mt19937_64 rng(3);
    for (std::size_t n = 2; n <= 5; ++n) {
        const auto w = random_weights(rng, n);
        EXPECT_LE(check_hull_equality(w, 50, n).max_gap, 1e-7) << "n=" << n;
    }
}

TEST(Hull, DroppingAFacetOpensAGap) {
    const std::vector<double> w{1.0, 2.0, 3.0, 10.0};
    for (const auto& s : positive_subsets(w)) {
        const auto rep = check_hull_equality(w, 20, 5, s);
        EXPECT_GT(rep.max_gap, 1e-4) << "subset size " << s.size();
    }
}

TEST(Hull, TooLargeCycleRejected) {
    const std::vector<double> w(7, 1.0);
    EXPECT_THROW(check_hull_equality(w, 1, 0), std::invalid_argument);
}

TEST(Extended, VerticesAndMidpointsAreMembers) {
    std::mt19937_64 rng(5);
    const auto w = random_weights(rng, 4);
    const auto vs = enumerate_S_C_vertices(w);
    for (const auto& p : vs) EXPECT_TRUE(membership_extended(p, w));
    std::uniform_int_distribution<std::size_t> pick(0, vs.size() - 1);
    for (int t = 0; t < 50; ++t) {
        const ScPoint& a = vs[pick(rng)];
        const ScPoint& b = vs[pick(rng)];
        ScPoint m{std::vector<double>(4), std::vector<double>(4)};
        for (std::size_t k = 0; k < 4; ++k) {
            m.g[k] = 0.5 * (a.g[k] + b.g[k]);
            m.x[k] = 0.5 * (a.x[k] + b.x[k]);
        }
        EXPECT_TRUE(membership_extended(m, w));
    }
}

TEST(Extended, CapacityViolationIsRejected) {
    const std::vector<double> w{1.0, 1.0, 1.0};
    ScPoint p{{1.5, -0.75, -0.75}, {1.0, 1.0, 1.0}};
    EXPECT_FALSE(membership_extended(p, w));
}

TEST(Extended, AgreesWithInequalityDescription) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int members = 0, outsiders = 0;
    for (int t = 0; t < 600; ++t) {
        const std::size_t n = 2 + t % 4;
        const auto w = random_weights(rng, n);
        ScPoint p{std::vector<double>(n), std::vector<double>(n)};
        for (std::size_t a = 0; a < n; ++a) {
            p.x[a] = t % 3 == 0 ? 1.0 : 0.6 + 0.4 * u(rng);
            p.g[a] = (2.0 * u(rng) - 1.0) * w[a] * p.x[a];
        }
        const bool described = satisfies_description(p, w, 0.0);
        bool clear = true;
        for (const auto& s : positive_subsets(w))
            for (int side : {1, -1}) clear = clear && std::abs(cycle_slack(p, w, s, side)) > 1e-6;
        if (!clear) continue;
        EXPECT_EQ(membership_extended(p, w), described);
        (described ? members : outsiders)++;
    }
    EXPECT_GT(members, 20);
    EXPECT_GT(outsiders, 20);
}

TEST(Projection, SmallCycles) {
    std::mt19937_64 rng(9);
    for (std::size_t n = 2; n <= 4; ++n) {
        const auto w = random_weights(rng, n);
        EXPECT_LE(check_projection(w, 200, 100 + n), 1e-7) << "n=" << n;
    }
}

TEST(Facets, UnitTriangleWholeCycle) {
    const std::vector<double> w{1.0, 1.0, 1.0};
    const std::vector<std::size_t> s{0, 1, 2};
    const FacetReport r = check_facets(w, s);
    EXPECT_TRUE(r.ok) << r.failure;
    EXPECT_EQ(r.affine_rank, 5);
}

TEST(Facets, UnitTriangleTwoLines) {
    const std::vector<double> w{1.0, 1.0, 1.0};
    const std::vector<std::size_t> s{0, 1};
    const FacetReport r = check_facets(w, s);
    EXPECT_TRUE(r.ok) << r.failure;
    // The standard witness list is linearly independent yet one point short.
    EXPECT_EQ(r.witness_linear_rank, 5);
    EXPECT_EQ(r.points, 6);
}

TEST(Facets, ZeroDeltaRejected) {
    const std::vector<double> w{1.0, 2.0, 3.0};
    const std::vector<std::size_t> s{2};
    EXPECT_THROW(check_facets(w, s), std::invalid_argument);
}

TEST(Facets, EveryPositiveSubset) {
    std::mt19937_64 rng(12);
    for (std::size_t n = 3; n <= 5; ++n) {
        for (int rep = 0; rep < 3; ++rep) {
            const auto w = random_weights(rng, n);
            for (const auto& s : positive_subsets(w)) {
                const FacetReport r = check_facets(w, s);
                EXPECT_TRUE(r.ok) << "n=" << n << " |S|=" << s.size() << ": " << r.failure;
            }
        }
    }
}

TEST(SubsetSum, Brute) {
    EXPECT_TRUE(subset_sum_brute({{1, 2}, 3}));
    EXPECT_FALSE(subset_sum_brute({{2}, 3}));
    EXPECT_FALSE(subset_sum_brute({{}, 1}));
}

TEST(SubsetSum, ReductionShape) {
    const PowerNetwork net = reduce_subset_sum({{1, 2}, 3});
    EXPECT_EQ(net.num_buses(), 5u);
    EXPECT_EQ(net.num_lines(), 6u);
    EXPECT_DOUBLE_EQ(net.lines()[0].capacity, 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(net.lines()[1].susceptance, 4.0);
    EXPECT_DOUBLE_EQ(net.lines()[5].susceptance, 0.75);
    EXPECT_DOUBLE_EQ(net.buses()[4].load, 2.0);
}

TEST(SubsetSum, WitnessAngles) {
    const PowerNetwork net = reduce_subset_sum({{1, 2}, 3});
    const MilpModel m = build_opf_angle(net);
    const lp::Solution sol = lp::solve(m.lp);
    ASSERT_EQ(sol.status, lp::Status::Optimal);
    std::vector<double> f(net.num_lines()), x(net.num_lines(), 1.0);
    for (std::size_t l = 0; l < f.size(); ++l) f[l] = sol.x[m.vars.flow[l]];
    auto th = recover_angles(net, x, f);
    const double ref = th[4];
    for (double& t : th) t -= ref;
    EXPECT_NEAR(th[0], 4.0 / 3.0, 1e-12);
    EXPECT_NEAR(th[1], 7.0 / 6.0, 1e-12);
    EXPECT_NEAR(th[2], 7.0 / 6.0, 1e-12);
    EXPECT_NEAR(th[3], 1.0, 1e-12);
}

TEST(SubsetSum, SmallInstancesBothEnumerations) {
    EXPECT_FALSE(brute_force_ots(reduce_subset_sum({{2}, 3})).feasible);
    EXPECT_FALSE(brute_force_fixed_injection(reduce_subset_sum({{2}, 3})).feasible);
    EXPECT_TRUE(brute_force_ots(reduce_subset_sum({{3}, 3})).feasible);
    EXPECT_TRUE(brute_force_fixed_injection(reduce_subset_sum({{3}, 3})).feasible);
}

TEST(SubsetSum, FastEnumerationMatchesLpEnumeration) {
    for (int a1 = 1; a1 <= 4; ++a1)
        for (int a2 = 1; a2 <= 4; ++a2)
            for (int b = 1; b <= 8; ++b) {
                const SubsetSumInstance inst{{a1, a2}, b};
                const PowerNetwork net = reduce_subset_sum(inst);
                const bool lp_route = brute_force_ots(net).feasible;
                EXPECT_EQ(brute_force_fixed_injection(net).feasible, lp_route) << a1 << "," << a2 << " b=" << b;
                EXPECT_EQ(lp_route, subset_sum_brute(inst)) << a1 << "," << a2 << " b=" << b;
            }
}

TEST(SubsetSum, ReductionIffOnRandomInstances) {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> n_d(1, 10), a_d(1, 9), b_d(1, 30);
    for (int t = 0; t < 40; ++t) {
        SubsetSumInstance inst;
        const int n = t < 30 ? 1 + t % 7 : n_d(rng);
        for (int i = 0; i < n; ++i) inst.a.push_back(a_d(rng));
        inst.b = b_d(rng);
        EXPECT_EQ(brute_force_fixed_injection(reduce_subset_sum(inst)).feasible, subset_sum_brute(inst));
    }
}

TEST(OpfEquivalence, Triangle) {
    const PowerNetwork net = fixtures::triangle();
    const auto r = check_opf_equivalence(net, cycle_basis(net));
    ASSERT_TRUE(r.feasible);
    EXPECT_LE(r.gap, 1e-7);
    EXPECT_LE(r.kvl_residual, 1e-7);
}

TEST(OpfEquivalence, TreeIsExact) {
    NetworkData d;
    d.buses = {{0, 0.0}, {1, 0.5}, {2, 0.3}};
    d.generators = {{0, 0.0, 2.0, 3.0}};
    d.lines = {{0, 0, 1, 2.0, 1.0, true}, {1, 1, 2, 1.0, 1.0, true}};
    const PowerNetwork net(std::move(d));
    const auto r = check_opf_equivalence(net, cycle_basis(net));
    ASSERT_TRUE(r.feasible);
    EXPECT_EQ(r.gap, 0.0);
}

TEST(OpfEquivalence, RandomNetworks) {
    std::mt19937_64 rng(31);
    RandomNetworkSpec spec;
    spec.max_buses = 8;
    int checked = 0;
    while (checked < 20) {
        const PowerNetwork net = random_network(rng, spec);
        const auto r = check_opf_equivalence(net, cycle_basis(net));
        if (!r.feasible) continue;
        ++checked;
        EXPECT_LE(r.gap, 1e-6 * (1.0 + std::abs(r.angle_objective)));
        EXPECT_LE(r.kvl_residual, 1e-6);
    }
}

TEST(Cycles, Enumeration) {
    EXPECT_EQ(enumerate_all_cycles(fixtures::triangle()).size(), 1u);
    NetworkData d;
    d.buses = {{0, 0.0}, {1, 0.0}, {2, 0.0}, {3, 0.0}};
    d.generators = {{0, 0.0, 1.0, 1.0}};
    d.lines = {{0, 0, 1, 1, 1, true}, {1, 1, 2, 1, 1, true}, {2, 2, 0, 1, 1, true},
               {3, 1, 3, 1, 1, true}, {4, 3, 2, 1, 1, true}};
    EXPECT_EQ(enumerate_all_cycles(PowerNetwork(d)).size(), 3u);
}

TEST(BruteForce, TriangleWithWeakLine) {
    NetworkData d = fixtures::triangle_data();
    d.lines[2].capacity = 0.1;
    const PowerNetwork net(std::move(d));
    const auto all = brute_force_ots(net);
    ASSERT_TRUE(all.feasible);
    EXPECT_EQ(all.topologies, 8);
    // Only the two-line path can deliver the load: the weak line must be off.
    EXPECT_NEAR(all.objective, 1.0, 1e-9);
    EXPECT_EQ(all.x[2], 0.0);
    EXPECT_FALSE(brute_force_ots(net, 0).feasible);
}

TEST(RandomNetwork, ShapeAndDeterminism) {
    std::mt19937_64 a(4), b(4);
    RandomNetworkSpec spec;
    for (int t = 0; t < 20; ++t) {
        const PowerNetwork n1 = random_network(a, spec);
        const PowerNetwork n2 = random_network(b, spec);
        EXPECT_TRUE(n1 == n2);
        EXPECT_LE(n1.num_lines(), 10u);
        EXPECT_GE(n1.num_buses(), 4u);
        EXPECT_TRUE(validate(n1).ok());
    }
}

TEST(BraessInstance, InfeasibleOpfFeasibleSwitching) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const PowerNetwork net = braess_instance(seed);
        EXPECT_NE(lp::solve(build_opf_angle(net).lp).status, lp::Status::Optimal);
        EXPECT_TRUE(brute_force_ots(net).feasible);
        EXPECT_TRUE(braess_instance(seed) == net);
    }
}

TEST(RandomMultigraph, ConnectedWithRequestedSize) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 20; ++t) {
        const PowerNetwork net = random_multigraph(rng, 2 + t % 10, t % 5);
        EXPECT_EQ(net.num_lines(), net.num_buses() - 1 + static_cast<std::size_t>(t % 5));
        EXPECT_EQ(cycle_basis(net).size(), static_cast<std::size_t>(t % 5));
    }
}
