#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <random>

#include "fixtures.hpp"
#include "ots/formulations.hpp"
#include "ots/oracle.hpp"

using namespace ots;

namespace {

lp::Solution solve_lp(const MilpModel& m) { return lp::solve(m.lp); }

// DC power flow with every line on, slack at bus 0.
std::vector<double> power_flow(const PowerNetwork& net, const std::vector<double>& injection) {
    const Eigen::Index n = static_cast<Eigen::Index>(net.num_buses()) - 1;
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) rhs(i) = injection[i + 1];
    for (std::size_t l = 0; l < net.num_lines(); ++l) {
        const double b = net.lines()[l].susceptance;
        const Eigen::Index u = net.from_index(l), v = net.to_index(l);
        if (u) lap(u - 1, u - 1) += b;
        if (v) lap(v - 1, v - 1) += b;
        if (u && v) {
            lap(u - 1, v - 1) -= b;
            lap(v - 1, u - 1) -= b;
        }
    }
    Eigen::VectorXd th = Eigen::VectorXd::Zero(n + 1);
    th.tail(n) = lap.lu().solve(rhs);
    std::vector<double> f(net.num_lines());
    for (std::size_t l = 0; l < f.size(); ++l)
        f[l] = net.lines()[l].susceptance * (th(net.from_index(l)) - th(net.to_index(l)));
    return f;
}

PowerNetwork braess() { return oracle::reduce_subset_sum({{1, 1}, 1}); }

}  // namespace

TEST(BigM, Triangle) {
    const PowerNetwork net = fixtures::triangle();
    const BigMConfig cfg = compute_big_m(net);
    EXPECT_DOUBLE_EQ(cfg.theta_bound, 3.0);
    for (double m : cfg.line_m) EXPECT_DOUBLE_EQ(m, 7.0);
    EXPECT_DOUBLE_EQ(cycle_big_m(cycle_basis(net).cycles.at(0), net), 3.0);
}

TEST(BigM, SingleLine) {
    NetworkData d;
    d.buses = {{0, 0.0}, {1, 0.0}};
    d.generators = {{0, 0.0, 1.0, 1.0}};
    d.lines = {{0, 0, 1, 2.0, 4.0, true}};
    const BigMConfig cfg = compute_big_m(PowerNetwork(d));
    EXPECT_DOUBLE_EQ(cfg.theta_bound, 2.0);
    EXPECT_DOUBLE_EQ(cfg.line_m[0], 12.0);
}

TEST(OpfAngle, TriangleMatchesPowerFlow) {
    const PowerNetwork net = fixtures::triangle();
    const MilpModel m = build_opf_angle(net);
    EXPECT_TRUE(m.integer_cols.empty());
    const lp::Solution s = solve_lp(m);
    ASSERT_EQ(s.status, lp::Status::Optimal);
    EXPECT_NEAR(s.objective, 1.0, 1e-9);
    const auto f = power_flow(net, {1.0, 0.0, -1.0});
    for (std::size_t l = 0; l < 3; ++l) EXPECT_NEAR(s.x[m.vars.flow[l]], f[l], 1e-9);
    EXPECT_NEAR(f[2], 2.0 / 3.0, 1e-12);
}

TEST(OpfAngle, ZeroLoads) {
    NetworkData d = fixtures::triangle_data();
    d.buses[2].load = 0.0;
    const PowerNetwork net(d);
    const MilpModel m = build_opf_angle(net);
    const lp::Solution s = solve_lp(m);
    ASSERT_EQ(s.status, lp::Status::Optimal);
    EXPECT_DOUBLE_EQ(s.objective, 0.0);
    for (int c : m.vars.flow) EXPECT_NEAR(s.x[c], 0.0, 1e-12);
}

TEST(OpfAngle, LoadBeyondCapacityIsInfeasible) {
    NetworkData d = fixtures::triangle_data();
    d.buses[2].load = 2.5;
    EXPECT_EQ(solve_lp(build_opf_angle(PowerNetwork(d))).status, lp::Status::Infeasible);
}

TEST(OpfAngle, MaskRemovesLine) {
    const PowerNetwork net = fixtures::triangle();
    const bool mask[3] = {true, true, false};
    const MilpModel m = build_opf_angle(net, mask);
    const lp::Solution s = solve_lp(m);
    ASSERT_EQ(s.status, lp::Status::Optimal);
    EXPECT_NEAR(s.x[m.vars.flow[0]], 1.0, 1e-9);
    EXPECT_EQ(s.x[m.vars.flow[2]], 0.0);
    EXPECT_EQ(m.lp.num_rows(), 5);
}

TEST(OpfAngle, ColumnNames) {
    const MilpModel m = build_opf_angle(fixtures::triangle());
    EXPECT_EQ(m.lp.name(m.vars.gen_p[0]), "p_0");
    EXPECT_EQ(m.lp.name(m.vars.flow[2]), "f_2");
    EXPECT_EQ(m.lp.name(m.vars.angle[1]), "theta_1");
    EXPECT_EQ(m.lp.lower(m.vars.angle[0]), 0.0);
    EXPECT_EQ(m.lp.upper(m.vars.angle[0]), 0.0);
}

TEST(OpfCycle, TriangleSameOptimum) {
    const PowerNetwork net = fixtures::triangle();
    const lp::Solution a = solve_lp(build_opf_angle(net));
    const MilpModel c = build_opf_cycle(net, cycle_basis(net));
    const lp::Solution s = solve_lp(c);
    ASSERT_EQ(s.status, lp::Status::Optimal);
    EXPECT_NEAR(s.objective, a.objective, 1e-9);
    EXPECT_NEAR(s.x[c.vars.flow[2]], 2.0 / 3.0, 1e-9);
}

TEST(OpfCycle, TreeHasNoCycleRows) {
    NetworkData d;
    d.buses = {{0, 0.0}, {1, 0.4}, {2, 0.3}, {3, 0.2}};
    d.generators = {{0, 0.0, 2.0, 2.0}};
    d.lines = {{0, 0, 1, 1.0, 1.0, true}, {1, 0, 2, 1.0, 1.0, true}, {2, 0, 3, 1.0, 1.0, true}};
    const PowerNetwork net(d);
    const MilpModel m = build_opf_cycle(net, cycle_basis(net));
    EXPECT_EQ(m.lp.num_rows(), 4);
    const lp::Solution s = solve_lp(m);
    ASSERT_EQ(s.status, lp::Status::Optimal);
    EXPECT_NEAR(s.objective, 1.8, 1e-9);
}

TEST(OpfCycle, RadialStarFeasibleIffFlowsFit) {
    NetworkData d;
    d.buses = {{0, 0.0}, {1, 0.4}, {2, 0.7}};
    d.generators = {{0, 0.0, 2.0, 1.0}};
    d.lines = {{0, 0, 1, 1.0, 0.5, true}, {1, 0, 2, 1.0, 0.5, true}};
    const PowerNetwork bad(d);
    EXPECT_EQ(solve_lp(build_opf_cycle(bad, cycle_basis(bad))).status, lp::Status::Infeasible);
    d.lines[1].capacity = 0.7;
    const PowerNetwork good(d);
    EXPECT_EQ(solve_lp(build_opf_cycle(good, cycle_basis(good))).status, lp::Status::Optimal);
}

TEST(OtsAngle, NonSwitchableEqualsOpf) {
    NetworkData d = fixtures::triangle_data();
    for (Line& l : d.lines) l.switchable = false;
    const PowerNetwork net(d);
    const MilpModel m = build_ots_angle(net, compute_big_m(net));
    for (int c : m.vars.on) EXPECT_EQ(m.lp.lower(c), 1.0);
    EXPECT_NEAR(solve_lp(m).objective, solve_lp(build_opf_angle(net)).objective, 1e-9);
}

TEST(OtsAngle, IntegerMarksOnlyOnSwitches) {
    const MilpModel m = build_ots_angle(fixtures::triangle(), compute_big_m(fixtures::triangle()));
    EXPECT_EQ(m.integer_cols, m.vars.on);
    for (int c : m.vars.on) {
        EXPECT_EQ(m.lp.upper(c), 1.0);
        EXPECT_GE(m.lp.lower(c), 0.0);
    }
    EXPECT_EQ(m.lp.upper(m.vars.angle[1]), 3.0);
}

TEST(OtsAngle, FixedOnesRelaxationEqualsOpf) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        const PowerNetwork net = oracle::random_network(rng, {});
        MilpModel m = build_ots_angle(net, compute_big_m(net));
        for (int c : m.vars.on) m.lp.set_bounds(c, 1.0, 1.0);
        const lp::Solution a = solve_lp(m), b = solve_lp(build_opf_angle(net));
        ASSERT_EQ(a.status, b.status);
        if (a.status == lp::Status::Optimal) EXPECT_NEAR(a.objective, b.objective, 1e-7 * (1 + std::abs(b.objective)));
    }
}

TEST(OtsAngle, BraessInstance) {
    const PowerNetwork net = braess();
    EXPECT_EQ(solve_lp(build_opf_angle(net)).status, lp::Status::Infeasible);
    const auto bf = oracle::brute_force_ots(net);
    ASSERT_TRUE(bf.feasible);
    EXPECT_NEAR(bf.objective, 2.0, 1e-9);
    EXPECT_TRUE(oracle::brute_force_ots(net, 1).feasible);
    EXPECT_FALSE(oracle::brute_force_ots(net, 0).feasible);
}

TEST(OtsAngle, BigMHoldsAtEveryConnectedTopologyOptimum) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 15; ++t) {
        const PowerNetwork net = oracle::random_network(rng, {4, 6, 8, 2});
        const BigMConfig cfg = compute_big_m(net);
        const std::size_t nl = net.num_lines();
        for (std::uint32_t mask = 0; mask < (1u << nl); ++mask) {
            std::unique_ptr<bool[]> act(new bool[nl]);
            for (std::size_t l = 0; l < nl; ++l) act[l] = mask >> l & 1u;
            // Connected topologies only.
            std::vector<std::size_t> comp(net.num_buses());
            std::iota(comp.begin(), comp.end(), 0);
            for (bool changed = true; changed;) {
                changed = false;
                for (std::size_t l = 0; l < nl; ++l) {
                    if (!act[l]) continue;
                    auto& a = comp[net.from_index(l)];
                    auto& b = comp[net.to_index(l)];
                    if (a != b) {
                        a = b = std::min(a, b);
                        changed = true;
                    }
                }
            }
            if (std::any_of(comp.begin(), comp.end(), [](std::size_t c) { return c != 0; })) continue;
            const MilpModel m = build_opf_angle(net, std::span<const bool>(act.get(), nl));
            const lp::Solution s = solve_lp(m);
            if (s.status != lp::Status::Optimal) continue;
            for (std::size_t l = 0; l < nl; ++l) {
                const double b = net.lines()[l].susceptance;
                const double slip = s.x[m.vars.flow[l]] -
                                    b * (s.x[m.vars.angle[net.from_index(l)]] - s.x[m.vars.angle[net.to_index(l)]]);
                EXPECT_LE(std::abs(slip), cfg.line_m[l] * (act[l] ? 0.0 : 1.0) + 1e-7);
            }
            for (int c : m.vars.angle) EXPECT_LE(std::abs(s.x[c]), cfg.theta_bound + 1e-9);
        }
    }
}

TEST(CycleCut, RowsMatchDefinition) {
    const PowerNetwork net = fixtures::triangle();
    const MilpModel m = build_ots_cycle(net);
    EXPECT_TRUE(m.vars.angle.empty());
    const Cycle c = cycle_basis(net).cycles.at(0);
    const double mc = cycle_big_m(c, net);
    const auto rows = cycle_cut_constraint(c, net, m.vars, mc);
    std::vector<double> pt(m.lp.num_cols(), 0.0);
    // Any feasible point with one line off satisfies both rows.
    pt[m.vars.on[0]] = 0.0;
    pt[m.vars.on[1]] = pt[m.vars.on[2]] = 1.0;
    pt[m.vars.flow[1]] = 1.0;
    pt[m.vars.flow[2]] = -1.0;
    EXPECT_LE(rows[0].activity(pt), rows[0].rhs);
    EXPECT_GE(rows[1].activity(pt), rows[1].rhs);
    // All on with a KVL violation of delta violates a row by delta.
    pt[m.vars.on[0]] = 1.0;
    pt[m.vars.flow[0]] = 0.0;
    pt[m.vars.flow[1]] = 0.25;
    pt[m.vars.flow[2]] = 0.0;
    double circ = 0.0;
    for (const CycleEdge& e : c.edges) circ += e.sign * pt[m.vars.flow[e.line]];
    const double worst = std::max(rows[0].activity(pt) - rows[0].rhs, rows[1].rhs - rows[1].activity(pt));
    EXPECT_NEAR(worst, std::abs(circ), 1e-12);
    EXPECT_NEAR(std::abs(circ), 0.25, 1e-12);
    // Zero flow satisfies the rows at any x.
    std::fill(pt.begin(), pt.end(), 0.0);
    EXPECT_LE(rows[0].activity(pt), rows[0].rhs);
    EXPECT_GE(rows[1].activity(pt), rows[1].rhs);
}

TEST(Budget, ZeroForcesAllOn) {
    const PowerNetwork net = fixtures::triangle();
    MilpModel m = build_ots_angle(net, compute_big_m(net));
    add_switching_budget(m, 0);
    const lp::Solution s = solve_lp(m);
    ASSERT_EQ(s.status, lp::Status::Optimal);
    for (int c : m.vars.on) EXPECT_NEAR(s.x[c], 1.0, 1e-9);
    EXPECT_THROW(add_switching_budget(m, -1), std::invalid_argument);
}

TEST(Budget, FullBudgetIsRedundant) {
    const PowerNetwork net = fixtures::triangle();
    MilpModel m = build_ots_angle(net, compute_big_m(net));
    const double before = solve_lp(m).objective;
    add_switching_budget(m, 3);
    EXPECT_EQ(m.lp.rows().back().rhs, 0.0);
    EXPECT_NEAR(solve_lp(m).objective, before, 1e-12);
}

TEST(LpFormat, ListsGenerals) {
    const MilpModel m = build_ots_angle(fixtures::triangle(), compute_big_m(fixtures::triangle()));
    const std::string text = m.lp.to_lp_format(m.integer_cols);
    EXPECT_NE(text.find("Generals"), std::string::npos);
    EXPECT_NE(text.find("x_0"), std::string::npos);
}
