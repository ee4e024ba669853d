#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "ots/cuts.hpp"
#include "ots/oracle.hpp"

using namespace ots;

namespace {

SeparationContext context(std::vector<double> w, std::vector<double> g, std::vector<double> x) {
    SeparationContext c;
    c.w = std::move(w);
    c.g_hat = std::move(g);
    c.x_hat = std::move(x);
    c.k = k_value(c.x_hat);
    return c;
}

SeparationContext random_context(std::mt19937_64& rng, std::size_t n, bool positive_k) {
    std::uniform_real_distribution<double> u(0.0, 1.0), wd(0.1, 3.0);
    std::vector<double> w(n), g(n), x(n);
    for (std::size_t a = 0; a < n; ++a) {
        w[a] = wd(rng);
        if (positive_k) {
            const double r = u(rng);
            x[a] = r < 0.6 ? 1.0 : 1.0 - 0.5 * u(rng) / static_cast<double>(n);
        } else {
            x[a] = u(rng);
        }
        g[a] = (2.0 * u(rng) - 1.0) * w[a] * x[a];
    }
    if (!positive_k) {
        // Push enough mass off so that K <= 0.
        const double k = k_value(x);
        if (k > 0.0) x[0] = std::max(0.0, x[0] - k - 1e-3);
        for (std::size_t a = 1; k_value(x) > 0.0 && a < n; ++a) x[a] = 0.0;
        for (std::size_t a = 0; a < n; ++a) g[a] = std::clamp(g[a], -w[a] * x[a], w[a] * x[a]);
    }
    return context(std::move(w), std::move(g), std::move(x));
}

struct Best {
    bool violated = false;
    double value = -1e300;
};

// Every S with Delta(S) > 0, one side.
Best exhaustive(const SeparationContext& ctx, Side side) {
    Best b;
    const std::size_t n = ctx.w.size();
    for (std::uint32_t m = 1; m < (1u << n); ++m) {
        CycleInequality q;
        for (std::size_t a = 0; a < n; ++a)
            if (m >> a & 1u) q.subset.push_back(a);
        if (delta(q.subset, ctx.w) <= 0.0) continue;
        q.side = side;
        b.value = std::max(b.value, violation(q, ctx));
    }
    b.violated = b.value > kViolationTol;
    return b;
}

// The sets the growing recursion reaches: seed plus any ascending list of the
// remaining lines whose every prefix keeps v(S) above w(C) K.
std::vector<std::vector<std::size_t>> recursion_sets(const SeparationContext& ctx, Side side) {
    const std::size_t n = ctx.w.size();
    const double sg = side == Side::Right ? 1.0 : -1.0;
    double total = 0.0;
    for (double w : ctx.w) total += w;
    std::vector<double> v(n);
    std::vector<std::size_t> seed, rest;
    for (std::size_t a = 0; a < n; ++a) {
        v[a] = sg * ctx.g_hat[a] - ctx.w[a] * ctx.x_hat[a] + 2.0 * ctx.w[a] * ctx.k;
        (v[a] >= 0.0 ? seed : rest).push_back(a);
    }
    std::vector<std::vector<std::size_t>> out;
    for (std::uint32_t m = 0; m < (1u << rest.size()); ++m) {
        std::vector<std::size_t> s = seed;
        double vs = 0.0, ws = 0.0;
        for (std::size_t a : seed) {
            vs += v[a];
            ws += ctx.w[a];
        }
        bool alive = vs > total * ctx.k;
        for (std::size_t k = 0; k < rest.size() && alive; ++k) {
            if (!(m >> k & 1u)) continue;
            s.push_back(rest[k]);
            vs += v[rest[k]];
            ws += ctx.w[rest[k]];
            alive = vs > total * ctx.k;
        }
        if (!alive) continue;
        if (vs - total * ctx.k > kViolationTol && ws > 0.5 * total) {
            std::sort(s.begin(), s.end());
            out.push_back(s);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST(Delta, Examples) {
    const std::vector<double> w{1, 2, 3};
    EXPECT_DOUBLE_EQ(delta(std::vector<std::size_t>{2}, w), 0.0);
    EXPECT_DOUBLE_EQ(delta(std::vector<std::size_t>{1, 2}, w), 4.0);
    EXPECT_DOUBLE_EQ(delta(std::vector<std::size_t>{0, 1, 2}, w), 6.0);
}

TEST(KValue, Examples) {
    EXPECT_DOUBLE_EQ(k_value(std::vector<double>{1, 1, 1}), 1.0);
    EXPECT_NEAR(k_value(std::vector<double>{1, 0.5, 0.9}), 0.4, 1e-15);
    EXPECT_LE(k_value(std::vector<double>{1, 0, 1}), 0.0);
}

TEST(ClosedForm, UnitTriangleExample) {
    const auto ctx = context({1, 1, 1}, {0.5, 0.5, -0.5}, {1, 1, 1});
    EXPECT_DOUBLE_EQ(ctx.k, 1.0);
    const auto cuts = separate_closed_form(ctx);
    ASSERT_EQ(cuts.size(), 1u);
    EXPECT_EQ(cuts[0].side, Side::Right);
    EXPECT_EQ(cuts[0].subset, (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_DOUBLE_EQ(cuts[0].delta, 3.0);
    EXPECT_NEAR(cuts[0].violation, 0.5, 1e-12);
    const Best b = exhaustive(ctx, Side::Right);
    EXPECT_NEAR(b.value, 0.5, 1e-12);
}

TEST(ClosedForm, ZeroK) {
    const auto ctx = context({1, 1, 1}, {0.2, -0.1, 0.0}, {1, 0.5, 0.5});
    EXPECT_TRUE(separate_closed_form(ctx).empty());
    EXPECT_TRUE(separate_all(ctx).empty());
}

TEST(ClosedForm, ZeroFlowAllOn) {
    const auto ctx = context({1, 2, 3}, {0, 0, 0}, {1, 1, 1});
    EXPECT_TRUE(separate_closed_form(ctx).empty());
    EXPECT_TRUE(separate_all(ctx).empty());
    for (Side s : {Side::Right, Side::Left}) EXPECT_LE(exhaustive(ctx, s).value, 0.0);
}

TEST(ClosedForm, AgreesWithExhaustiveEnumeration) {
    std::mt19937_64 rng(1);
    int violated = 0;
    for (int t = 0; t < 2000; ++t) {
        const std::size_t n = 2 + t % 9;
        const auto ctx = random_context(rng, n, true);
        const auto cuts = separate_closed_form(ctx);
        for (Side side : {Side::Right, Side::Left}) {
            const Best b = exhaustive(ctx, side);
            violated += b.violated;
            const auto it = std::find_if(cuts.begin(), cuts.end(), [&](const CycleInequality& q) { return q.side == side; });
            ASSERT_EQ(it != cuts.end(), b.violated) << "trial " << t;
            if (b.violated) EXPECT_NEAR(it->violation, b.value, 1e-9);
        }
    }
    EXPECT_GT(violated, 400);
    EXPECT_LT(violated, 3600);
}

TEST(ClosedForm, ReportedViolationMatchesRecomputation) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 500; ++t) {
        const auto ctx = random_context(rng, 3 + t % 6, true);
        for (const auto& q : separate_closed_form(ctx)) {
            EXPECT_GT(q.delta, 0.0);
            EXPECT_NEAR(q.violation, violation(q, ctx), 1e-12);
        }
    }
}

TEST(Separation, NonPositiveKYieldsNothing) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 2000; ++t) {
        const auto ctx = random_context(rng, 2 + t % 9, false);
        ASSERT_LE(ctx.k, 0.0);
        EXPECT_TRUE(separate_closed_form(ctx).empty());
        EXPECT_TRUE(separate_all(ctx).empty());
    }
}

TEST(Separation, NegatingFlowSwapsSides) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 500; ++t) {
        auto ctx = random_context(rng, 2 + t % 7, true);
        const auto a = separate_all(ctx);
        for (double& g : ctx.g_hat) g = -g;
        const auto b = separate_all(ctx);
        ASSERT_EQ(a.size(), b.size());
        std::vector<std::pair<int, std::vector<std::size_t>>> ka, kb;
        for (const auto& q : a) ka.emplace_back(q.side == Side::Right ? 0 : 1, q.subset);
        for (const auto& q : b) kb.emplace_back(q.side == Side::Right ? 1 : 0, q.subset);
        std::sort(ka.begin(), ka.end());
        std::sort(kb.begin(), kb.end());
        EXPECT_EQ(ka, kb);
    }
}

TEST(SeparateAll, ContainsClosedForm) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 1000; ++t) {
        const auto ctx = random_context(rng, 2 + t % 9, true);
        const auto all = separate_all(ctx);
        for (const auto& q : separate_closed_form(ctx)) {
            const bool found = std::any_of(all.begin(), all.end(), [&](const CycleInequality& r) {
                return r.side == q.side && r.subset == q.subset;
            });
            EXPECT_TRUE(found);
        }
    }
}

TEST(SeparateAll, FollowsTheGrowingRecursion) {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 1000; ++t) {
        const auto ctx = random_context(rng, 2 + t % 8, true);
        const auto all = separate_all(ctx);
        for (Side side : {Side::Right, Side::Left}) {
            std::vector<std::vector<std::size_t>> got;
            for (const auto& q : all) {
                if (q.side != side) continue;
                EXPECT_GT(q.violation, kViolationTol);
                EXPECT_GT(q.delta, 0.0);
                got.push_back(q.subset);
            }
            std::sort(got.begin(), got.end());
            EXPECT_EQ(got, recursion_sets(ctx, side)) << "trial " << t;
        }
    }
}

TEST(SeparateAll, ParallelPair) {
    const auto ctx = context({1.0, 2.0}, {1.0, 0.5}, {1.0, 1.0});
    const auto all = separate_all(ctx);
    for (Side side : {Side::Right, Side::Left}) {
        const Best b = exhaustive(ctx, side);
        const auto n = std::count_if(all.begin(), all.end(), [&](const CycleInequality& q) { return q.side == side; });
        EXPECT_EQ(n > 0, b.violated);
    }
    ASSERT_FALSE(all.empty());
    EXPECT_NEAR(all[0].violation, 1.5, 1e-12);
}

TEST(Validity, EmittedCutsHoldAtEveryVertex) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + t % 5;
        const auto ctx = random_context(rng, n, true);
        const auto vs = oracle::enumerate_S_C_vertices(ctx.w);
        for (const auto& q : separate_all(ctx))
            for (const auto& p : vs)
                ASSERT_LE(oracle::cycle_slack(p, ctx.w, q.subset, q.side == Side::Right ? 1 : -1), 1e-9);
    }
}

TEST(Row, MaterializationMatchesViolation) {
    std::mt19937_64 rng(8);
    const PowerNetwork net = fixtures::random_multigraph(rng, 6, 5);
    const MilpModel m = build_ots_angle(net, compute_big_m(net));
    const CycleSet cs = cycle_basis(net);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> pt(m.lp.num_cols(), 0.0), f(net.num_lines()), x(net.num_lines());
        for (std::size_t l = 0; l < net.num_lines(); ++l) {
            x[l] = u(rng) < 0.7 ? 1.0 : u(rng);
            f[l] = (2 * u(rng) - 1) * net.lines()[l].capacity * x[l];
            pt[m.vars.on[l]] = x[l];
            pt[m.vars.flow[l]] = f[l];
        }
        for (std::size_t ci = 0; ci < cs.size(); ++ci) {
            const Cycle& c = cs.cycles[ci];
            const auto ctx = make_context(c, net, f, x, static_cast<int>(ci));
            for (const auto& q : separate_all(ctx, -1e9)) {
                const lp::Row r = inequality_row(q, c, net, m.vars);
                EXPECT_NEAR(r.activity(pt) - r.rhs, q.violation, 1e-9);
            }
        }
    }
}

TEST(Row, WholeCycleAllOnIsKvl) {
    const PowerNetwork net = fixtures::triangle();
    const MilpModel m = build_ots_angle(net, compute_big_m(net));
    const Cycle c = cycle_basis(net).cycles.at(0);
    CycleInequality q;
    q.subset = {0, 1, 2};
    q.side = Side::Right;
    q.delta = 3.0;
    const lp::Row r = inequality_row(q, c, net, m.vars);
    std::vector<double> pt(m.lp.num_cols(), 0.0);
    for (int col : m.vars.on) pt[col] = 1.0;
    pt[m.vars.flow[0]] = 0.3;
    pt[m.vars.flow[1]] = 0.2;
    pt[m.vars.flow[2]] = 0.1;
    double circ = 0.0;
    for (const CycleEdge& e : c.edges) circ += e.sign * pt[m.vars.flow[e.line]];
    EXPECT_NEAR(r.activity(pt) - r.rhs, circ, 1e-12);
}

TEST(Row, ZeroFlowSlackIsComplementWeight) {
    const PowerNetwork net = fixtures::triangle();
    const MilpModel m = build_ots_angle(net, compute_big_m(net));
    const Cycle c = cycle_basis(net).cycles.at(0);
    CycleInequality q;
    q.subset = {0, 1};
    q.side = Side::Left;
    q.delta = 1.0;
    const lp::Row r = inequality_row(q, c, net, m.vars);
    std::vector<double> pt(m.lp.num_cols(), 0.0);
    for (int col : m.vars.on) pt[col] = 1.0;
    EXPECT_NEAR(r.rhs - r.activity(pt), 1.0, 1e-12);
}

TEST(Format, AuditLine) {
    const PowerNetwork net = fixtures::triangle();
    const Cycle c = cycle_basis(net).cycles.at(0);
    CycleInequality q;
    q.cycle_id = 4;
    q.subset = {0, 2};
    q.side = Side::Right;
    q.delta = 1.0;
    q.violation = 0.25;
    const std::string s = format_cut(q, c, net);
    EXPECT_EQ(s.rfind("cycle 4 right S={", 0), 0u);
    EXPECT_NE(s.find("} delta=1 violation=0.25"), std::string::npos);
}
