#include "ots/cuts.hpp"

#include <cstdio>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace ots {

double delta(std::span<const std::size_t> subset, std::span<const double> w) {
    double in = 0.0;
    for (std::size_t a : subset) in += w[a];
    return 2.0 * in - std::accumulate(w.begin(), w.end(), 0.0);
}

double k_value(std::span<const double> x_hat) {
    double off = 0.0;
    for (double x : x_hat) off += 1.0 - x;
    return 1.0 - off;
}

SeparationContext make_context(const Cycle& c, const PowerNetwork& net, std::span<const double> flow,
                               std::span<const double> on, int cycle_id) {
    SeparationContext ctx;
    ctx.cycle_id = cycle_id;
    for (const CycleEdge& e : c.edges) {
        const Line& line = net.lines()[e.line];
        ctx.w.push_back(line.capacity / line.susceptance);
        ctx.g_hat.push_back(e.sign * flow[e.line] / line.susceptance);
        ctx.x_hat.push_back(on[e.line]);
    }
    ctx.k = k_value(ctx.x_hat);
    return ctx;
}

double violation(const CycleInequality& ineq, const SeparationContext& ctx) {
    const double sign = ineq.side == Side::Right ? 1.0 : -1.0;
    double v = 0.0;
    for (std::size_t a : ineq.subset) v += sign * ctx.g_hat[a] - ctx.w[a] * ctx.x_hat[a];
    return v + delta(ineq.subset, ctx.w) * ctx.k;
}

namespace {

std::vector<double> scores(const SeparationContext& ctx, double sign) {
    std::vector<double> v(ctx.w.size());
    for (std::size_t a = 0; a < v.size(); ++a)
        v[a] = sign * ctx.g_hat[a] - ctx.w[a] * ctx.x_hat[a] + 2.0 * ctx.w[a] * ctx.k;
    return v;
}

CycleInequality make_ineq(const SeparationContext& ctx, std::vector<std::size_t> subset, Side side) {
    CycleInequality q;
    q.cycle_id = ctx.cycle_id;
    q.subset = std::move(subset);
    q.side = side;
    q.delta = delta(q.subset, ctx.w);
    q.violation = violation(q, ctx);
    return q;
}

}  // namespace

std::vector<CycleInequality> separate_closed_form(const SeparationContext& ctx, double tol) {
    std::vector<CycleInequality> out;
    if (ctx.k <= 0.0) return out;
    const double total = std::accumulate(ctx.w.begin(), ctx.w.end(), 0.0);
    for (Side side : {Side::Right, Side::Left}) {
        const std::vector<double> v = scores(ctx, side == Side::Right ? 1.0 : -1.0);
        std::vector<std::size_t> s;
        double excess = 0.0, ws = 0.0;
        for (std::size_t a = 0; a < v.size(); ++a) {
            excess += std::max(v[a], 0.0) - ctx.w[a] * ctx.k;
            if (v[a] >= 0.0) {
                s.push_back(a);
                ws += ctx.w[a];
            }
        }
        if (excess > tol && ws > 0.5 * total) out.push_back(make_ineq(ctx, std::move(s), side));
    }
    return out;
}

std::vector<CycleInequality> separate_all(const SeparationContext& ctx, double tol) {
    std::vector<CycleInequality> out;
    if (ctx.k <= 0.0) return out;
    const double total = std::accumulate(ctx.w.begin(), ctx.w.end(), 0.0);
    const double floor = total * ctx.k;
    for (Side side : {Side::Right, Side::Left}) {
        const std::vector<double> v = scores(ctx, side == Side::Right ? 1.0 : -1.0);
        std::vector<std::size_t> s, rest;
        double vs = 0.0, ws = 0.0;
        for (std::size_t a = 0; a < v.size(); ++a) {
            if (v[a] >= 0.0) {
                s.push_back(a);
                vs += v[a];
                ws += ctx.w[a];
            } else {
                rest.push_back(a);
            }
        }
        // Emission is tested before the exhaustion stop so that S = C is
        // reported when the seed already covers the whole cycle.
        std::function<void(std::size_t, double, double)> recurse = [&](std::size_t k, double vsum, double wsum) {
            if (vsum <= floor) return;
            if (vsum - floor > tol && wsum > 0.5 * total) {
                std::vector<std::size_t> sorted(s);
                std::sort(sorted.begin(), sorted.end());
                out.push_back(make_ineq(ctx, std::move(sorted), side));
            }
            for (std::size_t l = k; l < rest.size(); ++l) {
                s.push_back(rest[l]);
                recurse(l + 1, vsum + v[rest[l]], wsum + ctx.w[rest[l]]);
                s.pop_back();
            }
        };
        recurse(0, vs, ws);
    }
    return out;
}

lp::Row inequality_row(const CycleInequality& ineq, const Cycle& c, const PowerNetwork& net,
                       const VariableMap& vars) {
    if (vars.on.empty()) throw std::invalid_argument("inequality_row: model has no switching columns");
    const double sign = ineq.side == Side::Right ? 1.0 : -1.0;
    std::vector<bool> in(c.size(), false);
    for (std::size_t a : ineq.subset) in.at(a) = true;
    lp::Row r;
    for (std::size_t a = 0; a < c.size(); ++a) {
        const CycleEdge& e = c.edges[a];
        const Line& line = net.lines()[e.line];
        if (in[a]) {
            r.add(vars.flow[e.line], sign * e.sign / line.susceptance);
            r.add(vars.on[e.line], ineq.delta - line.capacity / line.susceptance);
        } else {
            r.add(vars.on[e.line], ineq.delta);
        }
    }
    r.sense = lp::Sense::LessEqual;
    r.rhs = ineq.delta * (static_cast<double>(c.size()) - 1.0);
    return r;
}

std::string format_cut(const CycleInequality& ineq, const Cycle& c, const PowerNetwork& net) {
    std::string s = "cycle " + std::to_string(ineq.cycle_id) + (ineq.side == Side::Right ? " right" : " left") +
                    " S={";
    for (std::size_t i = 0; i < ineq.subset.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(net.lines()[c.edges[ineq.subset[i]].line].id);
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "} delta=%.9g violation=%.9g", ineq.delta, ineq.violation);
    return s + buf;
}

}  // namespace ots
