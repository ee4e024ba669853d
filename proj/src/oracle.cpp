#include "ots/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "ots/cuts.hpp"
#include "ots/formulations.hpp"
#include "ots/lp.hpp"
#include "ots/solve.hpp"

namespace ots::oracle {

namespace {

constexpr double kDedupTol = 1e-9;

bool same_point(const ScPoint& a, const ScPoint& b) {
    for (std::size_t i = 0; i < a.g.size(); ++i)
        if (std::abs(a.g[i] - b.g[i]) > kDedupTol || std::abs(a.x[i] - b.x[i]) > kDedupTol) return false;
    return true;
}

void push_unique(std::vector<ScPoint>& out, ScPoint p) {
    for (const ScPoint& q : out)
        if (same_point(p, q)) return;
    out.push_back(std::move(p));
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

std::vector<double> concat(const ScPoint& p) {
    std::vector<double> v(p.g);
    v.insert(v.end(), p.x.begin(), p.x.end());
    return v;
}

int matrix_rank(const Eigen::MatrixXd& m) {
    if (m.rows() == 0) return 0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-9);
    return static_cast<int>(lu.rank());
}

double max_objective(const lp::LinearProgram& model) {
    const lp::Solution sol = lp::solve(model);
    if (sol.status != lp::Status::Optimal) throw std::runtime_error("oracle LP not optimal");
    return -sol.objective;
}

// Columns g_0..g_{n-1}, x_0..x_{n-1}, plus capacity rows.
lp::LinearProgram capacity_model(std::span<const double> w) {
    lp::LinearProgram model;
    const int n = static_cast<int>(w.size());
    for (int a = 0; a < n; ++a) model.add_column(0.0, -w[a], w[a]);
    for (int a = 0; a < n; ++a) model.add_column(0.0, 0.0, 1.0);
    for (int a = 0; a < n; ++a) {
        lp::Row up;
        up.add(a, 1.0);
        up.add(n + a, -w[a]);
        up.sense = lp::Sense::LessEqual;
        model.add_row(up);
        lp::Row lo;
        lo.add(a, 1.0);
        lo.add(n + a, w[a]);
        lo.sense = lp::Sense::GreaterEqual;
        model.add_row(lo);
    }
    return model;
}

lp::Row cycle_row(std::span<const double> w, std::span<const std::size_t> subset, int side) {
    const std::size_t n = w.size();
    const double d = delta(subset, w);
    std::vector<bool> in(n, false);
    for (std::size_t a : subset) in[a] = true;
    lp::Row r;
    for (std::size_t a = 0; a < n; ++a) {
        if (in[a]) {
            r.add(static_cast<int>(a), side);
            r.add(static_cast<int>(n + a), d - w[a]);
        } else {
            r.add(static_cast<int>(n + a), d);
        }
    }
    r.sense = lp::Sense::LessEqual;
    r.rhs = d * (static_cast<double>(n) - 1.0);
    return r;
}

}  // namespace

std::vector<ScPoint> enumerate_S_C_vertices(std::span<const double> w) {
    const std::size_t n = w.size();
    if (n == 0 || n > 10) throw std::invalid_argument("enumerate_S_C_vertices: cycle size must be in [1, 10]");
    std::vector<ScPoint> out;
    for (std::uint32_t xm = 0; xm < (1u << n); ++xm) {
        std::vector<std::size_t> on;
        for (std::size_t a = 0; a < n; ++a)
            if (xm >> a & 1u) on.push_back(a);
        ScPoint base{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
        for (std::size_t a : on) base.x[a] = 1.0;
        if (on.size() < n) {
            for (std::uint32_t sm = 0; sm < (1u << on.size()); ++sm) {
                ScPoint p = base;
                for (std::size_t k = 0; k < on.size(); ++k) p.g[on[k]] = (sm >> k & 1u) ? w[on[k]] : -w[on[k]];
                push_unique(out, std::move(p));
            }
            continue;
        }
        // Box intersected with sum g = 0: all coordinates but one at a bound.
        for (std::size_t j = 0; j < n; ++j) {
            for (std::uint32_t sm = 0; sm < (1u << (n - 1)); ++sm) {
                ScPoint p = base;
                double rest = 0.0;
                std::size_t k = 0;
                for (std::size_t a = 0; a < n; ++a) {
                    if (a == j) continue;
                    p.g[a] = (sm >> k++ & 1u) ? w[a] : -w[a];
                    rest += p.g[a];
                }
                if (std::abs(rest) > w[j] + kDedupTol) continue;
                p.g[j] = -rest;
                push_unique(out, std::move(p));
            }
        }
    }
    return out;
}

bool in_S_C(const ScPoint& p, std::span<const double> w, double tol) {
    bool all_on = true;
    for (std::size_t a = 0; a < w.size(); ++a) {
        const bool one = std::abs(p.x[a] - 1.0) <= tol;
        if (!one && std::abs(p.x[a]) > tol) return false;
        all_on = all_on && one;
        if (std::abs(p.g[a]) > w[a] * std::round(p.x[a]) + tol) return false;
    }
    return !all_on || std::abs(sum(p.g)) <= tol;
}

double cycle_slack(const ScPoint& p, std::span<const double> w, std::span<const std::size_t> subset, int side) {
    const lp::Row r = cycle_row(w, subset, side);
    const std::vector<double> v = concat(p);
    return r.activity(v) - r.rhs;
}

std::vector<std::vector<std::size_t>> positive_subsets(std::span<const double> w) {
    std::vector<std::vector<std::size_t>> out;
    const std::size_t n = w.size();
    for (std::uint32_t m = 1; m < (1u << n); ++m) {
        std::vector<std::size_t> s;
        for (std::size_t a = 0; a < n; ++a)
            if (m >> a & 1u) s.push_back(a);
        if (delta(s, w) > 1e-12) out.push_back(std::move(s));
    }
    return out;
}

HullCheckReport check_hull_equality(std::span<const double> w, int trials, std::uint64_t seed,
                                    std::optional<std::vector<std::size_t>> dropped) {
    const std::size_t n = w.size();
    if (n > 6) throw std::invalid_argument("check_hull_equality: cycle size must be at most 6");
    const std::vector<ScPoint> vertices = enumerate_S_C_vertices(w);
    lp::LinearProgram model = capacity_model(w);
    std::vector<double> dropped_normal;
    for (const auto& s : positive_subsets(w)) {
        for (int side : {1, -1}) {
            lp::Row r = cycle_row(w, s, side);
            if (dropped && side == 1 && s == *dropped) {
                dropped_normal.assign(2 * n, 0.0);
                for (std::size_t k = 0; k < r.index.size(); ++k) dropped_normal[r.index[k]] += r.value[k];
                continue;
            }
            model.add_row(std::move(r));
        }
    }

    HullCheckReport rep;
    rep.cycle_size = n;
    rep.trials = trials;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < trials; ++t) {
        std::vector<double> c(2 * n);
        if (t == 0 && !dropped_normal.empty()) {
            c = dropped_normal;
        } else {
            for (double& v : c) v = u(rng);
        }
        double best = -lp::kInf;
        for (const ScPoint& p : vertices) {
            const std::vector<double> v = concat(p);
            best = std::max(best, std::inner_product(c.begin(), c.end(), v.begin(), 0.0));
        }
        for (std::size_t j = 0; j < 2 * n; ++j) model.set_cost(static_cast<int>(j), -c[j]);
        const double gap = std::abs(max_objective(model) - best);
        if (gap > rep.max_gap || rep.worst_objective.empty()) {
            rep.max_gap = std::max(rep.max_gap, gap);
            rep.worst_objective = c;
        }
    }
    return rep;
}

bool membership_extended(const ScPoint& p, std::span<const double> w) {
    const int n = static_cast<int>(w.size());
    lp::LinearProgram model;
    std::vector<int> f1(n);
    for (int a = 0; a < n; ++a) f1[a] = model.add_column(0.0, -lp::kInf, lp::kInf);
    const int y = model.add_column(0.0, 0.0, 1.0);
    auto add = [&](lp::Row r, lp::Sense s, double rhs) {
        r.sense = s;
        r.rhs = rhs;
        model.add_row(std::move(r));
    };
    lp::Row balance;
    for (int a = 0; a < n; ++a) {
        const double g = p.g[a], x = p.x[a];
        lp::Row r;
        r.add(f1[a], 1.0);
        r.add(y, -w[a]);
        add(r, lp::Sense::LessEqual, 0.0);
        r.value[1] = w[a];
        add(r, lp::Sense::GreaterEqual, 0.0);
        // f0 = g - f1 within w (x - y).
        lp::Row s;
        s.add(f1[a], -1.0);
        s.add(y, w[a]);
        add(s, lp::Sense::LessEqual, w[a] * x - g);
        s.value[1] = -w[a];
        add(s, lp::Sense::GreaterEqual, -w[a] * x - g);
        lp::Row yx;
        yx.add(y, 1.0);
        add(yx, lp::Sense::LessEqual, x);
        balance.add(f1[a], 1.0);
        if (x > 1.0 + 1e-9 || x < -1e-9) return false;
    }
    add(balance, lp::Sense::Equal, 0.0);
    lp::Row budget;
    budget.add(y, -1.0);
    add(budget, lp::Sense::LessEqual, static_cast<double>(n) - 1.0 - sum(p.x));
    return lp::solve(model).status == lp::Status::Optimal;
}

double check_projection(std::span<const double> w, int trials, std::uint64_t seed) {
    const int n = static_cast<int>(w.size());
    if (n > 6) throw std::invalid_argument("check_projection: cycle size must be at most 6");

    // Shared columns g (n), x (n), y; the extended model adds f1 (n).
    auto common = [&](lp::LinearProgram& m) {
        for (int a = 0; a < n; ++a) m.add_column(0.0, -lp::kInf, lp::kInf);
        for (int a = 0; a < n; ++a) m.add_column(0.0, -lp::kInf, 1.0);
        const int y = m.add_column(0.0, 0.0, lp::kInf);
        lp::Row budget;
        for (int a = 0; a < n; ++a) budget.add(n + a, 1.0);
        budget.add(y, -1.0);
        budget.sense = lp::Sense::LessEqual;
        budget.rhs = n - 1.0;
        m.add_row(budget);
        for (int a = 0; a < n; ++a) {
            lp::Row r;
            r.add(y, 1.0);
            r.add(n + a, -1.0);
            r.sense = lp::Sense::LessEqual;
            m.add_row(r);
        }
        return y;
    };

    lp::LinearProgram ext;
    const int y = common(ext);
    {
        std::vector<int> f1(n);
        for (int a = 0; a < n; ++a) f1[a] = ext.add_column(0.0, -lp::kInf, lp::kInf);
        lp::Row balance;
        for (int a = 0; a < n; ++a) {
            for (double s : {1.0, -1.0}) {
                lp::Row r;  // s f1 - w y <= 0
                r.add(f1[a], s);
                r.add(y, -w[a]);
                ext.add_row(r);
                lp::Row q;  // s (g - f1) - w (x - y) <= 0
                q.add(a, s);
                q.add(f1[a], -s);
                q.add(n + a, -w[a]);
                q.add(y, w[a]);
                ext.add_row(q);
            }
            balance.add(f1[a], 1.0);
        }
        balance.sense = lp::Sense::Equal;
        ext.add_row(balance);
    }

    lp::LinearProgram proj;
    common(proj);
    for (int a = 0; a < n; ++a) {
        for (double s : {1.0, -1.0}) {
            lp::Row r;
            r.add(a, s);
            r.add(n + a, -w[a]);
            proj.add_row(r);
        }
    }
    for (const auto& sub : positive_subsets(w)) {
        const double d = delta(sub, w);
        for (double s : {1.0, -1.0}) {
            lp::Row r;  // s sum_S g - sum_S w x + d y <= 0
            for (std::size_t a : sub) {
                r.add(static_cast<int>(a), s);
                r.add(n + static_cast<int>(a), -w[a]);
            }
            r.add(y, d);
            proj.add_row(r);
        }
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        for (int j = 0; j <= 2 * n; ++j) {
            const double c = u(rng);
            ext.set_cost(j, -c);
            proj.set_cost(j, -c);
        }
        worst = std::max(worst, std::abs(max_objective(ext) - max_objective(proj)));
    }
    return worst;
}

FacetReport check_facets(std::span<const double> w, std::span<const std::size_t> subset) {
    const std::size_t n = w.size();
    const double d = delta(subset, w);
    if (!(d > 1e-12)) throw std::invalid_argument("check_facets: requires Delta(S) > 0");
    std::vector<bool> in(n, false);
    for (std::size_t a : subset) in.at(a) = true;
    std::vector<std::size_t> s, t;
    for (std::size_t a = 0; a < n; ++a) (in[a] ? s : t).push_back(a);
    double ws = 0.0;
    for (std::size_t a : s) ws += w[a];
    const double rho = (sum(w) - ws) / ws;
    const double wmin = *std::min_element(w.begin(), w.end());

    FacetReport rep;
    auto build = [&](double eps, std::vector<ScPoint>& pts) {
        pts.clear();
        const ScPoint ones{std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)};
        for (std::size_t hat : s) {
            ScPoint p = ones;
            for (std::size_t a : s) p.g[a] = rho * w[a] + eps;
            p.g[hat] = rho * w[hat] - static_cast<double>(s.size() - 1) * eps;
            for (std::size_t a : t) p.g[a] = -w[a];
            pts.push_back(std::move(p));
        }
        for (std::size_t hat : s) {
            ScPoint p = ones;
            for (std::size_t a = 0; a < n; ++a) p.g[a] = w[a];
            p.g[hat] = 0.0;
            p.x[hat] = 0.0;
            pts.push_back(std::move(p));
        }
        for (std::size_t tilde : t) {
            ScPoint p = ones;
            for (std::size_t a : s) p.g[a] = w[a];
            p.x[tilde] = 0.0;
            pts.push_back(std::move(p));
        }
        if (t.size() >= 2) {
            for (std::size_t i = 0; i < t.size(); ++i) {
                const std::size_t tilde = t[i], bar = t[(i + 1) % t.size()];
                ScPoint p = ones;
                for (std::size_t a : s) p.g[a] = w[a];
                p.g[bar] = w[bar];
                p.x[tilde] = 0.0;
                pts.push_back(std::move(p));
            }
        }
    };

    std::vector<ScPoint> pts;
    double eps = 1e-3 * wmin;
    bool feasible = false;
    for (int attempt = 0; attempt <= 10 && !feasible; ++attempt, eps *= 0.5) {
        build(eps, pts);
        feasible = std::all_of(pts.begin(), pts.end(), [&](const ScPoint& p) { return in_S_C(p, w); });
        rep.epsilon = eps;
    }
    if (!feasible) {
        rep.failure = "witness point outside S_C";
        return rep;
    }
    for (const ScPoint& p : pts) {
        if (std::abs(cycle_slack(p, w, subset, 1)) > 1e-9) {
            rep.failure = "witness point not tight";
            return rep;
        }
    }

    auto stack = [&](const std::vector<ScPoint>& ps, bool affine) {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(affine ? ps.size() - 1 : ps.size()), 2 * n);
        const std::vector<double> p0 = concat(ps[0]);
        for (std::size_t i = affine ? 1 : 0, r = 0; i < ps.size(); ++i, ++r) {
            const std::vector<double> v = concat(ps[i]);
            for (std::size_t j = 0; j < 2 * n; ++j) m(r, j) = v[j] - (affine ? p0[j] : 0.0);
        }
        return m;
    };
    rep.witness_linear_rank = matrix_rank(stack(pts, false));

    // With a single line outside S the standard witness list has 2|C|-1 points on a
    // hyperplane missing the origin, one short of a facet. The extra point
    // is the second family with the outside line at its lower bound.
    if (t.size() == 1) {
        ScPoint p{std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)};
        for (std::size_t a : s) p.g[a] = w[a];
        p.g[s[0]] = 0.0;
        p.x[s[0]] = 0.0;
        p.g[t[0]] = -w[t[0]];
        if (!in_S_C(p, w) || std::abs(cycle_slack(p, w, subset, 1)) > 1e-9) {
            rep.failure = "supplementary point invalid";
            return rep;
        }
        pts.push_back(std::move(p));
    }
    rep.points = static_cast<int>(pts.size());
    rep.affine_rank = matrix_rank(stack(pts, true));
    rep.ok = rep.affine_rank == static_cast<int>(2 * n) - 1;
    if (!rep.ok) rep.failure = "affine rank " + std::to_string(rep.affine_rank);
    return rep;
}

PowerNetwork reduce_subset_sum(const SubsetSumInstance& inst) {
    if (inst.b <= 0) throw std::invalid_argument("reduce_subset_sum: b must be positive");
    for (int a : inst.a)
        if (a <= 0) throw std::invalid_argument("reduce_subset_sum: a_i must be positive");
    const int n = static_cast<int>(inst.a.size());
    const double b = inst.b;
    NetworkData d;
    for (int i = 0; i <= n + 2; ++i) d.buses.push_back({i, i == n + 2 ? 2.0 : 0.0});
    d.generators.push_back({0, 2.0, 2.0, 1.0});
    int id = 0;
    for (int i = 1; i <= n; ++i) d.lines.push_back({id++, 0, i, 2.0 * inst.a[i - 1], inst.a[i - 1] / b, true});
    for (int i = 1; i <= n; ++i) d.lines.push_back({id++, i, n + 1, 2.0 * inst.a[i - 1], inst.a[i - 1] / b, true});
    d.lines.push_back({id++, n + 1, n + 2, 1.0, 1.0, true});
    d.lines.push_back({id++, 0, n + 2, b / (b + 1.0), 1.0, true});
    return PowerNetwork(std::move(d));
}

bool subset_sum_brute(const SubsetSumInstance& inst) {
    const std::size_t n = inst.a.size();
    if (n > 24) throw std::invalid_argument("subset_sum_brute: at most 24 items");
    for (std::uint32_t m = 1; m < (1u << n); ++m) {
        long s = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (m >> i & 1u) s += inst.a[i];
        if (s == inst.b) return true;
    }
    return false;
}

OpfEquivalence check_opf_equivalence(const PowerNetwork& net, const CycleSet& basis) {
    OpfEquivalence out;
    const MilpModel angle = build_opf_angle(net);
    const MilpModel cyc = build_opf_cycle(net, basis);
    const lp::Solution sa = lp::solve(angle.lp);
    const lp::Solution sc = lp::solve(cyc.lp);
    out.feasible = sa.status == lp::Status::Optimal && sc.status == lp::Status::Optimal;
    if (sa.status != sc.status) {
        out.gap = lp::kInf;
        return out;
    }
    if (!out.feasible) return out;
    out.angle_objective = sa.objective;
    out.cycle_objective = sc.objective;
    out.gap = std::abs(sa.objective - sc.objective);
    std::vector<double> f(net.num_lines()), x(net.num_lines(), 1.0);
    for (std::size_t l = 0; l < f.size(); ++l) f[l] = sc.x[cyc.vars.flow[l]];
    const std::vector<double> theta = recover_angles(net, x, f);
    for (std::size_t l = 0; l < f.size(); ++l) {
        const double r = f[l] / net.lines()[l].susceptance - (theta[net.from_index(l)] - theta[net.to_index(l)]);
        out.kvl_residual = std::max(out.kvl_residual, std::abs(r));
    }
    return out;
}

std::vector<std::vector<int>> enumerate_all_cycles(const PowerNetwork& net) {
    const std::size_t m = net.num_lines();
    std::set<std::vector<std::size_t>> seen;
    std::vector<std::vector<int>> out;
    // Each cycle is found from its smallest line, so only larger lines extend a path.
    for (std::size_t start = 0; start < m; ++start) {
        const std::size_t s = net.from_index(start), t = net.to_index(start);
        std::vector<std::size_t> path{start};
        std::vector<bool> used(net.num_buses(), false);
        used[s] = used[t] = true;
        std::function<void(std::size_t)> dfs = [&](std::size_t at) {
            for (std::size_t l : net.incident_lines(at)) {
                if (l <= start || std::find(path.begin(), path.end(), l) != path.end()) continue;
                const std::size_t nxt = net.other_end(l, at);
                if (nxt == s) {
                    path.push_back(l);
                    std::vector<std::size_t> key(path);
                    std::sort(key.begin(), key.end());
                    if (seen.insert(key).second) {
                        std::vector<int> v(m, 0);
                        std::size_t cur = s;
                        for (std::size_t e : path) {
                            v[e] = net.from_index(e) == cur ? 1 : -1;
                            cur = net.other_end(e, cur);
                        }
                        out.push_back(std::move(v));
                    }
                    path.pop_back();
                    continue;
                }
                if (used[nxt]) continue;
                used[nxt] = true;
                path.push_back(l);
                dfs(nxt);
                path.pop_back();
                used[nxt] = false;
            }
        };
        dfs(t);
    }
    return out;
}

namespace {

std::vector<std::size_t> switchable_lines(const PowerNetwork& net) {
    std::vector<std::size_t> sw;
    for (std::size_t l = 0; l < net.num_lines(); ++l)
        if (net.lines()[l].switchable) sw.push_back(l);
    if (sw.size() > 30) throw std::invalid_argument("brute force: too many switchable lines");
    return sw;
}

std::vector<bool> pattern(const PowerNetwork& net, std::span<const std::size_t> sw, std::uint64_t mask) {
    std::vector<bool> active(net.num_lines(), true);
    for (std::size_t k = 0; k < sw.size(); ++k) active[sw[k]] = (mask >> k & 1u) != 0;
    return active;
}

}  // namespace

BruteForceResult brute_force_ots(const PowerNetwork& net, int max_off) {
    const std::vector<std::size_t> sw = switchable_lines(net);
    BruteForceResult best;
    const std::uint64_t full = (std::uint64_t{1} << sw.size()) - 1;
    for (std::uint64_t mask = 0; mask <= full; ++mask) {
        const int off = static_cast<int>(sw.size()) - std::popcount(mask);
        if (max_off >= 0 && off > max_off) continue;
        const std::vector<bool> active = pattern(net, sw, mask);
        ++best.topologies;
        const std::unique_ptr<bool[]> act(new bool[active.size()]);
        std::copy(active.begin(), active.end(), act.get());
        const MilpModel m = build_opf_angle(net, std::span<const bool>(act.get(), active.size()));
        const lp::Solution sol = lp::solve(m.lp);
        if (sol.status != lp::Status::Optimal) continue;
        if (!best.feasible || sol.objective < best.objective - 1e-12) {
            best.feasible = true;
            best.objective = sol.objective;
            best.x.assign(active.begin(), active.end());
        }
    }
    return best;
}

BruteForceResult brute_force_fixed_injection(const PowerNetwork& net, double tol) {
    const std::size_t nb = net.num_buses(), nl = net.num_lines();
    std::vector<double> inj(nb, 0.0);
    double cost = 0.0;
    for (std::size_t i = 0; i < nb; ++i) inj[i] -= net.buses()[i].load;
    for (const Generator& g : net.generators()) {
        if (g.p_min != g.p_max) throw std::invalid_argument("brute_force_fixed_injection: generator output not fixed");
        inj[net.bus_index(g.bus)] += g.p_min;
        cost += g.cost * g.p_min;
    }
    if (nl > 64) throw std::invalid_argument("brute_force_fixed_injection: at most 64 lines");
    const std::vector<std::size_t> sw = switchable_lines(net);
    BruteForceResult res;
    res.objective = cost;

    // Topologies that agree on the lines inside the loaded components carry
    // identical flows, so results are cached on that restricted mask.
    std::unordered_map<std::uint64_t, bool> cache;
    std::vector<std::size_t> parent(nb), local(nb);
    std::vector<double> lap, rhs;
    auto find = [&](std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    const std::uint64_t full = (std::uint64_t{1} << sw.size()) - 1;
    for (std::uint64_t mask = 0; mask <= full; ++mask) {
        ++res.topologies;
        const std::vector<bool> active = pattern(net, sw, mask);
        std::iota(parent.begin(), parent.end(), 0);
        for (std::size_t l = 0; l < nl; ++l)
            if (active[l]) parent[find(net.from_index(l))] = find(net.to_index(l));
        std::vector<double> comp_sum(nb, 0.0);
        std::vector<bool> loaded(nb, false);
        for (std::size_t i = 0; i < nb; ++i) {
            comp_sum[find(i)] += inj[i];
            if (std::abs(inj[i]) > 0.0) loaded[find(i)] = true;
        }
        bool balanced = true;
        for (std::size_t i = 0; i < nb; ++i)
            if (std::abs(comp_sum[i]) > tol) balanced = false;
        if (!balanced) continue;
        std::uint64_t key = 0;
        for (std::size_t l = 0; l < nl; ++l)
            if (active[l] && loaded[find(net.from_index(l))]) key |= std::uint64_t{1} << l;
        auto it = cache.find(key);
        bool ok = true;
        if (it != cache.end()) {
            ok = it->second;
        } else {
            // Grounded Laplacian solve per loaded component.
            for (std::size_t root = 0; root < nb && ok; ++root) {
                if (find(root) != root || !loaded[root]) continue;
                std::vector<std::size_t> members;
                for (std::size_t i = 0; i < nb; ++i)
                    if (find(i) == root) {
                        local[i] = members.size();
                        members.push_back(i);
                    }
                const std::size_t k = members.size() - 1;
                Eigen::MatrixXd L = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
                Eigen::VectorXd r(static_cast<Eigen::Index>(k));
                for (std::size_t i = 1; i <= k; ++i) r(i - 1) = inj[members[i]];
                for (std::size_t l = 0; l < nl; ++l) {
                    if (!active[l] || find(net.from_index(l)) != root) continue;
                    const double b = net.lines()[l].susceptance;
                    const std::size_t u = local[net.from_index(l)], v = local[net.to_index(l)];
                    if (u) L(u - 1, u - 1) += b;
                    if (v) L(v - 1, v - 1) += b;
                    if (u && v) {
                        L(u - 1, v - 1) -= b;
                        L(v - 1, u - 1) -= b;
                    }
                }
                Eigen::VectorXd th = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k + 1));
                if (k) th.tail(static_cast<Eigen::Index>(k)) = L.ldlt().solve(r);
                for (std::size_t l = 0; l < nl && ok; ++l) {
                    if (!active[l] || find(net.from_index(l)) != root) continue;
                    const Line& line = net.lines()[l];
                    const double f = line.susceptance * (th(local[net.from_index(l)]) - th(local[net.to_index(l)]));
                    if (std::abs(f) > line.capacity + tol) ok = false;
                }
            }
            cache.emplace(key, ok);
        }
        if (ok) {
            res.feasible = true;
            res.x.assign(active.begin(), active.end());
            return res;
        }
    }
    return res;
}

PowerNetwork random_network(std::mt19937_64& rng, const RandomNetworkSpec& spec) {
    std::uniform_int_distribution<int> nbus(spec.min_buses, spec.max_buses);
    const int n = nbus(rng);
    const int room = std::max(spec.max_lines - (n - 1), 1);
    std::uniform_int_distribution<int> nextra(1, room);
    const int extra = nextra(rng);
    std::uniform_real_distribution<double> sus(1.0, 5.0), load(0.1, 0.6), u(0.0, 1.0);
    auto cents = [](double v) { return std::round(v * 100.0) / 100.0; };

    NetworkData d;
    for (int b = 0; b < n; ++b) d.buses.push_back({b, 0.0});
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const int gens = std::clamp(spec.generators, 1, n - 1);
    double total = 0.0;
    for (int k = gens; k < n; ++k) {
        d.buses[order[k]].load = cents(load(rng));
        total += d.buses[order[k]].load;
    }
    for (int k = 0; k < gens; ++k) {
        const double cost = k == 0 ? 1.0 + 2.0 * u(rng) : 5.0 + 5.0 * u(rng);
        d.generators.push_back({order[k], 0.0, total, cents(cost)});
    }
    auto capacity = [&] { return std::max(cents((spec.cap_low + (spec.cap_high - spec.cap_low) * u(rng)) * total), 0.01); };
    int id = 0;
    for (int b = 1; b < n; ++b) {
        std::uniform_int_distribution<int> pick(0, b - 1);
        const int from = pick(rng);
        d.lines.push_back({id++, from, b, sus(rng), capacity(), true});
    }
    std::uniform_int_distribution<int> any(0, n - 1);
    for (int k = 0; k < extra; ++k) {
        int a = any(rng), b = any(rng);
        while (b == a) b = any(rng);
        d.lines.push_back({id++, a, b, sus(rng), capacity(), true});
    }
    return PowerNetwork(std::move(d));
}

PowerNetwork random_multigraph(std::mt19937_64& rng, int buses, int extra) {
    if (buses < 2) throw std::invalid_argument("random_multigraph: need two buses");
    NetworkData d;
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (int b = 0; b < buses; ++b) d.buses.push_back({b, 0.0});
    d.generators.push_back({0, 0.0, 1.0, 1.0});
    int id = 0;
    for (int b = 1; b < buses; ++b) {
        std::uniform_int_distribution<int> pick(0, b - 1);
        const int from = pick(rng);
        d.lines.push_back({id++, from, b, u(rng), u(rng), true});
    }
    std::uniform_int_distribution<int> any(0, buses - 1);
    for (int k = 0; k < extra; ++k) {
        const int a = any(rng);
        int b = any(rng);
        while (b == a) b = any(rng);
        d.lines.push_back({id++, a, b, u(rng), u(rng), true});
    }
    return PowerNetwork(std::move(d));
}

PowerNetwork braess_instance(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        PowerNetwork net = random_network(rng, {});
        if (lp::solve(build_opf_angle(net).lp).status == lp::Status::Optimal) continue;
        if (brute_force_ots(net).feasible) return net;
    }
    throw std::runtime_error("braess_instance: no instance found");
}

}  // namespace ots::oracle
