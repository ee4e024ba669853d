#include "ots/verify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <stdexcept>

#include "ots/cuts.hpp"
#include "ots/cyclebasis.hpp"
#include "ots/formulations.hpp"
#include "ots/lp.hpp"
#include "ots/oracle.hpp"
#include "ots/solve.hpp"

namespace ots::verify {

namespace {

int scaled(const Options& o, int n) {
    return std::max(1, static_cast<int>(std::lround(n * o.scale)));
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::vector<double> random_weights(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.1, 3.0);
    std::vector<double> w(n);
    for (double& v : w) v = u(rng);
    return w;
}

SeparationContext random_context(std::mt19937_64& rng, std::size_t n, bool positive_k) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SeparationContext c;
    c.w = random_weights(rng, n);
    c.g_hat.resize(n);
    c.x_hat.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
        if (positive_k)
            c.x_hat[a] = u(rng) < 0.6 ? 1.0 : 1.0 - 0.5 * u(rng) / static_cast<double>(n);
        else
            c.x_hat[a] = u(rng);
        c.g_hat[a] = (2.0 * u(rng) - 1.0) * c.w[a] * c.x_hat[a];
    }
    if (!positive_k) {
        double k = k_value(c.x_hat);
        if (k > 0.0) c.x_hat[0] = std::max(0.0, c.x_hat[0] - k - 1e-3);
        for (std::size_t a = 1; k_value(c.x_hat) > 0.0 && a < n; ++a) c.x_hat[a] = 0.0;
        for (std::size_t a = 0; a < n; ++a)
            c.g_hat[a] = std::clamp(c.g_hat[a], -c.w[a] * c.x_hat[a], c.w[a] * c.x_hat[a]);
    }
    c.k = k_value(c.x_hat);
    return c;
}

// Largest violation over all S with Delta(S) > 0, straight from the
// inequality: s*sum_S g + sum_S (Delta - w) x + Delta sum_{C\S} x - Delta(|C|-1).
double exhaustive_violation(const SeparationContext& c, Side side) {
    const std::size_t n = c.w.size();
    const double s = side == Side::Right ? 1.0 : -1.0;
    const double total = std::accumulate(c.w.begin(), c.w.end(), 0.0);
    double best = -1e300;
    for (std::uint32_t m = 1; m < (1u << n); ++m) {
        double ws = 0.0;
        for (std::size_t a = 0; a < n; ++a)
            if (m >> a & 1u) ws += c.w[a];
        const double d = 2.0 * ws - total;
        if (d <= 0.0) continue;
        double lhs = 0.0;
        for (std::size_t a = 0; a < n; ++a)
            lhs += (m >> a & 1u) ? s * c.g_hat[a] + (d - c.w[a]) * c.x_hat[a] : d * c.x_hat[a];
        best = std::max(best, lhs - d * (static_cast<double>(n) - 1.0));
    }
    return best;
}

bool connected(const PowerNetwork& net, std::span<const double> x) {
    std::vector<std::size_t> parent(net.num_buses());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t v) {
        return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    std::size_t comps = net.num_buses();
    for (std::size_t l = 0; l < net.num_lines(); ++l) {
        if (x[l] < 0.5) continue;
        const std::size_t a = find(net.from_index(l)), b = find(net.to_index(l));
        if (a != b) {
            parent[a] = b;
            --comps;
        }
    }
    return comps == 1;
}

// Balance and Ohm residuals of a switched solution, Ohm measured in angle units.
double solution_residual(const PowerNetwork& net, const SolveResult& r) {
    std::vector<double> bal(net.num_buses(), 0.0);
    for (std::size_t b = 0; b < net.num_buses(); ++b) bal[b] = -net.buses()[b].load;
    for (std::size_t g = 0; g < net.generators().size(); ++g) bal[net.bus_index(net.generators()[g].bus)] += r.p[g];
    double worst = 0.0;
    for (std::size_t l = 0; l < net.num_lines(); ++l) {
        bal[net.from_index(l)] -= r.f[l];
        bal[net.to_index(l)] += r.f[l];
        if (r.x[l] > 0.5) {
            const double drop = r.theta[net.from_index(l)] - r.theta[net.to_index(l)];
            worst = std::max(worst, std::abs(r.f[l] / net.lines()[l].susceptance - drop));
            worst = std::max(worst, std::abs(r.f[l]) - net.lines()[l].capacity);
        } else {
            worst = std::max(worst, std::abs(r.f[l]));
        }
    }
    for (double v : bal) worst = std::max(worst, std::abs(v));
    return worst;
}

double dispatch_cost(const PowerNetwork& net, std::span<const double> p) {
    double c = 0.0;
    for (std::size_t g = 0; g < p.size(); ++g) c += net.generators()[g].cost * p[g];
    return c;
}

int rank(const Eigen::MatrixXd& m) {
    if (m.rows() == 0) return 0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-9);
    return static_cast<int>(lu.rank());
}

bool unit_entries(const IntMatrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (long v : m.row(r))
            if (v < -1 || v > 1) return false;
    return true;
}

// Angle drop from the source to the load bus when only the lines of `subset`
// (plus the two closing lines) are in service.
double witness_drop(const oracle::SubsetSumInstance& inst, std::uint32_t subset) {
    const PowerNetwork net = oracle::reduce_subset_sum(inst);
    const std::size_t n = inst.a.size();
    std::unique_ptr<bool[]> on(new bool[net.num_lines()]);
    std::vector<double> x(net.num_lines(), 0.0);
    for (std::size_t l = 0; l < net.num_lines(); ++l) {
        const bool keep = l >= 2 * n || (subset >> (l % n) & 1u);
        on[l] = keep;
        x[l] = keep ? 1.0 : 0.0;
    }
    const MilpModel m = build_opf_angle(net, std::span<const bool>(on.get(), net.num_lines()));
    const lp::Solution sol = lp::solve(m.lp);
    if (sol.status != lp::Status::Optimal) return std::nan("");
    std::vector<double> f(net.num_lines());
    for (std::size_t l = 0; l < f.size(); ++l) f[l] = sol.x[m.vars.flow[l]];
    const std::vector<double> th = recover_angles(net, x, f);
    return th[0] - th[n + 2];
}

}  // namespace

CheckResult hull(const Options& o) {
    std::mt19937_64 rng(o.seed + 1);
    const int per_size = scaled(o, 20), trials = scaled(o, 200);
    double worst = 0.0;
    int checked = 0;
    for (std::size_t n = 2; n <= 5; ++n)
        for (int k = 0; k < per_size; ++k) {
            const std::vector<double> w = k == 0 ? std::vector<double>(n, 1.0) : random_weights(rng, n);
            const auto rep = oracle::check_hull_equality(w, trials, rng());
            worst = std::max(worst, rep.max_gap);
            ++checked;
        }
    return {"hull", worst <= 1e-7,
            fmt("|C|=2..5, %d weight vectors x %d objectives, max gap %.3g (tol 1e-7)", checked, trials, worst)};
}

CheckResult facets(const Options& o) {
    std::mt19937_64 rng(o.seed + 2);
    const int per_size = scaled(o, 5);
    int subsets = 0, failed = 0;
    std::string first;
    for (std::size_t n = 3; n <= 5; ++n)
        for (int k = 0; k < per_size; ++k) {
            std::vector<double> w;
            if (k == 0) w.assign(n, 1.0);
            else if (k == 1) for (std::size_t a = 0; a < n; ++a) w.push_back(1.0 + a);
            else w = random_weights(rng, n);
            for (const auto& s : oracle::positive_subsets(w)) {
                ++subsets;
                const auto rep = oracle::check_facets(w, s);
                if (!rep.ok) {
                    ++failed;
                    if (first.empty()) first = rep.failure;
                }
            }
        }
    std::string d = fmt("|C|=3..5, %d subsets with Delta>0, %d without a full-rank witness set", subsets, failed);
    if (!first.empty()) d += " (" + first + ")";
    return {"facets", failed == 0 && subsets > 0, d};
}

CheckResult separation(const Options& o) {
    std::mt19937_64 rng(o.seed + 3);
    const int contexts = scaled(o, 10000);
    int mismatched = 0, violated = 0;
    double worst = 0.0;
    for (int t = 0; t < contexts; ++t) {
        const SeparationContext ctx = random_context(rng, 2 + static_cast<std::size_t>(t % 9), true);
        const auto cuts = separate_closed_form(ctx);
        for (Side side : {Side::Right, Side::Left}) {
            const double best = exhaustive_violation(ctx, side);
            const bool expect = best > kViolationTol;
            const auto it = std::find_if(cuts.begin(), cuts.end(), [&](const CycleInequality& q) { return q.side == side; });
            violated += expect;
            if ((it != cuts.end()) != expect) {
                ++mismatched;
                continue;
            }
            if (expect) worst = std::max(worst, std::abs(it->violation - best));
        }
    }
    return {"separation", mismatched == 0 && worst <= 1e-9,
            fmt("%d contexts |C|<=10, %d violated sides, %d decision mismatches, max |viol diff| %.3g (tol 1e-9)",
                contexts, violated, mismatched, worst)};
}

CheckResult nonpositive_k(const Options& o) {
    std::mt19937_64 rng(o.seed + 4);
    const int contexts = scaled(o, 10000);
    int nonempty = 0, thrown = 0, bad_k = 0;
    for (int t = 0; t < contexts; ++t) {
        const SeparationContext ctx = random_context(rng, 2 + static_cast<std::size_t>(t % 9), false);
        if (ctx.k > 0.0) ++bad_k;
        try {
            if (!separate_closed_form(ctx).empty() || !separate_all(ctx).empty()) ++nonempty;
        } catch (const std::exception&) {
            ++thrown;
        }
    }
    return {"nonpositive-k", nonempty == 0 && thrown == 0 && bad_k == 0,
            fmt("%d contexts with K<=0, %d nonempty outputs, %d exceptions", contexts, nonempty, thrown)};
}

CheckResult projection(const Options& o) {
    std::mt19937_64 rng(o.seed + 5);
    const int trials = scaled(o, 200);
    double worst = 0.0;
    for (std::size_t n = 2; n <= 4; ++n) {
        worst = std::max(worst, oracle::check_projection(std::vector<double>(n, 1.0), trials, rng()));
        worst = std::max(worst, oracle::check_projection(random_weights(rng, n), trials, rng()));
    }
    return {"projection", worst <= 1e-7,
            fmt("|C|=2..4, 2 weight vectors x %d objectives each, max gap %.3g (tol 1e-7)", trials, worst)};
}

CheckResult equivalence(const Options& o) {
    std::mt19937_64 rng(o.seed + 6);
    oracle::RandomNetworkSpec spec;
    spec.max_buses = 8;
    const int wanted = scaled(o, 50);
    int checked = 0, failed = 0, drawn = 0;
    double worst = 0.0, worst_kvl = 0.0;
    while (checked < wanted && drawn < 100 * wanted) {
        ++drawn;
        const PowerNetwork net = oracle::random_network(rng, spec);
        const auto r = oracle::check_opf_equivalence(net, cycle_basis(net));
        if (!r.feasible) {
            if (r.gap != 0.0) ++failed;  // statuses disagree
            continue;
        }
        ++checked;
        const double rel = r.gap / (1.0 + std::abs(r.angle_objective));
        worst = std::max(worst, rel);
        worst_kvl = std::max(worst_kvl, r.kvl_residual);
        if (r.gap > 1e-6 * (1.0 + std::abs(r.angle_objective)) || r.kvl_residual > 1e-6) ++failed;
    }
    return {"equivalence", failed == 0 && checked == wanted,
            fmt("%d feasible networks (%d drawn), max gap/(1+|opt|) %.3g, max KVL residual %.3g (tol 1e-6)", checked,
                drawn, worst, worst_kvl)};
}

CheckResult hardness(const Options& o) {
    std::mt19937_64 rng(o.seed + 7);
    std::uniform_int_distribution<int> nd(1, 8), ad(1, 9), bd(1, 25);
    const int count = scaled(o, 200);
    int disagree = 0, yes = 0, bad_witness = 0;
    std::vector<oracle::SubsetSumInstance> insts{{{1, 2}, 3}};
    for (int t = 1; t < count; ++t) {
        oracle::SubsetSumInstance inst;
        const int n = nd(rng);
        for (int i = 0; i < n; ++i) inst.a.push_back(ad(rng));
        inst.b = bd(rng);
        insts.push_back(std::move(inst));
    }
    for (const auto& inst : insts) {
        const bool ss = oracle::subset_sum_brute(inst);
        const bool ots = oracle::brute_force_fixed_injection(oracle::reduce_subset_sum(inst)).feasible;
        if (ss != ots) ++disagree;
        if (!ss) continue;
        ++yes;
        for (std::uint32_t m = 1; m < (1u << inst.a.size()); ++m) {
            long s = 0;
            for (std::size_t i = 0; i < inst.a.size(); ++i)
                if (m >> i & 1u) s += inst.a[i];
            if (s != inst.b) continue;
            const double drop = witness_drop(inst, m);
            if (!(std::abs(drop - (1.0 + 1.0 / inst.b)) <= 1e-9)) ++bad_witness;
            break;
        }
    }
    return {"hardness", disagree == 0 && bad_witness == 0,
            fmt("%d subset-sum instances (%d yes), %d disagreements, %d witnesses off theta_0 = 1 + 1/b",
                static_cast<int>(insts.size()), yes, disagree, bad_witness)};
}

std::vector<CheckResult> ground_truth(const Options& o) {
    std::mt19937_64 rng(o.seed + 8);
    const int count = scaled(o, 100);
    const CycleMode modes[] = {CycleMode::Default, CycleMode::BasicCycles, CycleMode::MoreCycles};
    int mismatched = 0, feasible = 0;
    double worst = 0.0;
    int non_monotone = 0, fractional = 0, strict_basic = 0, strict_more = 0;
    int repair_bad = 0, incumbents = 0;
    std::string first;
    for (int t = 0; t < count; ++t) {
        const PowerNetwork net = oracle::random_network(rng, {});
        const auto truth = oracle::brute_force_ots(net);
        feasible += truth.feasible;
        bool frac_counted = false;
        for (CycleMode mode : modes) {
            SolverConfig cfg;
            cfg.mode = mode;
            const SolveResult r = solve_ots(net, cfg);
            const bool ok_status = truth.feasible ? r.status == SolveStatus::OptimalWithinGap
                                                  : r.status == SolveStatus::Infeasible;
            if (!ok_status) {
                ++mismatched;
                if (first.empty()) first = fmt("instance %d mode %s status %s", t, to_string(mode), to_string(r.status));
                continue;
            }
            if (truth.feasible) {
                const double rel = std::abs(r.objective - truth.objective) / std::max(1.0, std::abs(truth.objective));
                worst = std::max(worst, rel);
                if (rel > 1e-3) {
                    ++mismatched;
                    if (first.empty()) first = fmt("instance %d mode %s objective %.8g vs %.8g", t, to_string(mode),
                                                   r.objective, truth.objective);
                }
            }
            if (r.has_incumbent) {
                ++incumbents;
                const bool good = connected(net, r.x) && solution_residual(net, r) <= 1e-6 &&
                                  std::abs(dispatch_cost(net, r.p) - r.objective) <= 1e-9 * (1.0 + std::abs(r.objective));
                repair_bad += !good;
            }
            if (mode == CycleMode::Default || !std::isfinite(r.z_lp)) continue;
            const double tol = 1e-9 * (1.0 + std::abs(r.z_lp));
            if (r.z_lp_cuts < r.z_lp - tol) ++non_monotone;
            if (!r.root_fractional) continue;
            if (!frac_counted) {
                ++fractional;
                frac_counted = true;
            }
            const bool strict = r.z_lp_cuts > r.z_lp + 1e-6;
            (mode == CycleMode::BasicCycles ? strict_basic : strict_more) += strict;
        }
    }

    // Trees: a zero-flow line may be switched off by the search, repair must
    // put it back.
    const int trees = scaled(o, 20);
    int tree_bad = 0;
    for (int t = 0; t < trees; ++t) {
        const PowerNetwork g = oracle::random_network(rng, {});
        NetworkData d = g.data();
        d.lines.resize(d.buses.size() - 1);
        double total = 0.0;
        for (const Bus& b : d.buses) total += b.load;
        for (Line& l : d.lines) l.capacity = total;
        const PowerNetwork tree(std::move(d));
        const SolveResult r = solve_ots(tree, {});
        const bool all_on = r.has_incumbent && std::all_of(r.x.begin(), r.x.end(), [](double v) { return v > 0.5; });
        tree_bad += !all_on;
    }

    std::vector<CheckResult> out;
    std::string d = fmt("%d instances (%d feasible) x 3 modes vs enumeration, max rel diff %.3g (tol 1e-3), %d mismatches",
                        count, feasible, worst, mismatched);
    if (!first.empty()) d += "; first: " + first;
    out.push_back({"ground-truth", mismatched == 0, d});
    const bool enough = fractional > 0 && strict_more * 10 >= fractional;
    out.push_back({"root-cuts", non_monotone == 0 && enough,
                   fmt("%d decreases; strict gain on %d/%d fractional roots with more cycles (%d with basic), need >= 10%%",
                       non_monotone, strict_more, fractional, strict_basic)});
    out.push_back({"repair", repair_bad == 0 && tree_bad == 0,
                   fmt("%d incumbents, %d disconnected or changed; %d trees, %d with a line off", incumbents, repair_bad,
                       trees, tree_bad)});
    return out;
}

CheckResult budget(const Options& o) {
    const PowerNetwork net = oracle::braess_instance(o.seed + 9);
    std::vector<int> ns(net.num_lines() + 1);
    std::iota(ns.begin(), ns.end(), 0);
    SolverConfig cfg;
    cfg.rel_gap = 1e-9;
    const auto sweep = budget_sweep(net, ns, cfg);
    bool ok = !sweep[0].result.has_incumbent && sweep[0].result.status == SolveStatus::Infeasible;
    int first_feasible = -1, oracle_mismatch = 0;
    double prev = lp::kInf;
    bool monotone = true;
    for (const SweepPoint& p : sweep) {
        const auto truth = oracle::brute_force_ots(net, p.n_off);
        const SolveResult& r = p.result;
        if (truth.feasible != r.has_incumbent ||
            (truth.feasible && std::abs(truth.objective - r.objective) > 1e-6 * (1.0 + std::abs(truth.objective))))
            ++oracle_mismatch;
        if (!r.has_incumbent) {
            if (first_feasible >= 0) monotone = false;
            continue;
        }
        if (first_feasible < 0) first_feasible = p.n_off;
        if (r.objective > prev + 1e-7 * (1.0 + std::abs(prev))) monotone = false;
        prev = r.objective;
    }
    ok = ok && first_feasible >= 1 && monotone && oracle_mismatch == 0;
    return {"budget", ok,
            fmt("%zu buses %zu lines: infeasible at N=0 %s, first feasible N=%d, non-increasing %s, %d enumeration "
                "mismatches",
                net.num_buses(), net.num_lines(), sweep[0].result.has_incumbent ? "no" : "yes", first_feasible,
                monotone ? "yes" : "no", oracle_mismatch)};
}

CheckResult basis(const Options& o) {
    std::mt19937_64 rng(o.seed + 10);
    std::uniform_int_distribution<int> bd(2, 12), ed(0, 6);
    const int count = scaled(o, 100);
    int bad_size = 0, bad_cycle = 0, bad_span = 0, bad_l = 0, cycles_seen = 0;
    for (int t = 0; t < count; ++t) {
        const PowerNetwork net = oracle::random_multigraph(rng, bd(rng), ed(rng));
        const CycleSet cs = cycle_basis(net);
        const std::size_t expect = net.num_lines() - net.num_buses() + 1;
        if (cs.size() != expect) ++bad_size;
        for (const Cycle& c : cs.cycles)
            if (!check_cycle(c, net).empty()) ++bad_cycle;
        const auto all = oracle::enumerate_all_cycles(net);
        cycles_seen += static_cast<int>(all.size());
        Eigen::MatrixXd m(static_cast<Eigen::Index>(cs.size() + all.size()), static_cast<Eigen::Index>(net.num_lines()));
        for (std::size_t i = 0; i < cs.size(); ++i) {
            const std::vector<int> v = incidence_vector(cs.cycles[i], net.num_lines());
            for (std::size_t l = 0; l < v.size(); ++l) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = v[l];
        }
        for (std::size_t i = 0; i < all.size(); ++i)
            for (std::size_t l = 0; l < all[i].size(); ++l)
                m(static_cast<Eigen::Index>(cs.size() + i), static_cast<Eigen::Index>(l)) = all[i][l];
        if (rank(m.topRows(static_cast<Eigen::Index>(cs.size()))) != static_cast<int>(cs.size()) ||
            rank(m) != static_cast<int>(cs.size()))
            ++bad_span;
        const LuFactors lu = lu_partial_pivot(incidence_matrix(net));
        if (!unit_entries(lu.lower) || !unit_entries(lu.lower_inv)) ++bad_l;
    }
    return {"basis", bad_size + bad_cycle + bad_span + bad_l == 0,
            fmt("%d multigraphs, %d cycles enumerated; size errors %d, invalid cycles %d, span failures %d, L entries "
                "outside {0,+-1} %d",
                count, cycles_seen, bad_size, bad_cycle, bad_span, bad_l)};
}

std::vector<CheckResult> run_all(const Options& o) {
    std::vector<CheckResult> out{hull(o), facets(o), separation(o), nonpositive_k(o), projection(o), equivalence(o),
                                 hardness(o)};
    for (CheckResult& r : ground_truth(o)) out.push_back(std::move(r));
    out.push_back(budget(o));
    out.push_back(basis(o));
    return out;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"hull",        "facets",   "separation",   "nonpositive-k",
                                                "projection",  "equivalence", "hardness", "ground-truth",
                                                "budget",      "basis",    "all"};
    return names;
}

std::vector<CheckResult> run_suite(const std::string& name, const Options& o) {
    if (name == "hull") return {hull(o)};
    if (name == "facets") return {facets(o)};
    if (name == "separation") return {separation(o)};
    if (name == "nonpositive-k") return {nonpositive_k(o)};
    if (name == "projection") return {projection(o)};
    if (name == "equivalence") return {equivalence(o)};
    if (name == "hardness") return {hardness(o)};
    if (name == "ground-truth") return ground_truth(o);
    if (name == "budget") return {budget(o)};
    if (name == "basis") return {basis(o)};
    if (name == "all") return run_all(o);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

std::vector<CheckResult> negative_controls(const Options& o) {
    std::vector<CheckResult> out;

    // Description missing one facet: the LP maximum must overshoot.
    const std::vector<double> w{1.0, 2.0, 2.5};
    const auto rep = oracle::check_hull_equality(w, scaled(o, 50), o.seed + 11, std::vector<std::size_t>{1, 2});
    out.push_back({"dropped-facet", rep.max_gap > 1e-4, fmt("hull gap without one facet %.3g (must exceed 1e-4)", rep.max_gap)});

    // A point just outside the hull must have no completion.
    oracle::ScPoint p{{1.0, -1.0, 0.0}, {1.0, 1.0, 1.0}};
    const bool base = oracle::membership_extended(p, w);
    p.g[0] += 1e-3;
    const bool accepted = oracle::membership_extended(p, w);
    out.push_back({"outside-point", base && !accepted,
                   fmt("boundary point %s, nudged point %s", base ? "accepted" : "rejected",
                       accepted ? "accepted" : "rejected")});

    // Reduction with a wrong closing susceptance: the equivalence must break.
    const oracle::SubsetSumInstance inst{{1}, 1};
    NetworkData d = oracle::reduce_subset_sum(inst).data();
    d.lines.back().susceptance = 1.0 / 3.0;
    const bool ots = oracle::brute_force_fixed_injection(PowerNetwork(std::move(d))).feasible;
    const bool ss = oracle::subset_sum_brute(inst);
    out.push_back({"perturbed-reduction", ots != ss,
                   fmt("subset sum %s, perturbed network %s", ss ? "yes" : "no", ots ? "feasible" : "infeasible")});
    return out;
}

std::string format(const CheckResult& r) {
    return std::string(r.pass ? "PASS " : "FAIL ") + r.name + ": " + r.detail;
}

}  // namespace ots::verify
