#include "ots/solve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace ots {

const char* to_string(CycleMode m) {
    switch (m) {
        case CycleMode::Default: return "default";
        case CycleMode::BasicCycles: return "basic";
        case CycleMode::MoreCycles: return "more";
    }
    return "?";
}

CycleMode parse_cycle_mode(const std::string& s) {
    if (s == "default") return CycleMode::Default;
    if (s == "basic") return CycleMode::BasicCycles;
    if (s == "more") return CycleMode::MoreCycles;
    throw std::invalid_argument("unknown mode '" + s + "' (expected default, basic or more)");
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::OptimalWithinGap: return "optimal-within-gap";
        case SolveStatus::FeasibleTimeLimit: return "feasible-time-limit";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::InfeasibleUnknown: return "infeasible-unknown";
    }
    return "?";
}

double relative_gap(double objective, double bound) {
    return std::max(0.0, objective - bound) / std::max(std::abs(objective), 1e-9);
}

namespace {

bool fractional(std::span<const double> x, std::span<const int> cols, double tol) {
    for (int c : cols)
        if (std::abs(x[c] - std::round(x[c])) > tol) return true;
    return false;
}

std::vector<double> gather(std::span<const double> x, std::span<const int> cols) {
    std::vector<double> out;
    out.reserve(cols.size());
    for (int c : cols) out.push_back(x[c]);
    return out;
}

struct Forest {
    std::vector<double> theta;
    std::vector<std::size_t> tree;
    std::vector<bool> in_tree;
};

// BFS forest over active lines, buses and lines visited in index order.
Forest build_forest(const PowerNetwork& net, std::span<const double> x, std::span<const double> f) {
    Forest out;
    out.theta.assign(net.num_buses(), 0.0);
    out.in_tree.assign(net.num_lines(), false);
    std::vector<bool> seen(net.num_buses(), false);
    for (std::size_t root = 0; root < net.num_buses(); ++root) {
        if (seen[root]) continue;
        seen[root] = true;
        std::queue<std::size_t> q;
        q.push(root);
        while (!q.empty()) {
            const std::size_t at = q.front();
            q.pop();
            for (std::size_t l : net.incident_lines(at)) {
                if (x[l] < 0.5) continue;
                const std::size_t nxt = net.other_end(l, at);
                if (seen[nxt]) continue;
                seen[nxt] = true;
                const double drop = f[l] / net.lines()[l].susceptance;
                out.theta[nxt] = net.from_index(l) == at ? out.theta[at] - drop : out.theta[at] + drop;
                out.tree.push_back(l);
                out.in_tree[l] = true;
                q.push(nxt);
            }
        }
    }
    return out;
}

}  // namespace

std::optional<Cycle> lazy_kvl_check(const PowerNetwork& net, std::span<const double> x, std::span<const double> f,
                                    double tol) {
    const Forest forest = build_forest(net, x, f);
    std::size_t worst_line = 0;
    double worst = tol;
    bool found = false;
    for (std::size_t l = 0; l < net.num_lines(); ++l) {
        if (x[l] < 0.5 || forest.in_tree[l]) continue;
        const double r = std::abs(f[l] / net.lines()[l].susceptance -
                                  (forest.theta[net.from_index(l)] - forest.theta[net.to_index(l)]));
        if (r > worst) {
            worst = r;
            worst_line = l;
            found = true;
        }
    }
    if (!found) return std::nullopt;
    return cycle_of_chord(forest.tree, worst_line, net);
}

std::vector<double> recover_angles(const PowerNetwork& net, std::span<const double> x, std::span<const double> f) {
    return build_forest(net, x, f).theta;
}

Repaired repair_connected(const PowerNetwork& net, std::span<const double> x, std::span<const double> f,
                          std::span<const double> p) {
    Repaired r;
    r.x.resize(net.num_lines());
    r.f.assign(f.begin(), f.end());
    r.p.assign(p.begin(), p.end());
    std::vector<std::size_t> parent(net.num_buses());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (std::size_t l = 0; l < net.num_lines(); ++l) {
        r.x[l] = x[l] >= 0.5 ? 1.0 : 0.0;
        if (r.x[l] == 1.0) parent[find(net.from_index(l))] = find(net.to_index(l));
    }
    for (std::size_t l = 0; l < net.num_lines(); ++l) {
        if (r.x[l] == 1.0) continue;
        const std::size_t a = find(net.from_index(l)), b = find(net.to_index(l));
        if (a == b) continue;
        parent[a] = b;
        r.x[l] = 1.0;
        r.f[l] = 0.0;
        ++r.lines_turned_on;
    }
    return r;
}

StrengthenResult strengthen_root(MilpModel& model, const PowerNetwork& net, const CycleSet& cycles, int rounds,
                                 bool log_cuts) {
    StrengthenResult out;
    lp::Solution sol = lp::solve(model.lp);
    out.status = sol.status;
    if (sol.status != lp::Status::Optimal) return out;
    out.z_lp = out.z_lp_cuts = sol.objective;
    out.root_fractional = fractional(sol.x, model.vars.on, 1e-6);
    out.basis = sol.basis;
    for (int round = 0; round < rounds; ++round) {
        const std::vector<double> f = gather(sol.x, model.vars.flow);
        const std::vector<double> x = gather(sol.x, model.vars.on);
        std::vector<lp::Row> rows;
        for (std::size_t i = 0; i < cycles.size(); ++i) {
            const Cycle& c = cycles.cycles[i];
            const SeparationContext ctx = make_context(c, net, f, x, static_cast<int>(i));
            for (const CycleInequality& q : separate_all(ctx)) {
                rows.push_back(inequality_row(q, c, net, model.vars));
                if (log_cuts) out.log.push_back("round " + std::to_string(round + 1) + " " + format_cut(q, c, net));
            }
        }
        if (rows.empty()) break;
        for (lp::Row& r : rows) model.lp.add_row(std::move(r));
        out.cuts_added += static_cast<int>(rows.size());
        const lp::Basis warm = lp::extend_basis(sol.basis, static_cast<std::size_t>(model.lp.num_rows()));
        sol = lp::solve(model.lp, &warm);
        out.status = sol.status;
        if (sol.status != lp::Status::Optimal) return out;
        out.z_lp_cuts = sol.objective;
        out.basis = sol.basis;
    }
    return out;
}

namespace {

struct Node {
    std::vector<double> lo, hi;  // bounds of the switching columns
    double bound = -lp::kInf;
    lp::Basis basis;
    long id = 0;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;
        return a.id > b.id;
    }
};

}  // namespace

SolveResult branch_and_bound(MilpModel model, const PowerNetwork& net, const SolverConfig& config,
                             const LazySource& lazy, const lp::Basis* root_basis) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

    SolveResult res;
    lp::LinearProgram& work = model.lp;
    const std::vector<int>& xs = model.vars.on;
    const std::size_t nx = xs.size();

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    long next_id = 0;
    {
        Node root;
        for (int c : xs) {
            root.lo.push_back(work.lower(c));
            root.hi.push_back(work.upper(c));
        }
        if (root_basis) root.basis = *root_basis;
        root.id = next_id++;
        open.push(std::move(root));
    }

    double incumbent = lp::kInf;
    std::vector<double> best_x;
    double floor = lp::kInf;  // smallest bound among nodes discarded within tolerance
    std::set<std::vector<std::size_t>> lazy_keys;
    bool timed_out = false;

    auto cutoff = [&] {
        if (!std::isfinite(incumbent)) return lp::kInf;
        const double slack = std::max(config.rel_gap * std::max(std::abs(incumbent), 1e-9),
                                      1e-9 * (1.0 + std::abs(incumbent)));
        return incumbent - slack;
    };
    auto apply = [&](const std::vector<double>& lo, const std::vector<double>& hi) {
        for (std::size_t k = 0; k < nx; ++k) work.set_bounds(xs[k], lo[k], hi[k]);
    };
    auto warm_for = [&](const lp::Basis& b) {
        return lp::extend_basis(b, static_cast<std::size_t>(work.num_rows()));
    };

    while (!open.empty()) {
        if (elapsed() > config.time_limit_s) {
            timed_out = true;
            break;
        }
        Node node = open.top();
        open.pop();
        if (node.bound >= cutoff()) {
            floor = std::min(floor, node.bound);
            continue;
        }
        apply(node.lo, node.hi);
        const lp::Basis warm = warm_for(node.basis);
        const lp::Solution sol = lp::solve(work, node.basis.empty() ? nullptr : &warm);
        ++res.nodes;
        if (sol.status == lp::Status::Infeasible) continue;
        if (sol.status == lp::Status::Unbounded) {
            res.status = SolveStatus::Unbounded;
            res.wall_time_s = elapsed();
            return res;
        }
        const double bound = std::max(sol.objective, node.bound);
        if (bound >= cutoff()) {
            floor = std::min(floor, bound);
            continue;
        }

        int branch = -1;
        double best_frac = config.integrality_tol;
        for (std::size_t k = 0; k < nx; ++k) {
            const double v = sol.x[xs[k]];
            const double frac = std::abs(v - std::round(v));
            if (frac > best_frac) {
                best_frac = frac;
                branch = static_cast<int>(k);
            }
        }

        if (branch < 0) {
            // Integral within tolerance: re-solve with x fixed exactly so the
            // candidate's flows belong to a true topology.
            std::vector<double> fixed(nx);
            for (std::size_t k = 0; k < nx; ++k) fixed[k] = std::round(sol.x[xs[k]]);
            apply(fixed, fixed);
            const lp::Basis pw = warm_for(sol.basis);
            const lp::Solution pol = lp::solve(work, &pw);
            if (pol.status != lp::Status::Optimal) {
                // Rounding broke feasibility; branch on the largest deviation.
                double dev = 0.0;
                for (std::size_t k = 0; k < nx; ++k) {
                    const double d = std::abs(sol.x[xs[k]] - fixed[k]);
                    if (d > dev) {
                        dev = d;
                        branch = static_cast<int>(k);
                    }
                }
                if (branch < 0) continue;
            } else {
                const std::vector<double> xv = gather(pol.x, xs);
                const std::vector<double> fv = gather(pol.x, model.vars.flow);
                std::optional<Cycle> cyc = lazy ? lazy(xv, fv) : std::nullopt;
                if (cyc && lazy_keys.insert(edge_key(*cyc)).second) {
                    for (lp::Row& r : cycle_cut_constraint(*cyc, net, model.vars, cycle_big_m(*cyc, net)))
                        work.add_row(std::move(r));
                    ++res.lazy_cuts;
                    node.bound = bound;
                    node.basis = sol.basis;
                    node.id = next_id++;
                    open.push(std::move(node));
                    continue;
                }
                if (pol.objective < incumbent) {
                    incumbent = pol.objective;
                    best_x = pol.x;
                }
                floor = std::min(floor, bound);
                continue;
            }
        }

        for (int dir = 0; dir < 2; ++dir) {
            Node child;
            child.lo = node.lo;
            child.hi = node.hi;
            if (dir == 0) child.hi[branch] = 0.0;
            else child.lo[branch] = 1.0;
            child.bound = bound;
            child.basis = sol.basis;
            child.id = next_id++;
            open.push(std::move(child));
        }
    }

    double bound = floor;
    if (!open.empty()) bound = std::min(bound, open.top().bound);
    res.has_incumbent = std::isfinite(incumbent);
    if (res.has_incumbent) {
        res.objective = incumbent;
        res.best_bound = std::min(bound, incumbent);
        res.gap = relative_gap(incumbent, res.best_bound);
        res.x = gather(best_x, xs);
        res.f = gather(best_x, model.vars.flow);
        res.p = gather(best_x, model.vars.gen_p);
        for (double& v : res.x) v = std::round(v);
        res.status = timed_out ? SolveStatus::FeasibleTimeLimit : SolveStatus::OptimalWithinGap;
    } else {
        res.best_bound = bound;
        res.status = timed_out ? SolveStatus::InfeasibleUnknown : SolveStatus::Infeasible;
    }
    res.wall_time_s = elapsed();
    return res;
}

CycleSet cycles_for_mode(const PowerNetwork& net, const SolverConfig& config) {
    switch (config.mode) {
        case CycleMode::Default: return {};
        case CycleMode::BasicCycles: return cycle_basis(net);
        case CycleMode::MoreCycles: {
            CycleSet cs = cycle_basis(net);
            for (int k = 0; k < config.expansion_k; ++k) cs = expand_cycle_set(cs, net);
            return sample_cycles(cs, config.sample_fraction, config.seed);
        }
    }
    return {};
}

SolveResult solve_ots(const PowerNetwork& net, const SolverConfig& config) {
    if (config.rel_gap < 0) throw std::invalid_argument("solve_ots: rel_gap must be nonnegative");
    if (config.strengthen_rounds < 0) throw std::invalid_argument("solve_ots: strengthen_rounds must be nonnegative");
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();

    MilpModel model = config.cycle_formulation ? build_ots_cycle(net) : build_ots_angle(net, compute_big_m(net));
    if (config.max_off >= 0) add_switching_budget(model, config.max_off);

    const CycleSet cycles = cycles_for_mode(net, config);
    const int rounds = config.mode == CycleMode::Default ? 0 : config.strengthen_rounds;
    const StrengthenResult root = strengthen_root(model, net, cycles, rounds, config.log_cuts);

    SolveResult res;
    if (root.status != lp::Status::Optimal) {
        res.status = root.status == lp::Status::Infeasible ? SolveStatus::Infeasible : SolveStatus::Unbounded;
        res.z_lp = res.z_lp_cuts = root.status == lp::Status::Infeasible ? lp::kInf : -lp::kInf;
        res.best_bound = res.z_lp;
        res.cuts_added = root.cuts_added;
        res.cut_log = root.log;
        res.wall_time_s = std::chrono::duration<double>(clock::now() - start).count();
        return res;
    }

    SolverConfig bb = config;
    bb.time_limit_s = config.time_limit_s - std::chrono::duration<double>(clock::now() - start).count();
    const double tol = config.kvl_tol;
    const LazySource lazy = [&net, tol](std::span<const double> x, std::span<const double> f) {
        return lazy_kvl_check(net, x, f, tol);
    };
    res = branch_and_bound(std::move(model), net, bb, lazy, &root.basis);
    res.z_lp = root.z_lp;
    res.z_lp_cuts = root.z_lp_cuts;
    res.cuts_added = root.cuts_added;
    res.root_fractional = root.root_fractional;
    res.cut_log = root.log;
    if (res.has_incumbent) {
        Repaired r = repair_connected(net, res.x, res.f, res.p);
        res.x = std::move(r.x);
        res.f = std::move(r.f);
        res.theta = recover_angles(net, res.x, res.f);
    }
    res.wall_time_s = std::chrono::duration<double>(clock::now() - start).count();
    return res;
}

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

std::string to_json(const SolveResult& r, const PowerNetwork& net) {
    using nlohmann::json;
    auto real = [](double v) -> json {
        if (std::isfinite(v)) return v;
        return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    };
    json doc;
    doc["status"] = to_string(r.status);
    doc["objective"] = r.has_incumbent ? real(r.objective) : json(nullptr);
    doc["best_bound"] = real(r.best_bound);
    doc["gap"] = r.has_incumbent ? real(r.gap) : json(nullptr);
    doc["nodes"] = r.nodes;
    doc["cuts_added"] = r.cuts_added;
    doc["lazy_cuts"] = r.lazy_cuts;
    doc["z_lp"] = real(r.z_lp);
    doc["z_lp_cuts"] = real(r.z_lp_cuts);
    doc["gap_closed_by_cuts"] = "not-applicable";
    doc["wall_time_s"] = r.wall_time_s;
    if (r.has_incumbent) {
        json lines = json::array(), off = json::array();
        for (std::size_t l = 0; l < net.num_lines(); ++l) {
            const int id = net.lines()[l].id;
            lines.push_back({{"id", id}, {"on", r.x[l] > 0.5}, {"flow_pu", r.f[l]}});
            if (r.x[l] < 0.5) off.push_back(id);
        }
        json buses = json::array();
        for (std::size_t b = 0; b < net.num_buses(); ++b)
            buses.push_back({{"id", net.buses()[b].id}, {"theta", r.theta[b]}});
        json gens = json::array();
        for (std::size_t g = 0; g < net.generators().size(); ++g)
            gens.push_back({{"bus", net.generators()[g].bus}, {"p_pu", r.p[g]}});
        doc["lines_off"] = off;
        doc["lines"] = lines;
        doc["buses"] = buses;
        doc["generators"] = gens;
    }
    if (!r.cut_log.empty()) doc["cut_log"] = r.cut_log;
    return doc.dump(2) + "\n";
}

std::vector<SweepPoint> budget_sweep(const PowerNetwork& net, std::span<const int> n_values, SolverConfig config) {
    std::vector<SweepPoint> out;
    for (int n : n_values) {
        if (n < 0) throw std::invalid_argument("budget_sweep: budget values must be nonnegative");
        config.max_off = n;
        out.push_back({n, solve_ots(net, config)});
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& sweep) {
    std::string s = "N,status,ip_value,lp_value\n";
    for (const SweepPoint& p : sweep) {
        const SolveResult& r = p.result;
        s += std::to_string(p.n_off) + "," + to_string(r.status) + "," + (r.has_incumbent ? num(r.objective) : "") +
             "," + (std::isfinite(r.z_lp) ? num(r.z_lp) : "") + "\n";
    }
    return s;
}

std::string csv_header() {
    return "instance,mode,status,objective,bound,gap,nodes,cuts,z_LP,z_LP_cuts,wall_time_s";
}

std::string csv_row(const std::string& instance, const std::string& mode, const SolveResult& r) {
    char t[32];
    std::snprintf(t, sizeof t, "%.6f", r.wall_time_s);
    return instance + "," + mode + "," + to_string(r.status) + "," + (r.has_incumbent ? num(r.objective) : "") +
           "," + num(r.best_bound) + "," + (r.has_incumbent ? num(r.gap) : "") + "," + std::to_string(r.nodes) +
           "," + std::to_string(r.cuts_added) + "," + num(r.z_lp) + "," + num(r.z_lp_cuts) + "," + t;
}

}  // namespace ots
