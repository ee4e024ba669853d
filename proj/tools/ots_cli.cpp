#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <thread>

#include "ots/bench.hpp"
#include "ots/network.hpp"
#include "ots/oracle.hpp"
#include "ots/solve.hpp"
#include "ots/verify.hpp"

namespace fs = std::filesystem;
using namespace ots;

namespace {

constexpr int kExitOptimal = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitTimeLimit = 3;

struct SolveFlags {
    std::string instance;
    std::string mode = "default";
    double gap = 0.001;
    double time_limit = 3600.0;
    int rounds = 5;
    int expansion_k = 2;
    double sample = 1.0;
    int max_off = -1;
    std::uint64_t seed = 0;
    std::string out;
    bool csv = false;
    bool cycle_formulation = false;
    bool log_cuts = false;
};

SolverConfig to_config(const SolveFlags& f) {
    SolverConfig c;
    c.mode = parse_cycle_mode(f.mode);
    c.rel_gap = f.gap;
    c.time_limit_s = f.time_limit;
    c.strengthen_rounds = f.rounds;
    c.expansion_k = f.expansion_k;
    c.sample_fraction = f.sample;
    c.max_off = f.max_off;
    c.seed = f.seed;
    c.cycle_formulation = f.cycle_formulation;
    c.log_cuts = f.log_cuts;
    return c;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

int exit_code(SolveStatus s) {
    switch (s) {
        case SolveStatus::OptimalWithinGap: return kExitOptimal;
        case SolveStatus::Infeasible: return kExitInfeasible;
        case SolveStatus::FeasibleTimeLimit:
        case SolveStatus::InfeasibleUnknown: return kExitTimeLimit;
        case SolveStatus::Unbounded: return kExitError;
    }
    return kExitError;
}

int cmd_solve(const SolveFlags& f) {
    const PowerNetwork net = load_network(f.instance);
    const SolveResult r = solve_ots(net, to_config(f));
    const std::string json = to_json(r, net);
    if (!f.out.empty()) write_file(f.out, json);
    if (f.csv)
        std::cout << csv_header() << "\n" << csv_row(fs::path(f.instance).stem().string(), f.mode, r) << "\n";
    else if (f.out.empty())
        std::cout << json;
    for (const std::string& line : r.cut_log) std::cerr << line << "\n";
    return exit_code(r.status);
}

struct GenFlags {
    std::string recipe;
    std::string in;
    std::string out;
    std::uint64_t seed = 0;
    int low = 0;
    int high = 15;
    int cycle_len = 3;
    int lines = 1;
    std::vector<int> a;
    int b = 0;
};

int cmd_gen(const GenFlags& f) {
    if (f.recipe == "subset-sum") {
        if (f.a.empty() || f.b <= 0) throw std::invalid_argument("subset-sum needs --a and a positive --b");
        save_network(oracle::reduce_subset_sum({f.a, f.b}), f.out);
        return 0;
    }
    if (f.in.empty()) throw std::invalid_argument(f.recipe + " needs --in");
    const PowerNetwork net = load_network(f.in);
    if (f.recipe == "perturb")
        save_network(perturb_loads(net, f.low, f.high, f.seed), f.out);
    else if (f.recipe == "add-cycle")
        save_network(augment_with_cycle(net, f.cycle_len, f.lines, f.seed), f.out);
    else
        save_network(relocate_generators(net, f.seed), f.out);
    return 0;
}

struct VerifyFlags {
    std::string suite = "all";
    bool negative_controls = false;
    double scale = 1.0;
    std::uint64_t seed = verify::Options{}.seed;
};

int cmd_verify(const VerifyFlags& f) {
    const verify::Options o{f.scale, f.seed};
    const auto results = f.negative_controls ? verify::negative_controls(o) : verify::run_suite(f.suite, o);
    bool ok = true;
    for (const auto& r : results) {
        std::cout << verify::format(r) << "\n";
        ok = ok && r.pass;
    }
    return ok ? 0 : kExitError;
}

struct BenchFlags {
    std::string dir;
    std::vector<std::string> modes{"default", "basic", "more"};
    double time_limit = 3600.0;
    double gap = 0.001;
    int jobs = 1;
    std::uint64_t seed = 0;
    std::string out = "bench.csv";
    std::string profile = "profile.csv";
};

int cmd_bench(const BenchFlags& f) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(f.dir)) {
        const std::string ext = e.path().extension().string();
        if (e.is_regular_file() && (ext == ".json" || ext == ".m")) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::invalid_argument("no .json or .m instances in " + f.dir);
    for (const std::string& m : f.modes) parse_cycle_mode(m);

    const std::size_t nm = f.modes.size();
    std::vector<std::vector<double>> times(files.size(), std::vector<double>(nm, INFINITY));
    std::vector<std::string> rows(files.size() * nm);
    std::vector<std::string> errors;
    std::mutex mu;
    std::size_t next = 0;
    auto worker = [&] {
        for (;;) {
            std::size_t job;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next == rows.size()) return;
                job = next++;
            }
            const std::size_t i = job / nm, m = job % nm;
            try {
                const PowerNetwork net = load_network(files[i].string());
                SolverConfig cfg;
                cfg.mode = parse_cycle_mode(f.modes[m]);
                cfg.time_limit_s = f.time_limit;
                cfg.rel_gap = f.gap;
                cfg.seed = f.seed;
                const SolveResult r = solve_ots(net, cfg);
                rows[job] = csv_row(files[i].stem().string(), f.modes[m], r);
                if (r.status == SolveStatus::OptimalWithinGap || r.status == SolveStatus::Infeasible)
                    times[i][m] = r.wall_time_s;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(mu);
                errors.push_back(files[i].string() + ": " + e.what());
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::max(1, f.jobs); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (!errors.empty()) {
        std::sort(errors.begin(), errors.end());
        for (const auto& e : errors) std::cerr << "error: " << e << "\n";
        return kExitError;
    }

    std::string csv = csv_header() + "\n";
    for (const auto& r : rows) csv += r + "\n";
    write_file(f.out, csv);
    write_file(f.profile, profile_csv(performance_profile(times), f.modes));
    std::cout << "wrote " << f.out << " (" << rows.size() << " rows) and " << f.profile << "\n";
    return 0;
}

struct SweepFlags {
    std::string instance;
    std::vector<int> n_values;
    std::string mode = "default";
    double gap = 0.001;
    double time_limit = 3600.0;
    std::string out;
};

int cmd_budget_sweep(const SweepFlags& f) {
    const PowerNetwork net = load_network(f.instance);
    std::vector<int> ns = f.n_values;
    if (ns.empty()) {
        ns.resize(net.num_lines() + 1);
        std::iota(ns.begin(), ns.end(), 0);
    }
    SolverConfig cfg;
    cfg.mode = parse_cycle_mode(f.mode);
    cfg.rel_gap = f.gap;
    cfg.time_limit_s = f.time_limit;
    const std::string csv = sweep_csv(budget_sweep(net, ns, cfg));
    if (f.out.empty())
        std::cout << csv;
    else
        write_file(f.out, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DC optimal transmission switching with cycle inequalities"};
    app.require_subcommand(1);

    SolveFlags sf;
    auto* solve = app.add_subcommand("solve", "Solve one instance");
    solve->add_option("instance", sf.instance, "Instance file (.json native, .m MATPOWER)")->required()->check(CLI::ExistingFile);
    solve->add_option("--mode", sf.mode, "Cycle inequality mode")->check(CLI::IsMember({"default", "basic", "more"}));
    solve->add_option("--gap", sf.gap, "Relative optimality gap")->check(CLI::NonNegativeNumber);
    solve->add_option("--time-limit", sf.time_limit, "Wall-clock limit in seconds")->check(CLI::NonNegativeNumber);
    solve->add_option("--rounds", sf.rounds, "Root strengthening rounds")->check(CLI::NonNegativeNumber);
    solve->add_option("--expansion-k", sf.expansion_k, "Cycle expansion generation for mode more")->check(CLI::PositiveNumber);
    solve->add_option("--sample", sf.sample, "Fraction of cycles kept")->check(CLI::Range(0.0, 1.0));
    solve->add_option("--max-off", sf.max_off, "Switching budget (lines allowed off)");
    solve->add_option("--seed", sf.seed, "Seed for cycle sampling");
    solve->add_option("--out", sf.out, "Write the JSON result here");
    solve->add_flag("--csv", sf.csv, "Print a CSV row instead of JSON");
    solve->add_flag("--cycle-formulation", sf.cycle_formulation, "Use the angle-free cycle model");
    solve->add_flag("--log-cuts", sf.log_cuts, "Print every added cut to stderr");

    GenFlags gf;
    auto* gen = app.add_subcommand("gen", "Generate an instance");
    gen->add_option("recipe", gf.recipe, "Recipe")->required()->check(CLI::IsMember({"perturb", "add-cycle", "relocate-gens", "subset-sum"}));
    gen->add_option("--in", gf.in, "Base instance")->check(CLI::ExistingFile);
    gen->add_option("--out", gf.out, "Output instance")->required();
    gen->add_option("--seed", gf.seed, "Random seed");
    gen->add_option("--low", gf.low, "perturb: lowest MW added per bus");
    gen->add_option("--high", gf.high, "perturb: highest MW added per bus");
    gen->add_option("--cycle-len", gf.cycle_len, "add-cycle: length of each closed cycle")->check(CLI::PositiveNumber);
    gen->add_option("--lines", gf.lines, "add-cycle: number of new lines")->check(CLI::NonNegativeNumber);
    gen->add_option("--a", gf.a, "subset-sum: item sizes")->delimiter(',');
    gen->add_option("--b", gf.b, "subset-sum: target");

    VerifyFlags vf;
    auto* ver = app.add_subcommand("verify", "Run the oracle checks");
    std::vector<std::string> suites = verify::suite_names();
    ver->add_option("suite", vf.suite, "Suite name")->check(CLI::IsMember(suites));
    ver->add_flag("--negative-controls", vf.negative_controls, "Run planted faults that the checks must catch");
    ver->add_option("--scale", vf.scale, "Multiplier on sample counts")->check(CLI::PositiveNumber);
    ver->add_option("--seed", vf.seed, "Base seed");

    BenchFlags bf;
    auto* bench = app.add_subcommand("bench", "Solve every instance in a directory under several modes");
    bench->add_option("dir", bf.dir, "Instance directory")->required()->check(CLI::ExistingDirectory);
    bench->add_option("--modes", bf.modes, "Modes to compare")->delimiter(',')->check(CLI::IsMember({"default", "basic", "more"}));
    bench->add_option("--time-limit", bf.time_limit, "Per-solve limit in seconds")->check(CLI::NonNegativeNumber);
    bench->add_option("--gap", bf.gap, "Relative optimality gap")->check(CLI::NonNegativeNumber);
    bench->add_option("--jobs", bf.jobs, "Concurrent solves")->check(CLI::PositiveNumber);
    bench->add_option("--seed", bf.seed, "Seed for cycle sampling");
    bench->add_option("--out", bf.out, "Per-solve CSV");
    bench->add_option("--profile", bf.profile, "Performance profile CSV");

    SweepFlags wf;
    auto* sweep = app.add_subcommand("budget-sweep", "Solve under a range of switching budgets");
    sweep->add_option("instance", wf.instance, "Instance file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--n", wf.n_values, "Budget values (default 0..|L|)")->delimiter(',')->check(CLI::NonNegativeNumber);
    sweep->add_option("--mode", wf.mode, "Cycle inequality mode")->check(CLI::IsMember({"default", "basic", "more"}));
    sweep->add_option("--gap", wf.gap, "Relative optimality gap")->check(CLI::NonNegativeNumber);
    sweep->add_option("--time-limit", wf.time_limit, "Per-solve limit in seconds")->check(CLI::NonNegativeNumber);
    sweep->add_option("--out", wf.out, "Write the CSV here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitError;
    }

    try {
        if (*solve) return cmd_solve(sf);
        if (*gen) return cmd_gen(gf);
        if (*ver) return cmd_verify(vf);
        if (*bench) return cmd_bench(bf);
        if (*sweep) return cmd_budget_sweep(wf);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
