#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ots/cuts.hpp"
#include "ots/cyclebasis.hpp"
#include "ots/formulations.hpp"
#include "ots/network.hpp"

namespace ots {

enum class CycleMode { Default, BasicCycles, MoreCycles };

const char* to_string(CycleMode m);
CycleMode parse_cycle_mode(const std::string& s);  // default | basic | more

struct SolverConfig {
    double rel_gap = 0.001;
    double time_limit_s = 3600.0;
    int strengthen_rounds = 5;
    CycleMode mode = CycleMode::Default;
    int expansion_k = 2;
    double sample_fraction = 1.0;
    std::uint64_t seed = 0;
    int max_off = -1;  // negative: no switching budget
    bool cycle_formulation = false;
    double kvl_tol = 1e-6;
    double integrality_tol = 1e-6;
    bool log_cuts = false;
};

enum class SolveStatus { OptimalWithinGap, FeasibleTimeLimit, Infeasible, Unbounded, InfeasibleUnknown };

const char* to_string(SolveStatus s);

struct SolveResult {
    SolveStatus status = SolveStatus::InfeasibleUnknown;
    bool has_incumbent = false;
    std::vector<double> x, f, theta, p;
    double objective = 0.0;
    double best_bound = 0.0;
    double gap = 0.0;
    long nodes = 0;
    int cuts_added = 0;
    int lazy_cuts = 0;
    double z_lp = 0.0;
    double z_lp_cuts = 0.0;
    bool root_fractional = false;
    double wall_time_s = 0.0;
    std::vector<std::string> cut_log;
};

/// (obj - bound) / max(|obj|, 1e-9).
double relative_gap(double objective, double bound);

struct StrengthenResult {
    lp::Status status = lp::Status::Optimal;
    double z_lp = 0.0;
    double z_lp_cuts = 0.0;
    int cuts_added = 0;
    bool root_fractional = false;
    lp::Basis basis;
    std::vector<std::string> log;
};

/// Root cut loop: solve, separate over every cycle, append violated rows.
/// Rows are appended to `model` in place.
StrengthenResult strengthen_root(MilpModel& model, const PowerNetwork& net, const CycleSet& cycles, int rounds,
                                 bool log_cuts = false);

/// Active-line spanning forest check. Returns the chord cycle with the
/// largest KVL residual |f/B - (theta_i - theta_j)| above `tol`.
std::optional<Cycle> lazy_kvl_check(const PowerNetwork& net, std::span<const double> x, std::span<const double> f,
                                    double tol = 1e-6);

/// Angles from tree flows; zero at the lowest-indexed bus of each active
/// component.
std::vector<double> recover_angles(const PowerNetwork& net, std::span<const double> x, std::span<const double> f);

struct Repaired {
    std::vector<double> x;
    std::vector<double> f;
    std::vector<double> p;
    int lines_turned_on = 0;
};

/// Turns on zero-flow off lines, in index order, until the active graph is
/// connected.
Repaired repair_connected(const PowerNetwork& net, std::span<const double> x, std::span<const double> f,
                          std::span<const double> p);

using LazySource = std::function<std::optional<Cycle>(std::span<const double> x, std::span<const double> f)>;

/// Best-bound branch-and-bound on the switching columns of `model`.
SolveResult branch_and_bound(MilpModel model, const PowerNetwork& net, const SolverConfig& config,
                             const LazySource& lazy, const lp::Basis* root_basis = nullptr);

/// Full procedure: cycle generation, root strengthening, branch-and-bound,
/// connectivity repair and angle recovery.
SolveResult solve_ots(const PowerNetwork& net, const SolverConfig& config);

/// The cycle set used by a mode (empty for Default).
CycleSet cycles_for_mode(const PowerNetwork& net, const SolverConfig& config);

struct SweepPoint {
    int n_off = 0;
    SolveResult result;
};

/// One solve per budget value, each with its own budget row.
std::vector<SweepPoint> budget_sweep(const PowerNetwork& net, std::span<const int> n_values, SolverConfig config);

/// "N,status,ip_value,lp_value"; values are empty when absent.
std::string sweep_csv(const std::vector<SweepPoint>& sweep);

std::string to_json(const SolveResult& r, const PowerNetwork& net);
std::string csv_header();
std::string csv_row(const std::string& instance, const std::string& mode, const SolveResult& r);

}  // namespace ots
