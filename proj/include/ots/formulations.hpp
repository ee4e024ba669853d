#pragma once

#include <array>
#include <span>
#include <vector>

#include "ots/cyclebasis.hpp"
#include "ots/lp.hpp"
#include "ots/network.hpp"

namespace ots {

/// Column positions of each variable group; -1 marks an absent column.
struct VariableMap {
    std::vector<int> gen_p;  // per generator
    std::vector<int> flow;   // per line
    std::vector<int> angle;  // per bus, empty without angles
    std::vector<int> on;     // per line, empty without switching
};

struct BigMConfig {
    std::vector<double> line_m;  // per line
    double theta_bound = 0.0;
};

struct MilpModel {
    lp::LinearProgram lp;
    std::vector<int> integer_cols;
    VariableMap vars;
};

/// Theta = sum of w over all lines, M_ij = 2 B_ij Theta + capacity_ij.
BigMConfig compute_big_m(const PowerNetwork& net);

/// M_C = w(C).
double cycle_big_m(const Cycle& c, const PowerNetwork& net);

/// DC-OPF with angles. Lines masked off by `active` carry no flow and no
/// Ohm row; an empty mask means every line is in service.
MilpModel build_opf_angle(const PowerNetwork& net, std::span<const bool> active = {});

/// DC-OPF with one KVL row per cycle of `basis` instead of angles.
MilpModel build_opf_cycle(const PowerNetwork& net, const CycleSet& basis);

/// Big-M switching model. Non-switchable lines have x fixed to one.
MilpModel build_ots_angle(const PowerNetwork& net, const BigMConfig& bigm);

/// Switching model without angles; KVL must be added through
/// cycle_cut_constraint rows.
MilpModel build_ots_cycle(const PowerNetwork& net);

/// -M_C sum(1-x) <= sum sigma f/B <= M_C sum(1-x), as two rows (upper, lower).
std::array<lp::Row, 2> cycle_cut_constraint(const Cycle& c, const PowerNetwork& net,
                                            const VariableMap& vars, double m_cycle);

/// sum x >= |L| - n_off.
void add_switching_budget(MilpModel& model, int n_off);

}  // namespace ots
