#include "ots/formulations.hpp"

#include <stdexcept>
#include <string>

namespace ots {

using lp::kInf;
using lp::Row;
using lp::Sense;

BigMConfig compute_big_m(const PowerNetwork& net) {
    BigMConfig cfg;
    for (std::size_t l = 0; l < net.num_lines(); ++l) cfg.theta_bound += net.weight(l);
    cfg.line_m.reserve(net.num_lines());
    for (const Line& line : net.lines())
        cfg.line_m.push_back(2.0 * line.susceptance * cfg.theta_bound + line.capacity);
    return cfg;
}

double cycle_big_m(const Cycle& c, const PowerNetwork& net) { return cycle_weight(c, net); }

namespace {

// Generation and flow columns plus one balance row per bus:
// p_i - (out-flow - in-flow) = load_i.
MilpModel base_model(const PowerNetwork& net, std::span<const bool> active) {
    MilpModel m;
    for (const Generator& g : net.generators())
        m.vars.gen_p.push_back(m.lp.add_column(g.cost, g.p_min, g.p_max, "p_" + std::to_string(g.bus)));
    for (std::size_t l = 0; l < net.num_lines(); ++l) {
        const Line& line = net.lines()[l];
        const bool on = active.empty() || active[l];
        const double cap = on ? line.capacity : 0.0;
        m.vars.flow.push_back(m.lp.add_column(0.0, -cap, cap, "f_" + std::to_string(line.id)));
    }
    for (std::size_t b = 0; b < net.num_buses(); ++b) {
        Row r;
        if (int g = net.generator_at(b); g >= 0) r.add(m.vars.gen_p[g], 1.0);
        for (std::size_t l : net.incident_lines(b)) r.add(m.vars.flow[l], net.from_index(l) == b ? -1.0 : 1.0);
        r.sense = Sense::Equal;
        r.rhs = net.buses()[b].load;
        m.lp.add_row(std::move(r));
    }
    return m;
}

void add_angles(MilpModel& m, const PowerNetwork& net, double bound) {
    for (std::size_t b = 0; b < net.num_buses(); ++b) {
        const double lim = b == 0 ? 0.0 : bound;
        m.vars.angle.push_back(m.lp.add_column(0.0, -lim, lim, "theta_" + std::to_string(net.buses()[b].id)));
    }
}

void add_switches(MilpModel& m, const PowerNetwork& net) {
    for (std::size_t l = 0; l < net.num_lines(); ++l) {
        const Line& line = net.lines()[l];
        const int c = m.lp.add_column(0.0, line.switchable ? 0.0 : 1.0, 1.0, "x_" + std::to_string(line.id));
        m.vars.on.push_back(c);
        m.integer_cols.push_back(c);
    }
    // Flow limits move into rows -cap x <= f <= cap x.
    for (std::size_t l = 0; l < net.num_lines(); ++l) {
        const double cap = net.lines()[l].capacity;
        Row hi;
        hi.add(m.vars.flow[l], 1.0);
        hi.add(m.vars.on[l], -cap);
        hi.sense = Sense::LessEqual;
        m.lp.add_row(std::move(hi));
        Row lo;
        lo.add(m.vars.flow[l], 1.0);
        lo.add(m.vars.on[l], cap);
        lo.sense = Sense::GreaterEqual;
        m.lp.add_row(std::move(lo));
    }
}

}  // namespace

MilpModel build_opf_angle(const PowerNetwork& net, std::span<const bool> active) {
    if (!active.empty() && active.size() != net.num_lines())
        throw std::invalid_argument("build_opf_angle: mask size differs from line count");
    MilpModel m = base_model(net, active);
    add_angles(m, net, kInf);
    for (std::size_t l = 0; l < net.num_lines(); ++l) {
        if (!active.empty() && !active[l]) continue;
        const double b = net.lines()[l].susceptance;
        Row r;
        r.add(m.vars.flow[l], 1.0);
        r.add(m.vars.angle[net.from_index(l)], -b);
        r.add(m.vars.angle[net.to_index(l)], b);
        r.sense = Sense::Equal;
        m.lp.add_row(std::move(r));
    }
    return m;
}

MilpModel build_opf_cycle(const PowerNetwork& net, const CycleSet& basis) {
    MilpModel m = base_model(net, {});
    for (const Cycle& c : basis.cycles) {
        Row r;
        for (const CycleEdge& e : c.edges) r.add(m.vars.flow[e.line], e.sign / net.lines()[e.line].susceptance);
        r.sense = Sense::Equal;
        m.lp.add_row(std::move(r));
    }
    return m;
}

MilpModel build_ots_angle(const PowerNetwork& net, const BigMConfig& bigm) {
    if (bigm.line_m.size() != net.num_lines()) throw std::invalid_argument("build_ots_angle: big-M size mismatch");
    MilpModel m = base_model(net, {});
    add_angles(m, net, bigm.theta_bound);
    add_switches(m, net);
    // B(th_i - th_j) - M(1-x) <= f <= B(th_i - th_j) + M(1-x)
    for (std::size_t l = 0; l < net.num_lines(); ++l) {
        const double b = net.lines()[l].susceptance;
        const double big = bigm.line_m[l];
        for (Sense s : {Sense::LessEqual, Sense::GreaterEqual}) {
            Row r;
            r.add(m.vars.flow[l], 1.0);
            r.add(m.vars.angle[net.from_index(l)], -b);
            r.add(m.vars.angle[net.to_index(l)], b);
            r.add(m.vars.on[l], s == Sense::LessEqual ? big : -big);
            r.sense = s;
            r.rhs = s == Sense::LessEqual ? big : -big;
            m.lp.add_row(std::move(r));
        }
    }
    return m;
}

MilpModel build_ots_cycle(const PowerNetwork& net) {
    MilpModel m = base_model(net, {});
    add_switches(m, net);
    return m;
}

std::array<Row, 2> cycle_cut_constraint(const Cycle& c, const PowerNetwork& net, const VariableMap& vars,
                                        double m_cycle) {
    if (vars.on.empty()) throw std::invalid_argument("cycle_cut_constraint: model has no switching columns");
    const double size = static_cast<double>(c.size());
    Row upper, lower;
    for (const CycleEdge& e : c.edges) {
        const double coef = e.sign / net.lines()[e.line].susceptance;
        upper.add(vars.flow[e.line], coef);
        upper.add(vars.on[e.line], m_cycle);
        lower.add(vars.flow[e.line], coef);
        lower.add(vars.on[e.line], -m_cycle);
    }
    upper.sense = Sense::LessEqual;
    upper.rhs = m_cycle * size;
    lower.sense = Sense::GreaterEqual;
    lower.rhs = -m_cycle * size;
    return {std::move(upper), std::move(lower)};
}

void add_switching_budget(MilpModel& model, int n_off) {
    if (n_off < 0) throw std::invalid_argument("add_switching_budget: n_off must be nonnegative");
    if (model.vars.on.empty()) throw std::invalid_argument("add_switching_budget: model has no switching columns");
    Row r;
    for (int c : model.vars.on) r.add(c, 1.0);
    r.sense = Sense::GreaterEqual;
    r.rhs = static_cast<double>(model.vars.on.size()) - n_off;
    model.lp.add_row(std::move(r));
}

}  // namespace ots
