#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ots {

using BusId = int;
using LineId = int;

/// A bus with its active power demand in per-unit.
struct Bus {
    BusId id = 0;
    double load = 0.0;
};

/// Dispatchable generator. Bounds are per-unit; cost is per per-unit of output.
struct Generator {
    BusId bus = 0;
    double p_min = 0.0;
    double p_max = 0.0;
    double cost = 0.0;
};

/// Oriented transmission line. Positive flow runs from `from` to `to`.
struct Line {
    LineId id = 0;
    BusId from = 0;
    BusId to = 0;
    double susceptance = 1.0;
    double capacity = 1.0;
    bool switchable = true;
};

/// Raw, unvalidated network description as read from a file or built by hand.
struct NetworkData {
    std::vector<Bus> buses;
    std::vector<Line> lines;
    std::vector<Generator> generators;
    double base_mva = 100.0;
};

struct ValidationReport {
    std::vector<std::string> issues;

    bool ok() const { return issues.empty(); }
    std::string to_string() const;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(ValidationReport report);
    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

ValidationReport validate(const NetworkData& data);

/// Validated, immutable power network. All quantities are per-unit.
///
/// Buses and lines are addressed by position (0-based index) throughout the
/// library; ids are only labels carried through to file formats.
class PowerNetwork {
public:
    /// Throws ValidationError listing every violated invariant.
    explicit PowerNetwork(NetworkData data);

    const NetworkData& data() const { return data_; }
    const std::vector<Bus>& buses() const { return data_.buses; }
    const std::vector<Line>& lines() const { return data_.lines; }
    const std::vector<Generator>& generators() const { return data_.generators; }
    double base_mva() const { return data_.base_mva; }

    std::size_t num_buses() const { return data_.buses.size(); }
    std::size_t num_lines() const { return data_.lines.size(); }

    std::size_t bus_index(BusId id) const;
    std::size_t from_index(std::size_t line) const { return endpoints_[line].first; }
    std::size_t to_index(std::size_t line) const { return endpoints_[line].second; }

    /// Lines incident to a bus (by position).
    const std::vector<std::size_t>& incident_lines(std::size_t bus) const { return incident_[bus]; }

    /// Generator index at a bus, or -1.
    int generator_at(std::size_t bus) const { return generator_at_[bus]; }

    /// w = capacity / susceptance, the largest angle difference a line can carry.
    double weight(std::size_t line) const {
        return data_.lines[line].capacity / data_.lines[line].susceptance;
    }

    std::size_t other_end(std::size_t line, std::size_t bus) const {
        return from_index(line) == bus ? to_index(line) : from_index(line);
    }

    friend bool operator==(const PowerNetwork& a, const PowerNetwork& b);

private:
    NetworkData data_;
    std::unordered_map<BusId, std::size_t> bus_pos_;
    std::vector<std::pair<std::size_t, std::size_t>> endpoints_;
    std::vector<std::vector<std::size_t>> incident_;
    std::vector<int> generator_at_;
};

bool operator==(const Bus& a, const Bus& b);
bool operator==(const Line& a, const Line& b);
bool operator==(const Generator& a, const Generator& b);

ValidationReport validate(const PowerNetwork& net);

/// Native JSON document (MW quantities, per-unit susceptance).
PowerNetwork parse_native(std::string_view text);
std::string serialize_native(const PowerNetwork& net);

/// MATPOWER case subset: baseMVA, bus, gen, branch and (optional) linear gencost.
PowerNetwork parse_matpower(std::string_view text);

/// Loads a file by extension: `.m` is MATPOWER, anything else native JSON.
PowerNetwork load_network(const std::string& path);
void save_network(const PowerNetwork& net, const std::string& path);

/// Adds an independent integer draw from [low, high] MW to every bus load.
PowerNetwork perturb_loads(const PowerNetwork& net, int low, int high, std::uint64_t seed);

/// Adds `n_lines` lines, each closing a simple cycle of exactly `cycle_len`
/// lines. New capacity is 30% of the smallest existing capacity and new
/// susceptance is copied from a uniformly chosen existing line.
PowerNetwork augment_with_cycle(const PowerNetwork& net, int cycle_len, int n_lines,
                                std::uint64_t seed);

/// Each generator stays or moves to a neighbouring bus, uniformly over the
/// outcomes that keep at most one generator per bus.
PowerNetwork relocate_generators(const PowerNetwork& net, std::uint64_t seed);

}  // namespace ots
