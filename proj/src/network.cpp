#include "ots/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace ots {

using nlohmann::json;
// Floats are read as long double so values written with extra digits survive.
using wide_json = nlohmann::basic_json<std::map, std::vector, std::string, bool, std::int64_t,
                                       std::uint64_t, long double>;

std::string ValidationReport::to_string() const {
    std::string out;
    for (const auto& issue : issues) {
        if (!out.empty()) out += "; ";
        out += issue;
    }
    return out;
}

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ", column " +
                                        std::to_string(column) + ")"
                                  : what),
      line_(line),
      column_(column) {}

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error("invalid network: " + report.to_string()), report_(std::move(report)) {}

namespace {

bool finite(double v) { return std::isfinite(v); }

bool graph_connected(const NetworkData& d, const std::unordered_map<BusId, std::size_t>& pos) {
    const std::size_t n = d.buses.size();
    if (n == 0) return true;
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& l : d.lines) {
        auto a = pos.find(l.from);
        auto b = pos.find(l.to);
        if (a == pos.end() || b == pos.end()) continue;
        adj[a->second].push_back(b->second);
        adj[b->second].push_back(a->second);
    }
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t v : adj[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == n;
}

}  // namespace

ValidationReport validate(const NetworkData& d) {
    ValidationReport r;
    auto issue = [&](std::string s) { r.issues.push_back(std::move(s)); };

    if (!(d.base_mva > 0.0) || !finite(d.base_mva)) issue("base_mva must be positive");
    if (d.buses.empty()) issue("network has no buses");

    std::unordered_map<BusId, std::size_t> pos;
    for (std::size_t i = 0; i < d.buses.size(); ++i) {
        const Bus& b = d.buses[i];
        if (!pos.emplace(b.id, i).second) issue("duplicate bus id " + std::to_string(b.id));
        if (!finite(b.load)) issue("bus " + std::to_string(b.id) + ": load is not finite");
    }

    std::set<BusId> gen_buses;
    for (const auto& g : d.generators) {
        const std::string tag = "generator at bus " + std::to_string(g.bus);
        if (!pos.count(g.bus)) issue(tag + ": unknown bus");
        if (!gen_buses.insert(g.bus).second) issue(tag + ": more than one generator at bus");
        if (!finite(g.p_min) || !finite(g.p_max)) issue(tag + ": bounds not finite");
        if (g.p_min < 0.0) issue(tag + ": negative p_min");
        if (g.p_min > g.p_max) issue(tag + ": p_min exceeds p_max");
        if (!finite(g.cost) || g.cost < 0.0) issue(tag + ": cost must be finite and nonnegative");
    }

    std::unordered_set<LineId> line_ids;
    bool endpoints_ok = true;
    for (const auto& l : d.lines) {
        const std::string tag = "line " + std::to_string(l.id);
        if (!line_ids.insert(l.id).second) issue("duplicate line id " + std::to_string(l.id));
        if (!pos.count(l.from)) {
            issue(tag + ": unknown bus " + std::to_string(l.from));
            endpoints_ok = false;
        }
        if (!pos.count(l.to)) {
            issue(tag + ": unknown bus " + std::to_string(l.to));
            endpoints_ok = false;
        }
        if (l.from == l.to) issue(tag + ": from equals to");
        if (!(l.susceptance > 0.0) || !finite(l.susceptance)) issue(tag + ": nonpositive susceptance");
        if (!(l.capacity > 0.0) || !finite(l.capacity)) issue(tag + ": nonpositive capacity");
    }

    if (endpoints_ok && !d.buses.empty() && !graph_connected(d, pos)) issue("disconnected graph");
    return r;
}

PowerNetwork::PowerNetwork(NetworkData data) : data_(std::move(data)) {
    ValidationReport report = validate(data_);
    if (!report.ok()) throw ValidationError(std::move(report));

    const std::size_t n = data_.buses.size();
    for (std::size_t i = 0; i < n; ++i) bus_pos_.emplace(data_.buses[i].id, i);
    incident_.resize(n);
    endpoints_.reserve(data_.lines.size());
    for (std::size_t k = 0; k < data_.lines.size(); ++k) {
        const std::size_t a = bus_pos_.at(data_.lines[k].from);
        const std::size_t b = bus_pos_.at(data_.lines[k].to);
        endpoints_.emplace_back(a, b);
        incident_[a].push_back(k);
        incident_[b].push_back(k);
    }
    generator_at_.assign(n, -1);
    for (std::size_t g = 0; g < data_.generators.size(); ++g)
        generator_at_[bus_pos_.at(data_.generators[g].bus)] = static_cast<int>(g);
}

std::size_t PowerNetwork::bus_index(BusId id) const {
    auto it = bus_pos_.find(id);
    if (it == bus_pos_.end()) throw std::out_of_range("unknown bus " + std::to_string(id));
    return it->second;
}

bool operator==(const Bus& a, const Bus& b) { return a.id == b.id && a.load == b.load; }
bool operator==(const Line& a, const Line& b) {
    return a.id == b.id && a.from == b.from && a.to == b.to && a.susceptance == b.susceptance &&
           a.capacity == b.capacity && a.switchable == b.switchable;
}
bool operator==(const Generator& a, const Generator& b) {
    return a.bus == b.bus && a.p_min == b.p_min && a.p_max == b.p_max && a.cost == b.cost;
}
bool operator==(const PowerNetwork& a, const PowerNetwork& b) {
    return a.data_.base_mva == b.data_.base_mva && a.data_.buses == b.data_.buses &&
           a.data_.lines == b.data_.lines && a.data_.generators == b.data_.generators;
}

ValidationReport validate(const PowerNetwork& net) { return validate(net.data()); }

// ---------------------------------------------------------------------------
// Native format

namespace {

std::string shortest(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

// The double whose shortest text reads back as `v`; guards against double
// rounding through long double.
double as_double(long double v) {
    const double vd = static_cast<double>(v);
    for (double c : {vd, std::nextafter(vd, -HUGE_VAL), std::nextafter(vd, HUGE_VAL)})
        if (std::strtold(shortest(c).c_str(), nullptr) == v) return c;
    return vd;
}

// MW <-> per-unit conversion as done by the parser. A number whose text is
// the shortest form of a double is converted in double arithmetic; anything
// finer is converted in long double and rounded once.
double to_pu(long double v, double base, bool divide) {
    const double vd = as_double(v);
    if (std::strtold(shortest(vd).c_str(), nullptr) == v) return divide ? vd / base : vd * base;
    const long double r = divide ? v / base : v * base;
    return static_cast<double>(r);
}

// Nominal text for a per-unit value: the shortest double that converts back
// bit-for-bit when one exists, otherwise a 21-digit long double that does.
std::string nominal_for(double pu, double base, bool divide) {
    const double guess = divide ? pu * base : pu / base;
    if (to_pu(std::strtold(shortest(guess).c_str(), nullptr), base, divide) == pu) return shortest(guess);
    double up = guess, down = guess;
    for (int i = 0; i < 64; ++i) {
        up = std::nextafter(up, std::numeric_limits<double>::infinity());
        if (to_pu(std::strtold(shortest(up).c_str(), nullptr), base, divide) == pu) return shortest(up);
        down = std::nextafter(down, -std::numeric_limits<double>::infinity());
        if (to_pu(std::strtold(shortest(down).c_str(), nullptr), base, divide) == pu) return shortest(down);
    }
    long double wide = divide ? static_cast<long double>(pu) * base : static_cast<long double>(pu) / base;
    long double lup = wide, ldown = wide;
    for (int i = 0; i < 4096 && to_pu(wide, base, divide) != pu; ++i) {
        lup = std::nextafter(lup, std::numeric_limits<long double>::infinity());
        ldown = std::nextafter(ldown, -std::numeric_limits<long double>::infinity());
        if (to_pu(lup, base, divide) == pu) wide = lup;
        else if (to_pu(ldown, base, divide) == pu) wide = ldown;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.21Lg", wide);
    return buf;
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

template <typename T>
T field(const wide_json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError("missing field '" + std::string(key) + "' in " + where, 0, 0);
    try {
        return it->get<T>();
    } catch (const wide_json::exception&) {
        throw ParseError("field '" + std::string(key) + "' in " + where + " has the wrong type", 0, 0);
    }
}

const wide_json& array_field(const wide_json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end() || !it->is_array())
        throw ParseError("missing array '" + std::string(key) + "'", 0, 0);
    return *it;
}

}  // namespace

PowerNetwork parse_native(std::string_view text) {
    wide_json doc;
    try {
        doc = wide_json::parse(text.begin(), text.end());
    } catch (const wide_json::parse_error& e) {
        auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError("syntax error: " + std::string(e.what()), line, col);
    }
    if (!doc.is_object()) throw ParseError("document must be a JSON object", 1, 1);

    NetworkData d;
    d.base_mva = as_double(field<long double>(doc, "base_mva", "document"));
    const double base = d.base_mva;

    const wide_json& buses = array_field(doc, "buses");
    for (std::size_t i = 0; i < buses.size(); ++i) {
        const std::string where = "buses[" + std::to_string(i) + "]";
        d.buses.push_back({field<int>(buses[i], "id", where),
                           to_pu(field<long double>(buses[i], "load_mw", where), base, true)});
    }
    const wide_json& gens = array_field(doc, "generators");
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const std::string where = "generators[" + std::to_string(i) + "]";
        d.generators.push_back({field<int>(gens[i], "bus", where),
                                to_pu(field<long double>(gens[i], "pmin_mw", where), base, true),
                                to_pu(field<long double>(gens[i], "pmax_mw", where), base, true),
                                to_pu(field<long double>(gens[i], "cost_per_mwh", where), base, false)});
    }
    const wide_json& lines = array_field(doc, "lines");
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string where = "lines[" + std::to_string(i) + "]";
        const wide_json& l = lines[i];
        Line line;
        line.id = field<int>(l, "id", where);
        line.from = field<int>(l, "from", where);
        line.to = field<int>(l, "to", where);
        line.susceptance = as_double(field<long double>(l, "susceptance_pu", where));
        line.capacity = to_pu(field<long double>(l, "capacity_mw", where), base, true);
        line.switchable = l.contains("switchable") ? field<bool>(l, "switchable", where) : true;
        d.lines.push_back(line);
    }
    return PowerNetwork(std::move(d));
}

std::string serialize_native(const PowerNetwork& net) {
    const double base = net.base_mva();
    // Numbers go in as placeholder strings and are spliced back after dump()
    // so each keeps the exact text chosen by nominal_for.
    std::vector<std::string> numbers;
    auto num = [&](std::string text) {
        numbers.push_back(std::move(text));
        return "\x01" + std::to_string(numbers.size() - 1);
    };
    auto plain = [&](double v) { return num(shortest(v)); };
    json doc;
    doc["base_mva"] = plain(base);
    json buses = json::array();
    for (const auto& b : net.buses())
        buses.push_back({{"id", b.id}, {"load_mw", num(nominal_for(b.load, base, true))}});
    json gens = json::array();
    for (const auto& g : net.generators())
        gens.push_back({{"bus", g.bus},
                        {"pmin_mw", num(nominal_for(g.p_min, base, true))},
                        {"pmax_mw", num(nominal_for(g.p_max, base, true))},
                        {"cost_per_mwh", num(nominal_for(g.cost, base, false))}});
    json lines = json::array();
    for (const auto& l : net.lines())
        lines.push_back({{"id", l.id},
                         {"from", l.from},
                         {"to", l.to},
                         {"susceptance_pu", plain(l.susceptance)},
                         {"capacity_mw", num(nominal_for(l.capacity, base, true))},
                         {"switchable", l.switchable}});
    doc["buses"] = std::move(buses);
    doc["generators"] = std::move(gens);
    doc["lines"] = std::move(lines);
    const std::string raw = doc.dump(2);
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw.compare(i, 7, "\"\\u0001") == 0) {
            std::size_t j = i + 7;
            std::size_t k = 0;
            while (raw[j] != '"') k = k * 10 + static_cast<std::size_t>(raw[j++] - '0');
            out += numbers[k];
            i = j;
        } else {
            out += raw[i];
        }
    }
    return out + "\n";
}

// ---------------------------------------------------------------------------
// MATPOWER

namespace {

struct MatrixBlock {
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> row_lines;
};

std::string strip_comments(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool in_comment = false;
    for (char c : text) {
        if (c == '\n') in_comment = false;
        else if (c == '%') in_comment = true;
        out.push_back(in_comment ? ' ' : c);
    }
    return out;
}

std::size_t line_of(const std::string& text, std::size_t pos) {
    return static_cast<std::size_t>(std::count(text.begin(), text.begin() + pos, '\n')) + 1;
}

std::optional<std::size_t> find_assignment(const std::string& text, const std::string& name) {
    std::size_t pos = 0;
    while ((pos = text.find(name, pos)) != std::string::npos) {
        std::size_t after = pos + name.size();
        bool boundary_before = pos == 0 || !(std::isalnum(static_cast<unsigned char>(text[pos - 1])) ||
                                             text[pos - 1] == '_' || text[pos - 1] == '.');
        std::size_t k = after;
        while (k < text.size() && (text[k] == ' ' || text[k] == '\t')) ++k;
        if (boundary_before && k < text.size() && text[k] == '=') return k + 1;
        pos = after;
    }
    return std::nullopt;
}

double parse_number(const std::string& token, std::size_t line) {
    try {
        std::size_t used = 0;
        double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        throw ParseError("malformed table entry '" + token + "'", line, 0);
    }
}

std::optional<MatrixBlock> read_matrix(const std::string& text, const std::string& name) {
    auto start = find_assignment(text, name);
    if (!start) return std::nullopt;
    std::size_t open = text.find('[', *start);
    if (open == std::string::npos) throw ParseError("expected '[' after " + name, line_of(text, *start), 0);
    std::size_t close = text.find(']', open);
    if (close == std::string::npos) throw ParseError("unterminated matrix " + name, line_of(text, open), 0);

    MatrixBlock block;
    std::vector<double> row;
    std::string token;
    std::size_t row_line = line_of(text, open);
    std::size_t cur_line = row_line;
    auto flush_token = [&] {
        if (!token.empty()) {
            if (row.empty()) row_line = cur_line;
            row.push_back(parse_number(token, cur_line));
            token.clear();
        }
    };
    auto flush_row = [&] {
        flush_token();
        if (!row.empty()) {
            block.rows.push_back(std::move(row));
            block.row_lines.push_back(row_line);
            row.clear();
        }
    };
    for (std::size_t i = open + 1; i < close; ++i) {
        char c = text[i];
        if (c == ';' || c == '\n') {
            flush_row();
            if (c == '\n') ++cur_line;
        } else if (c == ' ' || c == '\t' || c == ',' || c == '\r') {
            flush_token();
        } else {
            token.push_back(c);
        }
    }
    flush_row();
    return block;
}

const std::vector<double>& need_columns(const MatrixBlock& m, std::size_t r, std::size_t cols,
                                        const std::string& name) {
    if (m.rows[r].size() < cols)
        throw ParseError("malformed " + name + " row: expected at least " + std::to_string(cols) +
                             " columns",
                         m.row_lines[r], 0);
    return m.rows[r];
}

}  // namespace

PowerNetwork parse_matpower(std::string_view raw) {
    const std::string text = strip_comments(raw);

    auto base_pos = find_assignment(text, "mpc.baseMVA");
    if (!base_pos) throw ParseError("missing mpc.baseMVA", 0, 0);
    std::size_t end = text.find(';', *base_pos);
    std::string base_tok = text.substr(*base_pos, end == std::string::npos ? std::string::npos : end - *base_pos);
    base_tok.erase(std::remove_if(base_tok.begin(), base_tok.end(), [](unsigned char c) { return std::isspace(c); }),
                   base_tok.end());
    const double base = parse_number(base_tok, line_of(text, *base_pos));

    auto bus = read_matrix(text, "mpc.bus");
    auto gen = read_matrix(text, "mpc.gen");
    auto branch = read_matrix(text, "mpc.branch");
    if (!bus || !gen || !branch) throw ParseError("missing mpc.bus, mpc.gen or mpc.branch table", 0, 0);
    auto gencost = read_matrix(text, "mpc.gencost");

    NetworkData d;
    d.base_mva = base;
    for (std::size_t r = 0; r < bus->rows.size(); ++r) {
        const auto& row = need_columns(*bus, r, 3, "bus");
        d.buses.push_back({static_cast<BusId>(row[0]), row[2] / base});
    }

    if (gencost && gencost->rows.size() < gen->rows.size())
        throw ParseError("gencost has fewer rows than gen", 0, 0);
    for (std::size_t r = 0; r < gen->rows.size(); ++r) {
        const auto& row = need_columns(*gen, r, 10, "gen");
        if (row[7] <= 0.0) continue;  // GEN_STATUS out of service
        Generator g;
        g.bus = static_cast<BusId>(row[0]);
        g.p_max = row[8] / base;
        g.p_min = row[9] / base;
        if (gencost) {
            const auto& c = need_columns(*gencost, r, 4, "gencost");
            if (static_cast<int>(c[0]) != 2)
                throw ParseError("only polynomial gencost rows are supported", gencost->row_lines[r], 0);
            const auto ncost = static_cast<std::size_t>(c[3]);
            need_columns(*gencost, r, 4 + ncost, "gencost");
            // Coefficients run from highest order down to the constant term.
            for (std::size_t k = 0; k + 2 < ncost; ++k)
                if (c[4 + k] != 0.0)
                    throw ParseError("nonlinear gencost row (only linear costs are supported)",
                                     gencost->row_lines[r], 0);
            g.cost = ncost >= 2 ? c[4 + ncost - 2] * base : 0.0;
        }
        d.generators.push_back(g);
    }

    LineId next_id = 0;
    for (std::size_t r = 0; r < branch->rows.size(); ++r) {
        const auto& row = need_columns(*branch, r, 11, "branch");
        if (row[10] == 0.0) continue;
        if (row[3] == 0.0) throw ParseError("branch with zero reactance", branch->row_lines[r], 0);
        if (row[5] == 0.0)
            throw ParseError("branch with rateA = 0 (unlimited capacity is not supported)",
                             branch->row_lines[r], 0);
        Line l;
        l.id = next_id++;
        l.from = static_cast<BusId>(row[0]);
        l.to = static_cast<BusId>(row[1]);
        l.susceptance = 1.0 / row[3];
        l.capacity = row[5] / base;
        d.lines.push_back(l);
    }
    return PowerNetwork(std::move(d));
}

PowerNetwork load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const bool is_matpower = path.size() >= 2 && path.compare(path.size() - 2, 2, ".m") == 0;
    return is_matpower ? parse_matpower(ss.str()) : parse_native(ss.str());
}

void save_network(const PowerNetwork& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << serialize_native(net);
}

// ---------------------------------------------------------------------------
// Instance generation recipes

PowerNetwork perturb_loads(const PowerNetwork& net, int low, int high, std::uint64_t seed) {
    if (low > high) throw std::invalid_argument("perturb_loads: low exceeds high");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> draw(low, high);
    NetworkData d = net.data();
    const double base = d.base_mva;
    for (auto& b : d.buses) {
        const int inc = draw(rng);
        if (inc != 0) b.load = (b.load * base + inc) / base;
    }
    return PowerNetwork(std::move(d));
}

namespace {

// Randomised depth-first search for a simple path with exactly `edges` lines
// starting at `start`. Neighbour order is shuffled with `rng`.
bool find_path(const PowerNetwork& net, std::size_t start, int edges, std::mt19937_64& rng,
               std::vector<std::size_t>& path_buses) {
    std::vector<char> on_path(net.num_buses(), 0);
    path_buses.assign(1, start);
    on_path[start] = 1;
    std::size_t budget = 200000;
    auto dfs = [&](auto&& self, std::size_t u, int remaining) -> bool {
        if (remaining == 0) return true;
        if (budget-- == 0) return false;
        std::vector<std::size_t> nbrs;
        for (std::size_t l : net.incident_lines(u)) nbrs.push_back(net.other_end(l, u));
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        std::shuffle(nbrs.begin(), nbrs.end(), rng);
        for (std::size_t v : nbrs) {
            if (on_path[v]) continue;
            on_path[v] = 1;
            path_buses.push_back(v);
            if (self(self, v, remaining - 1)) return true;
            path_buses.pop_back();
            on_path[v] = 0;
        }
        return false;
    };
    return dfs(dfs, start, edges);
}

}  // namespace

PowerNetwork augment_with_cycle(const PowerNetwork& net, int cycle_len, int n_lines, std::uint64_t seed) {
    if (cycle_len < 3) throw std::invalid_argument("augment_with_cycle: cycle_len must be at least 3");
    if (n_lines < 1) throw std::invalid_argument("augment_with_cycle: n_lines must be at least 1");

    std::mt19937_64 rng(seed);
    const auto& orig = net.lines();
    double min_cap = std::numeric_limits<double>::infinity();
    for (const auto& l : orig) min_cap = std::min(min_cap, l.capacity);
    const double new_cap = 0.30 * min_cap;
    LineId next_id = 0;
    for (const auto& l : orig) next_id = std::max(next_id, l.id + 1);

    PowerNetwork current = net;
    for (int k = 0; k < n_lines; ++k) {
        std::vector<std::size_t> starts(current.num_buses());
        std::iota(starts.begin(), starts.end(), 0);
        std::shuffle(starts.begin(), starts.end(), rng);
        std::vector<std::size_t> path;
        bool found = false;
        for (std::size_t s : starts) {
            if (find_path(current, s, cycle_len - 1, rng, path)) {
                found = true;
                break;
            }
        }
        if (!found)
            throw std::runtime_error("augment_with_cycle: no cycle of length " + std::to_string(cycle_len) +
                                     " can be closed");
        std::uniform_int_distribution<std::size_t> pick(0, orig.size() - 1);
        Line l;
        l.id = next_id++;
        l.from = current.buses()[path.front()].id;
        l.to = current.buses()[path.back()].id;
        l.susceptance = orig[pick(rng)].susceptance;
        l.capacity = new_cap;
        l.switchable = true;
        NetworkData d = current.data();
        d.lines.push_back(l);
        current = PowerNetwork(std::move(d));
    }
    return current;
}

PowerNetwork relocate_generators(const PowerNetwork& net, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    NetworkData d = net.data();
    std::set<BusId> occupied;
    for (const auto& g : d.generators) occupied.insert(g.bus);

    for (auto& g : d.generators) {
        const std::size_t at = net.bus_index(g.bus);
        std::vector<BusId> options{g.bus};
        std::set<BusId> nbrs;
        for (std::size_t l : net.incident_lines(at)) nbrs.insert(net.buses()[net.other_end(l, at)].id);
        for (BusId b : nbrs)
            if (!occupied.count(b)) options.push_back(b);
        // Uniform over non-colliding outcomes: the same law as re-drawing on collision.
        std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
        const BusId target = options[pick(rng)];
        occupied.erase(g.bus);
        occupied.insert(target);
        g.bus = target;
    }
    return PowerNetwork(std::move(d));
}

}  // namespace ots
