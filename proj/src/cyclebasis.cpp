#include "ots/cyclebasis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace ots {

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(data_.begin() + static_cast<std::ptrdiff_t>(a * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((a + 1) * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>(b * cols_));
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("IntMatrix: dimension mismatch");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const long v = a(i, k);
            if (v == 0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += v * b(k, j);
        }
    return c;
}

IntMatrix incidence_matrix(const PowerNetwork& net) {
    IntMatrix a(net.num_lines(), net.num_buses());
    for (std::size_t k = 0; k < net.num_lines(); ++k) {
        a(k, net.from_index(k)) = 1;
        a(k, net.to_index(k)) = -1;
    }
    return a;
}

LuFactors lu_partial_pivot(const IntMatrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    LuFactors f;
    f.upper = a;
    f.lower_inv = IntMatrix::identity(m);
    IntMatrix mult(m, m);
    f.perm.resize(m);
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});

    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t p = r;
        while (p < m && f.upper(p, c) == 0) ++p;
        if (p == m) continue;
        if (p != r) {
            f.upper.swap_rows(r, p);
            f.lower_inv.swap_rows(r, p);
            std::swap(f.perm[r], f.perm[p]);
            for (std::size_t k = 0; k < r; ++k) std::swap(mult(r, k), mult(p, k));
        }
        const long pivot = f.upper(r, c);
        for (std::size_t i = r + 1; i < m; ++i) {
            const long v = f.upper(i, c);
            if (v == 0) continue;
            if (v % pivot != 0) throw std::logic_error("lu_partial_pivot: non-unimodular pivot");
            const long q = v / pivot;
            for (std::size_t j = 0; j < n; ++j) f.upper(i, j) -= q * f.upper(r, j);
            for (std::size_t j = 0; j < m; ++j) f.lower_inv(i, j) -= q * f.lower_inv(r, j);
            mult(i, r) = q;
        }
        ++r;
    }
    f.rank = r;
    f.lower = std::move(mult);
    for (std::size_t i = 0; i < m; ++i) f.lower(i, i) = 1;
    return f;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t tail(const CycleEdge& e, const PowerNetwork& net) {
    return e.sign > 0 ? net.from_index(e.line) : net.to_index(e.line);
}
std::size_t head(const CycleEdge& e, const PowerNetwork& net) {
    return e.sign > 0 ? net.to_index(e.line) : net.from_index(e.line);
}

}  // namespace

std::string check_cycle(const Cycle& c, const PowerNetwork& net) {
    if (c.edges.size() < 2) return "cycle has fewer than two lines";
    std::set<std::size_t> lines;
    std::set<std::size_t> buses;
    for (std::size_t k = 0; k < c.edges.size(); ++k) {
        const CycleEdge& e = c.edges[k];
        if (e.line >= net.num_lines()) return "line index out of range";
        if (e.sign != 1 && e.sign != -1) return "sign must be +1 or -1";
        if (!lines.insert(e.line).second) return "repeated line";
        if (!buses.insert(tail(e, net)).second) return "repeated bus";
        const CycleEdge& next = c.edges[(k + 1) % c.edges.size()];
        if (next.line < net.num_lines() && head(e, net) != tail(next, net)) return "consecutive lines do not meet";
    }
    return {};
}

std::vector<int> incidence_vector(const Cycle& c, std::size_t num_lines) {
    std::vector<int> v(num_lines, 0);
    for (const auto& e : c.edges) v[e.line] = e.sign;
    return v;
}

std::vector<std::size_t> edge_key(const Cycle& c) {
    std::vector<std::size_t> key;
    key.reserve(c.edges.size());
    for (const auto& e : c.edges) key.push_back(e.line);
    std::sort(key.begin(), key.end());
    return key;
}

std::optional<Cycle> cycle_from_incidence(std::span<const long> v, const PowerNetwork& net) {
    std::map<std::size_t, std::size_t> out_edge;  // tail bus -> support position
    std::vector<CycleEdge> support;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k] == 0) continue;
        if (v[k] != 1 && v[k] != -1) return std::nullopt;
        CycleEdge e{k, static_cast<int>(v[k])};
        if (!out_edge.emplace(tail(e, net), support.size()).second) return std::nullopt;
        support.push_back(e);
    }
    if (support.size() < 2) return std::nullopt;

    Cycle c;
    std::size_t pos = 0;
    const std::size_t start = tail(support[0], net);
    for (std::size_t step = 0; step < support.size(); ++step) {
        c.edges.push_back(support[pos]);
        const std::size_t h = head(support[pos], net);
        if (h == start) break;
        auto it = out_edge.find(h);
        if (it == out_edge.end()) return std::nullopt;
        pos = it->second;
    }
    if (c.edges.size() != support.size() || head(c.edges.back(), net) != start) return std::nullopt;
    return c;
}

std::optional<Cycle> cycle_from_lines(std::span<const std::size_t> lines, const PowerNetwork& net) {
    if (lines.size() < 2) return std::nullopt;
    std::map<std::size_t, std::vector<std::size_t>> at_bus;
    for (std::size_t l : lines) {
        at_bus[net.from_index(l)].push_back(l);
        at_bus[net.to_index(l)].push_back(l);
    }
    for (const auto& [bus, ls] : at_bus)
        if (ls.size() != 2) return std::nullopt;

    Cycle c;
    std::size_t line = lines[0];
    const std::size_t start = net.from_index(line);
    std::size_t at = start;
    for (std::size_t step = 0; step < lines.size(); ++step) {
        const int sign = net.from_index(line) == at ? 1 : -1;
        c.edges.push_back({line, sign});
        at = net.other_end(line, at);
        if (at == start) break;
        const auto& ls = at_bus[at];
        line = ls[0] == line ? ls[1] : ls[0];
    }
    if (c.edges.size() != lines.size() || at != start) return std::nullopt;
    return c;
}

double cycle_weight(const Cycle& c, const PowerNetwork& net) {
    double w = 0.0;
    for (const auto& e : c.edges) w += net.weight(e.line);
    return w;
}

CycleSet cycle_basis(const PowerNetwork& net) {
    const LuFactors f = lu_partial_pivot(incidence_matrix(net));
    CycleSet cs;
    for (std::size_t r = f.rank; r < net.num_lines(); ++r) {
        auto c = cycle_from_incidence(f.lower_inv.row(r), net);
        if (!c) throw std::logic_error("cycle_basis: elimination row is not a simple cycle");
        cs.cycles.push_back(std::move(*c));
    }
    return cs;
}

std::optional<Cycle> combine_cycles(const Cycle& a, const Cycle& b, const PowerNetwork& net) {
    const auto ka = edge_key(a);
    const auto kb = edge_key(b);
    std::vector<std::size_t> shared;
    std::set_intersection(ka.begin(), ka.end(), kb.begin(), kb.end(), std::back_inserter(shared));
    if (shared.empty()) return std::nullopt;
    std::vector<std::size_t> diff;
    std::set_symmetric_difference(ka.begin(), ka.end(), kb.begin(), kb.end(), std::back_inserter(diff));
    if (diff.empty()) return std::nullopt;
    return cycle_from_lines(diff, net);
}

CycleSet expand_cycle_set(const CycleSet& cs, const PowerNetwork& net) {
    CycleSet out;
    out.generation = cs.generation + 1;
    std::set<std::vector<std::size_t>> seen;
    for (const auto& c : cs.cycles)
        if (seen.insert(edge_key(c)).second) out.cycles.push_back(c);
    for (std::size_t i = 0; i < cs.cycles.size(); ++i)
        for (std::size_t j = i + 1; j < cs.cycles.size(); ++j) {
            auto c = combine_cycles(cs.cycles[i], cs.cycles[j], net);
            if (c && seen.insert(edge_key(*c)).second) out.cycles.push_back(std::move(*c));
        }
    return out;
}

CycleSet sample_cycles(const CycleSet& cs, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0) || fraction > 1.0) throw std::invalid_argument("sample_cycles: fraction must be in (0, 1]");
    const auto k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(cs.size())));
    std::vector<std::size_t> idx(cs.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(std::min(k, idx.size()));
    std::sort(idx.begin(), idx.end());
    CycleSet out;
    out.generation = cs.generation;
    for (std::size_t i : idx) out.cycles.push_back(cs.cycles[i]);
    return out;
}

Cycle cycle_of_chord(std::span<const std::size_t> tree_lines, std::size_t chord, const PowerNetwork& net) {
    if (std::find(tree_lines.begin(), tree_lines.end(), chord) != tree_lines.end())
        throw std::invalid_argument("cycle_of_chord: chord belongs to the tree");
    std::vector<std::vector<std::size_t>> adj(net.num_buses());
    for (std::size_t l : tree_lines) {
        adj[net.from_index(l)].push_back(l);
        adj[net.to_index(l)].push_back(l);
    }
    const std::size_t src = net.to_index(chord);
    const std::size_t dst = net.from_index(chord);
    std::vector<std::ptrdiff_t> via(net.num_buses(), -1);
    std::vector<char> seen(net.num_buses(), 0);
    std::queue<std::size_t> q;
    q.push(src);
    seen[src] = 1;
    while (!q.empty()) {
        const std::size_t u = q.front();
        q.pop();
        if (u == dst) break;
        for (std::size_t l : adj[u]) {
            const std::size_t v = net.other_end(l, u);
            if (seen[v]) continue;
            seen[v] = 1;
            via[v] = static_cast<std::ptrdiff_t>(l);
            q.push(v);
        }
    }
    if (!seen[dst]) throw std::invalid_argument("cycle_of_chord: chord endpoints are not joined by the tree");

    std::vector<std::size_t> path;  // lines from dst back to src
    for (std::size_t v = dst; v != src;) {
        const auto l = static_cast<std::size_t>(via[v]);
        path.push_back(l);
        v = net.other_end(l, v);
    }
    Cycle c;
    c.edges.push_back({chord, 1});
    std::size_t at = src;
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
        c.edges.push_back({*it, net.from_index(*it) == at ? 1 : -1});
        at = net.other_end(*it, at);
    }
    return c;
}

std::string cycles_to_json(const CycleSet& cs, const PowerNetwork& net) {
    nlohmann::json doc;
    doc["generation"] = cs.generation;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : cs.cycles) {
        nlohmann::json cyc = nlohmann::json::array();
        for (const auto& e : c.edges) cyc.push_back({net.lines()[e.line].id, e.sign});
        arr.push_back(std::move(cyc));
    }
    doc["cycles"] = std::move(arr);
    return doc.dump() + "\n";
}

CycleSet cycles_from_json(std::string_view text, const PowerNetwork& net) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("cycle cache: ") + e.what(), 0, 0);
    }
    std::map<LineId, std::size_t> by_id;
    for (std::size_t k = 0; k < net.num_lines(); ++k) by_id[net.lines()[k].id] = k;

    CycleSet cs;
    cs.generation = doc.value("generation", 0);
    for (const auto& cyc : doc.at("cycles")) {
        Cycle c;
        for (const auto& e : cyc) {
            const auto id = e.at(0).get<LineId>();
            auto it = by_id.find(id);
            if (it == by_id.end()) throw ParseError("cycle cache: unknown line " + std::to_string(id), 0, 0);
            c.edges.push_back({it->second, e.at(1).get<int>()});
        }
        if (auto err = check_cycle(c, net); !err.empty()) throw ParseError("cycle cache: " + err, 0, 0);
        cs.cycles.push_back(std::move(c));
    }
    return cs;
}

}  // namespace ots
