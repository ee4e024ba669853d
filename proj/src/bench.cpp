#include "ots/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace ots {

std::vector<std::vector<double>> performance_ratios(const std::vector<std::vector<double>>& times) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> out;
    out.reserve(times.size());
    for (const auto& row : times) {
        if (!times.empty() && row.size() != times.front().size())
            throw std::invalid_argument("performance_ratios: ragged time table");
        double best = inf;
        for (double t : row) {
            if (t < 0.0 || std::isnan(t)) throw std::invalid_argument("performance_ratios: negative or NaN time");
            best = std::min(best, t);
        }
        std::vector<double> r(row.size(), inf);
        if (std::isfinite(best)) {
            for (std::size_t s = 0; s < row.size(); ++s) {
                if (!std::isfinite(row[s])) continue;
                // Equal times (including two zeros) share ratio one.
                r[s] = row[s] == best ? 1.0 : row[s] / best;
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ProfilePoint> performance_profile(const std::vector<std::vector<double>>& times) {
    const auto ratios = performance_ratios(times);
    const std::size_t solvers = times.empty() ? 0 : times.front().size();
    std::vector<double> taus{1.0};
    for (const auto& row : ratios)
        for (double r : row)
            if (std::isfinite(r)) taus.push_back(r);
    std::sort(taus.begin(), taus.end());
    taus.erase(std::unique(taus.begin(), taus.end()), taus.end());

    std::vector<ProfilePoint> out;
    const double n = static_cast<double>(ratios.size());
    for (double tau : taus) {
        ProfilePoint p;
        p.tau = tau;
        p.fraction.assign(solvers, 0.0);
        for (std::size_t s = 0; s < solvers; ++s) {
            std::size_t hit = 0;
            for (const auto& row : ratios) hit += row[s] <= tau;
            p.fraction[s] = n > 0 ? static_cast<double>(hit) / n : 0.0;
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::string profile_csv(const std::vector<ProfilePoint>& profile, const std::vector<std::string>& solvers) {
    std::string s = "tau";
    for (const auto& name : solvers) s += "," + name;
    s += '\n';
    char buf[64];
    for (const ProfilePoint& p : profile) {
        std::snprintf(buf, sizeof buf, "%.10g", p.tau);
        s += buf;
        for (double f : p.fraction) {
            std::snprintf(buf, sizeof buf, ",%.10g", f);
            s += buf;
        }
        s += '\n';
    }
    return s;
}

}  // namespace ots
