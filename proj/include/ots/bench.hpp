#pragma once

#include <string>
#include <vector>

namespace ots {

/// times[i][s]: wall time of solver s on instance i, +inf when unsolved.
/// ratios[i][s] = times[i][s] / min_s times[i][s]; +inf stays +inf, and an
/// instance nobody solved gets +inf everywhere.
std::vector<std::vector<double>> performance_ratios(const std::vector<std::vector<double>>& times);

struct ProfilePoint {
    double tau = 1.0;
    std::vector<double> fraction;  // per solver, share of instances with ratio <= tau
};

/// Step points of the Dolan-More profile, one per distinct finite ratio
/// (tau = 1 always present).
std::vector<ProfilePoint> performance_profile(const std::vector<std::vector<double>>& times);

/// "tau,<solver>,..." followed by one line per point.
std::string profile_csv(const std::vector<ProfilePoint>& profile, const std::vector<std::string>& solvers);

}  // namespace ots
