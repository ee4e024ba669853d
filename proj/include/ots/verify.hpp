#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ots::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// `scale` multiplies every sample count (minimum one sample each).
struct Options {
    double scale = 1.0;
    std::uint64_t seed = 20240601;
};

CheckResult hull(const Options& o = {});
CheckResult facets(const Options& o = {});
CheckResult separation(const Options& o = {});
CheckResult nonpositive_k(const Options& o = {});
CheckResult projection(const Options& o = {});
CheckResult equivalence(const Options& o = {});
CheckResult hardness(const Options& o = {});

/// Shared instance set: agreement with enumeration, root cut monotonicity,
/// connectivity repair. Returns three results in that order.
std::vector<CheckResult> ground_truth(const Options& o = {});

CheckResult budget(const Options& o = {});
CheckResult basis(const Options& o = {});

/// All twelve checks in order.
std::vector<CheckResult> run_all(const Options& o = {});

/// Suites: hull facets separation nonpositive-k projection equivalence
/// hardness ground-truth budget basis all. Throws invalid_argument on an
/// unknown name.
std::vector<CheckResult> run_suite(const std::string& name, const Options& o = {});
const std::vector<std::string>& suite_names();

/// Planted faults. Each result passes when the fault is detected.
std::vector<CheckResult> negative_controls(const Options& o = {});

std::string format(const CheckResult& r);

}  // namespace ots::verify
