#include <chrono>
#include <cstdio>

#include "ots/verify.hpp"

int main() {
    using clock = std::chrono::steady_clock;
    const ots::verify::Options o;
    int failed = 0, index = 0;
    auto report = [&](const ots::verify::CheckResult& r, double seconds) {
        std::printf("%s %2d %s: %s [%.1fs]\n", r.pass ? "PASS" : "FAIL", ++index, r.name.c_str(), r.detail.c_str(),
                    seconds);
        std::fflush(stdout);
        failed += !r.pass;
    };
    auto timed = [&](auto check) {
        const auto t0 = clock::now();
        auto r = check(o);
        return std::make_pair(std::move(r), std::chrono::duration<double>(clock::now() - t0).count());
    };

    for (auto* check : {ots::verify::hull, ots::verify::facets, ots::verify::separation, ots::verify::nonpositive_k,
                        ots::verify::projection, ots::verify::equivalence, ots::verify::hardness}) {
        const auto [r, s] = timed(check);
        report(r, s);
    }
    const auto [trio, s] = timed(ots::verify::ground_truth);
    for (const auto& r : trio) report(r, s);
    for (auto* check : {ots::verify::budget, ots::verify::basis}) {
        const auto [r, t] = timed(check);
        report(r, t);
    }
    std::printf("%d/%d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
