#pragma once

#include <random>
#include <vector>

#include "ots/network.hpp"

namespace fixtures {

inline ots::NetworkData triangle_data(double cap = 1.0) {
    ots::NetworkData d;
    d.buses = {{0, 0.0}, {1, 0.0}, {2, 1.0}};
    d.generators = {{0, 0.0, 2.0, 1.0}};
    d.lines = {{0, 0, 1, 1.0, cap, true}, {1, 1, 2, 1.0, cap, true}, {2, 0, 2, 1.0, cap, true}};
    return d;
}

inline ots::PowerNetwork triangle(double cap = 1.0) { return ots::PowerNetwork(triangle_data(cap)); }

// Connected multigraph: random spanning tree plus extra lines, parallels allowed.
inline ots::PowerNetwork random_multigraph(std::mt19937_64& rng, int buses, int extra) {
    ots::NetworkData d;
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (int b = 0; b < buses; ++b) d.buses.push_back({b, 0.0});
    d.generators.push_back({0, 0.0, 1.0, 1.0});
    int id = 0;
    for (int b = 1; b < buses; ++b) {
        std::uniform_int_distribution<int> pick(0, b - 1);
        d.lines.push_back({id++, pick(rng), b, u(rng), u(rng), true});
    }
    std::uniform_int_distribution<int> any(0, buses - 1);
    for (int k = 0; k < extra; ++k) {
        int a = any(rng), b = any(rng);
        while (b == a) b = any(rng);
        d.lines.push_back({id++, a, b, u(rng), u(rng), true});
    }
    return ots::PowerNetwork(std::move(d));
}

}  // namespace fixtures
