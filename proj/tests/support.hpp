#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nugap/oracle.hpp"
#include "nugap/plants.hpp"

namespace nugap::testing {

struct GatedPair {
    lti::TransferFunction nominal;
    lti::TransferFunction plant;
    oracle::OracleResult reference;
};

// Random stable pairs accepted in draw order: oracle in_C and chordal_sup >= min_gap.
inline std::vector<GatedPair> gated_pairs(std::size_t count, std::uint64_t seed = 2024, int max_order = 3,
                                          double min_gap = 0.05) {
    std::mt19937_64 rng(seed);
    std::vector<GatedPair> out;
    while (out.size() < count) {
        auto nominal = plants::random_stable_plant(rng, max_order);
        auto plant = plants::random_stable_plant(rng, max_order);
        oracle::OracleResult ref;
        try {
            ref = oracle::nu_gap(nominal, plant);
        } catch (const std::exception&) {
            continue;
        }
        if (!ref.in_C || ref.chordal_sup < min_gap) {
            continue;
        }
        out.push_back({std::move(nominal), std::move(plant), ref});
    }
    return out;
}

inline std::vector<double> gaussian_vector(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g;
    std::vector<double> v(n);
    for (double& x : v) {
        x = g(rng);
    }
    return v;
}

}  // namespace nugap::testing
