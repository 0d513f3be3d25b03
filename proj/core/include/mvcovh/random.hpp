#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mvcovh {

using Seed = std::uint64_t;
using Rng = std::mt19937_64;

// Derives an independent child seed from a parent seed and a path of
// integer tags. Pure function: the same inputs give the same seed on every
// call and thread.
Seed derive_seed(Seed parent, std::initializer_list<std::uint64_t> path);

Rng make_rng(Seed seed);

// Uniform draw on the half-open interval (low, high].
double uniform_open_closed(Rng& rng, double low, double high);

// `count` distinct indices in [0, n), in draw order.
std::vector<int> sample_without_replacement(Rng& rng, int n, int count);

}  // namespace mvcovh

namespace mvcovh {

// Uniform draw on [0, 1) from the top 53 bits of one engine output.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace mvcovh
