// Copyright 2026 The rydcnot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rydcnot {

/// Random engine used for every stochastic step.  Each shot owns its own
/// engines, so no engine is ever shared between threads.
using Rng = std::mt19937_64;

namespace detail {
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

/// Order-sensitive hash of a tuple of integers into a 64-bit seed.  Stream
/// seeds are pure functions of their coordinates, which makes shot results
/// independent of how shots are scheduled across workers.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> coords) {
    std::uint64_t h = 0x6a09e667f3bcc908ULL;
    for (std::uint64_t c : coords) h = detail::splitmix64(h ^ detail::splitmix64(c));
    return h;
}

inline Rng make_rng(std::initializer_list<std::uint64_t> coords) {
    return Rng{derive_seed(coords)};
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>{0.0, 1.0}(rng);
}

inline bool bernoulli(Rng& rng, double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01(rng) < p;
}

inline double standard_normal(Rng& rng) {
    return std::normal_distribution<double>{0.0, 1.0}(rng);
}

}  // namespace rydcnot
