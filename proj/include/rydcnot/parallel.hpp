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

#include <algorithm>
#include <array>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace rydcnot {

/// Runs `shot(i)` for i in [0, n) on `workers` threads and counts the
/// returned outcome codes in [0, K).  Shots are split into contiguous
/// blocks; since each shot is a pure function of its index and counts are
/// integers, the result does not depend on the worker count.
template <std::size_t K, typename ShotFn>
std::array<long, K> parallel_count(std::size_t n, unsigned workers, ShotFn&& shot) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    std::vector<std::array<long, K>> partial(workers, std::array<long, K>{});
    std::vector<std::exception_ptr> errors(workers);
    auto run_block = [&](unsigned w) {
        const std::size_t begin = n * w / workers;
        const std::size_t end = n * (w + 1) / workers;
        try {
            for (std::size_t i = begin; i < end; ++i)
                ++partial[w][static_cast<std::size_t>(shot(i))];
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        run_block(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_block, w);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::array<long, K> total{};
    for (const auto& p : partial)
        for (std::size_t k = 0; k < K; ++k) total[k] += p[k];
    return total;
}

}  // namespace rydcnot
