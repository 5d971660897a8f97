/*
 *   Copyright 2026 The BSF Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "bsf/core.hpp"
#include "bsf/timing.hpp"

/// Workloads with known cost structure, used for calibration checks and
/// speedup measurements.
namespace bsf::synthetic {

struct Counter {
    std::int64_t iteration = 0;
    std::int64_t value = 0;

    bool operator==(const Counter &) const = default;
};

/// Integer payload: F_x(a) = a*a + iteration, combined with +. Exact in any
/// association order, so parallel runs must match sequential bit for bit.
inline ProblemDefinition<std::int64_t, std::int64_t, Counter> sum_of_squares(std::vector<std::int64_t> values,
                                                                            std::int64_t iterations) {
    ProblemDefinition<std::int64_t, std::int64_t, Counter> p;
    p.elements = std::move(values);
    p.map_fn = [](const Counter &x, const std::int64_t &a) { return a * a + x.iteration; };
    p.combine = [](std::int64_t acc, const std::int64_t &b) { return acc + b; };
    p.compute = [](const Counter &x, const std::int64_t &s) { return Counter{x.iteration + 1, s}; };
    p.stop_cond = [iterations](const Counter &next, const Counter &) { return next.iteration >= iterations; };
    p.max_iterations = static_cast<std::size_t>(iterations);
    return p;
}

inline std::vector<std::int64_t> random_integers(std::size_t n, std::uint64_t seed, std::int64_t bound = 1000) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> dist(-bound, bound);
    std::vector<std::int64_t> out(n);
    for (auto &v : out) {
        v = dist(rng);
    }
    return out;
}

struct Tally {
    std::int64_t iteration = 0;
    double value = 0.0;
};

/// Each map spins for `seconds_per_element` and returns the element index;
/// fold is +. With zero work this is a pure communication benchmark.
inline ProblemDefinition<std::size_t, double, Tally> busy_work(std::size_t l, double seconds_per_element,
                                                              std::int64_t iterations) {
    ProblemDefinition<std::size_t, double, Tally> p;
    p.elements.resize(l);
    std::iota(p.elements.begin(), p.elements.end(), std::size_t{0});
    p.map_fn = [seconds_per_element](const Tally &, const std::size_t &a) {
        if (seconds_per_element > 0.0) {
            spin_for(seconds_per_element);
        }
        return static_cast<double>(a);
    };
    p.combine = [](double acc, const double &b) { return acc + b; };
    p.compute = [](const Tally &x, const double &s) { return Tally{x.iteration + 1, s}; };
    p.stop_cond = [iterations](const Tally &next, const Tally &) { return next.iteration >= iterations; };
    p.max_iterations = static_cast<std::size_t>(iterations);
    return p;
}

} // namespace bsf::synthetic
