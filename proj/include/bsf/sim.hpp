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

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "bsf/core.hpp"
#include "bsf/cost_model.hpp"

/// Cost accounting for one iteration, built by walking the iteration's event
/// sequence instead of evaluating the closed form for T_K.
namespace bsf::sim {

enum class Phase { broadcast, worker_map, worker_reduce, gather, master_reduce, master_post };

struct Event {
    Phase phase;
    std::size_t worker; ///< worker index for per-worker events, else 0
    double cost;        ///< seconds
};

struct TimingBreakdown {
    double master_reduce = 0.0;
    double master_post = 0.0;
    double comm = 0.0;
    double worker_map = 0.0;
    double worker_reduce = 0.0;
    double total = 0.0;
};

/// Number of stages in a binomial broadcast/reduce tree over K workers.
inline std::size_t tree_stages(std::size_t workers) {
    std::size_t stages = 0;
    for (std::size_t reach = 1; reach < workers; reach *= 2) {
        ++stages;
    }
    return stages;
}

/// Event list for one iteration with K workers.
///
/// Communication totals (log2 K + 1) t_c: one direct hop plus log2 K spread
/// evenly over the tree stages, split between broadcast and gather. Each
/// worker's map and reduce are charged from its actual block size.
inline std::vector<Event> iteration_events(const CostParams &p, std::size_t workers) {
    check_worker_count(p, workers);
    std::vector<Event> events;
    const std::size_t stages = tree_stages(workers);
    const double tree_cost = std::log2(static_cast<double>(workers)) * p.t_c;
    const double per_stage = stages > 0 ? tree_cost / static_cast<double>(stages) : 0.0;

    events.push_back({Phase::broadcast, 0, 0.5 * p.t_c});
    for (std::size_t s = 0; s < stages; ++s) {
        events.push_back({Phase::broadcast, 0, 0.5 * per_stage});
    }
    const double map_per_element = p.t_map / static_cast<double>(p.l);
    for (std::size_t j = 0; const auto &block : partition_blocks(p.l, workers)) {
        events.push_back({Phase::worker_map, j, static_cast<double>(block.length) * map_per_element});
        events.push_back({Phase::worker_reduce, j, static_cast<double>(block.length - 1) * p.t_a});
        ++j;
    }
    for (std::size_t s = 0; s < stages; ++s) {
        events.push_back({Phase::gather, 0, 0.5 * per_stage});
    }
    events.push_back({Phase::gather, 0, 0.5 * p.t_c});
    for (std::size_t j = 1; j < workers; ++j) {
        events.push_back({Phase::master_reduce, 0, p.t_a});
    }
    events.push_back({Phase::master_post, 0, p.t_p});
    return events;
}

/// Collapse the event walk into a breakdown. Worker phases run in parallel
/// and are charged at their mean over workers; serial phases are summed.
inline TimingBreakdown simulate_iteration(const CostParams &p, std::size_t workers) {
    TimingBreakdown out;
    const double k = static_cast<double>(workers);
    for (const auto &e : iteration_events(p, workers)) {
        switch (e.phase) {
        case Phase::broadcast:
        case Phase::gather:
            out.comm += e.cost;
            break;
        case Phase::worker_map:
            out.worker_map += e.cost / k;
            break;
        case Phase::worker_reduce:
            out.worker_reduce += e.cost / k;
            break;
        case Phase::master_reduce:
            out.master_reduce += e.cost;
            break;
        case Phase::master_post:
            out.master_post += e.cost;
            break;
        }
    }
    out.total = out.master_reduce + out.master_post + out.comm + out.worker_map + out.worker_reduce;
    return out;
}

} // namespace bsf::sim
