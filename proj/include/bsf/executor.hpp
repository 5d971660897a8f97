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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <latch>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <type_traits>
#include <variant>
#include <vector>

#include "bsf/channel.hpp"
#include "bsf/core.hpp"
#include "bsf/cost_model.hpp"
#include "bsf/error.hpp"
#include "bsf/timing.hpp"

namespace bsf {

template <class Approx> struct RunMeasurement {
    std::size_t workers = 1;
    double wall_time = 0.0;     ///< seconds, first broadcast to final exit flag
    double per_iteration = 0.0; ///< wall_time / iterations
    std::size_t iterations = 0;
    bool converged = false;
    Approx result{};
};

struct EmpiricalPoint {
    std::size_t workers = 1;
    double time = 0.0; ///< median wall time over repetitions
    double speedup = 1.0;
};

struct EmpiricalCurve {
    std::vector<EmpiricalPoint> points;
    std::size_t k_test = 1; ///< argmax of speedup, smallest K on ties
};

namespace detail {

template <class Approx> struct Broadcast {
    std::uint64_t seq;
    Approx x;
};

struct ExitFlag {
    std::uint64_t seq;
    bool exit;
};

template <class Partial> struct Reply {
    std::uint64_t seq;
    std::optional<Partial> partial;
    std::exception_ptr error;
};

inline std::string describe(const std::exception_ptr &error) {
    try {
        std::rethrow_exception(error);
    } catch (const std::exception &e) {
        return e.what();
    } catch (...) {
        return "unknown exception";
    }
}

template <class Problem> class WorkerLink {
public:
    using Approx = typename Problem::approx_type;
    using Partial = typename Problem::partial_type;
    using Down = std::variant<Broadcast<Approx>, ExitFlag>;

    Channel<Down> down;
    Channel<Reply<Partial>> up;
};

template <class Problem>
void worker_loop(const Problem &problem, std::vector<typename Problem::element_type> block,
                 WorkerLink<Problem> &link, std::latch &ready) {
    using Approx = typename Problem::approx_type;
    ready.count_down();
    std::uint64_t expected = 0;
    for (;;) {
        auto msg = link.down.receive();
        if (auto *flag = std::get_if<ExitFlag>(&msg)) {
            // Abort path: the master gave up before this iteration's broadcast.
            if (flag->exit) {
                return;
            }
            continue;
        }
        auto &bc = std::get<Broadcast<Approx>>(msg);
        try {
            if (bc.seq != expected) {
                fail(ErrorKind::worker_failure, "worker received broadcast " + std::to_string(bc.seq) +
                                                    " while expecting " + std::to_string(expected));
            }
            link.up.send({bc.seq, fold_block(problem, bc.x, block), nullptr});
        } catch (...) {
            link.up.send({bc.seq, std::nullopt, std::current_exception()});
            return;
        }
        auto next = link.down.receive();
        const auto *flag = std::get_if<ExitFlag>(&next);
        if (flag == nullptr || flag->exit) {
            return;
        }
        ++expected;
    }
}

} // namespace detail

/// Execute `problem` on one master (the calling thread) and K worker threads.
///
/// Worker j owns only block j of the partitioned element list. Per iteration
/// the master broadcasts x, gathers the K partial folds in worker-index order,
/// reduces them, applies compute and stop_cond, then broadcasts the exit flag.
template <class Elem, class Partial, class Approx>
RunMeasurement<Approx> run_parallel(const ProblemDefinition<Elem, Partial, Approx> &problem, std::size_t workers) {
    using Problem = ProblemDefinition<Elem, Partial, Approx>;
    problem.validate();
    require(workers >= 1 && workers <= problem.elements.size(),
            "worker count K=" + std::to_string(workers) + " must be in [1, " +
                std::to_string(problem.elements.size()) + "]");

    auto blocks = partition_list(problem.elements, workers);
    std::vector<detail::WorkerLink<Problem>> links(workers);
    std::latch ready(static_cast<std::ptrdiff_t>(workers));
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t j = 0; j < workers; ++j) {
        threads.emplace_back([&problem, &links, &ready, j, block = std::move(blocks[j])]() mutable {
            detail::worker_loop(problem, std::move(block), links[j], ready);
        });
    }
    ready.wait();

    RunMeasurement<Approx> run;
    run.workers = workers;
    Approx x = problem.initial;
    const auto start = Clock::now();

    auto broadcast_exit = [&](std::uint64_t seq, bool exit) {
        for (auto &link : links) {
            link.down.send(detail::ExitFlag{seq, exit});
        }
    };

    if (problem.done_at_start && problem.done_at_start(x)) {
        broadcast_exit(0, true);
        run.converged = true;
    } else {
        for (std::uint64_t seq = 0;; ++seq) {
            for (auto &link : links) {
                link.down.send(detail::Broadcast<Approx>{seq, x});
            }
            std::optional<Partial> s;
            std::string failure;
            for (std::size_t j = 0; j < workers; ++j) {
                auto reply = links[j].up.receive();
                if (reply.error) {
                    failure += "worker " + std::to_string(j) + ": " + detail::describe(reply.error) + "; ";
                    continue;
                }
                if (reply.seq != seq) {
                    failure += "worker " + std::to_string(j) + ": reply for iteration " + std::to_string(reply.seq) +
                               " during iteration " + std::to_string(seq) + "; ";
                    continue;
                }
                if (s) {
                    s = problem.combine(std::move(*s), *reply.partial);
                } else {
                    s = std::move(reply.partial);
                }
            }
            if (!failure.empty()) {
                broadcast_exit(seq, true);
                threads.clear();
                fail(ErrorKind::worker_failure, "parallel run aborted: " + failure);
            }
            bool stop = false;
            Approx next;
            try {
                next = problem.compute(x, *s);
                stop = problem.stop_cond(next, x);
            } catch (...) {
                broadcast_exit(seq, true);
                throw;
            }
            ++run.iterations;
            x = std::move(next);
            const bool exit = stop || run.iterations >= problem.max_iterations;
            broadcast_exit(seq, exit);
            if (exit) {
                run.converged = stop;
                break;
            }
        }
    }
    run.wall_time = seconds_since(start);
    threads.clear();
    run.per_iteration = run.iterations > 0 ? run.wall_time / static_cast<double>(run.iterations) : 0.0;
    run.result = std::move(x);
    return run;
}

/// Median wall time per worker count and speedup against the K = 1 median.
template <class Elem, class Partial, class Approx>
EmpiricalCurve measure_speedup(const ProblemDefinition<Elem, Partial, Approx> &problem,
                               std::span<const std::size_t> workers, std::size_t repetitions,
                               const std::type_identity_t<std::function<void(const RunMeasurement<Approx> &)>> &on_run = {}) {
    check_worker_list(workers);
    require(workers.front() == 1, "worker list must contain 1 as the speedup baseline");
    require(repetitions >= 1, "repetitions must be >= 1");

    EmpiricalCurve curve;
    for (auto k : workers) {
        std::vector<double> times;
        times.reserve(repetitions);
        for (std::size_t r = 0; r < repetitions; ++r) {
            auto run = run_parallel(problem, k);
            if (!run.converged) {
                fail(ErrorKind::non_convergence, "run with K=" + std::to_string(k) + " did not converge within " +
                                                     std::to_string(run.iterations) + " iterations");
            }
            times.push_back(run.wall_time);
            if (on_run) {
                on_run(run);
            }
        }
        curve.points.push_back({k, median(std::move(times)), 1.0});
    }
    const double base = curve.points.front().time;
    double best = 0.0;
    for (auto &pt : curve.points) {
        pt.speedup = pt.workers == 1 ? 1.0 : base / pt.time;
        if (pt.speedup > best) {
            best = pt.speedup;
            curve.k_test = pt.workers;
        }
    }
    return curve;
}

} // namespace bsf
