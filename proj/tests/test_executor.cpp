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

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "bsf/executor.hpp"
#include "bsf/problems/gravity.hpp"
#include "bsf/problems/jacobi.hpp"
#include "bsf/problems/synthetic.hpp"
#include "oracles.hpp"

using namespace bsf;

namespace {

constexpr std::size_t worker_counts[] = {2, 3, 4, 7};

} // namespace

TEST(RunParallel, IntegerProblemMatchesSequentialExactly) {
    const auto problem = synthetic::sum_of_squares(synthetic::random_integers(1000, 77), 25);
    const auto seq = run_sequential(problem);
    for (std::size_t k : {1, 2, 3, 4, 7, 1000}) {
        const auto par = run_parallel(problem, k);
        EXPECT_EQ(par.result, seq.final) << "K=" << k;
        EXPECT_EQ(par.iterations, seq.iterations);
        EXPECT_TRUE(par.converged);
        EXPECT_EQ(par.workers, k);
    }
}

TEST(RunParallel, JacobiMatchesSequential) {
    const auto sys = jacobi::random_dominant_system(512, 3);
    const auto problem = jacobi::as_bsf_problem(jacobi::build_jacobi(sys, 1e-20));
    const auto seq = run_sequential(problem);
    ASSERT_TRUE(seq.converged);
    for (auto k : worker_counts) {
        const auto par = run_parallel(problem, k);
        EXPECT_TRUE(par.converged);
        EXPECT_LE(oracle::max_rel_diff(par.result, seq.final), 1e-9) << "K=" << k;
    }
}

TEST(RunParallel, GravityMatchesSequential) {
    const auto problem = gravity::as_bsf_problem(gravity::default_problem(gravity::generate_bodies(300, 5)));
    const auto seq = run_sequential(problem);
    ASSERT_EQ(seq.iterations, 100u);
    for (auto k : worker_counts) {
        const auto par = run_parallel(problem, k);
        EXPECT_EQ(par.iterations, 100u);
        EXPECT_LE(oracle::max_rel_diff(par.result.x, seq.final.x), 1e-9) << "K=" << k;
        EXPECT_LE(oracle::max_rel_diff(par.result.v, seq.final.v), 1e-9) << "K=" << k;
        EXPECT_LE(oracle::rel_diff(par.result.t, seq.final.t), 1e-9) << "K=" << k;
    }
}

TEST(RunParallel, RepeatedRunsAreBitIdentical) {
    const auto sys = jacobi::random_dominant_system(64, 9);
    const auto problem = jacobi::as_bsf_problem(jacobi::build_jacobi(sys, 1e-20));
    const auto first = run_parallel(problem, 3);
    for (int r = 0; r < 5; ++r) {
        const auto again = run_parallel(problem, 3);
        EXPECT_EQ(again.result, first.result);
        EXPECT_EQ(again.iterations, first.iterations);
    }
}

// Every element is always mapped by the same thread, each block by its own
// thread, and never by the master.
TEST(RunParallel, WorkersOnlyTouchTheirOwnBlock) {
    auto problem = synthetic::sum_of_squares(synthetic::random_integers(23, 1), 6);
    std::mutex mu;
    std::map<std::int64_t, std::set<std::thread::id>> seen;
    for (std::size_t i = 0; i < problem.elements.size(); ++i) {
        problem.elements[i] = static_cast<std::int64_t>(i);
    }
    const auto base = problem.map_fn;
    problem.map_fn = [&](const synthetic::Counter &x, const std::int64_t &a) {
        std::lock_guard lock(mu);
        seen[a].insert(std::this_thread::get_id());
        return base(x, a);
    };
    const std::size_t k = 4;
    run_parallel(problem, k);
    const auto blocks = partition_blocks(problem.elements.size(), k);
    std::set<std::thread::id> owners;
    for (const auto &b : blocks) {
        std::set<std::thread::id> block_threads;
        for (std::size_t i = b.offset; i < b.offset + b.length; ++i) {
            ASSERT_EQ(seen[static_cast<std::int64_t>(i)].size(), 1u);
            block_threads.insert(*seen[static_cast<std::int64_t>(i)].begin());
        }
        EXPECT_EQ(block_threads.size(), 1u);
        owners.insert(*block_threads.begin());
    }
    EXPECT_EQ(owners.size(), k);
    EXPECT_FALSE(owners.contains(std::this_thread::get_id()));
}

// No worker starts iteration i+1 before every worker finished iteration i.
TEST(RunParallel, IterationsRunInLockstep) {
    auto problem = synthetic::sum_of_squares(synthetic::random_integers(40, 2), 30);
    std::mutex mu;
    std::vector<std::int64_t> log;
    const auto base = problem.map_fn;
    problem.map_fn = [&](const synthetic::Counter &x, const std::int64_t &a) {
        std::lock_guard lock(mu);
        log.push_back(x.iteration);
        return base(x, a);
    };
    run_parallel(problem, 5);
    ASSERT_EQ(log.size(), 40u * 30u);
    EXPECT_TRUE(std::is_sorted(log.begin(), log.end()));
}

TEST(RunParallel, WorkerFailureAbortsTheRun) {
    auto problem = synthetic::sum_of_squares(synthetic::random_integers(16, 4), 10);
    const auto base = problem.map_fn;
    problem.elements[13] = 123456;
    problem.map_fn = [&](const synthetic::Counter &x, const std::int64_t &a) {
        if (a == 123456 && x.iteration == 2) {
            throw std::runtime_error("injected fault");
        }
        return base(x, a);
    };
    try {
        run_parallel(problem, 4);
        FAIL() << "expected worker failure";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::worker_failure);
        EXPECT_NE(std::string(e.what()).find("worker 3"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("injected fault"), std::string::npos);
    }
}

TEST(RunParallel, MasterFailureReleasesWorkers) {
    auto problem = synthetic::sum_of_squares(synthetic::random_integers(16, 4), 10);
    problem.compute = [](const synthetic::Counter &x, const std::int64_t &s) {
        if (x.iteration == 3) {
            fail(ErrorKind::invalid_parameter, "bad step");
        }
        return synthetic::Counter{x.iteration + 1, s};
    };
    try {
        run_parallel(problem, 4);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::invalid_parameter);
    }
}

TEST(RunParallel, WorkerCountOutOfRange) {
    const auto problem = synthetic::sum_of_squares({1, 2, 3}, 2);
    EXPECT_THROW(run_parallel(problem, 0), Error);
    EXPECT_THROW(run_parallel(problem, 4), Error);
}

TEST(RunParallel, IterationLimitWithoutConvergence) {
    auto problem = synthetic::sum_of_squares({1, 2, 3}, 50);
    problem.max_iterations = 4;
    const auto run = run_parallel(problem, 2);
    EXPECT_EQ(run.iterations, 4u);
    EXPECT_FALSE(run.converged);
    EXPECT_GE(run.wall_time, 0.0);
}

TEST(RunParallel, GravityAtEndTimeDoesNothing) {
    auto g = gravity::default_problem(gravity::generate_bodies(10, 1));
    g.t_end = g.t0;
    const auto run = run_parallel(gravity::as_bsf_problem(g), 3);
    EXPECT_EQ(run.iterations, 0u);
    EXPECT_TRUE(run.converged);
    EXPECT_EQ(run.result.x, g.x0);
    EXPECT_EQ(run.per_iteration, 0.0);
}

TEST(MeasureSpeedup, SingleWorkerBaseline) {
    const auto problem = synthetic::sum_of_squares(synthetic::random_integers(100, 1), 5);
    const std::vector<std::size_t> ks{1};
    std::atomic<int> runs = 0;
    const auto curve = measure_speedup(problem, std::span<const std::size_t>(ks), 3,
                                       [&](const RunMeasurement<synthetic::Counter> &) { ++runs; });
    ASSERT_EQ(curve.points.size(), 1u);
    EXPECT_EQ(curve.points[0].speedup, 1.0);
    EXPECT_EQ(curve.k_test, 1u);
    EXPECT_EQ(runs, 3);
}

TEST(MeasureSpeedup, RequiresBaselineAndConvergence) {
    auto problem = synthetic::sum_of_squares(synthetic::random_integers(100, 1), 5);
    const std::vector<std::size_t> no_one{2, 4};
    EXPECT_THROW(measure_speedup(problem, std::span<const std::size_t>(no_one), 3), Error);
    problem.max_iterations = 2;
    const std::vector<std::size_t> ks{1, 2};
    try {
        measure_speedup(problem, std::span<const std::size_t>(ks), 3);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::non_convergence);
    }
}

// With no work per element, added workers only add communication.
TEST(MeasureSpeedup, CommunicationDominatedCurveDoesNotRise) {
    const auto problem = synthetic::busy_work(64, 0.0, 200);
    const std::vector<std::size_t> ks{1, 2, 4, 8};
    const auto curve = measure_speedup(problem, std::span<const std::size_t>(ks), 5);
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        EXPECT_LE(curve.points[i].speedup, curve.points[i - 1].speedup * 1.1)
            << "K=" << curve.points[i].workers;
    }
}

TEST(MeasureSpeedup, ComputeHeavySpeedupOnMulticoreHost) {
    if (std::thread::hardware_concurrency() < 4) {
        GTEST_SKIP() << "host has " << std::thread::hardware_concurrency() << " hardware threads, need 4";
    }
    const auto problem = synthetic::busy_work(64, 2e-4, 10);
    const std::vector<std::size_t> ks{1, 2, 4};
    const auto curve = measure_speedup(problem, std::span<const std::size_t>(ks), 3);
    EXPECT_GE(curve.points[1].speedup, 1.5);
    EXPECT_GE(curve.points[2].speedup, 2.5);
}
