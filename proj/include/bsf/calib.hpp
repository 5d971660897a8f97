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
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bsf/channel.hpp"
#include "bsf/core.hpp"
#include "bsf/cost_model.hpp"
#include "bsf/error.hpp"
#include "bsf/timing.hpp"

/// Host measurement of cost parameters and primitive machine costs.
///
/// Every quantity is sampled `repetitions` times after one discarded warm-up
/// round and aggregated by median. Quantities too short to time directly are
/// repeated in batches until one sample spans at least `min_sample` seconds.
/// Not thread-safe: run with no other load in the process.
namespace bsf::calib {

struct Options {
    std::size_t repetitions = 5;
    double min_sample = 2e-4;                 ///< seconds per timed sample
    std::size_t max_batch = std::size_t{1} << 24;
    std::optional<double> resolution;         ///< timer tick; probed when empty
    std::size_t chunk = 256;                  ///< map outputs buffered for timing the fold
};

/// Raise calibration_unreliable when one timed sample is shorter than ten
/// timer ticks.
inline void check_resolution(const std::string &name, double sample_seconds, double resolution) {
    if (!(sample_seconds >= 10.0 * resolution)) {
        fail(ErrorKind::calibration_unreliable,
             "calibration unreliable for " + name + ": sample of " + std::to_string(sample_seconds) +
                 " s is within 10x of the timer resolution " + std::to_string(resolution) + " s");
    }
}

namespace detail {

struct Timed {
    double per_op = 0.0;     ///< median seconds per operation
    double per_sample = 0.0; ///< median seconds per timed sample
};

/// Batch size such that `batch` calls of `op` take at least min_sample.
/// Doubles as the discarded warm-up round.
inline std::size_t choose_batch(const std::function<void()> &op, const Options &opt) {
    std::size_t batch = 1;
    for (;;) {
        const auto t0 = Clock::now();
        for (std::size_t i = 0; i < batch; ++i) {
            op();
        }
        const double dt = seconds_since(t0);
        if (dt >= opt.min_sample || batch >= opt.max_batch) {
            return batch;
        }
        const double scale = dt > 0.0 ? std::min(16.0, 1.5 * opt.min_sample / dt) : 16.0;
        batch = std::min(opt.max_batch, std::max(batch + 1, static_cast<std::size_t>(static_cast<double>(batch) * scale)));
    }
}

inline Timed time_op(const std::string &name, const std::function<void()> &op, const Options &opt, double resolution) {
    const std::size_t batch = choose_batch(op, opt);
    std::vector<double> samples;
    samples.reserve(opt.repetitions);
    for (std::size_t r = 0; r < opt.repetitions; ++r) {
        const auto t0 = Clock::now();
        for (std::size_t i = 0; i < batch; ++i) {
            op();
        }
        samples.push_back(seconds_since(t0));
    }
    const double per_sample = median(std::move(samples));
    check_resolution(name, per_sample, resolution);
    return {per_sample / static_cast<double>(batch), per_sample};
}

/// A peer thread that answers every message with reply(message).
template <class Down, class Up> class EchoPeer {
public:
    explicit EchoPeer(std::function<Up(const Down &)> reply)
        : thread_([this, reply = std::move(reply)] {
              for (;;) {
                  auto msg = down_.receive();
                  if (!msg) {
                      return;
                  }
                  up_.send(reply(*msg));
              }
          }) {}

    ~EchoPeer() { down_.send(std::nullopt); }

    EchoPeer(const EchoPeer &) = delete;
    EchoPeer &operator=(const EchoPeer &) = delete;

    Up round_trip(Down msg) {
        down_.send(std::move(msg));
        return up_.receive();
    }

private:
    Channel<std::optional<Down>> down_;
    Channel<Up> up_;
    std::jthread thread_;
};

inline double resolve(const Options &opt) { return opt.resolution ? *opt.resolution : timer_resolution(); }

} // namespace detail

/// Half of a one-byte round trip between two threads.
inline double measure_latency(const Options &opt = {}) {
    const double res = detail::resolve(opt);
    detail::EchoPeer<char, char> peer([](const char &c) { return c; });
    char token = 1;
    auto t = detail::time_op("L", [&] { token = peer.round_trip(token); }, opt, res);
    return 0.5 * t.per_op;
}

/// Seconds per float for a bulk transfer of `count` doubles, with the
/// one-byte round-trip time (2L) subtracted.
inline double measure_transfer_per_float(std::size_t count, double latency, const Options &opt = {}) {
    require(count >= 1, "transfer size must be >= 1");
    const double res = detail::resolve(opt);
    const std::vector<double> payload(count, 1.0);
    detail::EchoPeer<std::vector<double>, char> peer([](const std::vector<double> &v) { return v.empty() ? char{0} : char{1}; });
    auto t = detail::time_op("tau_tr", [&] { (void)peer.round_trip(payload); }, opt, res);
    const double per_float = (t.per_op - 2.0 * latency) / static_cast<double>(count);
    if (!(per_float > 0.0)) {
        fail(ErrorKind::calibration_unreliable, "calibration unreliable for tau_tr: transfer time does not exceed latency");
    }
    return per_float;
}

/// Seconds per scalar op from a dependent multiply-add chain of `count`
/// iterations (two ops each).
inline double measure_tau_op(std::size_t count = 1000000, const Options &opt = {}) {
    const double res = detail::resolve(opt);
    volatile double seed_a = 0.999999;
    volatile double seed_b = 1e-7;
    volatile double sink = 0.0;
    auto loop = [&] {
        const double a = seed_a;
        const double b = seed_b;
        double x = sink + 1.0;
        for (std::size_t i = 0; i < count; ++i) {
            x = x * a + b;
        }
        sink = x;
    };
    auto t = detail::time_op("tau_op", loop, opt, res);
    return t.per_op / (2.0 * static_cast<double>(count));
}

inline MachineProfile measure_machine_profile(std::size_t repetitions, std::size_t transfer_floats = 1000000) {
    require(repetitions >= 3, "calibration needs at least 3 repetitions");
    Options opt;
    opt.repetitions = repetitions;
    opt.resolution = timer_resolution();
    MachineProfile m;
    m.latency = measure_latency(opt);
    m.tau_op = measure_tau_op(1000000, opt);
    m.tau_tr = measure_transfer_per_float(transfer_floats, m.latency, opt);
    m.validate();
    return m;
}

/// Cost parameters of `problem` on a one-master, one-worker configuration.
///
/// t_c is a thread round trip carrying the approximation out and a partial
/// fold back; it is not comparable with network round trips.
template <class Elem, class Partial, class Approx>
CostParams calibrate_problem(const ProblemDefinition<Elem, Partial, Approx> &problem, const Options &opt) {
    problem.validate();
    require(opt.repetitions >= 3, "calibration needs at least 3 repetitions");
    const double res = detail::resolve(opt);
    const auto &elements = problem.elements;
    const std::size_t l = elements.size();
    const Approx x = problem.initial;
    const Partial s = fold_block(problem, x, elements);

    // (b) Map over the full list.
    std::optional<Partial> last;
    const double t_map =
        detail::time_op(
            "t_Map",
            [&] {
                for (const auto &a : elements) {
                    last = problem.map_fn(x, a);
                }
            },
            opt, res)
            .per_op;

    // (c) Reduce of l mapped values, cycling over a buffer of real map
    // outputs so the fold is timed on its own.
    std::vector<Partial> buffer;
    for (std::size_t i = 0; i < std::min(opt.chunk, l); ++i) {
        buffer.push_back(problem.map_fn(x, elements[i]));
    }
    CostParams p;
    p.l = l;
    p.t_map = t_map;
    const std::size_t m = buffer.size();
    if (l >= 2) {
        const double t_rdc = detail::time_op(
                                 "t_Rdc",
                                 [&] {
                                     Partial acc = buffer[0];
                                     for (std::size_t i = 1; i < l; ++i) {
                                         acc = problem.combine(std::move(acc), buffer[i % m]);
                                     }
                                     last = std::move(acc);
                                 },
                                 opt, res)
                                 .per_op;
        p.t_a = derive_ta(t_rdc, l);
    } else {
        p.t_a = detail::time_op("t_a", [&] { last = problem.combine(buffer[0], buffer[0]); }, opt, res).per_op;
    }

    // (a) send x out, receive a partial fold back.
    {
        detail::EchoPeer<Approx, Partial> peer([s](const Approx &) { return s; });
        p.t_c = detail::time_op("t_c", [&] { (void)peer.round_trip(x); }, opt, res).per_op;
    }

    // (d) master-side compute and stop check.
    {
        volatile bool sink = false;
        p.t_p = detail::time_op(
                    "t_p",
                    [&] {
                        const Approx next = problem.compute(x, s);
                        sink = problem.stop_cond(next, x);
                    },
                    opt, res)
                    .per_op;
    }

    // (e) one-byte ping-pong.
    p.latency = measure_latency(Options{opt.repetitions, opt.min_sample, opt.max_batch, res, opt.chunk});

    try {
        p.validate();
    } catch (const Error &e) {
        fail(ErrorKind::calibration_unreliable, std::string("calibrated parameters invalid: ") + e.what());
    }
    if (!(p.t_map + p.t_a > 0.0)) {
        fail(ErrorKind::calibration_unreliable, "calibrated parameters invalid: t_Map + t_a is zero");
    }
    return p;
}

} // namespace bsf::calib
