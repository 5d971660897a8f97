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
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bsf/error.hpp"

/// Cost metric of the bulk synchronous farm: one master, K workers, one
/// iteration of Map/Reduce over a list of length l.
///
/// All times are seconds. Every function here is pure.
namespace bsf {

/// Per-iteration cost parameters that do not depend on the worker count.
///
/// The combine cost `t_a` is stored directly; the full-list reduce time is
/// derived as `(l - 1) * t_a`. This keeps `l == 1` representable.
struct CostParams {
    std::size_t l = 1;    ///< list length
    double latency = 0.0; ///< one-byte node-to-node message time (L)
    double t_c = 0.0;     ///< send approximation + receive folding, one worker
    double t_map = 0.0;   ///< Map over the entire list on one worker
    double t_a = 0.0;     ///< one application of the combiner
    double t_p = 0.0;     ///< master post-processing and stop check

    double t_rdc() const noexcept { return static_cast<double>(l - 1) * t_a; }
    double t_comp() const noexcept { return t_map + t_rdc() + t_p; }

    /// Field-level invariants. `t_map + t_a > 0` is checked separately by
    /// scalability_boundary() since violating it means the model does not
    /// apply rather than that a field is malformed.
    void validate() const {
        require(l >= 1, "CostParams.l must be >= 1");
        require(latency > 0.0, "CostParams.L must be > 0");
        require(t_c > 0.0, "CostParams.t_c must be > 0");
        require(t_p > 0.0, "CostParams.t_p must be > 0");
        require(t_map >= 0.0, "CostParams.t_Map must be >= 0");
        require(t_a >= 0.0, "CostParams.t_a must be >= 0");
        require(std::isfinite(latency) && std::isfinite(t_c) && std::isfinite(t_p) && std::isfinite(t_map) &&
                    std::isfinite(t_a),
                "CostParams fields must be finite");
    }
};

/// Primitive machine costs from which per-algorithm CostParams are derived.
struct MachineProfile {
    double tau_op = 0.0;  ///< one scalar arithmetic or comparison op
    double tau_tr = 0.0;  ///< one floating-point number transferred, latency excluded
    double latency = 0.0; ///< one-byte message (L)

    void validate() const {
        require(tau_op > 0.0 && std::isfinite(tau_op), "MachineProfile.tau_op must be > 0");
        require(tau_tr > 0.0 && std::isfinite(tau_tr), "MachineProfile.tau_tr must be > 0");
        require(latency > 0.0 && std::isfinite(latency), "MachineProfile.L must be > 0");
    }
};

/// Combine cost from a measured full-list reduce time.
inline double derive_ta(double t_rdc, std::size_t l) {
    require(l >= 2, "derive_ta needs l >= 2; supply t_a directly for a single-element list");
    require(t_rdc >= 0.0, "t_Rdc must be >= 0");
    return t_rdc / static_cast<double>(l - 1);
}

/// Build parameters from the measured reduce time instead of t_a.
inline CostParams from_reduce_time(std::size_t l, double latency, double t_c, double t_map, double t_rdc, double t_p) {
    CostParams p;
    p.l = l;
    p.latency = latency;
    p.t_c = t_c;
    p.t_map = t_map;
    p.t_a = l >= 2 ? derive_ta(t_rdc, l) : 0.0;
    p.t_p = t_p;
    if (l < 2) {
        require(t_rdc == 0.0, "t_Rdc must be 0 when l == 1");
    }
    return p;
}

/// One master plus one worker: T_1 = t_p + t_c + t_Map + t_Rdc.
///
/// Grouped as (t_p + t_c) + (t_Map + t_Rdc) so that iteration_time(p, 1)
/// reproduces it bit for bit.
inline double iteration_time_single(const CostParams &p) noexcept { return (p.t_p + p.t_c) + (p.t_map + p.t_rdc()); }

inline void check_worker_count(const CostParams &p, std::size_t workers) {
    require(workers >= 1, "worker count K must be >= 1");
    require(workers <= p.l, "worker count K=" + std::to_string(workers) + " exceeds list length l=" +
                                std::to_string(p.l));
}

/// T_K with a log-depth broadcast/reduce. log2 is real-valued for any K.
inline double iteration_time(const CostParams &p, std::size_t workers) {
    check_worker_count(p, workers);
    const double k = static_cast<double>(workers);
    const double l = static_cast<double>(p.l);
    return ((k - 1.0) * p.t_a + p.t_p) + (std::log2(k) + 1.0) * p.t_c + (p.t_map + (l - k) * p.t_a) / k;
}

/// a(K) = T_1 / T_K.
inline double predicted_speedup(const CostParams &p, std::size_t workers) {
    return iteration_time_single(p) / iteration_time(p, workers);
}

/// da/dK in closed form, numerator and denominator multiplied through by K^2.
inline double speedup_derivative(const CostParams &p, double workers) noexcept {
    const double k = workers;
    const double l = static_cast<double>(p.l);
    const double t1 = p.t_p + p.t_c + p.t_map + (l - 1.0) * p.t_a;
    const double numer = t1 * (-p.t_a * k * k - k * p.t_c / std::numbers::ln2 + p.t_map + l * p.t_a);
    const double kt = k * (k - 1.0) * p.t_a + k * p.t_p + k * (std::log2(k) + 1.0) * p.t_c + p.t_map + (l - k) * p.t_a;
    return numer / (kt * kt);
}

/// Coefficients of a_q K^2 + b_q K - c_q = 0, whose positive root is the
/// stationary point of a(K). Exposed for residual checks.
struct BoundaryQuadratic {
    double a_q;
    double b_q;
    double c_q;

    double residual(double k) const noexcept { return a_q * k * k + b_q * k - c_q; }
};

inline BoundaryQuadratic boundary_quadratic(const CostParams &p) noexcept {
    return {p.t_a, p.t_c / std::numbers::ln2, p.t_map + static_cast<double>(p.l) * p.t_a};
}

/// Real-valued worker count K0 at which a(K) peaks. Independent of t_p.
///
/// Evaluated as 2c / (b + sqrt(b^2 + 4ac)), which is the positive root without
/// cancellation and reduces to the linear root c / b when t_a == 0.
inline double scalability_boundary(const CostParams &p) {
    if (!(p.t_map + p.t_a > 0.0)) {
        fail(ErrorKind::model_inapplicable,
             "t_Map + t_a must be > 0: communication-dominated workloads are outside the model");
    }
    require(p.t_c > 0.0, "CostParams.t_c must be > 0");
    const auto q = boundary_quadratic(p);
    return 2.0 * q.c_q / (q.b_q + std::sqrt(q.b_q * q.b_q + 4.0 * q.a_q * q.c_q));
}

/// Round half up; the real boundary is kept by callers.
inline std::size_t round_boundary(double k0) noexcept {
    const double r = std::floor(k0 + 0.5);
    return r < 1.0 ? std::size_t{1} : static_cast<std::size_t>(r);
}

/// Computation-to-communication ratio (t_Map + (l-1) t_a + t_p) / t_c.
inline double comp_comm_ratio(const CostParams &p) {
    require(p.t_c > 0.0, "CostParams.t_c must be > 0");
    return (p.t_map + p.t_rdc() + p.t_p) / p.t_c;
}

/// |K_test - K_BSF| / max(K_test, K_BSF), always in [0, 1].
inline double prediction_error(std::size_t k_test, std::size_t k_bsf) {
    require(k_test >= 1 && k_bsf >= 1, "prediction_error needs positive worker counts");
    const double a = static_cast<double>(k_test);
    const double b = static_cast<double>(k_bsf);
    return std::fabs(a - b) / std::max(a, b);
}

struct CurvePoint {
    std::size_t workers = 1;
    double predicted = 0.0;
    std::optional<double> measured;
};

struct SpeedupCurve {
    std::vector<CurvePoint> points;
    double boundary_pred = 0.0;
    std::optional<std::size_t> boundary_meas;
};

inline void check_worker_list(std::span<const std::size_t> workers) {
    require(!workers.empty(), "worker list must be nonempty");
    for (std::size_t i = 0; i < workers.size(); ++i) {
        require(workers[i] >= 1, "worker counts must be >= 1");
        if (i > 0) {
            require(workers[i] > workers[i - 1], "worker counts must be strictly increasing");
        }
    }
}

inline SpeedupCurve speedup_curve(const CostParams &p, std::span<const std::size_t> workers) {
    check_worker_list(workers);
    SpeedupCurve curve;
    curve.points.reserve(workers.size());
    for (auto k : workers) {
        curve.points.push_back({k, predicted_speedup(p, k), std::nullopt});
    }
    curve.boundary_pred = scalability_boundary(p);
    return curve;
}

} // namespace bsf
