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

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "bsf/core.hpp"
#include "bsf/cost_model.hpp"
#include "bsf/error.hpp"

/// A small body moving among n motionless attractors.
namespace bsf::gravity {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3 &a, const Vec3 &b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3 &a, const Vec3 &b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3 &a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3 &a, const Vec3 &b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

struct Body {
    Vec3 position{};
    double mass = 1.0;
};

struct GravityProblem {
    std::vector<Body> bodies;
    Vec3 x0{};
    Vec3 v0{};
    double t0 = 0.0;
    double t_end = 1.0;
    double eta = 1.0;
    double g_const = 1.0;
    double m_x = 1.0;                ///< cancels out of the acceleration
    double min_distance = 1e-12;     ///< closer than this is a singularity error
    std::size_t step_limit = 0;      ///< 0 = stop on t >= t_end only

    void validate() const {
        require(!bodies.empty(), "gravity problem needs at least one body");
        for (const auto &b : bodies) {
            require(b.mass > 0.0, "body masses must be > 0");
        }
        require(t_end >= t0, "end time must not precede start time");
        require(eta > 0.0, "eta must be > 0");
        require(m_x > 0.0, "small-body mass must be > 0");
    }
};

/// Master-side state carried between iterations.
struct State {
    Vec3 x{};
    Vec3 v{};
    double t = 0.0;
    std::size_t steps = 0;
};

/// G m_i / |Y_i - X|^2 * (Y_i - X): the displacement vector scaled by 1/r^2,
/// so the magnitude falls off as 1/r.
inline Vec3 gravity_force(const Vec3 &x, const Vec3 &y, double mass, double g_const, double min_distance = 1e-12) {
    const Vec3 r = y - x;
    const double r2 = dot(r, r);
    if (!(std::sqrt(r2) >= min_distance)) {
        fail(ErrorKind::invalid_parameter, "gravity singularity: body closer than the minimum distance");
    }
    return (g_const * mass / r2) * r;
}

/// Semi-implicit Euler: the position update uses the new velocity.
inline std::pair<Vec3, Vec3> gravity_step(const Vec3 &x, const Vec3 &v, const Vec3 &alpha, double dt) {
    require(dt > 0.0, "time step must be > 0");
    const Vec3 v_next = v + dt * alpha;
    return {x + dt * v_next, v_next};
}

/// eta / (|V|^2 |alpha|^4)
inline double gravity_delta_t(const Vec3 &v, const Vec3 &alpha, double eta) {
    const double v2 = dot(v, v);
    const double a2 = dot(alpha, alpha);
    if (v2 == 0.0 || a2 == 0.0) {
        fail(ErrorKind::invalid_parameter, "degenerate time step: zero velocity or zero acceleration");
    }
    return eta / (v2 * a2 * a2);
}

/// t_c = 6 tau_tr + 2L, t_Map = 17 n tau_op, t_a = 3 tau_op, l = n.
/// t_p defaults to 26 tau_op: 13 ops for the step size plus about as many
/// for the velocity, position and time updates.
inline CostParams gravity_cost_model(std::size_t n, const MachineProfile &profile,
                                     std::optional<double> t_p = std::nullopt) {
    require(n >= 1, "gravity cost model needs n >= 1");
    require(profile.tau_op > 0.0 && profile.tau_tr >= 0.0 && profile.latency >= 0.0, "invalid machine profile");
    CostParams p;
    p.l = n;
    p.latency = profile.latency;
    p.t_c = 6.0 * profile.tau_tr + 2.0 * profile.latency;
    p.t_map = 17.0 * static_cast<double>(n) * profile.tau_op;
    p.t_a = 3.0 * profile.tau_op;
    p.t_p = t_p.value_or(26.0 * profile.tau_op);
    return p;
}

/// n bodies uniform in [-1, 1]^3 with masses uniform in [1, 10].
inline std::vector<Body> generate_bodies(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::uniform_real_distribution<double> mass(1.0, 10.0);
    std::vector<Body> bodies(n);
    for (auto &b : bodies) {
        b.position = {coord(rng), coord(rng), coord(rng)};
        b.mass = mass(rng);
    }
    return bodies;
}

/// eta giving a first step of `dt0` from the problem's initial state.
inline double eta_for_first_step(const GravityProblem &g, double dt0) {
    require(dt0 > 0.0, "initial step must be > 0");
    Vec3 alpha{};
    for (const auto &b : g.bodies) {
        alpha = alpha + gravity_force(g.x0, b.position, b.mass, g.g_const, g.min_distance);
    }
    const double a2 = dot(alpha, alpha);
    return dt0 * dot(g.v0, g.v0) * a2 * a2;
}

/// Problem with the defaults used by the command-line tool: X0 = (5, 0, 0),
/// V0 = (0, 1, 0), 100 steps, eta chosen for a first step of 1e-3.
inline GravityProblem default_problem(std::vector<Body> bodies) {
    GravityProblem g;
    g.bodies = std::move(bodies);
    g.x0 = {5.0, 0.0, 0.0};
    g.v0 = {0.0, 1.0, 0.0};
    g.t_end = std::numeric_limits<double>::infinity();
    g.step_limit = 100;
    if (!g.bodies.empty()) {
        g.eta = eta_for_first_step(g, 1e-3);
    }
    return g;
}

using BsfProblem = ProblemDefinition<Body, Vec3, State>;

/// Map f_X over the bodies, vector-add fold, then step size, velocity,
/// position and time updates on the master. Stops once t >= T (or after
/// step_limit steps); a problem with T == t0 performs no iterations.
inline BsfProblem as_bsf_problem(const GravityProblem &problem, std::size_t max_iterations = 1000000) {
    problem.validate();
    BsfProblem out;
    out.elements = problem.bodies;
    out.map_fn = [g = problem.g_const, dmin = problem.min_distance](const State &s, const Body &b) {
        return gravity_force(s.x, b.position, b.mass, g, dmin);
    };
    out.combine = [](Vec3 acc, const Vec3 &rhs) { return acc + rhs; };
    out.compute = [eta = problem.eta](const State &s, const Vec3 &alpha) {
        const double dt = gravity_delta_t(s.v, alpha, eta);
        auto [x, v] = gravity_step(s.x, s.v, alpha, dt);
        return State{x, v, s.t + dt, s.steps + 1};
    };
    out.stop_cond = [t_end = problem.t_end, limit = problem.step_limit](const State &next, const State &) {
        return next.t >= t_end || (limit > 0 && next.steps >= limit);
    };
    out.done_at_start = [t_end = problem.t_end](const State &s) { return s.t >= t_end; };
    out.initial = State{problem.x0, problem.v0, problem.t0, 0};
    out.max_iterations = max_iterations;
    return out;
}

} // namespace bsf::gravity
