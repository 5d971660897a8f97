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
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "bsf/core.hpp"
#include "bsf/cost_model.hpp"
#include "bsf/error.hpp"

namespace bsf::jacobi {

/// Dense system A x = b, A stored row-major.
struct LinearSystem {
    std::size_t n = 0;
    std::vector<double> a;
    std::vector<double> b;

    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
    double &at(std::size_t i, std::size_t j) { return a[i * n + j]; }

    static LinearSystem zeros(std::size_t n) { return {n, std::vector<double>(n * n, 0.0), std::vector<double>(n, 0.0)}; }
};

/// Iteration x' = C x + d with C stored by columns.
struct JacobiProblem {
    std::size_t n = 0;
    std::vector<double> c; ///< column-major: c[j * n + i] = c_ij
    std::vector<double> d;
    double epsilon = 0.0; ///< threshold on the squared Euclidean step norm

    std::span<const double> column(std::size_t j) const { return {c.data() + j * n, n}; }
    double at(std::size_t i, std::size_t j) const { return c[j * n + i]; }
};

/// Map element: column index j and the column c_j it scales.
struct Column {
    std::size_t j = 0;
    std::vector<double> values;
};

using Vector = std::vector<double>;
using BsfProblem = ProblemDefinition<Column, Vector, Vector>;

inline JacobiProblem build_jacobi(const LinearSystem &sys, double epsilon) {
    require(sys.n >= 1 && sys.a.size() == sys.n * sys.n && sys.b.size() == sys.n, "malformed linear system");
    require(epsilon > 0.0, "epsilon must be > 0");
    JacobiProblem out{sys.n, std::vector<double>(sys.n * sys.n, 0.0), std::vector<double>(sys.n), epsilon};
    for (std::size_t i = 0; i < sys.n; ++i) {
        const double diag = sys.at(i, i);
        if (diag == 0.0) {
            fail(ErrorKind::invalid_parameter, "zero diagonal entry in row " + std::to_string(i));
        }
        for (std::size_t j = 0; j < sys.n; ++j) {
            out.c[j * sys.n + i] = j == i ? 0.0 : -sys.at(i, j) / diag;
        }
        out.d[i] = sys.b[i] / diag;
    }
    return out;
}

/// |a_ii| >= sum_{j != i} |a_ij| for every row, strictly for at least one.
inline bool check_diagonal_dominance(const LinearSystem &sys) {
    bool strict = false;
    for (std::size_t i = 0; i < sys.n; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < sys.n; ++j) {
            if (j != i) {
                off += std::fabs(sys.at(i, j));
            }
        }
        const double diag = std::fabs(sys.at(i, i));
        if (diag < off) {
            return false;
        }
        strict = strict || diag > off;
    }
    return strict;
}

/// F_x(j) = x_j * c_j.
inline Vector jacobi_map(std::span<const double> x, std::size_t j, const JacobiProblem &problem) {
    require(x.size() == problem.n, "approximation has wrong dimension");
    require(j < problem.n, "column index " + std::to_string(j) + " out of range");
    const auto col = problem.column(j);
    Vector out(problem.n);
    for (std::size_t i = 0; i < problem.n; ++i) {
        out[i] = x[j] * col[i];
    }
    return out;
}

/// The scalable benchmark system with solution (1, ..., 1): off-diagonal
/// entries 1, a_ii = i and b_i = n + i - 1 (1-based). Not diagonally dominant
/// for n > 2, so it is a cost workload rather than a convergence test.
inline LinearSystem jacobi_test_system(std::size_t n) {
    require(n >= 2, "test system needs n >= 2");
    auto sys = LinearSystem::zeros(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            sys.at(i, j) = i == j ? static_cast<double>(i + 1) : 1.0;
        }
        sys.b[i] = static_cast<double>(n + i);
    }
    return sys;
}

/// Seeded strictly diagonally dominant system: off-diagonals in [-1, 1],
/// diagonal = row off-diagonal sum + [1, 2], b in [-10, 10].
inline LinearSystem random_dominant_system(std::size_t n, std::uint64_t seed) {
    require(n >= 1, "system needs n >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> off(-1.0, 1.0);
    std::uniform_real_distribution<double> margin(1.0, 2.0);
    std::uniform_real_distribution<double> rhs(-10.0, 10.0);
    auto sys = LinearSystem::zeros(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                sys.at(i, j) = off(rng);
                sum += std::fabs(sys.at(i, j));
            }
        }
        sys.at(i, i) = sum + margin(rng);
        sys.b[i] = rhs(rng);
    }
    return sys;
}

/// max_i |(A x - b)_i|
inline double residual_inf(const LinearSystem &sys, std::span<const double> x) {
    double worst = 0.0;
    for (std::size_t i = 0; i < sys.n; ++i) {
        double r = -sys.b[i];
        for (std::size_t j = 0; j < sys.n; ++j) {
            r += sys.at(i, j) * x[j];
        }
        worst = std::max(worst, std::fabs(r));
    }
    return worst;
}

/// t_c = 2(n tau_tr + L), t_Map = n^2 tau_op, t_a = n tau_op, l = n.
/// t_p defaults to 2n tau_op for the squared-norm stop check.
inline CostParams jacobi_cost_model(std::size_t n, const MachineProfile &profile,
                                    std::optional<double> t_p = std::nullopt) {
    require(n >= 2, "Jacobi cost model needs n >= 2");
    require(profile.tau_op > 0.0 && profile.tau_tr >= 0.0 && profile.latency >= 0.0, "invalid machine profile");
    const double dn = static_cast<double>(n);
    CostParams p;
    p.l = n;
    p.latency = profile.latency;
    p.t_c = 2.0 * (dn * profile.tau_tr + profile.latency);
    p.t_map = dn * dn * profile.tau_op;
    p.t_a = dn * profile.tau_op;
    p.t_p = t_p.value_or(2.0 * dn * profile.tau_op);
    return p;
}

/// Map over column elements, vector-add fold, x' = s + d, stop when the
/// squared step norm drops below epsilon. Starts from x(0) = d.
inline BsfProblem as_bsf_problem(const JacobiProblem &problem, std::size_t max_iterations = 100000) {
    BsfProblem out;
    out.elements.reserve(problem.n);
    for (std::size_t j = 0; j < problem.n; ++j) {
        const auto col = problem.column(j);
        out.elements.push_back({j, Vector(col.begin(), col.end())});
    }
    out.map_fn = [](const Vector &x, const Column &col) {
        Vector v(col.values.size());
        const double xj = x[col.j];
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = xj * col.values[i];
        }
        return v;
    };
    out.combine = [](Vector acc, const Vector &rhs) {
        for (std::size_t i = 0; i < acc.size(); ++i) {
            acc[i] += rhs[i];
        }
        return acc;
    };
    out.compute = [d = problem.d](const Vector &, const Vector &s) {
        Vector next(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            next[i] = s[i] + d[i];
        }
        return next;
    };
    out.stop_cond = [eps = problem.epsilon](const Vector &next, const Vector &prev) {
        double sq = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            const double diff = next[i] - prev[i];
            sq += diff * diff;
        }
        return sq < eps;
    };
    out.initial = problem.d;
    out.max_iterations = max_iterations;
    return out;
}

} // namespace bsf::jacobi
