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
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "bsf/bsf.hpp"

/// Command-line front end. run() is the whole program; main() only forwards
/// argv so tests can drive every subcommand in-process.
namespace bsf::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_validation = 2,
    exit_non_convergence = 3,
    exit_calibration = 4,
    exit_runtime = 5,
};

inline int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::usage:
        return exit_usage;
    case ErrorKind::invalid_parameter:
    case ErrorKind::parse:
    case ErrorKind::model_inapplicable:
    case ErrorKind::comparison:
        return exit_validation;
    case ErrorKind::non_convergence:
        return exit_non_convergence;
    case ErrorKind::calibration_unreliable:
        return exit_calibration;
    case ErrorKind::worker_failure:
        return exit_runtime;
    }
    return exit_runtime;
}

inline constexpr const char *max_workers_env = "BSF_MAX_WORKERS";

/// Worker-thread ceiling: flag, then environment, then hardware threads.
inline std::size_t worker_cap(std::optional<std::size_t> flag) {
    if (flag) {
        return *flag;
    }
    if (const char *env = std::getenv(max_workers_env)) {
        std::size_t v = 0;
        if (!io::parse_size(env, v) || v == 0) {
            fail(ErrorKind::usage, std::string(max_workers_env) + " must be a positive integer");
        }
        return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct ProblemOptions {
    std::string name;
    std::size_t n = 0;
    std::optional<std::uint64_t> seed;
    double epsilon = 1e-20;
    double work_us = 100.0;
    std::int64_t iterations = 20;
    std::string bodies_csv;
    std::size_t steps = 100;
    std::optional<double> eta; ///< default: first step of 1e-3
    std::optional<std::size_t> max_iterations;
};

inline std::vector<gravity::Body> load_bodies(const std::string &path) {
    const auto table = io::read_csv(path, io::bodies_header, /*header_optional=*/true);
    std::vector<gravity::Body> bodies;
    bodies.reserve(table.rows.size());
    for (const auto &r : table.rows) {
        bodies.push_back({{r[0], r[1], r[2]}, r[3]});
    }
    return bodies;
}

/// Build the named workload and call fn(problem, system) where `system` is
/// the Jacobi linear system or nullptr.
template <class F> void with_problem(const ProblemOptions &o, F &&fn) {
    auto need_seed = [&] {
        if (!o.seed) {
            fail(ErrorKind::usage, "problem '" + o.name + "' is randomized and needs --seed");
        }
        return *o.seed;
    };
    if (o.name == "jacobi" || o.name == "jacobi-test") {
        const auto sys = o.name == "jacobi" ? jacobi::random_dominant_system(o.n, need_seed())
                                            : jacobi::jacobi_test_system(o.n);
        auto problem = jacobi::as_bsf_problem(jacobi::build_jacobi(sys, o.epsilon));
        if (o.max_iterations) {
            problem.max_iterations = *o.max_iterations;
        }
        fn(std::as_const(problem), &sys);
    } else if (o.name == "gravity") {
        std::vector<gravity::Body> bodies;
        if (!o.bodies_csv.empty()) {
            bodies = load_bodies(o.bodies_csv);
            if (o.n != 0 && o.n != bodies.size()) {
                fail(ErrorKind::usage, "--n disagrees with the number of bodies in " + o.bodies_csv);
            }
        } else {
            bodies = gravity::generate_bodies(o.n, need_seed());
        }
        auto g = gravity::default_problem(std::move(bodies));
        if (o.eta) {
            g.eta = *o.eta;
        }
        g.step_limit = o.steps;
        auto problem = gravity::as_bsf_problem(g);
        if (o.max_iterations) {
            problem.max_iterations = *o.max_iterations;
        }
        fn(std::as_const(problem), static_cast<const jacobi::LinearSystem *>(nullptr));
    } else if (o.name == "synthetic") {
        require(o.work_us >= 0.0, "--work-us must be >= 0");
        const auto problem = synthetic::busy_work(o.n, o.work_us * 1e-6, o.iterations);
        fn(problem, static_cast<const jacobi::LinearSystem *>(nullptr));
    } else {
        fail(ErrorKind::usage, "unknown problem '" + o.name + "'");
    }
}

inline void add_problem_options(CLI::App *cmd, ProblemOptions &o) {
    cmd->add_option("--problem", o.name, "jacobi | jacobi-test | gravity | synthetic")->required();
    cmd->add_option("--n", o.n, "problem size: dimension, body count or list length");
    cmd->add_option("--seed", o.seed, "seed for randomized workloads (required for jacobi and generated gravity)");
    cmd->add_option("--epsilon", o.epsilon, "Jacobi stop threshold on the squared step norm")->capture_default_str();
    cmd->add_option("--work-us", o.work_us, "synthetic: busy work per element, microseconds")->capture_default_str();
    cmd->add_option("--iterations", o.iterations, "synthetic: iteration count")->capture_default_str();
    cmd->add_option("--bodies", o.bodies_csv, "gravity: CSV of x,y,z,mass rows instead of generated bodies");
    cmd->add_option("--steps", o.steps, "gravity: number of time steps")->capture_default_str();
    cmd->add_option("--max-iterations", o.max_iterations, "jacobi, gravity: iteration limit before giving up");
    cmd->add_option("--eta", o.eta, "gravity: step-size constant (default: first step of 1e-3)");
}

inline void check_size(const ProblemOptions &o) {
    if (o.name == "gravity" && !o.bodies_csv.empty()) {
        return;
    }
    if (o.n == 0) {
        fail(ErrorKind::usage, "--n is required and must be >= 1");
    }
}

inline std::string report_boundary(double k0) {
    return "K_BSF = " + io::format_double(k0) + " (rounded " + std::to_string(round_boundary(k0)) + ")";
}

/// Argmax of column `col`, smallest K on ties.
inline std::size_t argmax_k(const io::CsvTable &t, std::size_t col) {
    std::size_t best_k = 0;
    double best = -1.0;
    for (const auto &r : t.rows) {
        if (r[col] > best) {
            best = r[col];
            best_k = static_cast<std::size_t>(r[0]);
        }
    }
    return best_k;
}

inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Bulk synchronous farm cost model and master/worker runner", "bsf"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a TOML/INI config file");

    // analyze
    std::string a_params, a_profile, a_out, a_k;
    ProblemOptions a_prob;
    std::optional<double> a_tp;
    auto *analyze = app.add_subcommand("analyze", "predict speedup and the scalability boundary");
    analyze->add_option("--params", a_params, "cost parameter file");
    analyze->add_option("--problem", a_prob.name, "jacobi | gravity: derive parameters analytically");
    analyze->add_option("--n", a_prob.n, "problem size for --problem");
    analyze->add_option("--profile", a_profile, "machine profile file for --problem");
    analyze->add_option("--t-p", a_tp, "override the analytic t_p");
    analyze->add_option("--k", a_k, "worker counts, e.g. 1..64 or 1..200 step 5 (default 1..2*K_BSF)");
    analyze->add_option("--out", a_out, "CSV output (default stdout)");

    // calibrate
    ProblemOptions c_prob;
    std::size_t c_reps = 5;
    std::string c_out, c_profile_out;
    auto *calibrate = app.add_subcommand("calibrate", "measure cost parameters on this host");
    add_problem_options(calibrate, c_prob);
    calibrate->add_option("--repetitions", c_reps, "timed samples per quantity (>= 3)")->capture_default_str();
    calibrate->add_option("--out", c_out, "parameter file to write")->required();
    calibrate->add_option("--profile-out", c_profile_out, "also measure and write the machine profile");

    // run
    ProblemOptions r_prob;
    std::string r_k, r_out;
    std::size_t r_reps = 3;
    std::optional<std::size_t> r_cap;
    auto *run_cmd = app.add_subcommand("run", "measure speedup of the parallel executor");
    add_problem_options(run_cmd, r_prob);
    run_cmd->add_option("--k", r_k, "worker counts, must include 1")->required();
    run_cmd->add_option("--repetitions", r_reps, "runs per worker count (median)")->capture_default_str();
    run_cmd->add_option("--max-workers", r_cap, std::string("worker ceiling (default $") + max_workers_env +
                                                    " or hardware threads)");
    run_cmd->add_option("--out", r_out, "CSV output (default stdout)");

    // compare
    std::string m_pred, m_meas, m_out, m_chart, m_params;
    auto *compare = app.add_subcommand("compare", "join predicted and measured curves");
    compare->add_option("--predicted", m_pred, "CSV K,speedup_predicted")->required();
    compare->add_option("--measured", m_meas, "CSV K,T_K_seconds,speedup_measured")->required();
    compare->add_option("--params", m_params, "parameter file: K_BSF from the model instead of the curve argmax");
    compare->add_option("--out", m_out, "joined CSV output (default stdout)");
    compare->add_option("--chart", m_chart, "SVG chart output");

    // simulate
    std::string s_params;
    std::size_t s_k = 1;
    auto *simulate = app.add_subcommand("simulate", "cost breakdown of one iteration");
    simulate->add_option("--params", s_params, "cost parameter file")->required();
    simulate->add_option("--k", s_k, "worker count")->required();

    // profile
    std::size_t p_reps = 5;
    std::string p_out;
    auto *profile = app.add_subcommand("profile", "measure tau_op, tau_tr and L on this host");
    profile->add_option("--repetitions", p_reps, "timed samples per quantity (>= 3)")->capture_default_str();
    profile->add_option("--out", p_out, "profile file to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    // Report lines go to stderr when the CSV occupies stdout.
    auto emit_csv = [&](const std::string &path, const std::string &csv) -> std::ostream & {
        if (path.empty()) {
            out << csv;
            return err;
        }
        io::write_file(path, csv);
        return out;
    };

    try {
        if (analyze->parsed()) {
            CostParams p;
            if (!a_params.empty()) {
                p = io::read_cost_params(a_params);
            } else if (!a_prob.name.empty()) {
                if (a_profile.empty() || a_prob.n == 0) {
                    fail(ErrorKind::usage, "--problem needs --n and --profile");
                }
                const auto m = io::read_machine_profile(a_profile);
                if (a_prob.name == "jacobi") {
                    p = jacobi::jacobi_cost_model(a_prob.n, m, a_tp);
                } else if (a_prob.name == "gravity") {
                    p = gravity::gravity_cost_model(a_prob.n, m, a_tp);
                } else {
                    fail(ErrorKind::usage, "analyze supports --problem jacobi or gravity");
                }
                p.validate();
            } else {
                fail(ErrorKind::usage, "analyze needs --params or --problem");
            }
            const double k0 = scalability_boundary(p);
            std::vector<std::size_t> ks;
            if (a_k.empty()) {
                const auto hi = std::clamp<std::size_t>(2 * round_boundary(k0), 2, p.l);
                for (std::size_t k = 1; k <= hi; ++k) {
                    ks.push_back(k);
                }
            } else {
                ks = io::parse_worker_list(a_k);
            }
            const auto curve = speedup_curve(p, ks);
            io::CsvTable t{std::string(io::predicted_header), {}};
            for (const auto &pt : curve.points) {
                t.rows.push_back({static_cast<double>(pt.workers), pt.predicted});
            }
            auto &report = emit_csv(a_out, io::format_csv(t));
            report << report_boundary(k0) << "\n";
            report << "T_1 = " << io::format_double(iteration_time_single(p)) << " s\n";
            report << "comp/comm = " << io::format_double(comp_comm_ratio(p)) << "\n";
            return exit_ok;
        }

        if (calibrate->parsed()) {
            if (c_reps < 3) {
                fail(ErrorKind::usage, "--repetitions must be >= 3");
            }
            check_size(c_prob);
            CostParams p;
            with_problem(c_prob, [&](const auto &problem, const jacobi::LinearSystem *) {
                calib::Options opt;
                opt.repetitions = c_reps;
                p = calib::calibrate_problem(problem, opt);
            });
            std::optional<MachineProfile> m;
            if (!c_profile_out.empty()) {
                m = calib::measure_machine_profile(c_reps);
            }
            io::write_file(c_out, io::format_cost_params(p));
            if (m) {
                io::write_file(c_profile_out, io::format_machine_profile(*m));
            }
            out << "wrote " << c_out << "\n";
            out << "comp/comm = " << io::format_double(comp_comm_ratio(p)) << "\n";
            out << report_boundary(scalability_boundary(p)) << "\n";
            return exit_ok;
        }

        if (run_cmd->parsed()) {
            check_size(r_prob);
            const auto ks = io::parse_worker_list(r_k);
            if (ks.front() != 1) {
                fail(ErrorKind::usage, "--k must include 1 as the speedup baseline");
            }
            if (r_reps < 1) {
                fail(ErrorKind::usage, "--repetitions must be >= 1");
            }
            const std::size_t cap = worker_cap(r_cap);
            std::string report_text;
            io::CsvTable t{std::string(io::measured_header), {}};
            with_problem(r_prob, [&](const auto &problem, const jacobi::LinearSystem *sys) {
                const std::size_t limit = std::min(problem.elements.size(), cap);
                if (ks.back() > limit) {
                    fail(ErrorKind::usage, "worker count " + std::to_string(ks.back()) + " exceeds min(n, cap) = " +
                                               std::to_string(limit));
                }
                double worst_residual = 0.0;
                using Approx = typename std::decay_t<decltype(problem)>::approx_type;
                std::function<void(const RunMeasurement<Approx> &)> sink;
                if (sys != nullptr) {
                    if constexpr (std::is_same_v<Approx, jacobi::Vector>) {
                        sink = [&](const RunMeasurement<Approx> &m) {
                            worst_residual = std::max(worst_residual, jacobi::residual_inf(*sys, m.result));
                        };
                    }
                }
                const auto curve = measure_speedup(problem, ks, r_reps, sink);
                for (const auto &pt : curve.points) {
                    t.rows.push_back({static_cast<double>(pt.workers), pt.time, pt.speedup});
                }
                report_text += "K_test = " + std::to_string(curve.k_test) + "\n";
                if (sys != nullptr) {
                    report_text += "residual = " + io::format_double(worst_residual) + "\n";
                }
            });
            emit_csv(r_out, io::format_csv(t)) << report_text;
            return exit_ok;
        }

        if (compare->parsed()) {
            const auto pred = io::read_csv(m_pred, io::predicted_header);
            const auto meas = io::read_csv(m_meas, io::measured_header);
            std::map<std::size_t, double> predicted;
            for (const auto &r : pred.rows) {
                predicted[static_cast<std::size_t>(r[0])] = r[1];
            }
            io::CsvTable joined{std::string(io::compare_header), {}};
            for (const auto &r : meas.rows) {
                if (auto it = predicted.find(static_cast<std::size_t>(r[0])); it != predicted.end()) {
                    joined.rows.push_back({r[0], r[2], it->second});
                }
            }
            if (joined.rows.size() < 2) {
                fail(ErrorKind::comparison, "predicted and measured curves share fewer than two K values");
            }
            const std::size_t k_test = argmax_k(meas, 2);
            double k0 = static_cast<double>(argmax_k(pred, 1));
            if (!m_params.empty()) {
                k0 = scalability_boundary(io::read_cost_params(m_params));
            }
            const std::size_t k_bsf = round_boundary(k0);
            auto &report = emit_csv(m_out, io::format_csv(joined));
            report << "K_test = " << k_test << "\n";
            report << "K_BSF = " << k_bsf << "\n";
            report << "Error = " << io::format_double(prediction_error(k_test, k_bsf)) << "\n";
            if (!m_chart.empty()) {
                io::Series measured{"measured", "#1f77b4", {}};
                io::Series predicted_series{"predicted", "#d62728", {}};
                for (const auto &r : meas.rows) {
                    measured.points.emplace_back(r[0], r[2]);
                }
                for (const auto &r : pred.rows) {
                    predicted_series.points.emplace_back(r[0], r[1]);
                }
                io::write_file(m_chart, io::speedup_chart_svg("speedup", {measured, predicted_series}, k0));
            }
            return exit_ok;
        }

        if (simulate->parsed()) {
            const auto p = io::read_cost_params(s_params);
            const auto b = sim::simulate_iteration(p, s_k);
            io::CsvTable t{std::string(io::breakdown_header),
                           {{b.master_reduce, b.master_post, b.comm, b.worker_map, b.worker_reduce, b.total}}};
            out << io::format_csv(t);
            return exit_ok;
        }

        if (profile->parsed()) {
            if (p_reps < 3) {
                fail(ErrorKind::usage, "--repetitions must be >= 3");
            }
            const auto m = calib::measure_machine_profile(p_reps);
            io::write_file(p_out, io::format_machine_profile(m));
            out << io::format_machine_profile(m);
            return exit_ok;
        }
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_usage;
}

} // namespace bsf::cli
