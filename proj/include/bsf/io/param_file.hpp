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
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bsf/cost_model.hpp"
#include "bsf/error.hpp"
#include "bsf/io/text.hpp"

/// `key = value` parameter files. Blank lines and `#` comments are ignored;
/// unknown or repeated keys are parse errors.
///
///     # cost parameters, seconds
///     l     = 10000
///     L     = 1.5e-5
///     t_c   = 2.17e-3
///     t_Map = 3.73e-1
///     t_a   = 9.31e-6
///     t_p   = 3.70e-5
///
/// Cost files give the combine cost as `t_Rdc`, `t_a`, or both (they must
/// agree). Profile files use `tau_op`, `tau_tr` and `L`.
namespace bsf::io {

struct Entry {
    std::string value;
    std::size_t line = 0;
};

inline std::map<std::string, Entry> parse_key_values(std::string_view text, const std::set<std::string> &allowed,
                                                     const std::string &source) {
    std::map<std::string, Entry> out;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        const auto where = source + ":" + std::to_string(line_no) + ": ";
        if (eq == std::string_view::npos) {
            fail(ErrorKind::parse, where + "expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!allowed.contains(key)) {
            fail(ErrorKind::parse, where + "unknown key '" + key + "'");
        }
        if (out.contains(key)) {
            fail(ErrorKind::parse, where + "duplicate key '" + key + "'");
        }
        if (value.empty()) {
            fail(ErrorKind::parse, where + "missing value for '" + key + "'");
        }
        out[key] = {value, line_no};
    }
    return out;
}

namespace detail {

inline double number(const std::map<std::string, Entry> &kv, const std::string &key, const std::string &source) {
    const auto it = kv.find(key);
    if (it == kv.end()) {
        fail(ErrorKind::parse, source + ": missing key '" + key + "'");
    }
    double v = 0.0;
    if (!parse_double(it->second.value, v)) {
        fail(ErrorKind::parse,
             source + ":" + std::to_string(it->second.line) + ": '" + it->second.value + "' is not a number");
    }
    return v;
}

} // namespace detail

inline CostParams parse_cost_params(std::string_view text, const std::string &source = "<params>") {
    const auto kv = parse_key_values(text, {"l", "L", "t_c", "t_Map", "t_Rdc", "t_a", "t_p"}, source);
    CostParams p;
    {
        const auto it = kv.find("l");
        if (it == kv.end()) {
            fail(ErrorKind::parse, source + ": missing key 'l'");
        }
        if (!parse_size(it->second.value, p.l)) {
            fail(ErrorKind::parse, source + ":" + std::to_string(it->second.line) + ": 'l' must be a positive integer");
        }
    }
    p.latency = detail::number(kv, "L", source);
    p.t_c = detail::number(kv, "t_c", source);
    p.t_map = detail::number(kv, "t_Map", source);
    p.t_p = detail::number(kv, "t_p", source);
    const bool has_ta = kv.contains("t_a");
    const bool has_rdc = kv.contains("t_Rdc");
    if (!has_ta && !has_rdc) {
        fail(ErrorKind::parse, source + ": one of 't_a' or 't_Rdc' is required");
    }
    require(p.l >= 1, "CostParams.l must be >= 1");
    if (has_ta) {
        p.t_a = detail::number(kv, "t_a", source);
    }
    if (has_rdc) {
        const double t_rdc = detail::number(kv, "t_Rdc", source);
        require(t_rdc >= 0.0, "CostParams.t_Rdc must be >= 0");
        if (p.l == 1) {
            require(t_rdc == 0.0, "CostParams.t_Rdc must be 0 when l == 1");
            require(has_ta, "CostParams.t_a must be given directly when l == 1");
        } else if (has_ta) {
            const double derived = derive_ta(t_rdc, p.l);
            require(std::fabs(derived - p.t_a) <= 1e-9 * std::max(std::fabs(derived), std::fabs(p.t_a)),
                    "CostParams.t_Rdc and t_a disagree");
        } else {
            p.t_a = derive_ta(t_rdc, p.l);
        }
    }
    p.validate();
    return p;
}

inline std::string format_cost_params(const CostParams &p) {
    std::ostringstream out;
    out << "# cost parameters per iteration, seconds\n";
    out << "l = " << p.l << "\n";
    out << "L = " << format_double(p.latency) << "\n";
    out << "t_c = " << format_double(p.t_c) << "\n";
    out << "t_Map = " << format_double(p.t_map) << "\n";
    out << "t_Rdc = " << format_double(p.t_rdc()) << "\n";
    out << "t_a = " << format_double(p.t_a) << "\n";
    out << "t_p = " << format_double(p.t_p) << "\n";
    return out.str();
}

inline CostParams read_cost_params(const std::string &path) { return parse_cost_params(read_file(path), path); }

inline MachineProfile parse_machine_profile(std::string_view text, const std::string &source = "<profile>") {
    const auto kv = parse_key_values(text, {"tau_op", "tau_tr", "L"}, source);
    MachineProfile m;
    m.tau_op = detail::number(kv, "tau_op", source);
    m.tau_tr = detail::number(kv, "tau_tr", source);
    m.latency = detail::number(kv, "L", source);
    m.validate();
    return m;
}

inline std::string format_machine_profile(const MachineProfile &m) {
    std::ostringstream out;
    out << "# machine profile, seconds\n";
    out << "tau_op = " << format_double(m.tau_op) << "\n";
    out << "tau_tr = " << format_double(m.tau_tr) << "\n";
    out << "L = " << format_double(m.latency) << "\n";
    return out.str();
}

inline MachineProfile read_machine_profile(const std::string &path) {
    return parse_machine_profile(read_file(path), path);
}

} // namespace bsf::io
