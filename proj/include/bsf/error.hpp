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

#include <stdexcept>
#include <string>

namespace bsf {

/// Failure categories. The CLI maps each to a stable process exit code.
enum class ErrorKind {
    usage,                  // bad command-line usage
    invalid_parameter,      // precondition or type-invariant violation
    parse,                  // malformed input file
    model_inapplicable,     // t_Map + t_a == 0: communication-dominated
    non_convergence,        // iteration cap reached
    calibration_unreliable, // timer too coarse or measured cost non-positive
    worker_failure,         // a worker threw during a parallel run
    comparison              // curves share no usable K values
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &what) { throw Error(kind, what); }

inline void require(bool cond, const std::string &what) {
    if (!cond) {
        fail(ErrorKind::invalid_parameter, what);
    }
}

} // namespace bsf
