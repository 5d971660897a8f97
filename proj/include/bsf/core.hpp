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

#include <cstddef>
#include <functional>
#include <iterator>
#include <optional>
#include <ranges>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "bsf/error.hpp"

namespace bsf {

/// An iterative Map/Reduce-on-lists algorithm.
///
/// Each iteration maps `map_fn(x, a)` over `elements`, folds the results with
/// `combine`, and produces the next approximation with `compute(x, s)`. The
/// loop ends when `stop_cond(next, prev)` holds or after `max_iterations`.
///
/// `combine` takes its left operand by value so accumulating folds can reuse
/// storage; it must be associative over the values `map_fn` produces.
template <class Elem, class Partial, class Approx> struct ProblemDefinition {
    using element_type = Elem;
    using partial_type = Partial;
    using approx_type = Approx;

    std::vector<Elem> elements;
    std::function<Partial(const Approx &, const Elem &)> map_fn;
    std::function<Partial(Partial, const Partial &)> combine;
    std::function<Approx(const Approx &, const Partial &)> compute;
    std::function<bool(const Approx &next, const Approx &prev)> stop_cond;
    Approx initial{};
    std::size_t max_iterations = 10000;

    /// Optional loop guard checked once on `initial`; when it holds the run
    /// performs zero iterations. Models while-style templates.
    std::function<bool(const Approx &)> done_at_start;

    void validate() const {
        require(!elements.empty(), "problem element list must be nonempty");
        require(static_cast<bool>(map_fn) && static_cast<bool>(combine) && static_cast<bool>(compute) &&
                    static_cast<bool>(stop_cond),
                "problem is missing one of map_fn, combine, compute, stop_cond");
    }
};

template <class Approx> struct IterationTrace {
    std::size_t iterations = 0;
    std::vector<Approx> approximations; ///< x(0), x(1), ... when recording
    bool converged = false;
    Approx final{};
};

/// B = [F(a_1), ..., F(a_l)].
template <std::ranges::input_range R, class F>
auto map_list(F &&fn, const R &list) {
    using B = std::decay_t<std::invoke_result_t<F &, std::ranges::range_reference_t<const R>>>;
    std::vector<B> out;
    if constexpr (std::ranges::sized_range<R>) {
        out.reserve(std::ranges::size(list));
    }
    for (auto &&a : list) {
        out.push_back(std::invoke(fn, a));
    }
    return out;
}

/// b_1 + ... + b_l under `op`, folded strictly left to right.
template <std::ranges::input_range R, class Op>
auto reduce_list(Op &&op, const R &list) {
    using B = std::ranges::range_value_t<R>;
    auto it = std::ranges::begin(list);
    const auto end = std::ranges::end(list);
    require(it != end, "reduce_list needs a nonempty list");
    B acc = *it;
    for (++it; it != end; ++it) {
        acc = std::invoke(op, std::move(acc), *it);
    }
    return acc;
}

/// reduce_list(op, map_list(fn, list)) without materializing the mapped list.
template <std::ranges::input_range R, class F, class Op>
auto map_reduce(F &&fn, Op &&op, const R &list) {
    using B = std::decay_t<std::invoke_result_t<F &, std::ranges::range_reference_t<const R>>>;
    auto it = std::ranges::begin(list);
    const auto end = std::ranges::end(list);
    require(it != end, "map_reduce needs a nonempty list");
    B acc = std::invoke(fn, *it);
    for (++it; it != end; ++it) {
        acc = std::invoke(op, std::move(acc), std::invoke(fn, *it));
    }
    return acc;
}

/// Half-open index range of one partition block.
struct Block {
    std::size_t offset = 0;
    std::size_t length = 0;
};

/// Split l elements into K contiguous blocks. With r = l mod K, the first r
/// blocks get ceil(l/K) elements and the rest floor(l/K).
inline std::vector<Block> partition_blocks(std::size_t l, std::size_t parts) {
    require(parts >= 1, "partition count K must be >= 1");
    require(parts <= l, "partition count K=" + std::to_string(parts) + " exceeds list length " + std::to_string(l));
    const std::size_t base = l / parts;
    const std::size_t extra = l % parts;
    std::vector<Block> blocks(parts);
    std::size_t offset = 0;
    for (std::size_t j = 0; j < parts; ++j) {
        blocks[j] = {offset, base + (j < extra ? 1 : 0)};
        offset += blocks[j].length;
    }
    return blocks;
}

template <class A> std::vector<std::vector<A>> partition_list(const std::vector<A> &list, std::size_t parts) {
    const auto blocks = partition_blocks(list.size(), parts);
    std::vector<std::vector<A>> out;
    out.reserve(parts);
    for (const auto &b : blocks) {
        const auto first = list.begin() + static_cast<std::ptrdiff_t>(b.offset);
        out.emplace_back(first, first + static_cast<std::ptrdiff_t>(b.length));
    }
    return out;
}

/// Consuming overload: elements are moved into their blocks.
template <class A> std::vector<std::vector<A>> partition_list(std::vector<A> &&list, std::size_t parts) {
    const auto blocks = partition_blocks(list.size(), parts);
    std::vector<std::vector<A>> out;
    out.reserve(parts);
    for (const auto &b : blocks) {
        const auto first = list.begin() + static_cast<std::ptrdiff_t>(b.offset);
        out.emplace_back(std::make_move_iterator(first),
                         std::make_move_iterator(first + static_cast<std::ptrdiff_t>(b.length)));
    }
    list.clear();
    return out;
}

/// Fold one block of elements for approximation `x`.
template <class Problem, class Range>
typename Problem::partial_type fold_block(const Problem &problem, const typename Problem::approx_type &x,
                                          const Range &block) {
    return map_reduce([&](const auto &a) { return problem.map_fn(x, a); }, problem.combine, block);
}

/// Sequential reference execution.
template <class Elem, class Partial, class Approx>
IterationTrace<Approx> run_sequential(const ProblemDefinition<Elem, Partial, Approx> &problem,
                                      bool record_approximations = false) {
    problem.validate();
    IterationTrace<Approx> trace;
    Approx x = problem.initial;
    if (record_approximations) {
        trace.approximations.push_back(x);
    }
    if (problem.done_at_start && problem.done_at_start(x)) {
        trace.converged = true;
        trace.final = std::move(x);
        return trace;
    }
    while (trace.iterations < problem.max_iterations) {
        const Partial s = fold_block(problem, x, problem.elements);
        Approx next = problem.compute(x, s);
        ++trace.iterations;
        const bool stop = problem.stop_cond(next, x);
        x = std::move(next);
        if (record_approximations) {
            trace.approximations.push_back(x);
        }
        if (stop) {
            trace.converged = true;
            break;
        }
    }
    trace.final = std::move(x);
    return trace;
}

} // namespace bsf
