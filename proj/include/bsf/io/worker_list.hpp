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
#include <string>
#include <string_view>
#include <vector>

#include "bsf/error.hpp"
#include "bsf/io/csv.hpp"
#include "bsf/io/text.hpp"

namespace bsf::io {

/// Parse a worker-count list: comma-separated items, each `K`, `a..b` or
/// `a..b step s`. The result is sorted; repeated counts are usage errors.
inline std::vector<std::size_t> parse_worker_list(std::string_view spec) {
    auto bad = [&](const std::string &why) {
        fail(ErrorKind::usage, "invalid worker list '" + std::string(spec) + "': " + why);
    };
    std::vector<std::size_t> out;
    for (auto item : split_commas(spec)) {
        if (item.empty()) {
            bad("empty item");
        }
        std::size_t step = 1;
        if (const auto pos = item.find("step"); pos != std::string_view::npos) {
            if (!parse_size(item.substr(pos + 4), step) || step == 0) {
                bad("step must be a positive integer");
            }
            item = trim(item.substr(0, pos));
        }
        const auto dots = item.find("..");
        std::size_t first = 0, last = 0;
        if (dots == std::string_view::npos) {
            if (step != 1 || !parse_size(item, first)) {
                bad("'" + std::string(item) + "' is not a worker count");
            }
            last = first;
        } else if (!parse_size(item.substr(0, dots), first) || !parse_size(item.substr(dots + 2), last) ||
                   last < first) {
            bad("'" + std::string(item) + "' is not a range a..b with a <= b");
        }
        if (first == 0) {
            bad("worker counts start at 1");
        }
        for (std::size_t k = first; k <= last; k += step) {
            out.push_back(k);
        }
    }
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
        bad("duplicate worker counts");
    }
    return out;
}

} // namespace bsf::io
