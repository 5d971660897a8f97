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
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bsf/error.hpp"
#include "bsf/io/text.hpp"

namespace bsf::io {

inline constexpr std::string_view predicted_header = "K,speedup_predicted";
inline constexpr std::string_view measured_header = "K,T_K_seconds,speedup_measured";
inline constexpr std::string_view compare_header = "K,speedup_measured,speedup_predicted";
inline constexpr std::string_view breakdown_header = "master_reduce,master_post,comm,worker_map,worker_reduce,total";
inline constexpr std::string_view bodies_header = "x,y,z,mass";

/// Numeric table with a fixed header line.
struct CsvTable {
    std::string header;
    std::vector<std::vector<double>> rows;

    std::size_t columns() const { return header.empty() ? 0 : 1 + static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')); }
};

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    for (;;) {
        const auto comma = line.find(',');
        out.push_back(trim(line.substr(0, comma)));
        if (comma == std::string_view::npos) {
            return out;
        }
        line.remove_prefix(comma + 1);
    }
}

/// Parse rows under `expected_header`. When `header_optional` is set a first
/// line that is not the header is read as data.
inline CsvTable parse_csv(std::string_view text, std::string_view expected_header, const std::string &source,
                          bool header_optional = false) {
    CsvTable table{std::string(expected_header), {}};
    const std::size_t width = table.columns();
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    bool seen_header = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty()) {
            continue;
        }
        if (!seen_header) {
            seen_header = true;
            if (line == expected_header) {
                continue;
            }
            if (!header_optional) {
                fail(ErrorKind::parse, source + ":" + std::to_string(line_no) + ": expected header '" +
                                           std::string(expected_header) + "'");
            }
        }
        const auto cells = split_commas(line);
        if (cells.size() != width) {
            fail(ErrorKind::parse, source + ":" + std::to_string(line_no) + ": expected " + std::to_string(width) +
                                       " fields, found " + std::to_string(cells.size()));
        }
        std::vector<double> row(width);
        for (std::size_t c = 0; c < width; ++c) {
            if (!parse_double(cells[c], row[c])) {
                fail(ErrorKind::parse,
                     source + ":" + std::to_string(line_no) + ": '" + std::string(cells[c]) + "' is not a number");
            }
        }
        table.rows.push_back(std::move(row));
    }
    if (!seen_header && !header_optional) {
        fail(ErrorKind::parse, source + ": empty file");
    }
    return table;
}

inline std::string format_csv(const CsvTable &table) {
    std::string out = table.header + "\n";
    for (const auto &row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) {
                out += ',';
            }
            out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

inline CsvTable read_csv(const std::string &path, std::string_view expected_header, bool header_optional = false) {
    return parse_csv(read_file(path), expected_header, path, header_optional);
}

} // namespace bsf::io
