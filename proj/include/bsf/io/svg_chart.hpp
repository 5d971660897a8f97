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
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bsf/io/text.hpp"

namespace bsf::io {

struct Series {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points; ///< (K, speedup)
};

/// Standalone SVG line chart of speedup against K, with a dashed vertical
/// marker at the predicted boundary.
inline std::string speedup_chart_svg(const std::string &title, const std::vector<Series> &series, double boundary) {
    constexpr double width = 640, height = 400, left = 60, right = 20, top = 40, bottom = 50;
    double k_max = std::max(1.0, boundary), a_max = 1.0;
    for (const auto &s : series) {
        for (const auto &[k, a] : s.points) {
            k_max = std::max(k_max, k);
            a_max = std::max(a_max, a);
        }
    }
    a_max *= 1.1;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    auto px = [&](double k) { return left + (k - 1.0) / std::max(1e-9, k_max - 1.0) * plot_w; };
    auto py = [&](double a) { return top + plot_h - a / a_max * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double k = 1.0 + (k_max - 1.0) * i / 5.0;
        const double a = a_max * i / 5.0;
        svg << "<text x=\"" << px(k) << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">"
            << format_double(std::round(k * 10) / 10) << "</text>\n";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << py(a) + 4 << "\" text-anchor=\"end\">"
            << format_double(std::round(a * 100) / 100) << "</text>\n";
    }
    svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">K</text>\n";
    svg << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" transform=\"rotate(-90 16 " << top + plot_h / 2
        << ")\" text-anchor=\"middle\">speedup</text>\n";

    svg << "<line x1=\"" << px(boundary) << "\" y1=\"" << top << "\" x2=\"" << px(boundary) << "\" y2=\""
        << top + plot_h << "\" stroke=\"gray\" stroke-dasharray=\"2,4\"/>\n";
    svg << "<text x=\"" << px(boundary) + 4 << "\" y=\"" << top + 12 << "\" fill=\"gray\">K_BSF = "
        << format_double(std::round(boundary * 10) / 10) << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto &s = series[i];
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto &[k, a] : s.points) {
            svg << px(k) << "," << py(a) << " ";
        }
        svg << "\"/>\n";
        for (const auto &[k, a] : s.points) {
            svg << "<circle cx=\"" << px(k) << "\" cy=\"" << py(a) << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
        }
        svg << "<text x=\"" << left + plot_w - 140 << "\" y=\"" << top + 16 + 16 * static_cast<double>(i)
            << "\" fill=\"" << s.color << "\">" << s.label << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace bsf::io
