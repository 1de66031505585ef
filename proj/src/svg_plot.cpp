#include "cama/svg_plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace cama {

namespace {

constexpr double kPlotWidth = 560.0;
constexpr double kPlotHeight = 360.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 50.0;
constexpr double kLegendWidth = 170.0;
constexpr double kChartWidth = kMarginLeft + kPlotWidth + kLegendWidth + 20.0;
constexpr double kChartHeight = kMarginTop + kPlotHeight + kMarginBottom;

constexpr const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
};

std::string fixed(double value, int precision) {
    char buffer[64];
    const auto result =
        std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::fixed,
                      precision);
    return std::string(buffer, result.ptr);
}

std::string label(double value) {
    char buffer[64];
    const auto result =
        std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 6);
    return std::string(buffer, result.ptr);
}

struct Series {
    std::string strategy;
    std::vector<std::pair<double, double>> points;  // (fraction, value), mean over runs
};

struct Chart {
    std::string metric;
    std::string task;
    double m_pre = 0.0;
    double m_post = 0.0;
    std::vector<Series> series;
};

}  // namespace

std::string render_curves_svg(const std::vector<CurveRow>& rows) {
    // Group rows into charts; average curve values over runs per strategy.
    std::map<std::pair<std::string, std::string>, Chart> charts;
    for (const CurveRow& row : rows) {
        Chart& chart = charts[{row.metric, row.task}];
        chart.metric = row.metric;
        chart.task = row.task;
        chart.m_pre = row.m_pre;
        chart.m_post = row.m_post;
        auto it = std::find_if(chart.series.begin(), chart.series.end(),
                               [&](const Series& s) { return s.strategy == row.strategy; });
        if (it == chart.series.end()) {
            chart.series.push_back({row.strategy, {}});
            it = chart.series.end() - 1;
        }
        it->points.emplace_back(row.fraction, row.value);
    }
    for (auto& [key, chart] : charts) {
        std::sort(chart.series.begin(), chart.series.end(),
                  [](const Series& a, const Series& b) { return a.strategy < b.strategy; });
        for (Series& series : chart.series) {
            std::map<double, std::pair<double, std::size_t>> accum;
            for (const auto& [fraction, value] : series.points) {
                auto& slot = accum[fraction];
                slot.first += value;
                slot.second += 1;
            }
            series.points.clear();
            for (const auto& [fraction, slot] : accum) {
                series.points.emplace_back(fraction,
                                           slot.first / static_cast<double>(slot.second));
            }
        }
    }

    const std::size_t n_charts = std::max<std::size_t>(1, charts.size());
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kChartWidth, 0)
        << "\" height=\"" << fixed(kChartHeight * static_cast<double>(n_charts), 0)
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    std::size_t chart_index = 0;
    auto emit_chart = [&](const Chart* chart) {
        const double top = kChartHeight * static_cast<double>(chart_index) + kMarginTop;
        const double left = kMarginLeft;
        const double bottom = top + kPlotHeight;
        const double right = left + kPlotWidth;

        double y_min = 0.0;
        double y_max = 1.0;
        if (chart != nullptr) {
            y_min = std::min(chart->m_pre, chart->m_post);
            y_max = std::max(chart->m_pre, chart->m_post);
            for (const Series& series : chart->series) {
                for (const auto& [fraction, value] : series.points) {
                    y_min = std::min(y_min, value);
                    y_max = std::max(y_max, value);
                }
            }
        }
        double pad = (y_max - y_min) * 0.08;
        if (pad <= 0.0) {
            pad = 0.05;
        }
        y_min -= pad;
        y_max += pad;

        const auto x_of = [&](double fraction) { return left + fraction * kPlotWidth; };
        const auto y_of = [&](double value) {
            return bottom - (value - y_min) / (y_max - y_min) * kPlotHeight;
        };

        if (chart != nullptr) {
            svg << "<text x=\"" << fixed(left, 1) << "\" y=\"" << fixed(top - 18.0, 1)
                << "\" font-size=\"15\">" << chart->metric << " / " << chart->task
                << "</text>\n";
        }

        // Axes and ticks.
        svg << "<line x1=\"" << fixed(left, 1) << "\" y1=\"" << fixed(bottom, 1) << "\" x2=\""
            << fixed(right, 1) << "\" y2=\"" << fixed(bottom, 1)
            << "\" stroke=\"black\"/>\n";
        svg << "<line x1=\"" << fixed(left, 1) << "\" y1=\"" << fixed(top, 1) << "\" x2=\""
            << fixed(left, 1) << "\" y2=\"" << fixed(bottom, 1) << "\" stroke=\"black\"/>\n";
        for (int i = 0; i <= 4; ++i) {
            const double fraction = static_cast<double>(i) / 4.0;
            const double x = x_of(fraction);
            svg << "<line x1=\"" << fixed(x, 1) << "\" y1=\"" << fixed(bottom, 1)
                << "\" x2=\"" << fixed(x, 1) << "\" y2=\"" << fixed(bottom + 5.0, 1)
                << "\" stroke=\"black\"/>\n";
            svg << "<text x=\"" << fixed(x, 1) << "\" y=\"" << fixed(bottom + 20.0, 1)
                << "\" text-anchor=\"middle\">" << label(fraction) << "</text>\n";
            const double value = y_min + fraction * (y_max - y_min);
            const double y = y_of(value);
            svg << "<line x1=\"" << fixed(left - 5.0, 1) << "\" y1=\"" << fixed(y, 1)
                << "\" x2=\"" << fixed(left, 1) << "\" y2=\"" << fixed(y, 1)
                << "\" stroke=\"black\"/>\n";
            svg << "<text x=\"" << fixed(left - 9.0, 1) << "\" y=\"" << fixed(y + 4.0, 1)
                << "\" text-anchor=\"end\">" << label(value) << "</text>\n";
        }
        svg << "<text x=\"" << fixed((left + right) / 2.0, 1) << "\" y=\""
            << fixed(bottom + 38.0, 1) << "\" text-anchor=\"middle\">budget fraction</text>\n";

        if (chart == nullptr) {
            return;
        }

        // Anchor lines.
        for (const auto& [anchor, name] :
             {std::pair<double, const char*>{chart->m_pre, "m_pre"},
              std::pair<double, const char*>{chart->m_post, "m_post"}}) {
            const double y = y_of(anchor);
            svg << "<line x1=\"" << fixed(left, 1) << "\" y1=\"" << fixed(y, 1) << "\" x2=\""
                << fixed(right, 1) << "\" y2=\"" << fixed(y, 1)
                << "\" stroke=\"#555555\" stroke-dasharray=\"6,4\"/>\n";
            svg << "<text x=\"" << fixed(right + 4.0, 1) << "\" y=\"" << fixed(y + 4.0, 1)
                << "\" fill=\"#555555\">" << name << "</text>\n";
        }

        // One polyline per strategy plus a legend entry.
        std::size_t color_index = 0;
        double legend_y = top + 10.0;
        for (const Series& series : chart->series) {
            const char* color = kPalette[color_index % (sizeof(kPalette) / sizeof(*kPalette))];
            ++color_index;
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
                << " points=\"";
            for (std::size_t p = 0; p < series.points.size(); ++p) {
                svg << (p == 0 ? "" : " ") << fixed(x_of(series.points[p].first), 1) << ','
                    << fixed(y_of(series.points[p].second), 1);
            }
            svg << "\"/>\n";
            svg << "<line x1=\"" << fixed(right + 54.0, 1) << "\" y1=\""
                << fixed(legend_y - 4.0, 1) << "\" x2=\"" << fixed(right + 74.0, 1)
                << "\" y2=\"" << fixed(legend_y - 4.0, 1) << "\" stroke=\"" << color
                << "\" stroke-width=\"1.5\"/>\n";
            svg << "<text x=\"" << fixed(right + 80.0, 1) << "\" y=\"" << fixed(legend_y, 1)
                << "\">" << series.strategy << "</text>\n";
            legend_y += 16.0;
        }
    };

    if (charts.empty()) {
        emit_chart(nullptr);
    } else {
        for (const auto& [key, chart] : charts) {
            emit_chart(&chart);
            ++chart_index;
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace cama
