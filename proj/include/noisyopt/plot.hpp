#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "noisyopt/csv.hpp"
#include "noisyopt/stats.hpp"

namespace noisyopt {

// What a figure plots against the sigma axis.
enum class FigureMetric { fitness, scaled_fitness, runtime, feasible_cost, hypervolume };

struct FigureSpec {
    std::string id;
    FigureMetric metric;
    std::string y_label;
};

inline const std::vector<FigureSpec>& figure_registry() {
    static const std::vector<FigureSpec> figures{
        {"fig1-onemax", FigureMetric::fitness, "best fitness"},
        {"fig2-onemax-runtime", FigureMetric::runtime, "evaluations to best"},
        {"fig3-linear", FigureMetric::fitness, "best fitness"},
        {"fig4-linear-runtime", FigureMetric::runtime, "evaluations to best"},
        {"fig5-subsetsum-runtime", FigureMetric::runtime, "evaluations to optimum"},
        {"fig6-knapsack-v1-quality", FigureMetric::scaled_fitness, "scaled best fitness"},
        {"fig7-knapsack-v1-runtime", FigureMetric::runtime, "evaluations to best"},
        {"fig8-knapsack-v2-quality", FigureMetric::scaled_fitness, "scaled best fitness"},
        {"fig9-knapsack-v2-runtime", FigureMetric::runtime, "evaluations to best"},
        {"fig10-setcover-constrained-quality", FigureMetric::feasible_cost,
         "best feasible cost"},
        {"fig11-setcover-penalty-quality", FigureMetric::feasible_cost, "best feasible cost"},
        {"fig12-setcover-penalty-runtime", FigureMetric::runtime, "evaluations to best"},
        {"fig8mo-cocz-hypervolume", FigureMetric::hypervolume, "population hypervolume"},
        {"fig9mo-mosetcover-hypervolume", FigureMetric::hypervolume, "population hypervolume"},
        {"fig10mo-mosetcover-quality", FigureMetric::feasible_cost, "best feasible cost"},
    };
    return figures;
}

inline const FigureSpec& figure_spec(const std::string& id) {
    for (const auto& f : figure_registry())
        if (f.id == id)
            return f;
    throw std::invalid_argument("unknown figure: " + id);
}

struct SeriesPoint {
    double x = 0.0;
    double mean = 0.0;
    double stderr_mean = 0.0;
    std::size_t count = 0;
};

struct PlotSeries {
    std::string label;
    std::vector<SeriesPoint> points;
};

// Aggregate rows into per-(algorithm [, n]) series of mean +/- stderr against
// sigma. Scaled fitness divides by the best value any row achieved on the
// same instance, so instances are comparable.
inline std::vector<PlotSeries> aggregate_for_figure(const std::vector<ResultRow>& rows,
                                                    const std::string& figure_id) {
    if (rows.empty())
        throw std::invalid_argument("aggregate_for_figure: no rows");
    const FigureSpec& fig = figure_spec(figure_id);

    std::map<std::string, double> instance_best;
    if (fig.metric == FigureMetric::scaled_fitness) {
        for (const ResultRow& r : rows)
            if (r.best_true_fitness) {
                auto [it, inserted] = instance_best.try_emplace(r.instance, *r.best_true_fitness);
                if (!inserted)
                    it->second = std::max(it->second, *r.best_true_fitness);
            }
    }

    const std::set<std::size_t> sizes = [&] {
        std::set<std::size_t> s;
        for (const ResultRow& r : rows)
            s.insert(r.n);
        return s;
    }();
    const bool split_by_n = sizes.size() > 1;

    std::map<std::string, std::map<double, std::vector<double>>> buckets;
    for (const ResultRow& r : rows) {
        double value = std::numeric_limits<double>::quiet_NaN();
        switch (fig.metric) {
        case FigureMetric::fitness:
            if (r.best_true_fitness)
                value = *r.best_true_fitness;
            break;
        case FigureMetric::scaled_fitness:
            if (r.best_true_fitness) {
                const double best = instance_best.at(r.instance);
                if (best != 0.0)
                    value = *r.best_true_fitness / best;
            }
            break;
        case FigureMetric::runtime:
            value = static_cast<double>(r.evals_to_best);
            break;
        case FigureMetric::feasible_cost:
            if (r.best_feasible_cost)
                value = *r.best_feasible_cost;
            break;
        case FigureMetric::hypervolume:
            if (r.hypervolume)
                value = *r.hypervolume;
            break;
        }
        if (std::isnan(value))
            continue;
        std::string label = r.algorithm;
        if (split_by_n)
            label += " n=" + std::to_string(r.n);
        buckets[label][r.sigma].push_back(value);
    }
    if (buckets.empty())
        throw std::runtime_error("aggregate_for_figure: no rows carry the figure metric");

    std::vector<PlotSeries> series;
    for (auto& [label, by_sigma] : buckets) {
        PlotSeries s;
        s.label = label;
        for (auto& [sigma, values] : by_sigma) {
            SeriesPoint p;
            p.x = sigma;
            p.mean = mean(values);
            p.stderr_mean = stderr_of_mean(values);
            p.count = values.size();
            s.points.push_back(p);
        }
        series.push_back(std::move(s));
    }
    return series;
}

inline void write_plot_csv(const std::vector<PlotSeries>& series, std::ostream& out) {
    out << "series,x,mean,stderr,count\n";
    for (const auto& s : series)
        for (const auto& p : s.points)
            out << s.label << ',' << detail::format_double(p.x) << ','
                << detail::format_double(p.mean) << ',' << detail::format_double(p.stderr_mean)
                << ',' << p.count << '\n';
    if (!out)
        throw std::runtime_error("write_plot_csv: stream write failed");
}

namespace detail {

inline const char* series_colour(std::size_t i) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return palette[i % 10];
}

} // namespace detail

// Minimal self-contained SVG line chart with error whiskers and a legend.
inline void write_plot_svg(const std::vector<PlotSeries>& series, const std::string& title,
                           const std::string& y_label, std::ostream& out) {
    if (series.empty())
        throw std::invalid_argument("write_plot_svg: no series");
    const double width = 720, height = 480;
    const double left = 70, right = width - 180, top = 40, bottom = height - 50;

    double xmin = std::numeric_limits<double>::max(), xmax = std::numeric_limits<double>::lowest();
    double ymin = std::numeric_limits<double>::max(), ymax = std::numeric_limits<double>::lowest();
    for (const auto& s : series)
        for (const auto& p : s.points) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.mean - p.stderr_mean);
            ymax = std::max(ymax, p.mean + p.stderr_mean);
        }
    if (xmax == xmin)
        xmax = xmin + 1;
    if (ymax == ymin)
        ymax = ymin + 1;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (right - left); };
    const auto sy = [&](double y) { return bottom - (y - ymin) / (ymax - ymin) * (bottom - top); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << (left + right) / 2 << "\" y=\"20\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

    // axes with a handful of ticks
    out << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
        << bottom << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << bottom << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double fx = xmin + (xmax - xmin) * t / 5.0;
        const double fy = ymin + (ymax - ymin) * t / 5.0;
        out << "<line x1=\"" << sx(fx) << "\" y1=\"" << bottom << "\" x2=\"" << sx(fx)
            << "\" y2=\"" << bottom + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << sx(fx) << "\" y=\"" << bottom + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << detail::format_double(std::round(fx * 100) / 100) << "</text>\n";
        out << "<line x1=\"" << left - 5 << "\" y1=\"" << sy(fy) << "\" x2=\"" << left
            << "\" y2=\"" << sy(fy) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << left - 8 << "\" y=\"" << sy(fy) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << detail::format_double(std::round(fy * 100) / 100) << "</text>\n";
    }
    out << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">sigma</text>\n";
    out << "<text x=\"18\" y=\"" << (top + bottom) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 18 " << (top + bottom) / 2 << ")\">" << y_label
        << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* colour = detail::series_colour(i);
        std::ostringstream path;
        for (std::size_t j = 0; j < series[i].points.size(); ++j) {
            const auto& p = series[i].points[j];
            path << (j == 0 ? 'M' : 'L') << sx(p.x) << ' ' << sy(p.mean) << ' ';
        }
        out << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"" << colour
            << "\" stroke-width=\"1.5\"/>\n";
        for (const auto& p : series[i].points) {
            out << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.mean)
                << "\" r=\"2.5\" fill=\"" << colour << "\"/>\n";
            if (p.stderr_mean > 0)
                out << "<line x1=\"" << sx(p.x) << "\" y1=\"" << sy(p.mean - p.stderr_mean)
                    << "\" x2=\"" << sx(p.x) << "\" y2=\"" << sy(p.mean + p.stderr_mean)
                    << "\" stroke=\"" << colour << "\" stroke-width=\"1\"/>\n";
        }
        const double ly = top + 16.0 * static_cast<double>(i);
        out << "<line x1=\"" << right + 10 << "\" y1=\"" << ly << "\" x2=\"" << right + 28
            << "\" y2=\"" << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << right + 32 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[i].label
            << "</text>\n";
    }
    out << "</svg>\n";
    if (!out)
        throw std::runtime_error("write_plot_svg: stream write failed");
}

inline void emit_plot_data(const std::vector<ResultRow>& rows, const std::string& figure_id,
                           const std::string& path) {
    const auto series = aggregate_for_figure(rows, figure_id);
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("emit_plot_data: cannot open " + path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".svg")
        write_plot_svg(series, figure_id, figure_spec(figure_id).y_label, out);
    else
        write_plot_csv(series, out);
}

} // namespace noisyopt
