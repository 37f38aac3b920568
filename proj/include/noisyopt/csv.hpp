#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace noisyopt {

// One row per (run, checkpoint); the final checkpoint of a run carries its
// summary. Fields that do not apply to a problem stay empty, never zero.
struct ResultRow {
    std::string run_id;
    std::string algorithm;
    std::string problem;
    std::size_t n = 0;
    std::optional<std::size_t> m;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t evals_used = 0;
    std::uint64_t evals_to_best = 0;
    std::optional<double> best_true_fitness;
    std::optional<double> best_feasible_cost;
    std::optional<double> hypervolume;
    double wall_ms = 0.0;
    std::string instance; // instance file stem, e.g. subsetsum-n50-i3
    std::string status;   // ok | timeout

    bool operator==(const ResultRow&) const = default;
};

inline constexpr std::string_view kResultHeader =
    "run_id,algorithm,problem,n,m,sigma,seed,evals_used,evals_to_best,"
    "best_true_fitness,best_feasible_cost,hypervolume,wall_ms,instance,status";

namespace detail {

// shortest exact decimal representation; locale-independent
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const char* what) {
    double v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::runtime_error(std::string("csv: bad double in column ") + what);
    return v;
}

inline std::uint64_t parse_u64(std::string_view s, const char* what) {
    std::uint64_t v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::runtime_error(std::string("csv: bad integer in column ") + what);
    return v;
}

inline void check_field_text(const std::string& s) {
    if (s.find_first_of(",\n\r") != std::string::npos)
        throw std::invalid_argument("csv: text fields must not contain commas or newlines");
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

} // namespace detail

inline void write_results(const std::vector<ResultRow>& rows, std::ostream& out) {
    if (rows.empty())
        throw std::invalid_argument("write_results: refusing to write an empty result set");
    out << kResultHeader << '\n';
    for (const ResultRow& r : rows) {
        detail::check_field_text(r.run_id);
        detail::check_field_text(r.algorithm);
        detail::check_field_text(r.problem);
        detail::check_field_text(r.instance);
        detail::check_field_text(r.status);
        out << r.run_id << ',' << r.algorithm << ',' << r.problem << ',' << r.n << ',';
        if (r.m)
            out << *r.m;
        out << ',' << detail::format_double(r.sigma) << ',' << r.seed << ',' << r.evals_used
            << ',' << r.evals_to_best << ',';
        if (r.best_true_fitness)
            out << detail::format_double(*r.best_true_fitness);
        out << ',';
        if (r.best_feasible_cost)
            out << detail::format_double(*r.best_feasible_cost);
        out << ',';
        if (r.hypervolume)
            out << detail::format_double(*r.hypervolume);
        out << ',' << detail::format_double(r.wall_ms) << ',' << r.instance << ',' << r.status
            << '\n';
    }
    if (!out)
        throw std::runtime_error("write_results: stream write failed");
}

inline void write_results(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_results: cannot open " + path);
    write_results(rows, out);
}

inline std::vector<ResultRow> read_results(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("read_results: empty file");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != kResultHeader)
        throw std::runtime_error("read_results: unexpected header");
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 15)
            throw std::runtime_error("read_results: wrong column count");
        ResultRow r;
        r.run_id = std::string(f[0]);
        r.algorithm = std::string(f[1]);
        r.problem = std::string(f[2]);
        r.n = static_cast<std::size_t>(detail::parse_u64(f[3], "n"));
        if (!f[4].empty())
            r.m = static_cast<std::size_t>(detail::parse_u64(f[4], "m"));
        r.sigma = detail::parse_double(f[5], "sigma");
        r.seed = detail::parse_u64(f[6], "seed");
        r.evals_used = detail::parse_u64(f[7], "evals_used");
        r.evals_to_best = detail::parse_u64(f[8], "evals_to_best");
        if (!f[9].empty())
            r.best_true_fitness = detail::parse_double(f[9], "best_true_fitness");
        if (!f[10].empty())
            r.best_feasible_cost = detail::parse_double(f[10], "best_feasible_cost");
        if (!f[11].empty())
            r.hypervolume = detail::parse_double(f[11], "hypervolume");
        r.wall_ms = detail::parse_double(f[12], "wall_ms");
        r.instance = std::string(f[13]);
        r.status = std::string(f[14]);
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::vector<ResultRow> read_results(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("read_results: cannot open " + path);
    return read_results(in);
}

} // namespace noisyopt
