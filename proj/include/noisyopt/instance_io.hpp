#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

#include "noisyopt/problems.hpp"

namespace noisyopt {

using AnyInstance = std::variant<LinearInstance, SubsetSumInstance, KnapsackInstance,
                                 SetCoverInstance, COCZInstance>;

// Instance plus the provenance recorded in its file header.
struct StoredInstance {
    std::string problem; // linear | subsetsum | knapsack | setcover | cocz
    std::uint64_t seed = 0;
    AnyInstance instance;
};

namespace detail {

inline std::int64_t read_int(std::istream& in, const char* what) {
    std::int64_t v;
    if (!(in >> v))
        throw std::runtime_error(std::string("instance file: missing ") + what);
    return v;
}

} // namespace detail

// One self-describing text file per instance: header line `problem n m seed`,
// then a whitespace-separated integer payload. Round-trips bit-exactly.
inline void write_instance(std::ostream& out, const StoredInstance& st) {
    const auto header = [&](std::size_t n, std::size_t m) {
        out << st.problem << ' ' << n << ' ' << m << ' ' << st.seed << '\n';
    };
    if (const auto* li = std::get_if<LinearInstance>(&st.instance)) {
        header(li->weights.size(), 0);
        for (std::size_t i = 0; i < li->weights.size(); ++i)
            out << li->weights[i] << (i + 1 == li->weights.size() ? '\n' : ' ');
    } else if (const auto* ss = std::get_if<SubsetSumInstance>(&st.instance)) {
        header(ss->weights.size(), 0);
        for (auto w : ss->weights)
            out << w << ' ';
        out << '\n' << ss->target << '\n';
    } else if (const auto* kp = std::get_if<KnapsackInstance>(&st.instance)) {
        header(kp->weights.size(), 0);
        for (auto w : kp->weights)
            out << w << ' ';
        out << '\n';
        for (auto p : kp->profits)
            out << p << ' ';
        out << '\n' << kp->capacity << '\n';
    } else if (const auto* sc = std::get_if<SetCoverInstance>(&st.instance)) {
        header(sc->subsets, sc->elements);
        for (std::size_t i = 0; i < sc->elements; ++i) {
            for (std::size_t j = 0; j < sc->subsets; ++j)
                out << (sc->covers(i, j) ? 1 : 0) << (j + 1 == sc->subsets ? '\n' : ' ');
        }
    } else if (const auto* cz = std::get_if<COCZInstance>(&st.instance)) {
        header(cz->n, cz->m);
    }
    if (!out)
        throw std::runtime_error("instance file: write failed");
}

inline StoredInstance read_instance(std::istream& in) {
    StoredInstance st;
    std::int64_t n_raw, m_raw;
    if (!(in >> st.problem))
        throw std::runtime_error("instance file: missing header");
    n_raw = detail::read_int(in, "n");
    m_raw = detail::read_int(in, "m");
    if (!(in >> st.seed))
        throw std::runtime_error("instance file: missing seed");
    if (n_raw <= 0 || m_raw < 0)
        throw std::runtime_error("instance file: bad dimensions");
    const auto n = static_cast<std::size_t>(n_raw);
    const auto m = static_cast<std::size_t>(m_raw);

    if (st.problem == "linear") {
        LinearInstance li;
        li.weights.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            li.weights.push_back(detail::read_int(in, "weight"));
        st.instance = std::move(li);
    } else if (st.problem == "subsetsum") {
        SubsetSumInstance ss;
        ss.weights.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            ss.weights.push_back(detail::read_int(in, "weight"));
        ss.target = detail::read_int(in, "target");
        st.instance = std::move(ss);
    } else if (st.problem == "knapsack") {
        KnapsackInstance kp;
        kp.weights.reserve(n);
        kp.profits.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            kp.weights.push_back(detail::read_int(in, "weight"));
        for (std::size_t i = 0; i < n; ++i)
            kp.profits.push_back(detail::read_int(in, "profit"));
        kp.capacity = detail::read_int(in, "capacity");
        st.instance = std::move(kp);
    } else if (st.problem == "setcover") {
        SetCoverInstance sc;
        sc.elements = m;
        sc.subsets = n;
        sc.membership.resize(m * n);
        for (auto& a : sc.membership) {
            const std::int64_t v = detail::read_int(in, "matrix entry");
            if (v != 0 && v != 1)
                throw std::runtime_error("instance file: matrix entries must be 0/1");
            a = static_cast<std::uint8_t>(v);
        }
        st.instance = std::move(sc);
    } else if (st.problem == "cocz") {
        st.instance = COCZInstance{n, m};
    } else {
        throw std::runtime_error("instance file: unknown problem '" + st.problem + "'");
    }
    return st;
}

inline void save_instance(const std::string& path, const StoredInstance& st) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    write_instance(out, st);
}

inline StoredInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open for reading: " + path);
    return read_instance(in);
}

} // namespace noisyopt
