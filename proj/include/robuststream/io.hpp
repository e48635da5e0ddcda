#pragma once
//
// File formats: row CSV (one row per line, optional trailing target column),
// whitespace edge lists with an `n m_bound` header, metric-series CSV, and
// the summary JSON. Floats are printed with 17 significant digits so
// artifacts round-trip losslessly.
//

#include <Eigen/Dense>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "robuststream/graph.hpp"
#include "robuststream/row_buffer.hpp"

namespace robuststream {

struct MetricSeries {
    std::string name;
    std::vector<std::pair<std::uint64_t, double>> points;  // rounds strictly increasing

    void push(std::uint64_t round, double value) {
        if (!points.empty() && round <= points.back().first)
            throw std::invalid_argument("MetricSeries: rounds must increase");
        points.emplace_back(round, value);
    }
};

inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::vector<Vector> read_row_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    std::vector<Vector> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                vals.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw std::runtime_error("bad numeric cell in " + path + ": '" + cell + "'");
            }
        }
        if (vals.empty()) continue;
        if (!rows.empty() && static_cast<Eigen::Index>(vals.size()) != rows.front().size())
            throw std::runtime_error("ragged CSV in " + path);
        rows.push_back(Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size())));
    }
    return rows;
}

inline void write_row_csv(const std::string& path, const std::vector<Vector>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    for (const auto& r : rows) {
        for (Eigen::Index j = 0; j < r.size(); ++j) {
            if (j) out << ',';
            out << format_double(r(j));
        }
        out << '\n';
    }
}

struct EdgeStream {
    int n = 0;
    std::uint64_t m_bound = 0;
    std::vector<Edge> edges;
};

// header line: `n m_bound`; body lines: `u v w`
inline EdgeStream read_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    EdgeStream es;
    if (!(in >> es.n >> es.m_bound))
        throw std::runtime_error("edge list missing `n m_bound` header: " + path);
    Edge e;
    while (in >> e.u >> e.v >> e.w) es.edges.push_back(e);
    return es;
}

inline void write_edge_list(const std::string& path, int n, std::uint64_t m_bound,
                            const std::vector<Edge>& edges) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << n << ' ' << m_bound << '\n';
    for (const auto& e : edges)
        out << e.u << ' ' << e.v << ' ' << format_double(e.w) << '\n';
}

inline void write_metric_series(const std::string& path, const MetricSeries& series) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "round,value\n";
    for (const auto& [round, value] : series.points)
        out << round << ',' << format_double(value) << '\n';
}

} // namespace robuststream
