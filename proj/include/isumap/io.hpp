#ifndef ISUMAP_IO_HPP
#define ISUMAP_IO_HPP

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "isumap/core.hpp"
#include "isumap/fuzzy_graph.hpp"
#include "isumap/mds.hpp"
#include "isumap/metric_space.hpp"
#include "isumap/points.hpp"
#include "isumap/separation.hpp"

namespace isumap {

namespace detail {

// shortest exact decimal: every finite double survives a write/read cycle
inline std::string fmt_double(double v) {
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline bool parse_double(const std::string& field, double& out) {
    const char* begin = field.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin) return false;
    while (*end == ' ' || *end == '\t') ++end;
    return *end == '\0';
}

inline bool parse_int(const std::string& field, long& out) {
    const char* begin = field.c_str();
    char* end = nullptr;
    out = std::strtol(begin, &end, 10);
    if (end == begin) return false;
    while (*end == ' ' || *end == '\t') ++end;
    return *end == '\0';
}

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t at = 0;
    for (;;) {
        std::size_t comma = line.find(',', at);
        if (comma == std::string::npos) {
            out.push_back(trim(line.substr(at)));
            return out;
        }
        out.push_back(trim(line.substr(at, comma - at)));
        at = comma + 1;
    }
}

inline std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw InvalidInput("cannot read '" + path + "'");
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        rows.push_back(split_csv(line));
    }
    if (rows.empty()) throw InvalidInput("'" + path + "' holds no data");
    return rows;
}

inline bool numeric_row(const std::vector<std::string>& row) {
    double ignored;
    for (const auto& f : row)
        if (!parse_double(f, ignored)) return false;
    return true;
}

inline std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out.good()) throw InvalidInput("cannot write '" + path + "'");
    return out;
}

inline nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw InvalidInput("cannot read '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
        throw InvalidInput("'" + path + "': " + ex.what());
    }
}

}  // namespace detail

// --------------------------------------------------------- coordinate csv
// One row per point, full-precision float columns, header "x0,x1,..." with an
// optional trailing integer "label" column. Headers are auto-detected on read
// (a non-numeric first row); headerless files are all-coordinate.

struct PointsCsv {
    PointTable points;
    std::vector<int> labels;
    bool has_labels = false;
};

inline void write_points_csv(const std::string& path, const PointTable& pts,
                             const std::vector<int>* labels = nullptr) {
    if (labels && labels->size() != pts.n)
        throw InvalidInput("write_points_csv: label count mismatch");
    auto out = detail::open_out(path);
    for (std::size_t d = 0; d < pts.dim; ++d) out << (d ? ",x" : "x") << d;
    if (labels) out << ",label";
    out << "\n";
    for (std::size_t i = 0; i < pts.n; ++i) {
        for (std::size_t d = 0; d < pts.dim; ++d)
            out << (d ? "," : "") << detail::fmt_double(pts.at(i, d));
        if (labels) out << "," << (*labels)[i];
        out << "\n";
    }
}

inline PointsCsv read_points_csv(const std::string& path) {
    auto rows = detail::read_csv_rows(path);
    PointsCsv out;
    std::size_t first = 0;
    if (!detail::numeric_row(rows[0])) {
        first = 1;
        out.has_labels = rows[0].back() == "label";
        if (rows.size() == 1) throw InvalidInput("'" + path + "' holds no data rows");
    }
    const std::size_t cols = rows[first].size();
    if (cols < (out.has_labels ? 2u : 1u)) throw InvalidInput("'" + path + "': too few columns");
    const std::size_t dim = cols - (out.has_labels ? 1 : 0);
    const std::size_t n = rows.size() - first;
    out.points = PointTable(n, dim);
    if (out.has_labels) out.labels.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& row = rows[first + r];
        if (row.size() != cols) throw InvalidInput("'" + path + "': ragged row");
        for (std::size_t d = 0; d < dim; ++d)
            if (!detail::parse_double(row[d], out.points.at(r, d)))
                throw InvalidInput("'" + path + "': bad number '" + row[d] + "'");
        if (out.has_labels) {
            long l;
            if (!detail::parse_int(row[dim], l))
                throw InvalidInput("'" + path + "': bad label '" + row[dim] + "'");
            out.labels[r] = static_cast<int>(l);
        }
    }
    return out;
}

// ----------------------------------------------------------- distance csv
// Headerless square matrix, "inf" marking unreachable pairs.

inline void write_distance_csv(const std::string& path, const FiniteMetricSpace& D) {
    auto out = detail::open_out(path);
    for (std::size_t i = 0; i < D.n; ++i) {
        for (std::size_t j = 0; j < D.n; ++j)
            out << (j ? "," : "") << detail::fmt_double(D.at(i, j));
        out << "\n";
    }
}

inline FiniteMetricSpace read_distance_csv(const std::string& path, Mode mode) {
    auto rows = detail::read_csv_rows(path);
    const std::size_t n = rows.size();
    FiniteMetricSpace D(n, mode);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw InvalidInput("'" + path + "': table is not square");
        for (std::size_t j = 0; j < n; ++j)
            if (!detail::parse_double(rows[i][j], D.at(i, j)))
                throw InvalidInput("'" + path + "': bad number '" + rows[i][j] + "'");
    }
    D.validate_basic();
    return D;
}

// -------------------------------------------------------- condensed binary
// Magic "ISUD1", little-endian u32 point count, then the n(n-1)/2 upper
// triangle as little-endian float64 in row-major order.

inline void write_distance_bin(const std::string& path, const FiniteMetricSpace& D) {
    auto out = detail::open_out(path, true);
    std::string buf = "ISUD1";
    const auto n32 = static_cast<std::uint32_t>(D.n);
    for (std::size_t b = 0; b < 4; ++b) buf.push_back(static_cast<char>((n32 >> (8 * b)) & 0xff));
    for (std::size_t i = 0; i < D.n; ++i)
        for (std::size_t j = i + 1; j < D.n; ++j) {
            const auto bits = std::bit_cast<std::uint64_t>(D.at(i, j));
            for (std::size_t b = 0; b < 8; ++b)
                buf.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
        }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

inline FiniteMetricSpace read_distance_bin(const std::string& path, Mode mode) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw InvalidInput("cannot read '" + path + "'");
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (raw.size() < 9 || raw.substr(0, 5) != "ISUD1")
        throw InvalidInput("'" + path + "': not a condensed distance file");
    auto byte = [&](std::size_t at) { return static_cast<std::uint64_t>(static_cast<unsigned char>(raw[at])); };
    std::uint32_t n = 0;
    for (std::size_t b = 0; b < 4; ++b) n |= static_cast<std::uint32_t>(byte(5 + b)) << (8 * b);
    const std::size_t entries = static_cast<std::size_t>(n) * (n - 1) / 2;
    if (raw.size() != 9 + 8 * entries)
        throw InvalidInput("'" + path + "': truncated condensed distance file");
    FiniteMetricSpace D(n, mode);
    std::size_t slot = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j, ++slot) {
            std::uint64_t bits = 0;
            for (std::size_t b = 0; b < 8; ++b) bits |= byte(9 + slot * 8 + b) << (8 * b);
            D.set(i, j, std::bit_cast<double>(bits));
        }
    D.validate_basic();
    return D;
}

// -------------------------------------------------------- fuzzy graph json
// {"n": count, "xi0": [vertex strengths], "edges": [[i, j, strength], ...]}
// with i < j and edges sorted.

inline void write_fuzzy_graph_json(const std::string& path, const FuzzyGraph& g) {
    g.validate();
    nlohmann::json j;
    j["n"] = g.n;
    j["xi0"] = g.xi0;
    auto edges = nlohmann::json::array();
    for (const auto& e : g.edges) edges.push_back({e.u, e.v, e.s});
    j["edges"] = std::move(edges);
    detail::open_out(path) << j.dump(1) << "\n";
}

inline FuzzyGraph read_fuzzy_graph_json(const std::string& path) {
    auto j = detail::load_json(path);
    FuzzyGraph g;
    try {
        g.n = j.at("n").get<std::size_t>();
        g.xi0 = j.at("xi0").get<std::vector<double>>();
        for (const auto& e : j.at("edges"))
            g.edges.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(),
                               e.at(2).get<double>()});
    } catch (const nlohmann::json::exception& ex) {
        throw InvalidInput("'" + path + "': " + ex.what());
    }
    g.validate();
    return g;
}

// ------------------------------------------------------------ embedding csv
// Full-precision coordinate columns "y0,y1,..." plus an optional integer
// "label" column, mirroring the point format.

struct EmbeddingCsv {
    Embedding embedding;
    std::vector<int> labels;
    bool has_labels = false;
};

inline void write_embedding_csv(const std::string& path, const Embedding& e,
                                const std::vector<int>* labels = nullptr) {
    if (labels && labels->size() != e.n)
        throw InvalidInput("write_embedding_csv: label count mismatch");
    auto out = detail::open_out(path);
    for (std::size_t c = 0; c < e.m; ++c) out << (c ? ",y" : "y") << c;
    if (labels) out << ",label";
    out << "\n";
    for (std::size_t i = 0; i < e.n; ++i) {
        for (std::size_t c = 0; c < e.m; ++c)
            out << (c ? "," : "") << detail::fmt_double(e.at(i, c));
        if (labels) out << "," << (*labels)[i];
        out << "\n";
    }
}

inline EmbeddingCsv read_embedding_csv(const std::string& path) {
    auto raw = read_points_csv(path);
    EmbeddingCsv out;
    out.embedding.n = raw.points.n;
    out.embedding.m = raw.points.dim;
    out.embedding.coords = std::move(raw.points.values);
    out.labels = std::move(raw.labels);
    out.has_labels = raw.has_labels;
    return out;
}

// -------------------------------------------------------------- labels csv
// Single integer column, no header.

inline void write_labels_csv(const std::string& path, const std::vector<int>& labels) {
    auto out = detail::open_out(path);
    for (int l : labels) out << l << "\n";
}

inline std::vector<int> read_labels_csv(const std::string& path) {
    auto rows = detail::read_csv_rows(path);
    std::size_t first = detail::numeric_row(rows[0]) ? 0 : 1;
    std::vector<int> out;
    for (std::size_t r = first; r < rows.size(); ++r) {
        if (rows[r].size() != 1) throw InvalidInput("'" + path + "': expected one column");
        long l;
        if (!detail::parse_int(rows[r][0], l))
            throw InvalidInput("'" + path + "': bad label '" + rows[r][0] + "'");
        out.push_back(static_cast<int>(l));
    }
    if (out.empty()) throw InvalidInput("'" + path + "' holds no labels");
    return out;
}

// ----------------------------------------------------------- history json

inline void write_stress_json(const std::string& path, const std::vector<double>& history) {
    detail::open_out(path) << nlohmann::json(history).dump() << "\n";
}

inline std::vector<double> read_stress_json(const std::string& path) {
    try {
        return detail::load_json(path).get<std::vector<double>>();
    } catch (const nlohmann::json::exception& ex) {
        throw InvalidInput("'" + path + "': " + ex.what());
    }
}

// -------------------------------------------------------------- trace json
// Array of {"iteration", "loss", "theta", "medoids"}, medoids as [x, y] pairs.

inline void write_trace_json(const std::string& path,
                             const std::vector<SeparationState::Record>& trace) {
    auto arr = nlohmann::json::array();
    for (const auto& r : trace) {
        nlohmann::json rec;
        rec["iteration"] = r.iteration;
        rec["loss"] = r.loss;
        rec["theta"] = r.theta;
        auto med = nlohmann::json::array();
        for (std::size_t j = 0; 2 * j + 1 < r.medoid_xy.size(); ++j)
            med.push_back({r.medoid_xy[2 * j], r.medoid_xy[2 * j + 1]});
        rec["medoids"] = std::move(med);
        arr.push_back(std::move(rec));
    }
    detail::open_out(path) << arr.dump(1) << "\n";
}

inline std::vector<SeparationState::Record> read_trace_json(const std::string& path) {
    auto j = detail::load_json(path);
    std::vector<SeparationState::Record> out;
    try {
        for (const auto& rec : j) {
            SeparationState::Record r;
            r.iteration = rec.at("iteration").get<std::size_t>();
            r.loss = rec.at("loss").get<double>();
            r.theta = rec.at("theta").get<std::vector<double>>();
            for (const auto& m : rec.at("medoids")) {
                r.medoid_xy.push_back(m.at(0).get<double>());
                r.medoid_xy.push_back(m.at(1).get<double>());
            }
            out.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& ex) {
        throw InvalidInput("'" + path + "': " + ex.what());
    }
    return out;
}

}  // namespace isumap

#endif
