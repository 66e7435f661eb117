#ifndef ISUMAP_METRIC_SPACE_HPP
#define ISUMAP_METRIC_SPACE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "isumap/core.hpp"

namespace isumap {

// Finite point set with a symmetric table of extended-real distances.
// UM mode promises the triangle inequality for every triple (inf + x = inf);
// EPMet mode exempts triples whose left side is inf.
struct FiniteMetricSpace {
    std::size_t n = 0;
    Mode mode = Mode::UM;
    std::vector<std::string> labels;  // optional, empty or size n
    std::vector<double> dist;         // dense row-major n x n

    FiniteMetricSpace() = default;
    FiniteMetricSpace(std::size_t n_, Mode mode_)
        : n(n_), mode(mode_), dist(n_ * n_, 0.0) {}

    double at(std::size_t i, std::size_t j) const { return dist[i * n + j]; }
    double& at(std::size_t i, std::size_t j) { return dist[i * n + j]; }

    void set(std::size_t i, std::size_t j, double d) {
        dist[i * n + j] = d;
        dist[j * n + i] = d;
    }

    // Cheap structural checks (diagonal, symmetry, sign); O(n^2).
    void validate_basic() const {
        for (std::size_t i = 0; i < n; ++i) {
            if (at(i, i) != 0.0) throw InvalidInput("metric table: nonzero diagonal");
            for (std::size_t j = i + 1; j < n; ++j) {
                double d = at(i, j);
                if (d != at(j, i)) throw InvalidInput("metric table: asymmetric");
                if (std::isnan(d) || d < 0.0) throw InvalidInput("metric table: invalid entry");
            }
        }
    }

    // Exhaustive triangle scan honoring the mode; O(n^3), test/desk scale only.
    bool triangle_holds(double tol = 0.0) const {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                double dik = at(i, k);
                if (mode == Mode::EPMet && dik == kInf) continue;
                for (std::size_t j = 0; j < n; ++j) {
                    double rhs = at(i, j) + at(j, k);
                    if (dik > rhs + tol) return false;
                }
            }
        return true;
    }
};

}  // namespace isumap

#endif
