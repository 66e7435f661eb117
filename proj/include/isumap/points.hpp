#ifndef ISUMAP_POINTS_HPP
#define ISUMAP_POINTS_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "isumap/core.hpp"

namespace isumap {

// Row-major n x dim coordinate table.
struct PointTable {
    std::size_t n = 0;
    std::size_t dim = 0;
    std::vector<double> values;  // n * dim

    PointTable() = default;
    PointTable(std::size_t n_, std::size_t dim_) : n(n_), dim(dim_), values(n_ * dim_, 0.0) {}

    double* row(std::size_t i) { return values.data() + i * dim; }
    const double* row(std::size_t i) const { return values.data() + i * dim; }
    double& at(std::size_t i, std::size_t j) { return values[i * dim + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * dim + j]; }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

enum class AmbientMetric { Euclidean, Manhattan, Chebyshev };

inline double ambient_distance(const double* a, const double* b, std::size_t dim,
                               AmbientMetric metric = AmbientMetric::Euclidean) {
    switch (metric) {
        case AmbientMetric::Euclidean: {
            double s = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                double diff = a[d] - b[d];
                s += diff * diff;
            }
            return std::sqrt(s);
        }
        case AmbientMetric::Manhattan: {
            double s = 0.0;
            for (std::size_t d = 0; d < dim; ++d) s += std::abs(a[d] - b[d]);
            return s;
        }
        case AmbientMetric::Chebyshev: {
            double s = 0.0;
            for (std::size_t d = 0; d < dim; ++d) s = std::max(s, std::abs(a[d] - b[d]));
            return s;
        }
    }
    return 0.0;
}

inline double ambient_distance(const PointTable& pts, std::size_t i, std::size_t j,
                               AmbientMetric metric = AmbientMetric::Euclidean) {
    return ambient_distance(pts.row(i), pts.row(j), pts.dim, metric);
}

}  // namespace isumap

#endif
