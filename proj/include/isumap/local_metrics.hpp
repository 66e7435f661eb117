#ifndef ISUMAP_LOCAL_METRICS_HPP
#define ISUMAP_LOCAL_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "isumap/core.hpp"
#include "isumap/knn.hpp"
#include "isumap/metric_space.hpp"
#include "isumap/points.hpp"

namespace isumap {

enum class RhoMode { Zero, NearestNeighbor };
enum class SigmaMode { One, Knn, Smooth };
enum class FillMode { None, Sum, SumSqrt2, Ambient };

struct SigmaSolveInfo {
    double residual = 0.0;
    bool clamped = false;
};

// Solves sum_j exp(-d_j / sigma) = log2(k) for sigma by bracketed bisection.
// The left side is strictly increasing in sigma wherever some d_j > 0, so a
// sign change pins a unique root. No sign change in [1e-12, 1e12] means no
// root exists; the nearer bracket end is returned with clamped = true.
inline double solve_sigma(const std::vector<double>& offsets, std::size_t k,
                          SigmaSolveInfo* info = nullptr) {
    if (k < 2 || offsets.size() != k)
        throw InvalidParameter("solve_sigma: need k >= 2 matching the offset count");
    bool positive = false;
    for (double d : offsets) {
        if (d < 0.0 || !std::isfinite(d)) throw InvalidInput("solve_sigma: bad offset");
        positive = positive || d > 0.0;
    }
    if (!positive) throw InvalidParameter("solve_sigma: all offsets zero");

    const double target = std::log2(static_cast<double>(k));
    auto residual = [&](double sigma) {
        double s = 0.0;
        for (double d : offsets) s += std::exp(-d / sigma);
        return s - target;
    };

    const double lo_limit = 1e-12, hi_limit = 1e12;
    double lo = 1e-3, hi = 1e3;
    while (lo > lo_limit && residual(lo) > 0.0) lo = std::max(lo * 1e-3, lo_limit);
    while (hi < hi_limit && residual(hi) < 0.0) hi = std::min(hi * 1e3, hi_limit);

    double rlo = residual(lo), rhi = residual(hi);
    if (rlo > 0.0 || rhi < 0.0) {
        // monotone residual with one sign across the whole bracket
        double sigma = rlo > 0.0 ? lo_limit : hi_limit;
        if (info) {
            info->residual = residual(sigma);
            info->clamped = true;
        }
        return sigma;
    }

    for (int it = 0; it < 300 && (hi - lo) > 1e-14 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        double r = residual(mid);
        if (r == 0.0) {
            lo = hi = mid;
            break;
        }
        (r < 0.0 ? lo : hi) = mid;
    }
    double sigma = 0.5 * (lo + hi);
    if (info) {
        info->residual = residual(sigma);
        info->clamped = false;
    }
    return sigma;
}

struct LocalEntry {
    std::size_t u, v;  // u < v, global point indices
    double d;
};

// One star: finite distances for the center and its k neighbors; everything
// else is infinite.
struct LocalSpace {
    std::size_t center = 0;
    double rho = 0.0;
    double sigma = 1.0;
    std::vector<LocalEntry> entries;  // sorted by (u, v)
};

struct LocalMetricFamily {
    std::size_t n = 0;
    std::size_t k = 0;
    FillMode fill = FillMode::None;
    std::vector<LocalSpace> spaces;
    std::vector<std::string> warnings;

    // Distance within space i; infinity when the pair is outside its support.
    double local_distance(std::size_t i, std::size_t a, std::size_t b) const {
        if (a == b) return 0.0;
        if (a > b) std::swap(a, b);
        const auto& es = spaces[i].entries;
        auto it = std::lower_bound(es.begin(), es.end(), std::make_pair(a, b),
                                   [](const LocalEntry& e, const std::pair<std::size_t, std::size_t>& p) {
                                       return std::make_pair(e.u, e.v) < p;
                                   });
        if (it != es.end() && it->u == a && it->v == b) return it->d;
        return kInf;
    }

    // Center plus neighbors of star i.
    std::vector<std::size_t> star_members(std::size_t i) const {
        std::vector<std::size_t> m = {spaces[i].center};
        for (const auto& e : spaces[i].entries) {
            if (e.u == spaces[i].center || e.v == spaces[i].center)
                m.push_back(e.u == spaces[i].center ? e.v : e.u);
        }
        std::sort(m.begin(), m.end());
        m.erase(std::unique(m.begin(), m.end()), m.end());
        return m;
    }

    // Star i as a dense table over all n points (EPMet-valid: off-support
    // pairs are infinite).
    FiniteMetricSpace dense_space(std::size_t i) const {
        FiniteMetricSpace X(n, Mode::EPMet);
        std::fill(X.dist.begin(), X.dist.end(), kInf);
        for (std::size_t p = 0; p < n; ++p) X.at(p, p) = 0.0;
        for (const auto& e : spaces[i].entries) X.set(e.u, e.v, e.d);
        return X;
    }
};

// Builds the per-point star metrics: entry (i, i_j) = (raw - rho_i) / sigma_i,
// optional neighbor-neighbor fill. Fill values are clamped into
// [|d1 - d2|, d1 + d2] so every star stays a valid metric; only SUM_SQRT2 can
// actually hit the floor, the others sit inside the interval by construction.
inline LocalMetricFamily local_metrics(const NeighborLists& nb, RhoMode rho_mode,
                                       SigmaMode sigma_mode, FillMode fill,
                                       const PointTable* points = nullptr,
                                       AmbientMetric metric = AmbientMetric::Euclidean) {
    std::size_t n = nb.size();
    std::size_t k = nb.k;
    if (fill == FillMode::Ambient && points == nullptr)
        throw InvalidParameter("local_metrics: AMBIENT fill needs coordinates");
    if (sigma_mode == SigmaMode::Smooth && k < 2)
        throw InvalidParameter("local_metrics: SMOOTH sigma needs k >= 2");
    if (points && points->n != n)
        throw InvalidInput("local_metrics: coordinate row count mismatch");

    LocalMetricFamily fam;
    fam.n = n;
    fam.k = k;
    fam.fill = fill;
    fam.spaces.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        const auto& list = nb.lists[i];
        LocalSpace& sp = fam.spaces[i];
        sp.center = i;
        sp.rho = rho_mode == RhoMode::Zero ? 0.0 : list.front().dist;

        switch (sigma_mode) {
            case SigmaMode::One:
                sp.sigma = 1.0;
                break;
            case SigmaMode::Knn: {
                double dk = list.back().dist;
                if (dk > 0.0) {
                    sp.sigma = dk;
                } else {
                    // duplicate points: all k neighbors at distance 0
                    double best = kInf;
                    if (points)
                        for (std::size_t j = 0; j < n; ++j) {
                            if (j == i) continue;
                            double d = ambient_distance(*points, i, j, metric);
                            if (d > 0.0 && d < best) best = d;
                        }
                    sp.sigma = best < kInf ? best : 1.0;
                    fam.warnings.push_back("sigma=KNN degenerate at point " + std::to_string(i) +
                                           ": k-th neighbor at distance 0");
                }
                break;
            }
            case SigmaMode::Smooth: {
                std::vector<double> offsets(k);
                bool positive = false;
                for (std::size_t j = 0; j < k; ++j) {
                    offsets[j] = std::max(0.0, list[j].dist - sp.rho);
                    positive = positive || offsets[j] > 0.0;
                }
                if (!positive) {
                    sp.sigma = 1.0;
                    fam.warnings.push_back("sigma=SMOOTH degenerate at point " +
                                           std::to_string(i) + ": all offsets zero");
                } else {
                    SigmaSolveInfo si;
                    sp.sigma = solve_sigma(offsets, k, &si);
                    if (si.clamped)
                        fam.warnings.push_back("sigma=SMOOTH clamped at point " +
                                               std::to_string(i) + ", residual " +
                                               std::to_string(si.residual));
                }
                break;
            }
        }

        std::vector<double> local(k);
        for (std::size_t j = 0; j < k; ++j) {
            local[j] = std::max(0.0, list[j].dist - sp.rho) / sp.sigma;
            std::size_t a = std::min(i, list[j].index), b = std::max(i, list[j].index);
            sp.entries.push_back({a, b, local[j]});
        }

        if (fill != FillMode::None) {
            for (std::size_t j = 0; j < k; ++j)
                for (std::size_t l = j + 1; l < k; ++l) {
                    double d1 = local[j], d2 = local[l];
                    double f;
                    switch (fill) {
                        case FillMode::Sum:
                            f = d1 + d2;
                            break;
                        case FillMode::SumSqrt2:
                            f = (d1 + d2) / std::sqrt(2.0);
                            break;
                        case FillMode::Ambient: {
                            std::size_t a = list[j].index, b = list[l].index;
                            double acc = 0.0;
                            double na = ambient_distance(*points, i, a, metric);
                            double nb2 = ambient_distance(*points, i, b, metric);
                            for (std::size_t dco = 0; dco < points->dim; ++dco) {
                                double va = na > 0.0
                                                ? (points->at(a, dco) - points->at(i, dco)) / na * d1
                                                : 0.0;
                                double vb = nb2 > 0.0
                                                ? (points->at(b, dco) - points->at(i, dco)) / nb2 * d2
                                                : 0.0;
                                acc += (va - vb) * (va - vb);
                            }
                            f = std::sqrt(acc);
                            break;
                        }
                        default:
                            f = 0.0;
                    }
                    f = std::min(std::max(f, std::abs(d1 - d2)), d1 + d2);
                    std::size_t a = std::min(list[j].index, list[l].index);
                    std::size_t b = std::max(list[j].index, list[l].index);
                    sp.entries.push_back({a, b, f});
                }
        }

        std::sort(sp.entries.begin(), sp.entries.end(), [](const LocalEntry& x, const LocalEntry& y) {
            return std::make_pair(x.u, x.v) < std::make_pair(y.u, y.v);
        });
    }
    return fam;
}

}  // namespace isumap

#endif
