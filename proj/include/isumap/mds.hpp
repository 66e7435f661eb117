#ifndef ISUMAP_MDS_HPP
#define ISUMAP_MDS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "isumap/core.hpp"
#include "isumap/metric_space.hpp"

namespace isumap {

enum class Provenance { Cmds, Mmds, Separated };

struct Embedding {
    std::size_t n = 0;
    std::size_t m = 0;
    Provenance provenance = Provenance::Cmds;
    std::vector<double> coords;  // row-major n x m

    double& at(std::size_t i, std::size_t c) { return coords[i * m + c]; }
    double at(std::size_t i, std::size_t c) const { return coords[i * m + c]; }
    bool all_finite() const {
        for (double v : coords)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

// Replaces every infinite entry by 1.5x the largest finite entry, the standard
// way to make a disconnected table embeddable. Returns the number of slots
// rewritten so the caller can warn.
inline std::size_t repair_infinite(FiniteMetricSpace& D) {
    double largest = 0.0;
    for (double v : D.dist)
        if (is_finite(v) && v > largest) largest = v;
    std::size_t replaced = 0;
    for (double& v : D.dist)
        if (!is_finite(v)) {
            v = 1.5 * largest;
            ++replaced;
        }
    return replaced;
}

namespace detail {

constexpr double kPowerTol = 1e-13;
constexpr int kPowerMaxIter = 10000;
constexpr int kPowerStall = 200;  // iterations without residual progress

// Deflated power iteration on the shifted matrix B + s*I with
// s = max_i sum_j |B_ij|. The shift makes every eigenvalue nonnegative, so
// magnitude order equals algebraic order and plain power iteration finds the
// algebraically largest remaining pair. Deterministic seeded starts.
inline void top_eigenpairs(const std::vector<double>& B, std::size_t n, std::size_t m,
                           std::vector<double>& values, std::vector<double>& vectors) {
    double shift = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::abs(B[i * n + j]);
        shift = std::max(shift, row);
    }
    const double tol = kPowerTol * (shift > 0.0 ? shift : 1.0);

    values.assign(m, 0.0);
    vectors.assign(m * n, 0.0);
    std::vector<double> x(n), y(n);
    for (std::size_t c = 0; c < m; ++c) {
        std::mt19937_64 rng(0x15bd00d5u + c);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (double& v : x) v = gauss(rng);

        auto orthogonalize = [&](std::vector<double>& v) {
            for (std::size_t f = 0; f < c; ++f) {
                const double* w = vectors.data() + f * n;
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += v[i] * w[i];
                for (std::size_t i = 0; i < n; ++i) v[i] -= dot * w[i];
            }
        };
        auto normalize = [&](std::vector<double>& v) {
            double norm = 0.0;
            for (double t : v) norm += t * t;
            norm = std::sqrt(norm);
            if (norm < 1e-300) return false;
            for (double& t : v) t /= norm;
            return true;
        };
        orthogonalize(x);
        if (!normalize(x)) {
            x.assign(n, 0.0);
            x[c % n] = 1.0;
            orthogonalize(x);
            normalize(x);
        }

        double mu = 0.0;
        double best_res = kInf;
        int stale = 0;
        for (int it = 0; it < kPowerMaxIter; ++it) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = shift * x[i];
                const double* row = B.data() + i * n;
                for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
                y[i] = acc;
            }
            for (std::size_t f = 0; f < c; ++f) {  // deflate finished pairs
                const double* w = vectors.data() + f * n;
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += y[i] * w[i];
                double lam = values[f] + shift;
                for (std::size_t i = 0; i < n; ++i) y[i] -= lam * dot * w[i];
            }
            mu = 0.0;
            for (std::size_t i = 0; i < n; ++i) mu += x[i] * y[i];
            double res = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double r = y[i] - mu * x[i];
                res += r * r;
            }
            if (std::sqrt(res) <= tol) break;
            // rounding floor: stop once the residual no longer improves
            if (res < 0.999 * best_res) {
                best_res = res;
                stale = 0;
            } else if (++stale >= kPowerStall) {
                break;
            }
            if (!normalize(y)) {
                mu = 0.0;  // x is in the kernel of the deflated matrix
                break;
            }
            x = y;
            orthogonalize(x);
            normalize(x);
        }
        values[c] = mu - shift;

        // sign convention: entry of largest magnitude positive
        std::size_t imax = 0;
        double amax = -1.0;
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(x[i]) > amax) {
                amax = std::abs(x[i]);
                imax = i;
            }
        if (x[imax] < 0.0)
            for (double& v : x) v = -v;
        std::copy(x.begin(), x.end(), vectors.begin() + c * n);
    }
}

}  // namespace detail

// Classical MDS: double-center the squared table, take the m algebraically
// largest eigenpairs, scale eigenvectors by sqrt(max(lambda, 0)). Negative
// eigenvalues (non-Euclidean input) clamp to zero coordinates; the raw values
// are reported through eigenvalues_out.
inline Embedding classical_mds(const FiniteMetricSpace& D, std::size_t m,
                               std::vector<double>* eigenvalues_out = nullptr) {
    const std::size_t n = D.n;
    if (m < 1 || m >= n) throw InvalidParameter("classical_mds: need 1 <= m < n");
    for (double v : D.dist)
        if (!is_finite(v)) throw InvalidInput("classical_mds: infinite distance, repair first");
    D.validate_basic();

    // B = -1/2 J D^2 J through row means (symmetric input: row mean = column mean)
    std::vector<double> sq(n * n);
    for (std::size_t i = 0; i < n * n; ++i) sq[i] = D.dist[i] * D.dist[i];
    std::vector<double> rowmean(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) rowmean[i] += sq[i * n + j];
        rowmean[i] /= static_cast<double>(n);
        grand += rowmean[i];
    }
    grand /= static_cast<double>(n);
    std::vector<double> B(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            B[i * n + j] = -0.5 * (sq[i * n + j] - rowmean[i] - rowmean[j] + grand);

    std::vector<double> values, vectors;
    detail::top_eigenpairs(B, n, m, values, vectors);
    if (eigenvalues_out) *eigenvalues_out = values;

    Embedding emb;
    emb.n = n;
    emb.m = m;
    emb.provenance = Provenance::Cmds;
    emb.coords.assign(n * m, 0.0);
    for (std::size_t c = 0; c < m; ++c) {
        double scale = values[c] > 0.0 ? std::sqrt(values[c]) : 0.0;
        for (std::size_t i = 0; i < n; ++i) emb.at(i, c) = vectors[c * n + i] * scale;
    }
    for (std::size_t c = 0; c < m; ++c) {  // eigenvectors are near-centered; make it exact
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += emb.at(i, c);
        mean /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) emb.at(i, c) -= mean;
    }
    return emb;
}

// Raw stress: sum over unordered pairs of (D_ij - |y_i - y_j|)^2.
inline double stress(const FiniteMetricSpace& D, const std::vector<double>& coords,
                     std::size_t m) {
    const std::size_t n = D.n;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double r2 = 0.0;
            for (std::size_t c = 0; c < m; ++c) {
                double t = coords[i * m + c] - coords[j * m + c];
                r2 += t * t;
            }
            double t = D.dist[i * n + j] - std::sqrt(r2);
            acc += t * t;
        }
    return acc;
}

// Coincident points with a positive target would divide by zero in the
// direction term; the denominator floor keeps the gradient finite (and zero,
// since the numerator direction is the zero vector there).
constexpr double kStressEps = 1e-9;

inline std::vector<double> stress_gradient(const FiniteMetricSpace& D,
                                           const std::vector<double>& coords, std::size_t m) {
    const std::size_t n = D.n;
    std::vector<double> g(n * m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double r2 = 0.0;
            for (std::size_t c = 0; c < m; ++c) {
                double t = coords[i * m + c] - coords[j * m + c];
                r2 += t * t;
            }
            double r = std::sqrt(r2);
            double coef = -2.0 * (D.dist[i * n + j] - r) / std::max(r, kStressEps);
            for (std::size_t c = 0; c < m; ++c) {
                double t = coords[i * m + c] - coords[j * m + c];
                g[i * m + c] += coef * t;
                g[j * m + c] -= coef * t;
            }
        }
    return g;
}

struct SgdResult {
    Embedding embedding;
    std::vector<double> stress;  // epochs + 1 entries, non-increasing
};

// Stochastic metric MDS on raw stress. Pairs are shuffled once per epoch
// (without replacement) and processed in minibatches; the full objective is
// evaluated every epoch and a worsening epoch is rolled back with the step
// halved, which makes the recorded history monotone by construction.
inline SgdResult metric_mds_sgd(const FiniteMetricSpace& D, const Embedding& init,
                                std::size_t epochs, std::size_t batch_size, double learning_rate,
                                std::uint64_t seed) {
    const std::size_t n = D.n, m = init.m;
    if (init.n != n || init.coords.size() != n * m)
        throw InvalidInput("metric_mds_sgd: init does not match the distance table");
    if (batch_size < 1) throw InvalidParameter("metric_mds_sgd: batch_size must be positive");
    if (!(learning_rate > 0.0)) throw InvalidParameter("metric_mds_sgd: learning rate must be positive");
    for (double v : D.dist)
        if (!is_finite(v)) throw InvalidInput("metric_mds_sgd: infinite distance, repair first");

    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            pairs.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));

    std::vector<double> y = init.coords;
    std::vector<double> y_prev(y.size());
    std::vector<double> g(n * m);
    SgdResult out;
    out.stress.reserve(epochs + 1);
    out.stress.push_back(stress(D, y, m));

    std::mt19937_64 rng(seed);
    double lr = learning_rate;
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        std::shuffle(pairs.begin(), pairs.end(), rng);
        y_prev = y;
        for (std::size_t start = 0; start < pairs.size(); start += batch_size) {
            std::size_t stop = std::min(start + batch_size, pairs.size());
            std::fill(g.begin(), g.end(), 0.0);
            for (std::size_t p = start; p < stop; ++p) {
                std::size_t i = pairs[p].first, j = pairs[p].second;
                double r2 = 0.0;
                for (std::size_t c = 0; c < m; ++c) {
                    double t = y[i * m + c] - y[j * m + c];
                    r2 += t * t;
                }
                double r = std::sqrt(r2);
                double coef = -2.0 * (D.dist[i * n + j] - r) / std::max(r, kStressEps);
                for (std::size_t c = 0; c < m; ++c) {
                    double t = y[i * m + c] - y[j * m + c];
                    g[i * m + c] += coef * t;
                    g[j * m + c] -= coef * t;
                }
            }
            for (std::size_t idx = 0; idx < y.size(); ++idx) y[idx] -= lr * g[idx];
        }
        double s = stress(D, y, m);
        if (s > out.stress.back()) {
            y = y_prev;  // rejected epoch: restore and halve the step
            lr *= 0.5;
            out.stress.push_back(out.stress.back());
        } else {
            out.stress.push_back(s);
        }
    }

    out.embedding.n = n;
    out.embedding.m = m;
    out.embedding.provenance = Provenance::Mmds;
    out.embedding.coords = std::move(y);
    return out;
}

}  // namespace isumap

#endif
