#ifndef ISUMAP_CLUSTER_HPP
#define ISUMAP_CLUSTER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "isumap/core.hpp"
#include "isumap/metric_space.hpp"

namespace isumap {

enum class Linkage { Single, Average, Complete };

// Agglomerative clustering on a finite distance table, cut at c clusters.
// Matrix form of the standard update rules; merged clusters live in the slot
// of their smallest member, and the merge scan visits slot pairs (i, j), i < j,
// ascending with a strict <, so ties resolve to the lexicographically smallest
// pair of smallest members. Labels are assigned 0..c-1 by ascending smallest
// member. O(n^3) worst case, intended for n in the low thousands.
inline std::vector<int> linkage_clusters(const FiniteMetricSpace& D, std::size_t c, Linkage rule) {
    const std::size_t n = D.n;
    if (c < 1 || c > n) throw InvalidParameter("linkage_clusters: need 1 <= c <= n");
    for (double v : D.dist)
        if (!(v < kInf)) throw InvalidInput("linkage_clusters: table must be finite, repair first");

    std::vector<double> W = D.dist;  // working cluster-distance matrix
    std::vector<bool> alive(n, true);
    std::vector<std::size_t> size(n, 1);
    std::vector<std::vector<std::size_t>> members(n);
    for (std::size_t i = 0; i < n; ++i) members[i] = {i};

    for (std::size_t live = n; live > c; --live) {
        double best = kInf;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!alive[j]) continue;
                if (W[i * n + j] < best) {
                    best = W[i * n + j];
                    bi = i;
                    bj = j;
                }
            }
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (!alive[k] || k == bi || k == bj) continue;
            double a = W[bi * n + k], b = W[bj * n + k];
            double m = rule == Linkage::Single     ? std::min(a, b)
                       : rule == Linkage::Complete ? std::max(a, b)
                                                   : (static_cast<double>(size[bi]) * a +
                                                      static_cast<double>(size[bj]) * b) /
                                                         static_cast<double>(size[bi] + size[bj]);
            W[bi * n + k] = W[k * n + bi] = m;
        }
        size[bi] += size[bj];
        members[bi].insert(members[bi].end(), members[bj].begin(), members[bj].end());
        alive[bj] = false;
    }

    std::vector<int> labels(n, -1);
    int id = 0;
    for (std::size_t slot = 0; slot < n; ++slot) {
        if (!alive[slot]) continue;
        for (std::size_t p : members[slot]) labels[p] = id;
        ++id;
    }
    return labels;
}

// Clustered view of a metric space: per-cluster medoids plus the original-space
// distance table between them. target is filled by compute_targets.
struct ClusterModel {
    std::size_t n = 0;
    std::size_t c = 0;
    std::vector<int> labels;           // size n, values 0..c-1
    std::vector<std::size_t> medoid;   // size c, point index of each medoid
    std::vector<double> medoid_dist;   // c x c original-space distances
    std::vector<double> target;        // c x c separation targets, empty until set
};

// Medoid = row-sum minimizer within each cluster, ties to the lowest index.
inline ClusterModel medoids(const FiniteMetricSpace& D, const std::vector<int>& labels) {
    const std::size_t n = D.n;
    if (labels.size() != n) throw InvalidInput("medoids: labels size mismatch");
    int cmax = -1;
    for (int l : labels) {
        if (l < 0) throw InvalidInput("medoids: negative label");
        cmax = std::max(cmax, l);
    }
    if (cmax < 0) throw InvalidInput("medoids: empty labeling");
    const std::size_t c = static_cast<std::size_t>(cmax) + 1;
    std::vector<std::size_t> count(c, 0);
    for (int l : labels) ++count[static_cast<std::size_t>(l)];
    for (std::size_t j = 0; j < c; ++j)
        if (count[j] == 0) throw InvalidInput("medoids: empty cluster id");

    ClusterModel model;
    model.n = n;
    model.c = c;
    model.labels = labels;
    model.medoid.assign(c, 0);
    std::vector<double> bestsum(c, kInf);
    for (std::size_t x = 0; x < n; ++x) {
        std::size_t j = static_cast<std::size_t>(labels[x]);
        double sum = 0.0;
        for (std::size_t y = 0; y < n; ++y)
            if (static_cast<std::size_t>(labels[y]) == j) sum += D.at(x, y);
        if (sum < bestsum[j]) {
            bestsum[j] = sum;
            model.medoid[j] = x;
        }
    }
    model.medoid_dist.assign(c * c, 0.0);
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = 0; j < c; ++j)
            model.medoid_dist[i * c + j] = D.at(model.medoid[i], model.medoid[j]);
    return model;
}

// Separation targets t_ij = gamma * tanh(d_ij / tau): a bounded, monotone image
// of the original-space medoid distances, so far clusters ask for at most gamma
// of screen space while near ones stay proportionally close. Non-positive tau
// falls back to 1.
inline void compute_targets(ClusterModel& model, double gamma, double tau) {
    if (!(tau > 0.0)) tau = 1.0;
    model.target.assign(model.c * model.c, 0.0);
    for (std::size_t i = 0; i < model.c; ++i)
        for (std::size_t j = 0; j < model.c; ++j)
            if (i != j) model.target[i * model.c + j] = gamma * std::tanh(model.medoid_dist[i * model.c + j] / tau);
}

}  // namespace isumap

#endif
