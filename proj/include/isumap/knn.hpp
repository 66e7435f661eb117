#ifndef ISUMAP_KNN_HPP
#define ISUMAP_KNN_HPP

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "isumap/core.hpp"
#include "isumap/points.hpp"
#include "isumap/threads.hpp"

namespace isumap {

struct Neighbor {
    std::size_t index;
    double dist;
};

// Per-point lists of the k nearest neighbors, ascending by (distance, index).
struct NeighborLists {
    std::size_t k = 0;
    std::vector<std::vector<Neighbor>> lists;

    std::size_t size() const { return lists.size(); }
};

// Exact search: all candidate distances per query, selected by (d, index)
// order so equal distances resolve to the lower index. Queries are
// independent, so they may be partitioned across workers.
inline NeighborLists knn_graph(const PointTable& points, std::size_t k,
                               AmbientMetric metric = AmbientMetric::Euclidean,
                               unsigned threads = 0) {
    std::size_t n = points.n;
    if (k < 1 || k >= n) throw InvalidParameter("knn_graph: need 1 <= k < n");
    if (!points.all_finite()) throw InvalidInput("knn_graph: non-finite coordinate");

    NeighborLists out;
    out.k = k;
    out.lists.resize(n);
    parallel_for(n, threads, [&](std::size_t i) {
        std::vector<std::pair<double, std::size_t>> cand;
        cand.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            cand.emplace_back(ambient_distance(points, i, j, metric), j);
        }
        std::nth_element(cand.begin(), cand.begin() + (k - 1), cand.end());
        cand.resize(k);
        std::sort(cand.begin(), cand.end());
        auto& list = out.lists[i];
        list.reserve(k);
        for (auto& [d, j] : cand) list.push_back({j, d});
    });
    return out;
}

}  // namespace isumap

#endif
