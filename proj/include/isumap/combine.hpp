#ifndef ISUMAP_COMBINE_HPP
#define ISUMAP_COMBINE_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <tuple>
#include <vector>

#include "isumap/core.hpp"
#include "isumap/local_metrics.hpp"
#include "isumap/metric_space.hpp"
#include "isumap/shortest_paths.hpp"
#include "isumap/tconorm.hpp"

namespace isumap {

// Combines a family of local metric spaces into one global space: every pair's
// local views are turned into strengths, folded through T in family order, and
// the resulting edge lengths are closed by shortest paths. Arithmetic matches
// merging the stars' fuzzy graphs and realizing the result, without
// materializing n dense graphs along the way.
inline FiniteMetricSpace t_combine(const LocalMetricFamily& family, const TConorm& T, Mode mode,
                                   unsigned threads = 0) {
    if (family.n == 0 || family.spaces.empty()) throw InvalidInput("t_combine: empty family");
    const std::size_t n = family.n;

    struct Obs {
        std::uint64_t key;  // u * n + v with u < v
        std::size_t order;  // traversal position, fixes the fold order per pair
        double strength;
    };
    std::vector<Obs> obs;
    std::size_t seq = 0;
    for (const LocalSpace& sp : family.spaces)
        for (const LocalEntry& e : sp.entries) {
            ++seq;
            if (e.u == e.v || !is_finite(e.d)) continue;
            std::size_t u = std::min(e.u, e.v), v = std::max(e.u, e.v);
            obs.push_back({static_cast<std::uint64_t>(u) * n + v, seq, strength_of(e.d)});
        }
    std::sort(obs.begin(), obs.end(), [](const Obs& a, const Obs& b) {
        return a.key != b.key ? a.key < b.key : a.order < b.order;
    });

    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
    std::vector<std::uint8_t> present(mode == Mode::EPMet ? n * n : 0, 0);
    for (std::size_t i = 0; i < obs.size();) {
        std::size_t j = i + 1;
        double acc = obs[i].strength;
        while (j < obs.size() && obs[j].key == obs[i].key) acc = T(acc, obs[j++].strength);
        if (acc > 0.0) {
            auto u = static_cast<std::size_t>(obs[i].key / n);
            auto v = static_cast<std::size_t>(obs[i].key % n);
            edges.emplace_back(u, v, length_of(acc));
            if (mode == Mode::EPMet) present[u * n + v] = present[v * n + u] = 1;
        }
        i = j;
    }

    auto g = SparseWeightedGraph::from_edges(n, edges, true);
    FiniteMetricSpace out(n, mode);
    out.dist = all_pairs_shortest(g, nullptr, threads);
    symmetrize_paths(out.dist, n);
    if (mode == Mode::EPMet) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (a != b && !present[a * n + b]) out.dist[a * n + b] = kInf;
    }
    return out;
}

}  // namespace isumap

#endif
