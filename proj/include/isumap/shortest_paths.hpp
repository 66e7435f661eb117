#ifndef ISUMAP_SHORTEST_PATHS_HPP
#define ISUMAP_SHORTEST_PATHS_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <queue>
#include <tuple>
#include <utility>
#include <vector>

#include "isumap/core.hpp"
#include "isumap/threads.hpp"

namespace isumap {

// Symmetric sparse graph in CSR form. Lengths are strictly positive by
// contract; the pipeline's rho=NN stars legitimately produce length-0 edges,
// which the builder admits via allow_zero and Dijkstra handles without any
// epsilon (correctness never depends on positivity).
struct SparseWeightedGraph {
    std::size_t n = 0;
    std::vector<std::size_t> offsets;   // n + 1
    std::vector<std::uint32_t> targets;
    std::vector<double> lengths;

    static SparseWeightedGraph from_edges(
        std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges,
        bool allow_zero = false) {
        for (auto [i, j, w] : edges) {
            if (i >= n || j >= n) throw InvalidInput("graph edge index out of range");
            if (i == j) throw InvalidInput("graph self-loop");
            if (!(w > 0.0 || (allow_zero && w == 0.0)) || w == kInf)
                throw InvalidInput("graph edge length invalid");
        }
        SparseWeightedGraph g;
        g.n = n;
        std::vector<std::size_t> degree(n, 0);
        for (auto& [i, j, w] : edges) {
            ++degree[i];
            ++degree[j];
        }
        g.offsets.assign(n + 1, 0);
        for (std::size_t v = 0; v < n; ++v) g.offsets[v + 1] = g.offsets[v] + degree[v];
        g.targets.resize(g.offsets[n]);
        g.lengths.resize(g.offsets[n]);
        std::vector<std::size_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
        for (auto& [i, j, w] : edges) {
            g.targets[cursor[i]] = static_cast<std::uint32_t>(j);
            g.lengths[cursor[i]++] = w;
            g.targets[cursor[j]] = static_cast<std::uint32_t>(i);
            g.lengths[cursor[j]++] = w;
        }
        return g;
    }

    std::size_t degree(std::size_t v) const { return offsets[v + 1] - offsets[v]; }
};

// Single-source Dijkstra with a binary heap and lazy deletion; unreachable
// vertices stay at infinity. Writes n entries into out.
inline void dijkstra_row(const SparseWeightedGraph& g, std::size_t source, double* out) {
    for (std::size_t i = 0; i < g.n; ++i) out[i] = kInf;
    out[source] = 0.0;
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0.0, static_cast<std::uint32_t>(source)});
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > out[v]) continue;  // stale entry
        for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
            double nd = d + g.lengths[e];
            std::uint32_t t = g.targets[e];
            if (nd < out[t]) {
                out[t] = nd;
                heap.push({nd, t});
            }
        }
    }
}

// All-pairs (or selected-source) shortest paths. One source per work unit;
// each worker writes only its own output rows, so results are deterministic
// under any schedule. Roughly N^2 log N work split across T workers.
inline std::vector<double> all_pairs_shortest(const SparseWeightedGraph& g,
                                              const std::vector<std::size_t>* sources = nullptr,
                                              unsigned threads = 0) {
    std::size_t rows = sources ? sources->size() : g.n;
    std::vector<double> table(rows * g.n);
    parallel_for(rows, threads, [&](std::size_t r) {
        std::size_t src = sources ? (*sources)[r] : r;
        dijkstra_row(g, src, table.data() + r * g.n);
    });
    return table;
}

// The (i,j) and (j,i) rows accumulate the same path from opposite ends, so
// the two slots can disagree by one ulp. A metric table needs them identical;
// the smaller sum is the tighter rounding of the shared exact value.
inline void symmetrize_paths(std::vector<double>& dist, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double m = std::min(dist[i * n + j], dist[j * n + i]);
            dist[i * n + j] = dist[j * n + i] = m;
        }
}

}  // namespace isumap

#endif
