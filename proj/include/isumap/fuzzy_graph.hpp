#ifndef ISUMAP_FUZZY_GRAPH_HPP
#define ISUMAP_FUZZY_GRAPH_HPP

#include <algorithm>
#include <cstddef>
#include <tuple>
#include <utility>
#include <vector>

#include "isumap/core.hpp"
#include "isumap/metric_space.hpp"
#include "isumap/shortest_paths.hpp"
#include "isumap/tconorm.hpp"

namespace isumap {

// Weighted graph with vertex and edge strengths in [0,1]: the materialized
// 1-truncation of a fuzzy simplicial set. Absent edges mean strength 0;
// self-loops are implicitly 1 and never stored.
struct FuzzyGraph {
    struct Edge {
        std::size_t u, v;  // u < v
        double s;          // (0, 1]
    };

    std::size_t n = 0;
    std::vector<double> xi0;   // vertex strengths, all 1 in pipeline use
    std::vector<Edge> edges;   // sorted by (u, v)

    FuzzyGraph() = default;
    explicit FuzzyGraph(std::size_t n_) : n(n_), xi0(n_, 1.0) {}

    void set_edge(std::size_t i, std::size_t j, double s) {
        if (i == j) throw InvalidInput("fuzzy graph: self-loop");
        if (i >= n || j >= n) throw InvalidInput("fuzzy graph: vertex out of range");
        if (!(s > 0.0 && s <= 1.0)) throw InvalidInput("fuzzy graph: strength outside (0,1]");
        if (i > j) std::swap(i, j);
        auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(i, j),
                                   [](const Edge& e, const std::pair<std::size_t, std::size_t>& p) {
                                       return std::make_pair(e.u, e.v) < p;
                                   });
        if (it != edges.end() && it->u == i && it->v == j)
            it->s = s;
        else
            edges.insert(it, {i, j, s});
    }

    double strength(std::size_t i, std::size_t j) const {
        if (i == j) return 1.0;
        if (i > j) std::swap(i, j);
        auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(i, j),
                                   [](const Edge& e, const std::pair<std::size_t, std::size_t>& p) {
                                       return std::make_pair(e.u, e.v) < p;
                                   });
        if (it != edges.end() && it->u == i && it->v == j) return it->s;
        return 0.0;
    }

    void validate() const {
        if (xi0.size() != n) throw InvalidInput("fuzzy graph: vertex strength count");
        for (double v : xi0)
            if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput("fuzzy graph: vertex strength range");
        for (std::size_t e = 0; e < edges.size(); ++e) {
            const Edge& ed = edges[e];
            if (ed.u >= ed.v || ed.v >= n) throw InvalidInput("fuzzy graph: bad edge");
            if (!(ed.s > 0.0 && ed.s <= 1.0)) throw InvalidInput("fuzzy graph: edge strength range");
            if (ed.s > std::min(xi0[ed.u], xi0[ed.v]) + 1e-12)
                throw InvalidInput("fuzzy graph: edge exceeds vertex strengths");
            if (e > 0 && !(std::make_pair(edges[e - 1].u, edges[e - 1].v) <
                           std::make_pair(ed.u, ed.v)))
                throw InvalidInput("fuzzy graph: edges unsorted");
        }
    }
};

// 1-truncated singular functor: vertex strengths 1, edge strengths exp(-d).
// Infinite distances produce no edge.
inline FuzzyGraph sing1(const FiniteMetricSpace& X) {
    X.validate_basic();
    FuzzyGraph g(X.n);
    for (std::size_t i = 0; i < X.n; ++i)
        for (std::size_t j = i + 1; j < X.n; ++j) {
            double s = strength_of(X.at(i, j));
            if (s > 0.0) g.edges.push_back({i, j, s});
        }
    return g;
}

// Levelwise t-conorm fold: vertex strengths fold over every input, edge
// strengths fold over the inputs where the edge is present (absent = 0 and
// T(a,0) = a, so those are skipped). Inputs must agree on the vertex set.
inline FuzzyGraph merge_fuzzy_graphs(const std::vector<FuzzyGraph>& graphs, const TConorm& T) {
    if (graphs.empty()) throw InvalidInput("merge: no graphs");
    std::size_t n = graphs.front().n;
    for (const auto& g : graphs) {
        if (g.n != n || g.xi0 != graphs.front().xi0)
            throw InvalidInput("merge: vertex sets or strengths differ");
    }

    FuzzyGraph out(n);
    out.xi0 = graphs.front().xi0;
    for (std::size_t g = 1; g < graphs.size(); ++g)
        for (std::size_t v = 0; v < n; ++v) out.xi0[v] = T(out.xi0[v], graphs[g].xi0[v]);

    // gather (u, v, graph index, strength); fold groups in graph order
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t, double>> all;
    for (std::size_t g = 0; g < graphs.size(); ++g)
        for (const auto& e : graphs[g].edges) all.emplace_back(e.u, e.v, g, e.s);
    std::sort(all.begin(), all.end());
    std::size_t i = 0;
    while (i < all.size()) {
        auto [u, v, g0, acc] = all[i];
        std::size_t j = i + 1;
        while (j < all.size() && std::get<0>(all[j]) == u && std::get<1>(all[j]) == v) {
            acc = T(acc, std::get<3>(all[j]));
            ++j;
        }
        out.edges.push_back({u, v, acc});
        i = j;
    }
    return out;
}

// Metric realization of the 1-truncation: edge lengths -log(strength),
// distances by shortest path. UM mode keeps path distances (infinity when
// disconnected); EPMet mode masks every absent edge back to infinity, so a
// pair can be infinitely far apart despite a finite path between them.
inline FiniteMetricSpace realize_c1(const FuzzyGraph& g, Mode mode) {
    g.validate();
    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
    edges.reserve(g.edges.size());
    for (const auto& e : g.edges) edges.emplace_back(e.u, e.v, length_of(e.s));
    auto graph = SparseWeightedGraph::from_edges(g.n, edges, /*allow_zero=*/true);
    auto paths = all_pairs_shortest(graph);
    symmetrize_paths(paths, g.n);

    FiniteMetricSpace out(g.n, mode);
    out.dist = std::move(paths);
    if (mode == Mode::EPMet) {
        std::vector<bool> present(g.n * g.n, false);
        for (const auto& e : g.edges) {
            present[e.u * g.n + e.v] = true;
            present[e.v * g.n + e.u] = true;
        }
        for (std::size_t i = 0; i < g.n; ++i)
            for (std::size_t j = 0; j < g.n; ++j)
                if (i != j && !present[i * g.n + j]) out.at(i, j) = kInf;
    }
    return out;
}

}  // namespace isumap

#endif
