#ifndef ISUMAP_GLUING_HPP
#define ISUMAP_GLUING_HPP

#include <cstddef>
#include <numeric>
#include <tuple>
#include <utility>
#include <vector>

#include "isumap/core.hpp"
#include "isumap/metric_space.hpp"
#include "isumap/shortest_paths.hpp"

namespace isumap {

struct GluedIndex {
    std::size_t space;
    std::size_t point;
};

// Disjoint union of component spaces modulo identified point pairs. The
// listed pairs generate the equivalence; closure is taken before quotienting.
struct GluingSpec {
    std::vector<FiniteMetricSpace> components;
    std::vector<std::pair<GluedIndex, GluedIndex>> identify;
};

namespace detail {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace detail

// Quotient metric: distance = infimum over chains of within-component hops,
// computed as shortest paths on the quotient graph whose edge weights are the
// minima over representative pairs. Cross-component representative pairs are
// infinitely far apart by definition, so they never seed an edge. EPMet mode
// masks any class pair with no finite representative pair back to infinity.
// class_of (optional) receives the quotient index of every input point in
// component-major order.
inline FiniteMetricSpace glue_metric_spaces(const GluingSpec& spec,
                                            std::vector<std::size_t>* class_of = nullptr) {
    if (spec.components.empty()) throw InvalidInput("glue: no components");
    Mode mode = spec.components.front().mode;
    std::vector<std::size_t> offset(spec.components.size() + 1, 0);
    for (std::size_t s = 0; s < spec.components.size(); ++s) {
        const auto& comp = spec.components[s];
        if (comp.mode != mode) throw InvalidInput("glue: mixed modes");
        comp.validate_basic();
        offset[s + 1] = offset[s] + comp.n;
    }
    std::size_t total = offset.back();

    detail::UnionFind uf(total);
    for (const auto& [a, b] : spec.identify) {
        if (a.space >= spec.components.size() || b.space >= spec.components.size() ||
            a.point >= spec.components[a.space].n || b.point >= spec.components[b.space].n)
            throw InvalidInput("glue: identification index out of range");
        uf.unite(offset[a.space] + a.point, offset[b.space] + b.point);
    }

    // quotient classes ordered by smallest global member
    std::vector<std::size_t> cls(total, total);
    std::size_t q = 0;
    for (std::size_t g = 0; g < total; ++g) {
        std::size_t root = uf.find(g);
        if (cls[root] == total) cls[root] = q++;
        cls[g] = cls[root];
    }
    if (class_of) *class_of = cls;

    // minimal within-component distance per class pair
    std::vector<double> w(q * q, kInf);
    for (std::size_t s = 0; s < spec.components.size(); ++s) {
        const auto& comp = spec.components[s];
        for (std::size_t p = 0; p < comp.n; ++p)
            for (std::size_t r = p + 1; r < comp.n; ++r) {
                double d = comp.at(p, r);
                if (d == kInf) continue;
                std::size_t cp = cls[offset[s] + p], cr = cls[offset[s] + r];
                if (cp == cr) continue;
                if (d < w[cp * q + cr]) {
                    w[cp * q + cr] = d;
                    w[cr * q + cp] = d;
                }
            }
    }

    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = i + 1; j < q; ++j)
            if (w[i * q + j] < kInf) edges.emplace_back(i, j, w[i * q + j]);
    auto graph = SparseWeightedGraph::from_edges(q, edges, /*allow_zero=*/true);
    auto paths = all_pairs_shortest(graph);

    FiniteMetricSpace out(q, mode);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) {
            double d = paths[i * q + j];
            if (mode == Mode::EPMet && i != j && w[i * q + j] == kInf) d = kInf;
            out.at(i, j) = d;
        }
    return out;
}

}  // namespace isumap

#endif
