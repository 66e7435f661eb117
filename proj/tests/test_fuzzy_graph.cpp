#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "isumap/fuzzy_graph.hpp"
#include "isumap/tconorm.hpp"
#include "oracles.hpp"

using namespace isumap;
using Catch::Approx;

namespace {

FuzzyGraph random_graph(std::size_t n, std::mt19937_64& rng, double density = 0.6) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    FuzzyGraph g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (unif(rng) < density) g.set_edge(i, j, 0.05 + 0.9 * unif(rng));
    return g;
}

}  // namespace

// ---------------------------------------------------------------------- t-conorms

TEST_CASE("builtin t-conorm values") {
    REQUIRE(TConorm::max_conorm()(0.3, 0.7) == Approx(0.7));
    REQUIRE(TConorm::probabilistic_sum()(0.5, 0.5) == Approx(0.75));
    REQUIRE(TConorm::bounded_sum()(0.7, 0.5) == 1.0);
    REQUIRE(TConorm::bounded_sum()(0.2, 0.3) == Approx(0.5));
}

TEST_CASE("t-conorm axioms hold on 1e4 random triples per builtin") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (const TConorm& T :
         {TConorm::max_conorm(), TConorm::probabilistic_sum(), TConorm::bounded_sum()}) {
        for (int rep = 0; rep < 10000; ++rep) {
            double a = unif(rng), b = unif(rng), c = unif(rng);
            REQUIRE(std::abs(T(a, b) - T(b, a)) <= 1e-12);
            REQUIRE(std::abs(T(a, T(b, c)) - T(T(a, b), c)) <= 1e-12);
            REQUIRE(std::abs(T(a, 0.0) - a) <= 1e-12);
            REQUIRE(T(a, 1.0) == 1.0);
            // monotone in both arguments
            double a2 = a + (1.0 - a) * unif(rng);
            double b2 = b + (1.0 - b) * unif(rng);
            REQUIRE(T(a2, b2) >= T(a, b) - 1e-12);
            double r = T(a, b);
            REQUIRE(r >= 0.0);
            REQUIRE(r <= 1.0);
        }
    }
}

TEST_CASE("t-conorm rejects out-of-range arguments") {
    auto T = TConorm::max_conorm();
    REQUIRE_THROWS_AS(T(-0.1, 0.5), InvalidInput);
    REQUIRE_THROWS_AS(T(0.5, 1.1), InvalidInput);
}

TEST_CASE("custom t-conorms are audited at registration") {
    // Einstein sum satisfies all axioms
    auto ok = TConorm::custom([](double a, double b) { return (a + b) / (1.0 + a * b); });
    REQUIRE(ok(0.5, 0.5) == Approx(0.8));
    REQUIRE(ok(0.3, 1.0) == Approx(1.0));

    // a*b is a t-norm, not a t-conorm: T(a,0)=0 != a
    REQUIRE_THROWS_AS(TConorm::custom([](double a, double b) { return a * b; }),
                      InvalidParameter);
    // non-commutative operation
    REQUIRE_THROWS_AS(TConorm::custom([](double a, double b) { return std::min(1.0, a + 0.5 * b); }),
                      InvalidParameter);
}

// ---------------------------------------------------------------------- sing1

TEST_CASE("sing1 strengths are exp(-d)") {
    FiniteMetricSpace X(3, Mode::UM);
    X.set(0, 1, std::log(2.0));
    X.set(0, 2, kInf);
    X.set(1, 2, 0.0);
    auto g = sing1(X);
    REQUIRE(g.n == 3);
    for (double v : g.xi0) REQUIRE(v == 1.0);
    REQUIRE(g.strength(0, 1) == Approx(0.5));
    REQUIRE(g.strength(0, 2) == 0.0);  // infinite distance: edge absent
    REQUIRE(g.strength(1, 2) == 1.0);  // zero distance: full strength
    REQUIRE(g.strength(2, 2) == 1.0);  // implicit self loop
}

TEST_CASE("sing1 outputs satisfy the strength characterization") {
    std::mt19937_64 rng(31415);
    for (int rep = 0; rep < 20; ++rep) {
        auto X = rep % 2 == 0 ? oracle::random_closed_space(30, rng)
                              : oracle::random_split_space(30, rng);
        auto g = sing1(X);
        for (std::size_t i = 0; i < X.n; ++i) {
            REQUIRE(g.strength(i, i) == 1.0);
            for (std::size_t j = 0; j < X.n; ++j) {
                REQUIRE(g.strength(i, j) == g.strength(j, i));
                for (std::size_t l = 0; l < X.n; ++l)
                    REQUIRE(g.strength(i, j) * g.strength(j, l) <= g.strength(i, l) + 1e-12);
            }
        }
    }
}

// ---------------------------------------------------------------------- merge

TEST_CASE("merge folds shared edges through the t-conorm") {
    FuzzyGraph a(4), b(4);
    a.set_edge(0, 1, 0.5);
    b.set_edge(0, 1, 0.25);
    b.set_edge(2, 3, 0.8);

    auto mx = merge_fuzzy_graphs({a, b}, TConorm::max_conorm());
    REQUIRE(mx.strength(0, 1) == 0.5);
    REQUIRE(mx.strength(2, 3) == 0.8);  // single-input edge passes through
    REQUIRE(mx.strength(0, 2) == 0.0);

    auto ps = merge_fuzzy_graphs({a, b}, TConorm::probabilistic_sum());
    REQUIRE(ps.strength(0, 1) == Approx(0.5 + 0.25 - 0.125));
    REQUIRE(ps.strength(2, 3) == 0.8);
}

TEST_CASE("merge is order invariant over all six permutations") {
    std::mt19937_64 rng(99);
    auto g1 = random_graph(5, rng);
    auto g2 = random_graph(5, rng);
    auto g3 = random_graph(5, rng);
    for (const TConorm& T :
         {TConorm::max_conorm(), TConorm::probabilistic_sum(), TConorm::bounded_sum()}) {
        std::vector<FuzzyGraph> graphs = {g1, g2, g3};
        std::vector<std::size_t> perm = {0, 1, 2};
        auto ref = merge_fuzzy_graphs(graphs, T);
        std::sort(perm.begin(), perm.end());
        do {
            auto m = merge_fuzzy_graphs({graphs[perm[0]], graphs[perm[1]], graphs[perm[2]]}, T);
            for (std::size_t i = 0; i < 5; ++i)
                for (std::size_t j = 0; j < 5; ++j)
                    REQUIRE(m.strength(i, j) == Approx(ref.strength(i, j)).margin(1e-12));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
}

TEST_CASE("merge is monotone in its inputs") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto a = random_graph(6, rng);
    auto b = random_graph(6, rng);
    // raise some strengths of b
    FuzzyGraph b2 = b;
    for (auto& e : b2.edges) e.s = e.s + (1.0 - e.s) * unif(rng);
    for (const TConorm& T : {TConorm::max_conorm(), TConorm::probabilistic_sum()}) {
        auto m1 = merge_fuzzy_graphs({a, b}, T);
        auto m2 = merge_fuzzy_graphs({a, b2}, T);
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j)
                REQUIRE(m2.strength(i, j) >= m1.strength(i, j) - 1e-12);
    }
}

TEST_CASE("merge keeps the compatibility bound with non-unit vertex strengths") {
    FuzzyGraph a(2), b(2);
    a.xi0 = {0.5, 0.5};
    b.xi0 = {0.5, 0.5};
    a.set_edge(0, 1, 0.5);
    b.set_edge(0, 1, 0.5);
    auto m = merge_fuzzy_graphs({a, b}, TConorm::probabilistic_sum());
    REQUIRE(m.xi0[0] == Approx(0.75));  // vertex strengths fold too
    REQUIRE(m.strength(0, 1) == Approx(0.75));
    REQUIRE(m.strength(0, 1) <= std::min(m.xi0[0], m.xi0[1]) + 1e-15);
}

TEST_CASE("merge rejects mismatched inputs") {
    FuzzyGraph a(3), b(4), c(3);
    c.xi0[1] = 0.9;
    REQUIRE_THROWS_AS(merge_fuzzy_graphs({a, b}, TConorm::max_conorm()), InvalidInput);
    REQUIRE_THROWS_AS(merge_fuzzy_graphs({a, c}, TConorm::max_conorm()), InvalidInput);
    REQUIRE_THROWS_AS(merge_fuzzy_graphs({}, TConorm::max_conorm()), InvalidInput);
}

// ---------------------------------------------------------------------- realize_c1

TEST_CASE("single edge realizes to -log strength") {
    FuzzyGraph g(2);
    g.set_edge(0, 1, 0.37);
    auto X = realize_c1(g, Mode::UM);
    REQUIRE(X.at(0, 1) == Approx(-std::log(0.37)));
    REQUIRE(X.at(0, 0) == 0.0);
}

TEST_CASE("realization shortcuts the long triangle edge") {
    FuzzyGraph g(3);
    g.set_edge(0, 1, std::exp(-1.0));
    g.set_edge(1, 2, std::exp(-1.0));
    g.set_edge(0, 2, std::exp(-3.0));
    auto X = realize_c1(g, Mode::UM);
    REQUIRE(X.at(0, 2) == Approx(2.0).margin(1e-12));

    auto ref = oracle::floyd_warshall({0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0}, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            REQUIRE(X.at(i, j) == Approx(ref[i * 3 + j]).margin(1e-12));
}

TEST_CASE("EPMet realization masks absent edges") {
    FuzzyGraph g(3);
    g.set_edge(0, 1, std::exp(-1.0));
    g.set_edge(1, 2, std::exp(-1.0));
    auto um = realize_c1(g, Mode::UM);
    REQUIRE(um.at(0, 2) == Approx(2.0).margin(1e-12));
    auto ep = realize_c1(g, Mode::EPMet);
    REQUIRE(ep.at(0, 2) == kInf);  // absent edge stays infinite despite the finite path
    REQUIRE(ep.at(0, 1) == Approx(1.0).margin(1e-12));
    REQUIRE(ep.mode == Mode::EPMet);
}

TEST_CASE("EPMet realization never exceeds the direct edge") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        auto g = random_graph(12, rng, 0.5);
        auto ep = realize_c1(g, Mode::EPMet);
        for (std::size_t i = 0; i < g.n; ++i)
            for (std::size_t j = 0; j < g.n; ++j) {
                double s = g.strength(i, j);
                if (i != j && s > 0.0)
                    REQUIRE(ep.at(i, j) <= -std::log(s) + 1e-12);
                if (i != j && s == 0.0) REQUIRE(ep.at(i, j) == kInf);
            }
    }
}

TEST_CASE("UM realization passes the triangle scan") {
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 10; ++rep) {
        auto g = random_graph(15, rng, 0.4);
        auto um = realize_c1(g, Mode::UM);
        REQUIRE(um.triangle_holds(1e-12));
    }
}

TEST_CASE("counit identity: realize after sing reproduces closed tables") {
    std::mt19937_64 rng(271828);
    for (int rep = 0; rep < 100; ++rep) {
        std::uniform_int_distribution<std::size_t> npick(2, 20);
        auto X = rep % 3 == 2 ? oracle::random_split_space(npick(rng), rng)
                              : oracle::random_closed_space(npick(rng), rng);
        auto back = realize_c1(sing1(X), Mode::UM);
        REQUIRE(back.n == X.n);
        for (std::size_t i = 0; i < X.n; ++i)
            for (std::size_t j = 0; j < X.n; ++j) {
                if (X.at(i, j) == kInf)
                    REQUIRE(back.at(i, j) == kInf);
                else
                    REQUIRE(back.at(i, j) == Approx(X.at(i, j)).margin(1e-12));
            }
    }
}

TEST_CASE("graph invariants are validated") {
    FuzzyGraph g(3);
    g.set_edge(0, 1, 0.5);
    REQUIRE_NOTHROW(g.validate());
    g.xi0[0] = 0.2;  // edge strength now exceeds the vertex bound
    REQUIRE_THROWS_AS(g.validate(), InvalidInput);
    FuzzyGraph h(2);
    REQUIRE_THROWS_AS(h.set_edge(0, 0, 0.5), InvalidInput);
    REQUIRE_THROWS_AS(h.set_edge(0, 1, 1.5), InvalidInput);
    REQUIRE_THROWS_AS(h.set_edge(0, 1, 0.0), InvalidInput);
}
