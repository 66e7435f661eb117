#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "isumap/gluing.hpp"
#include "isumap/knn.hpp"
#include "isumap/local_metrics.hpp"
#include "isumap/metric_space.hpp"
#include "isumap/points.hpp"
#include "oracles.hpp"

using namespace isumap;
using Catch::Approx;

namespace {

PointTable line_points(std::initializer_list<double> xs) {
    PointTable pts(xs.size(), 1);
    std::size_t i = 0;
    for (double x : xs) pts.at(i++, 0) = x;
    return pts;
}

PointTable random_points(std::size_t n, std::size_t dim, std::mt19937_64& rng, double span = 1.0) {
    PointTable pts(n, dim);
    std::uniform_real_distribution<double> unif(-span, span);
    for (double& v : pts.values) v = unif(rng);
    return pts;
}

}  // namespace

// ---------------------------------------------------------------------- knn_graph

TEST_CASE("knn on a line, k=1") {
    auto pts = line_points({0.0, 1.0, 3.0});
    auto nb = knn_graph(pts, 1);
    REQUIRE(nb.k == 1);
    REQUIRE(nb.lists[0][0].index == 1);
    REQUIRE(nb.lists[1][0].index == 0);
    REQUIRE(nb.lists[2][0].index == 1);
    REQUIRE(nb.lists[2][0].dist == Approx(2.0));
}

TEST_CASE("knn with k=n-1 yields the complete graph") {
    std::mt19937_64 rng(7);
    auto pts = random_points(6, 3, rng);
    auto nb = knn_graph(pts, 5);
    for (std::size_t i = 0; i < 6; ++i) {
        std::vector<bool> seen(6, false);
        for (auto& e : nb.lists[i]) seen[e.index] = true;
        for (std::size_t j = 0; j < 6; ++j) REQUIRE(seen[j] == (j != i));
    }
}

TEST_CASE("knn equals the brute-force sort oracle") {
    std::mt19937_64 rng(42);
    auto pts = random_points(200, 2, rng, 10.0);
    auto nb = knn_graph(pts, 10);
    auto ref = oracle::brute_knn(pts, 10);
    for (std::size_t i = 0; i < pts.n; ++i)
        for (std::size_t j = 0; j < 10; ++j) {
            REQUIRE(nb.lists[i][j].index == ref[i][j].second);
            REQUIRE(nb.lists[i][j].dist == ref[i][j].first);
        }
}

TEST_CASE("knn matches oracle on 100 random instances") {
    std::mt19937_64 rng(1234);
    for (int rep = 0; rep < 100; ++rep) {
        std::uniform_int_distribution<std::size_t> npick(5, 300);
        std::size_t n = npick(rng);
        std::uniform_int_distribution<std::size_t> kpick(1, std::min<std::size_t>(n - 1, 12));
        std::size_t k = kpick(rng);
        std::uniform_int_distribution<std::size_t> dpick(1, 4);
        auto pts = random_points(n, dpick(rng), rng, 5.0);
        auto nb = knn_graph(pts, k);
        auto ref = oracle::brute_knn(pts, k);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                REQUIRE(nb.lists[i][j].index == ref[i][j].second);
                REQUIRE(nb.lists[i][j].dist == ref[i][j].first);
            }
    }
}

TEST_CASE("knn tie break prefers the lower index") {
    // four points equidistant from the origin point
    PointTable pts(5, 2);
    pts.at(0, 0) = 0.0;
    pts.at(0, 1) = 0.0;
    pts.at(1, 0) = 1.0;
    pts.at(1, 1) = 0.0;
    pts.at(2, 0) = -1.0;
    pts.at(2, 1) = 0.0;
    pts.at(3, 0) = 0.0;
    pts.at(3, 1) = 1.0;
    pts.at(4, 0) = 0.0;
    pts.at(4, 1) = -1.0;
    auto nb = knn_graph(pts, 2);
    REQUIRE(nb.lists[0][0].index == 1);
    REQUIRE(nb.lists[0][1].index == 2);
}

TEST_CASE("knn handles duplicate points deterministically") {
    std::mt19937_64 rng(5);
    auto pts = random_points(40, 2, rng);
    for (std::size_t i = 20; i < 40; ++i) {
        pts.at(i, 0) = pts.at(i - 20, 0);
        pts.at(i, 1) = pts.at(i - 20, 1);
    }
    auto nb = knn_graph(pts, 6);
    auto ref = oracle::brute_knn(pts, 6);
    for (std::size_t i = 0; i < pts.n; ++i)
        for (std::size_t j = 0; j < 6; ++j) REQUIRE(nb.lists[i][j].index == ref[i][j].second);
}

TEST_CASE("knn supports manhattan and chebyshev metrics") {
    std::mt19937_64 rng(9);
    auto pts = random_points(80, 3, rng);
    for (auto metric : {AmbientMetric::Manhattan, AmbientMetric::Chebyshev}) {
        auto nb = knn_graph(pts, 5, metric);
        auto ref = oracle::brute_knn(pts, 5, metric);
        for (std::size_t i = 0; i < pts.n; ++i)
            for (std::size_t j = 0; j < 5; ++j) {
                REQUIRE(nb.lists[i][j].index == ref[i][j].second);
                REQUIRE(nb.lists[i][j].dist == ref[i][j].first);
            }
    }
}

TEST_CASE("knn rejects bad parameters and inputs") {
    auto pts = line_points({0.0, 1.0, 3.0});
    REQUIRE_THROWS_AS(knn_graph(pts, 3), InvalidParameter);
    REQUIRE_THROWS_AS(knn_graph(pts, 0), InvalidParameter);
    pts.at(1, 0) = std::nan("");
    REQUIRE_THROWS_AS(knn_graph(pts, 1), InvalidInput);
}

// ---------------------------------------------------------------------- solve_sigma

TEST_CASE("solve_sigma on 0,1,2,3 hits the bisection oracle") {
    SigmaSolveInfo info;
    double sigma = solve_sigma({0.0, 1.0, 2.0, 3.0}, 4, &info);
    REQUIRE(sigma > 1.6);
    REQUIRE(sigma < 1.7);
    double lhs = 0.0;
    for (double d : {0.0, 1.0, 2.0, 3.0}) lhs += std::exp(-d / sigma);
    REQUIRE(std::abs(lhs - std::log2(4.0)) < 1e-6);
    REQUIRE_FALSE(info.clamped);
}

TEST_CASE("solve_sigma closed form: equal distances, k=2") {
    for (double d : {0.25, 1.0, 3.5}) {
        double sigma = solve_sigma({d, d}, 2, nullptr);
        REQUIRE(sigma == Approx(d / std::log(2.0)).epsilon(1e-9));
    }
}

TEST_CASE("solve_sigma scales linearly with the input") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0.05, 4.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> d(6);
        for (double& v : d) v = unif(rng);
        double c = unif(rng);
        std::vector<double> scaled = d;
        for (double& v : scaled) v *= c;
        double s1 = solve_sigma(d, d.size(), nullptr);
        double s2 = solve_sigma(scaled, scaled.size(), nullptr);
        REQUIRE(std::abs(s2 - c * s1) / (c * s1) < 1e-9);
    }
}

TEST_CASE("solve_sigma residual < 1e-6 on 1000 random inputs") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unif(0.0, 5.0);
    std::uniform_int_distribution<std::size_t> kpick(2, 20);
    for (int rep = 0; rep < 1000; ++rep) {
        std::size_t k = kpick(rng);
        std::vector<double> d(k);
        bool positive = false;
        for (double& v : d) {
            v = unif(rng);
            positive = positive || v > 0;
        }
        if (!positive) d[0] = 1.0;
        SigmaSolveInfo info;
        double sigma = solve_sigma(d, k, &info);
        if (info.clamped) continue;  // no root in bracket; clamp contract checked elsewhere
        double lhs = 0.0;
        for (double v : d) lhs += std::exp(-v / sigma);
        REQUIRE(std::abs(lhs - std::log2(double(k))) < 1e-6);
    }
}

TEST_CASE("solve_sigma clamps when no root exists in the bracket") {
    // three zero offsets floor the sum at 3 > log2(4); no root anywhere
    SigmaSolveInfo info;
    double sigma = solve_sigma({0.0, 0.0, 0.0, 5.0}, 4, &info);
    REQUIRE(info.clamped);
    REQUIRE(sigma == 1e-12);
}

TEST_CASE("solve_sigma rejects degenerate input") {
    REQUIRE_THROWS_AS(solve_sigma({1.0}, 1, nullptr), InvalidParameter);
    REQUIRE_THROWS_AS(solve_sigma({0.0, 0.0}, 2, nullptr), InvalidParameter);
}

// ---------------------------------------------------------------------- local_metrics

TEST_CASE("rho=ZERO, sigma=ONE keeps raw distances") {
    std::mt19937_64 rng(3);
    auto pts = random_points(30, 3, rng);
    auto nb = knn_graph(pts, 5);
    auto fam = local_metrics(nb, RhoMode::Zero, SigmaMode::One, FillMode::None);
    for (std::size_t i = 0; i < pts.n; ++i) {
        REQUIRE(fam.spaces[i].rho == 0.0);
        REQUIRE(fam.spaces[i].sigma == 1.0);
        for (std::size_t j = 0; j < 5; ++j) {
            double want = nb.lists[i][j].dist;
            REQUIRE(fam.local_distance(i, i, nb.lists[i][j].index) == Approx(want));
        }
    }
}

TEST_CASE("rho=NN zeroes the nearest neighbor entry") {
    std::mt19937_64 rng(4);
    auto pts = random_points(25, 2, rng);
    auto nb = knn_graph(pts, 4);
    auto fam = local_metrics(nb, RhoMode::NearestNeighbor, SigmaMode::One, FillMode::None);
    for (std::size_t i = 0; i < pts.n; ++i)
        REQUIRE(fam.local_distance(i, i, nb.lists[i][0].index) == 0.0);
}

TEST_CASE("sigma=KNN normalizes the star to the k-th neighbor") {
    // raw star distances {0,1,2,3} via a duplicate point; k-th = 3
    auto pts = line_points({0.0, 0.0, 1.0, 2.0, 3.0});
    auto nb = knn_graph(pts, 4);
    auto fam = local_metrics(nb, RhoMode::Zero, SigmaMode::Knn, FillMode::None);
    REQUIRE(fam.spaces[0].sigma == Approx(3.0));
    std::vector<double> want = {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
    for (std::size_t j = 0; j < 4; ++j)
        REQUIRE(fam.local_distance(0, 0, nb.lists[0][j].index) == Approx(want[j]).margin(1e-15));
}

TEST_CASE("sigma=KNN degenerate duplicates fall back per the substitution rule") {
    auto pts = line_points({0.0, 0.0, 0.0, 5.0});
    auto nb = knn_graph(pts, 2);  // k-th neighbor of the duplicates is still at 0

    // with coordinates available, the smallest strictly positive distance wins
    auto fam = local_metrics(nb, RhoMode::Zero, SigmaMode::Knn, FillMode::None, &pts);
    REQUIRE(fam.spaces[0].sigma == Approx(5.0));
    REQUIRE_FALSE(fam.warnings.empty());

    // without coordinates there is no positive candidate: unit scale
    auto blind = local_metrics(nb, RhoMode::Zero, SigmaMode::Knn, FillMode::None);
    REQUIRE(blind.spaces[0].sigma == 1.0);
    REQUIRE_FALSE(blind.warnings.empty());
}

TEST_CASE("fill modes produce the documented neighbor-neighbor entries") {
    // center 0 with neighbors at -1 and +1
    auto pts = line_points({0.0, -1.0, 1.0});
    auto nb = knn_graph(pts, 2);

    auto sum = local_metrics(nb, RhoMode::Zero, SigmaMode::One, FillMode::Sum);
    REQUIRE(sum.local_distance(0, 1, 2) == Approx(2.0));

    auto sq = local_metrics(nb, RhoMode::Zero, SigmaMode::One, FillMode::SumSqrt2);
    REQUIRE(sq.local_distance(0, 1, 2) == Approx(2.0 / std::sqrt(2.0)));

    auto amb = local_metrics(nb, RhoMode::Zero, SigmaMode::One, FillMode::Ambient, &pts);
    REQUIRE(amb.local_distance(0, 1, 2) == Approx(2.0));  // opposite unit directions
}

TEST_CASE("ambient fill uses actual directions") {
    // center 0, neighbors both on the same side at 1 and 2
    auto pts = line_points({0.0, 1.0, 2.0});
    auto nb = knn_graph(pts, 2);
    auto amb = local_metrics(nb, RhoMode::Zero, SigmaMode::One, FillMode::Ambient, &pts);
    REQUIRE(amb.local_distance(0, 1, 2) == Approx(1.0));
}

TEST_CASE("sqrt2 fill is floored to keep the star metric valid") {
    // rho=NN makes the nearest offset 0; the raw formula would give
    // (0 + 1)/sqrt(2) < |0 - 1| and break the triangle inside the star
    auto pts = line_points({0.0, 0.5, 1.5});
    auto nb = knn_graph(pts, 2);
    auto fam = local_metrics(nb, RhoMode::NearestNeighbor, SigmaMode::One, FillMode::SumSqrt2);
    REQUIRE(fam.local_distance(0, 1, 2) == Approx(1.0));
}

TEST_CASE("every star satisfies the triangle inequality for all fill modes") {
    std::mt19937_64 rng(21);
    for (auto fill : {FillMode::Sum, FillMode::SumSqrt2, FillMode::Ambient}) {
        for (auto rho : {RhoMode::Zero, RhoMode::NearestNeighbor}) {
            for (auto sig : {SigmaMode::One, SigmaMode::Knn, SigmaMode::Smooth}) {
                auto pts = random_points(40, 3, rng, 2.0);
                auto nb = knn_graph(pts, 6);
                auto fam = local_metrics(nb, rho, sig, fill, &pts);
                for (std::size_t i = 0; i < pts.n; ++i) {
                    auto star = fam.star_members(i);
                    for (std::size_t a : star)
                        for (std::size_t b : star)
                            for (std::size_t c : star) {
                                if (a == b || b == c || a == c) continue;
                                double ab = fam.local_distance(i, a, b);
                                double bc = fam.local_distance(i, b, c);
                                double ac = fam.local_distance(i, a, c);
                                REQUIRE(ac <= ab + bc + 1e-12);
                            }
                }
            }
        }
    }
}

TEST_CASE("local entries are symmetric and non-negative") {
    std::mt19937_64 rng(31);
    auto pts = random_points(50, 2, rng);
    auto nb = knn_graph(pts, 5);
    auto fam = local_metrics(nb, RhoMode::NearestNeighbor, SigmaMode::Smooth, FillMode::Sum);
    for (std::size_t i = 0; i < pts.n; ++i)
        for (auto& e : fam.spaces[i].entries) {
            REQUIRE(e.d >= 0.0);
            REQUIRE(fam.local_distance(i, e.u, e.v) == fam.local_distance(i, e.v, e.u));
        }
}

TEST_CASE("ambient fill without coordinates is rejected") {
    std::mt19937_64 rng(41);
    auto pts = random_points(10, 2, rng);
    auto nb = knn_graph(pts, 3);
    REQUIRE_THROWS_AS(local_metrics(nb, RhoMode::Zero, SigmaMode::One, FillMode::Ambient),
                      InvalidParameter);
}

// ---------------------------------------------------------------------- gluing

namespace {

FiniteMetricSpace interval_space(std::size_t steps, double step) {
    FiniteMetricSpace X(steps + 1, Mode::UM);
    for (std::size_t i = 0; i <= steps; ++i)
        for (std::size_t j = i + 1; j <= steps; ++j) X.set(i, j, (j - i) * step);
    return X;
}

}  // namespace

TEST_CASE("gluing two intervals end to start concatenates distances") {
    GluingSpec spec;
    spec.components = {interval_space(10, 0.1), interval_space(10, 0.1)};
    spec.identify = {{{0, 10}, {1, 0}}};
    auto glued = glue_metric_spaces(spec);
    REQUIRE(glued.n == 21);
    // class order follows first appearance: first interval 0..10, second 1..10
    REQUIRE(glued.at(0, 20) == Approx(2.0));
}

TEST_CASE("gluing interval endpoints yields the circle metric") {
    GluingSpec spec;
    spec.components = {interval_space(10, 0.1)};
    spec.identify = {{{0, 0}, {0, 10}}};
    auto glued = glue_metric_spaces(spec);
    REQUIRE(glued.n == 10);
    // points are 0.0,0.1,...,0.9; arc-length metric on a circumference of 1
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 10; ++j) {
            double lin = std::abs(0.1 * double(i) - 0.1 * double(j));
            double want = std::min(lin, 1.0 - lin);
            REQUIRE(glued.at(i, j) == Approx(want).margin(1e-12));
        }
    REQUIRE(glued.at(1, 9) == Approx(0.2).margin(1e-12));
}

TEST_CASE("no identifications leave components infinitely apart") {
    GluingSpec spec;
    spec.components = {interval_space(3, 1.0), interval_space(2, 1.0)};
    auto glued = glue_metric_spaces(spec);
    REQUIRE(glued.n == 7);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 4; j < 7; ++j) REQUIRE(glued.at(i, j) == kInf);
    REQUIRE(glued.at(0, 3) == Approx(3.0));
}

TEST_CASE("identifications close transitively") {
    GluingSpec spec;
    spec.components = {interval_space(2, 1.0), interval_space(2, 1.0), interval_space(2, 1.0)};
    // chain: end of A ~ start of B, start of B ~ start of C
    spec.identify = {{{0, 2}, {1, 0}}, {{1, 0}, {2, 0}}};
    auto glued = glue_metric_spaces(spec);
    REQUIRE(glued.n == 7);
    // A.start to C.end runs through the shared class: 2 + 2
    REQUIRE(glued.at(0, 6) == Approx(4.0));
}

TEST_CASE("EPMet gluing masks pairs with no finite representative pair") {
    FiniteMetricSpace A(2, Mode::EPMet);
    A.set(0, 1, 1.0);
    FiniteMetricSpace B(2, Mode::EPMet);
    B.set(0, 1, 1.0);
    GluingSpec spec;
    spec.components = {A, B};
    spec.identify = {{{0, 1}, {1, 0}}};

    auto um = spec;
    for (auto& comp : um.components) comp.mode = Mode::UM;
    auto glued_um = glue_metric_spaces(um);
    REQUIRE(glued_um.at(0, 2) == Approx(2.0));  // finite chain through the glued point

    auto glued_ep = glue_metric_spaces(spec);
    REQUIRE(glued_ep.at(0, 2) == kInf);  // no single component holds both
    REQUIRE(glued_ep.at(0, 1) == Approx(1.0));
}

TEST_CASE("glued UM space passes the triangle scan") {
    std::mt19937_64 rng(55);
    for (int rep = 0; rep < 5; ++rep) {
        GluingSpec spec;
        spec.components = {oracle::random_closed_space(20, rng),
                           oracle::random_closed_space(15, rng),
                           oracle::random_closed_space(10, rng)};
        spec.identify = {{{0, 3}, {1, 2}}, {{1, 7}, {2, 0}}, {{0, 0}, {2, 9}}};
        auto glued = glue_metric_spaces(spec);
        REQUIRE(glued.n == 42);
        REQUIRE(glued.triangle_holds(1e-9));
    }
}

TEST_CASE("gluing is invariant under component permutation") {
    std::mt19937_64 rng(66);
    auto A = oracle::random_closed_space(7, rng);
    auto B = oracle::random_closed_space(5, rng);
    GluingSpec ab;
    ab.components = {A, B};
    ab.identify = {{{0, 2}, {1, 3}}, {{0, 6}, {1, 0}}};
    GluingSpec ba;
    ba.components = {B, A};
    ba.identify = {{{1, 2}, {0, 3}}, {{1, 6}, {0, 0}}};
    std::vector<std::size_t> cls_ab, cls_ba;
    auto gab = glue_metric_spaces(ab, &cls_ab);
    auto gba = glue_metric_spaces(ba, &cls_ba);
    REQUIRE(gab.n == gba.n);
    // class_of maps global input indices (component-major) to quotient indices
    auto ab_of = [&](std::size_t space, std::size_t point) {
        return cls_ab[space == 0 ? point : 7 + point];
    };
    auto ba_of = [&](std::size_t space, std::size_t point) {
        return cls_ba[space == 0 ? 5 + point : point];  // ba lists B (5 points) first
    };
    for (std::size_t s1 = 0; s1 < 2; ++s1)
        for (std::size_t p1 = 0; p1 < (s1 == 0 ? 7u : 5u); ++p1)
            for (std::size_t s2 = 0; s2 < 2; ++s2)
                for (std::size_t p2 = 0; p2 < (s2 == 0 ? 7u : 5u); ++p2) {
                    double d1 = gab.at(ab_of(s1, p1), ab_of(s2, p2));
                    double d2 = gba.at(ba_of(s1, p1), ba_of(s2, p2));
                    REQUIRE(d1 == Approx(d2).margin(1e-12));
                }
}

TEST_CASE("gluing rejects empty or inconsistent specs") {
    GluingSpec empty;
    REQUIRE_THROWS_AS(glue_metric_spaces(empty), InvalidInput);

    GluingSpec mixed;
    mixed.components = {interval_space(2, 1.0), interval_space(2, 1.0)};
    mixed.components[1].mode = Mode::EPMet;
    REQUIRE_THROWS_AS(glue_metric_spaces(mixed), InvalidInput);

    GluingSpec oob;
    oob.components = {interval_space(2, 1.0)};
    oob.identify = {{{0, 0}, {0, 9}}};
    REQUIRE_THROWS_AS(glue_metric_spaces(oob), InvalidInput);
}
