#ifndef ISUMAP_SEPARATION_HPP
#define ISUMAP_SEPARATION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "isumap/cluster.hpp"
#include "isumap/core.hpp"
#include "isumap/hull.hpp"
#include "isumap/mds.hpp"

namespace isumap {

// Rigid per-cluster transforms (translation plus optional rotation about the
// cluster's initial centroid) driven by a hull-clearance penalty. theta packs
// three numbers per cluster: tx, ty, phi.
struct SeparationState {
    std::size_t c = 0;
    bool use_rotation = false;
    bool literal_branches = false;
    double alpha = 1.0;
    double beta = 0.0;
    std::vector<double> theta;     // 3 per cluster
    std::vector<double> centroid;  // 2 per cluster, rotation pivots
    // base hulls of the untransformed clusters; the transforms are rigid, so
    // the hull of the transformed points is the transformed base hull and the
    // vertex set never needs re-deriving
    std::vector<std::vector<Point2>> hulls;

    struct Record {
        std::size_t iteration = 0;
        double loss = 0.0;
        std::vector<double> theta;
        std::vector<double> medoid_xy;  // 2 per cluster, transformed
    };
    std::vector<Record> trace;
};

inline Point2 transformed_point(const SeparationState& s, std::size_t cluster, Point2 p) {
    const double phi = s.theta[3 * cluster + 2];
    double x = p.x, y = p.y;
    if (s.use_rotation && phi != 0.0) {
        const double cx = s.centroid[2 * cluster], cy = s.centroid[2 * cluster + 1];
        const double dx = x - cx, dy = y - cy;
        const double co = std::cos(phi), si = std::sin(phi);
        x = cx + co * dx - si * dy;
        y = cy + si * dx + co * dy;
    }
    return {x + s.theta[3 * cluster], y + s.theta[3 * cluster + 1]};
}

inline std::vector<Point2> transformed_hull(const SeparationState& s, std::size_t cluster) {
    std::vector<Point2> out = s.hulls[cluster];
    for (Point2& v : out) v = transformed_point(s, cluster, v);
    return out;
}

inline SeparationState make_separation_state(const ClusterModel& model, const Embedding& emb) {
    if (emb.m != 2) throw InvalidParameter("separation: embedding must be 2D");
    if (emb.n != model.n || model.labels.size() != model.n)
        throw InvalidInput("separation: embedding and cluster model disagree");
    SeparationState s;
    s.c = model.c;
    s.theta.assign(3 * model.c, 0.0);
    s.centroid.assign(2 * model.c, 0.0);
    std::vector<double> count(model.c, 0.0);
    std::vector<std::vector<Point2>> pts(model.c);
    for (std::size_t p = 0; p < emb.n; ++p) {
        const std::size_t j = static_cast<std::size_t>(model.labels[p]);
        const Point2 q{emb.at(p, 0), emb.at(p, 1)};
        s.centroid[2 * j] += q.x;
        s.centroid[2 * j + 1] += q.y;
        count[j] += 1.0;
        pts[j].push_back(q);
    }
    s.hulls.resize(model.c);
    for (std::size_t j = 0; j < model.c; ++j) {
        s.centroid[2 * j] /= count[j];
        s.centroid[2 * j + 1] /= count[j];
        s.hulls[j] = convex_hull_2d(pts[j]);
    }
    return s;
}

struct LossValue {
    double value = 0.0;
    std::vector<double> grad;  // d/dtheta, 3 per cluster
};

namespace detail {

// One (point of cluster j, hull of cluster i) penalty term. Default branch
// reading is repulsive: containment is penalized by depth on top of the
// target, an outside point only by its shortfall against the target. The
// literal flag swaps the two branch bodies for compatibility with the other
// published reading. Adds alpha * tanh(pen) to value and, when grad is given,
// the chain-rule terms for both clusters' translations and rotations.
inline void separation_pair(const SeparationState& s, const std::vector<Point2>& hull_i,
                            std::size_t i, std::size_t j, Point2 tp, double target,
                            double* value, double* grad) {
    const HullDistance res = point_hull_distance(tp, hull_i);
    double pen, dsign;
    if (res.inside != s.literal_branches) {
        pen = target + res.d;
        dsign = 1.0;
    } else {
        pen = target - res.d;
        if (pen <= 0.0) return;  // separated past the target: no contribution
        dsign = -1.0;
    }
    const double th = std::tanh(pen);
    if (value) *value += s.alpha * th;
    if (!grad) return;
    const double w = s.alpha * (1.0 - th * th) * dsign;
    // boundary-distance direction; zero subgradient exactly on the boundary
    double ux = tp.x - res.closest.x, uy = tp.y - res.closest.y;
    const double nrm = std::hypot(ux, uy);
    if (nrm > 0.0) {
        ux /= nrm;
        uy /= nrm;
    } else {
        ux = uy = 0.0;
    }
    grad[3 * j] += w * ux;
    grad[3 * j + 1] += w * uy;
    grad[3 * i] -= w * ux;
    grad[3 * i + 1] -= w * uy;
    if (s.use_rotation) {
        // a rotation's velocity field is the quarter-turn of the offset from
        // its pivot; the closest point rides rigidly with cluster i
        const double px = tp.x - s.centroid[2 * j] - s.theta[3 * j];
        const double py = tp.y - s.centroid[2 * j + 1] - s.theta[3 * j + 1];
        grad[3 * j + 2] += w * (uy * px - ux * py);
        const double qx = res.closest.x - s.centroid[2 * i] - s.theta[3 * i];
        const double qy = res.closest.y - s.centroid[2 * i + 1] - s.theta[3 * i + 1];
        grad[3 * i + 2] -= w * (uy * qx - ux * qy);
    }
}

}  // namespace detail

// Full separation loss at the state's theta: every ordered cross pair of
// (point, other cluster's hull) plus the beta * |theta|^2 anchor. Hulls and
// points are transformed on the fly, so the value is a function of theta
// alone and gradients can be checked by finite differences.
inline LossValue separation_loss(const SeparationState& s, const ClusterModel& model,
                                 const Embedding& emb) {
    const std::size_t c = model.c;
    if (model.target.size() != c * c) throw InvalidInput("separation_loss: targets not set");
    if (emb.n != model.n) throw InvalidInput("separation_loss: embedding size mismatch");
    LossValue out;
    out.grad.assign(3 * c, 0.0);
    std::vector<std::vector<Point2>> th(c);
    for (std::size_t i = 0; i < c; ++i) th[i] = transformed_hull(s, i);
    for (std::size_t p = 0; p < emb.n; ++p) {
        const std::size_t j = static_cast<std::size_t>(model.labels[p]);
        const Point2 tp = transformed_point(s, j, {emb.at(p, 0), emb.at(p, 1)});
        for (std::size_t i = 0; i < c; ++i) {
            if (i == j) continue;
            detail::separation_pair(s, th[i], i, j, tp, model.target[j * c + i], &out.value,
                                    out.grad.data());
        }
    }
    for (std::size_t q = 0; q < s.theta.size(); ++q) {
        out.value += s.beta * s.theta[q] * s.theta[q];
        out.grad[q] += 2.0 * s.beta * s.theta[q];
    }
    return out;
}

struct SeparationConfig {
    std::size_t iterations = 100;
    double learning_rate = 0.01;
    double alpha = 1.0;
    double beta = 0.0;
    double sample_fraction = 1.0;  // share of cross pairs per gradient step
    bool use_rotation = false;
    bool literal_branches = false;
    std::size_t hull_refresh = 1;  // recompute transformed hulls every N steps
    std::uint64_t seed = 0;
};

struct SeparationResult {
    Embedding embedding;
    SeparationState state;
    ClusterModel model;  // input model, targets filled if they were not
};

// Gradient descent on the per-cluster transforms. Targets default to
// gamma * tanh(d/tau) with gamma the initial embedding diameter and tau the
// median off-diagonal medoid distance. Each step samples a fraction of the
// cross pairs, sums their penalty gradients in index order, applies the full
// anchor gradient, then accepts the step only if the full loss did not rise;
// a rejected step restores theta and halves the rate. The trace records the
// accepted loss per iteration, iterations + 1 entries in total.
inline SeparationResult separate_clusters(const Embedding& emb, const ClusterModel& model_in,
                                          const SeparationConfig& cfg) {
    if (emb.m != 2) throw InvalidParameter("separate_clusters: embedding must be 2D");
    if (!(cfg.sample_fraction > 0.0 && cfg.sample_fraction <= 1.0))
        throw InvalidParameter("separate_clusters: sample_fraction must be in (0, 1]");
    if (!(cfg.learning_rate > 0.0))
        throw InvalidParameter("separate_clusters: learning_rate must be positive");
    if (emb.n != model_in.n) throw InvalidInput("separate_clusters: size mismatch");
    if (!emb.all_finite()) throw InvalidInput("separate_clusters: non-finite coordinates");

    SeparationResult out;
    out.model = model_in;
    const std::size_t c = out.model.c;
    if (out.model.target.size() != c * c) {
        double gamma = 0.0;
        for (std::size_t a = 0; a < emb.n; ++a)
            for (std::size_t b = a + 1; b < emb.n; ++b)
                gamma = std::max(gamma, std::hypot(emb.at(a, 0) - emb.at(b, 0),
                                                   emb.at(a, 1) - emb.at(b, 1)));
        std::vector<double> off;
        for (std::size_t i = 0; i < c; ++i)
            for (std::size_t j = i + 1; j < c; ++j) off.push_back(out.model.medoid_dist[i * c + j]);
        double tau = 1.0;
        if (!off.empty()) {
            std::sort(off.begin(), off.end());
            tau = off.size() % 2 ? off[off.size() / 2]
                                 : 0.5 * (off[off.size() / 2 - 1] + off[off.size() / 2]);
        }
        compute_targets(out.model, gamma, tau > 0.0 ? tau : 1.0);
    }

    SeparationState s = make_separation_state(out.model, emb);
    s.use_rotation = cfg.use_rotation;
    s.literal_branches = cfg.literal_branches;
    s.alpha = cfg.alpha;
    s.beta = cfg.beta;

    if (c == 1) {
        out.embedding = emb;
        out.state = std::move(s);
        return out;
    }

    const auto record = [&](std::size_t it, double loss) {
        SeparationState::Record r;
        r.iteration = it;
        r.loss = loss;
        r.theta = s.theta;
        r.medoid_xy.resize(2 * c);
        for (std::size_t j = 0; j < c; ++j) {
            const std::size_t m = out.model.medoid[j];
            const Point2 q = transformed_point(s, j, {emb.at(m, 0), emb.at(m, 1)});
            r.medoid_xy[2 * j] = q.x;
            r.medoid_xy[2 * j + 1] = q.y;
        }
        s.trace.push_back(std::move(r));
    };

    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;  // (point, hull)
    for (std::uint32_t p = 0; p < emb.n; ++p)
        for (std::uint32_t i = 0; i < c; ++i)
            if (i != static_cast<std::uint32_t>(out.model.labels[p])) pairs.emplace_back(p, i);
    const std::size_t take = std::max<std::size_t>(
        1, static_cast<std::size_t>(cfg.sample_fraction * static_cast<double>(pairs.size())));

    std::mt19937_64 rng(cfg.seed);
    double lr = cfg.learning_rate;
    double current = separation_loss(s, out.model, emb).value;
    record(0, current);

    std::vector<std::vector<Point2>> th(c);
    std::vector<double> grad(3 * c), prev;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> sample;
    const std::size_t refresh = std::max<std::size_t>(1, cfg.hull_refresh);
    for (std::size_t it = 1; it <= cfg.iterations; ++it) {
        if ((it - 1) % refresh == 0)
            for (std::size_t i = 0; i < c; ++i) th[i] = transformed_hull(s, i);
        std::shuffle(pairs.begin(), pairs.end(), rng);
        sample.assign(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(take));
        std::sort(sample.begin(), sample.end());  // fixed reduction order
        std::fill(grad.begin(), grad.end(), 0.0);
        for (const auto& [p, i] : sample) {
            const std::size_t j = static_cast<std::size_t>(out.model.labels[p]);
            const Point2 tp = transformed_point(s, j, {emb.at(p, 0), emb.at(p, 1)});
            detail::separation_pair(s, th[i], i, j, tp, out.model.target[j * c + i], nullptr,
                                    grad.data());
        }
        for (std::size_t q = 0; q < grad.size(); ++q) grad[q] += 2.0 * s.beta * s.theta[q];
        prev = s.theta;
        for (std::size_t q = 0; q < grad.size(); ++q) s.theta[q] -= lr * grad[q];
        const double next = separation_loss(s, out.model, emb).value;
        if (next > current) {  // roll back and cool down
            s.theta = prev;
            lr *= 0.5;
        } else {
            current = next;
        }
        record(it, current);
    }

    out.embedding.n = emb.n;
    out.embedding.m = 2;
    out.embedding.provenance = Provenance::Separated;
    out.embedding.coords.resize(2 * emb.n);
    for (std::size_t p = 0; p < emb.n; ++p) {
        const std::size_t j = static_cast<std::size_t>(out.model.labels[p]);
        const Point2 q = transformed_point(s, j, {emb.at(p, 0), emb.at(p, 1)});
        out.embedding.coords[2 * p] = q.x;
        out.embedding.coords[2 * p + 1] = q.y;
    }
    out.state = std::move(s);
    return out;
}

}  // namespace isumap

#endif
