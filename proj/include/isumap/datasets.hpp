#ifndef ISUMAP_DATASETS_HPP
#define ISUMAP_DATASETS_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "isumap/core.hpp"
#include "isumap/points.hpp"

namespace isumap {

// Synthetic benchmark clouds. labels is filled by the blob generator, color
// is a per-point scalar (height, tube angle, roll parameter) for plotting.
struct Dataset {
    PointTable points;
    std::vector<int> labels;
    std::vector<double> color;
};

struct DatasetParams {
    std::size_t blobs = 3;       // cluster count for the blob generator
    double blob_sigma = 0.45;    // isotropic standard deviation
    double blob_spacing = 1.0;   // scale of the center triangle
};

// Deterministic per (name, n, seed). Generators:
//   hemisphere  unit sphere, z >= 0; the polar angle is sampled uniformly,
//               which concentrates points near the pole on purpose
//   torus       ring radius 2, tube radius 0.7, both angles uniform
//   swisshole   roll (t cos t, h, t sin t), t in [1.5pi, 4.5pi], h in [0, 21],
//               with the rectangle t in [2.7pi, 3.3pi] x h in [8, 13] rejected
//   blobs       isotropic Gaussian clusters on a scalene center triangle with
//               side ratios 1 : 1.5 : 2.2, contiguous label blocks
inline Dataset generate_dataset(const std::string& name, std::size_t n, std::uint64_t seed,
                                const DatasetParams& params = {}) {
    if (n < 10) throw InvalidParameter("generate_dataset: need n >= 10");
    const double pi = std::acos(-1.0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Dataset out;
    out.points = PointTable(n, 3);
    out.color.resize(n);

    if (name == "hemisphere") {
        for (std::size_t i = 0; i < n; ++i) {
            double polar = 0.5 * pi * unif(rng);
            double azimuth = 2.0 * pi * unif(rng);
            out.points.at(i, 0) = std::sin(polar) * std::cos(azimuth);
            out.points.at(i, 1) = std::sin(polar) * std::sin(azimuth);
            out.points.at(i, 2) = std::cos(polar);
            out.color[i] = out.points.at(i, 2);
        }
    } else if (name == "torus") {
        for (std::size_t i = 0; i < n; ++i) {
            double u = 2.0 * pi * unif(rng);
            double v = 2.0 * pi * unif(rng);
            out.points.at(i, 0) = (2.0 + 0.7 * std::cos(v)) * std::cos(u);
            out.points.at(i, 1) = (2.0 + 0.7 * std::cos(v)) * std::sin(u);
            out.points.at(i, 2) = 0.7 * std::sin(v);
            out.color[i] = v;
        }
    } else if (name == "swisshole") {
        for (std::size_t i = 0; i < n; ++i) {
            double t, h;
            do {
                t = (1.5 + 3.0 * unif(rng)) * pi;
                h = 21.0 * unif(rng);
            } while (t >= 2.7 * pi && t <= 3.3 * pi && h >= 8.0 && h <= 13.0);
            out.points.at(i, 0) = t * std::cos(t);
            out.points.at(i, 1) = h;
            out.points.at(i, 2) = t * std::sin(t);
            out.color[i] = t;
        }
    } else if (name == "blobs") {
        const std::size_t c = params.blobs;
        if (c < 1) throw InvalidParameter("generate_dataset: need at least one blob");
        // scalene triangle (sides 1, 1.5, 2.2) repeated around a circle when
        // more than three centers are asked for
        std::vector<double> cx, cy;
        if (c <= 3) {
            const double tx[3] = {0.0, 1.0, -0.795};
            const double ty[3] = {0.0, 0.0, 1.272};
            cx.assign(tx, tx + c);
            cy.assign(ty, ty + c);
        } else {
            for (std::size_t b = 0; b < c; ++b) {
                double ang = 2.0 * pi * static_cast<double>(b) / static_cast<double>(c);
                cx.push_back(1.2 * std::cos(ang));
                cy.push_back(1.2 * std::sin(ang));
            }
        }
        std::normal_distribution<double> g(0.0, params.blob_sigma * params.blob_spacing);
        out.labels.resize(n);
        std::size_t i = 0;
        for (std::size_t b = 0; b < c; ++b) {
            std::size_t quota = n / c + (b < n % c ? 1 : 0);
            for (std::size_t q = 0; q < quota; ++q, ++i) {
                out.points.at(i, 0) = params.blob_spacing * cx[b] + g(rng);
                out.points.at(i, 1) = params.blob_spacing * cy[b] + g(rng);
                out.points.at(i, 2) = g(rng);
                out.labels[i] = static_cast<int>(b);
                out.color[i] = static_cast<double>(b);
            }
        }
    } else {
        throw InvalidParameter("generate_dataset: unknown dataset '" + name + "'");
    }
    return out;
}

}  // namespace isumap

#endif
