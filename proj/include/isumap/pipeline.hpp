#ifndef ISUMAP_PIPELINE_HPP
#define ISUMAP_PIPELINE_HPP

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "isumap/cluster.hpp"
#include "isumap/combine.hpp"
#include "isumap/core.hpp"
#include "isumap/datasets.hpp"
#include "isumap/io.hpp"
#include "isumap/knn.hpp"
#include "isumap/local_metrics.hpp"
#include "isumap/mds.hpp"
#include "isumap/separation.hpp"
#include "isumap/svg.hpp"
#include "isumap/tconorm.hpp"

namespace isumap {

inline constexpr const char* kVersion = "0.1.0";

// ------------------------------------------------------------ enum parsing

inline RhoMode parse_rho(const std::string& s) {
    if (s == "zero") return RhoMode::Zero;
    if (s == "nn") return RhoMode::NearestNeighbor;
    throw InvalidParameter("config: rho must be zero or nn, got '" + s + "'");
}
inline const char* rho_name(RhoMode m) { return m == RhoMode::Zero ? "zero" : "nn"; }

inline SigmaMode parse_sigma(const std::string& s) {
    if (s == "one") return SigmaMode::One;
    if (s == "knn") return SigmaMode::Knn;
    if (s == "smooth") return SigmaMode::Smooth;
    throw InvalidParameter("config: sigma must be one, knn or smooth, got '" + s + "'");
}
inline const char* sigma_name(SigmaMode m) {
    return m == SigmaMode::One ? "one" : m == SigmaMode::Knn ? "knn" : "smooth";
}

inline FillMode parse_fill(const std::string& s) {
    if (s == "none") return FillMode::None;
    if (s == "sum") return FillMode::Sum;
    if (s == "sum-sqrt2") return FillMode::SumSqrt2;
    if (s == "ambient") return FillMode::Ambient;
    throw InvalidParameter("config: fill must be none, sum, sum-sqrt2 or ambient, got '" + s + "'");
}
inline const char* fill_name(FillMode m) {
    switch (m) {
        case FillMode::None: return "none";
        case FillMode::Sum: return "sum";
        case FillMode::SumSqrt2: return "sum-sqrt2";
        default: return "ambient";
    }
}

inline Mode parse_metric_mode(const std::string& s) {
    if (s == "um") return Mode::UM;
    if (s == "epmet") return Mode::EPMet;
    throw InvalidParameter("config: mode must be um or epmet, got '" + s + "'");
}
inline const char* metric_mode_name(Mode m) { return m == Mode::UM ? "um" : "epmet"; }

inline Linkage parse_linkage(const std::string& s) {
    if (s == "single") return Linkage::Single;
    if (s == "average") return Linkage::Average;
    if (s == "complete") return Linkage::Complete;
    throw InvalidParameter("config: linkage must be single, average or complete, got '" + s + "'");
}
inline const char* linkage_name(Linkage l) {
    return l == Linkage::Single ? "single" : l == Linkage::Average ? "average" : "complete";
}

inline TConorm parse_tconorm(const std::string& s) {
    if (s == "max") return TConorm::max_conorm();
    if (s == "probsum") return TConorm::probabilistic_sum();
    if (s == "bsum") return TConorm::bounded_sum();
    throw InvalidParameter("config: tconorm must be max, probsum or bsum, got '" + s + "'");
}

// -------------------------------------------------------------- the config

// Everything a run needs; defaults are the standard preset (local radii from
// the k-th neighbor, max combination, uber-metric mode, classical MDS, no
// cluster step).
struct PipelineConfig {
    std::string input;       // coordinate csv; exactly one of input/generate
    std::string generate;    // dataset name for the built-in generators
    std::size_t n = 500;     // generator point count
    std::size_t k = 10;      // neighborhood size
    std::string tconorm = "max";
    RhoMode rho = RhoMode::Zero;
    SigmaMode sigma = SigmaMode::Knn;
    FillMode fill = FillMode::None;
    Mode mode = Mode::UM;
    std::size_t dim = 2;     // embedding dimension
    std::string mds = "cmds";  // cmds | cmds+sgd
    std::size_t clusters = 0;  // > 0 turns on the cluster step
    Linkage linkage = Linkage::Average;
    std::string labels_path;   // external labels; also turns on the cluster step
    double alpha = 1.0;        // separation penalty weight
    double beta = 0.0;         // separation anchor weight
    std::size_t iters = 100;   // epochs for sgd, iterations for separation
    double lr = 0.01;
    std::uint64_t seed = 0;
    std::string out = "isumap-out";
    DatasetParams dataset;     // generator knobs, recorded in the manifest
};

namespace detail {

inline std::size_t parse_count(const std::string& key, const std::string& v) {
    if (v.empty() || v[0] == '-')
        throw InvalidParameter("config: " + key + " needs a nonnegative integer, got '" + v + "'");
    const char* b = v.c_str();
    char* end = nullptr;
    unsigned long long x = std::strtoull(b, &end, 10);
    if (end == b || *end)
        throw InvalidParameter("config: " + key + " needs a nonnegative integer, got '" + v + "'");
    return static_cast<std::size_t>(x);
}

inline double parse_real(const std::string& key, const std::string& v) {
    double x;
    if (!parse_double(v, x))
        throw InvalidParameter("config: " + key + " needs a number, got '" + v + "'");
    return x;
}

}  // namespace detail

// Flat key=value files; '#' lines are comments, blank lines are skipped,
// whitespace around keys and values is trimmed.
inline std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw InvalidParameter("config: cannot read '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw InvalidParameter("config: expected key=value, got '" + t + "'");
        std::string key = detail::trim(t.substr(0, eq));
        if (key.empty()) throw InvalidParameter("config: empty key in '" + t + "'");
        kv[key] = detail::trim(t.substr(eq + 1));
    }
    return kv;
}

// Defaults overlaid with the given keys; unknown keys and malformed values
// are rejected so typos cannot silently fall back.
inline PipelineConfig resolve_config(const std::map<std::string, std::string>& kv) {
    PipelineConfig c;
    for (const auto& [key, v] : kv) {
        if (key == "input") c.input = v;
        else if (key == "generate") c.generate = v;
        else if (key == "n") c.n = detail::parse_count(key, v);
        else if (key == "k") c.k = detail::parse_count(key, v);
        else if (key == "tconorm") { parse_tconorm(v); c.tconorm = v; }
        else if (key == "rho") c.rho = parse_rho(v);
        else if (key == "sigma") c.sigma = parse_sigma(v);
        else if (key == "fill") c.fill = parse_fill(v);
        else if (key == "mode") c.mode = parse_metric_mode(v);
        else if (key == "dim") c.dim = detail::parse_count(key, v);
        else if (key == "mds") {
            if (v != "cmds" && v != "cmds+sgd")
                throw InvalidParameter("config: mds must be cmds or cmds+sgd, got '" + v + "'");
            c.mds = v;
        } else if (key == "clusters") c.clusters = detail::parse_count(key, v);
        else if (key == "linkage") c.linkage = parse_linkage(v);
        else if (key == "labels") c.labels_path = v;
        else if (key == "alpha") c.alpha = detail::parse_real(key, v);
        else if (key == "beta") c.beta = detail::parse_real(key, v);
        else if (key == "iters") c.iters = detail::parse_count(key, v);
        else if (key == "lr") c.lr = detail::parse_real(key, v);
        else if (key == "seed") c.seed = detail::parse_count(key, v);
        else if (key == "out") c.out = v;
        else if (key == "blobs") c.dataset.blobs = detail::parse_count(key, v);
        else if (key == "blob_sigma") c.dataset.blob_sigma = detail::parse_real(key, v);
        else if (key == "blob_spacing") c.dataset.blob_spacing = detail::parse_real(key, v);
        else throw InvalidParameter("config: unknown key '" + key + "'");
    }
    return c;
}

// Every resolved parameter as strings, the exact map a manifest rerun feeds
// back through resolve_config.
inline std::map<std::string, std::string> config_to_map(const PipelineConfig& c) {
    return {
        {"input", c.input},
        {"generate", c.generate},
        {"n", std::to_string(c.n)},
        {"k", std::to_string(c.k)},
        {"tconorm", c.tconorm},
        {"rho", rho_name(c.rho)},
        {"sigma", sigma_name(c.sigma)},
        {"fill", fill_name(c.fill)},
        {"mode", metric_mode_name(c.mode)},
        {"dim", std::to_string(c.dim)},
        {"mds", c.mds},
        {"clusters", std::to_string(c.clusters)},
        {"linkage", linkage_name(c.linkage)},
        {"labels", c.labels_path},
        {"alpha", detail::fmt_double(c.alpha)},
        {"beta", detail::fmt_double(c.beta)},
        {"iters", std::to_string(c.iters)},
        {"lr", detail::fmt_double(c.lr)},
        {"seed", std::to_string(c.seed)},
        {"out", c.out},
        {"blobs", std::to_string(c.dataset.blobs)},
        {"blob_sigma", detail::fmt_double(c.dataset.blob_sigma)},
        {"blob_spacing", detail::fmt_double(c.dataset.blob_spacing)},
    };
}

// Rebuild the exact configuration of a finished run from its manifest.
inline PipelineConfig config_from_manifest(const std::string& manifest_path) {
    auto j = detail::load_json(manifest_path);
    std::map<std::string, std::string> kv;
    try {
        for (const auto& [key, v] : j.at("config").items()) kv[key] = v.get<std::string>();
    } catch (const nlohmann::json::exception& ex) {
        throw InvalidInput("'" + manifest_path + "': " + ex.what());
    }
    return resolve_config(kv);
}

// ------------------------------------------------------------ the pipeline

struct PipelineOutcome {
    bool ok = false;
    std::string failed_stage;
    std::string error;
    std::vector<std::string> warnings;
    std::vector<std::string> artifacts;
    std::string out_dir;
};

// Orchestrates one run: load or generate points, neighborhood graph, local
// metrics, combination into one geodesic table, infinity repair, classical
// MDS, optional stochastic refinement, optional cluster separation, then the
// artifact files. Configuration-class problems throw; stage failures are
// returned in the outcome, with everything produced so far kept on disk next
// to a manifest marked FAILED. The orchestrator itself is single threaded;
// the combination stage parallelizes internally (ISUMAP_THREADS caps it).
inline PipelineOutcome run_pipeline(const PipelineConfig& cfg) {
    namespace fs = std::filesystem;
    if (cfg.input.empty() == cfg.generate.empty())
        throw InvalidParameter("config: give exactly one of input or generate");
    if (cfg.dim < 1) throw InvalidParameter("config: dim must be at least 1");
    if (cfg.k < 1) throw InvalidParameter("config: k must be at least 1");
    if (cfg.mds != "cmds" && cfg.mds != "cmds+sgd")
        throw InvalidParameter("config: mds must be cmds or cmds+sgd, got '" + cfg.mds + "'");
    const TConorm T = parse_tconorm(cfg.tconorm);
    const bool cluster_step = cfg.clusters > 0 || !cfg.labels_path.empty();
    if (cluster_step && cfg.dim != 2)
        throw InvalidParameter("config: the cluster step needs dim=2");
    if ((cfg.mds == "cmds+sgd" || cluster_step) && !(cfg.lr > 0.0))
        throw InvalidParameter("config: lr must be positive");

    PipelineOutcome outcome;
    outcome.out_dir = cfg.out;
    fs::create_directories(cfg.out);
    auto path = [&](const char* name) { return (fs::path(cfg.out) / name).string(); };
    auto art = [&](const char* name) { outcome.artifacts.emplace_back(name); };

    std::string stage = "load";
    auto write_manifest = [&](bool ok) {
        nlohmann::json j;
        j["tool"] = "isumap";
        j["version"] = kVersion;
        j["status"] = ok ? "ok" : "FAILED";
        if (!ok) {
            j["failed_stage"] = stage;
            j["error"] = outcome.error;
        }
        j["config"] = nlohmann::json(config_to_map(cfg));
        j["warnings"] = outcome.warnings;
        j["artifacts"] = outcome.artifacts;
        detail::open_out(path("manifest.json")) << j.dump(1) << "\n";
    };

    try {
        PointTable points;
        std::vector<int> data_labels;
        if (!cfg.generate.empty()) {
            auto data = generate_dataset(cfg.generate, cfg.n, cfg.seed, cfg.dataset);
            points = std::move(data.points);
            data_labels = std::move(data.labels);
        } else {
            auto got = read_points_csv(cfg.input);
            points = std::move(got.points);
            if (got.has_labels) data_labels = std::move(got.labels);
        }
        if (cfg.k >= points.n)
            throw InvalidParameter("config: k must stay below the point count");
        std::vector<int> external;
        if (!cfg.labels_path.empty()) {
            external = read_labels_csv(cfg.labels_path);
            if (external.size() != points.n)
                throw InvalidInput("labels: row count does not match the points");
        }

        stage = "knn";
        auto nb = knn_graph(points, cfg.k);
        stage = "local-metrics";
        auto family = local_metrics(nb, cfg.rho, cfg.sigma, cfg.fill, &points);
        for (auto& w : family.warnings) outcome.warnings.push_back(std::move(w));
        stage = "combine";
        auto D = t_combine(family, T, cfg.mode);

        stage = "export-distances";  // the honest table, unreachable pairs inf
        write_distance_csv(path("distances.csv"), D);
        art("distances.csv");
        write_distance_bin(path("distances.isud"), D);
        art("distances.isud");

        stage = "repair";
        if (std::size_t fixed = repair_infinite(D))
            outcome.warnings.push_back(std::to_string(fixed) +
                                       " unreachable entries replaced for embedding");

        stage = "embed-cmds";
        Embedding emb = classical_mds(D, cfg.dim);
        if (cfg.mds == "cmds+sgd") {
            stage = "embed-sgd";
            auto sgd = metric_mds_sgd(D, emb, cfg.iters, 64, cfg.lr, cfg.seed);
            emb = std::move(sgd.embedding);
            write_stress_json(path("stress.json"), sgd.stress);
            art("stress.json");
        }

        std::vector<int> plot_labels = data_labels;
        if (cluster_step) {
            stage = "cluster";
            std::vector<int> clabels =
                !external.empty() ? external : linkage_clusters(D, cfg.clusters, cfg.linkage);
            auto model = medoids(D, clabels);
            stage = "separate";
            SeparationConfig scfg;
            scfg.iterations = cfg.iters;
            scfg.learning_rate = cfg.lr;
            scfg.alpha = cfg.alpha;
            scfg.beta = cfg.beta;
            scfg.seed = cfg.seed;
            auto sep = separate_clusters(emb, model, scfg);
            emb = std::move(sep.embedding);
            write_trace_json(path("trace.json"), sep.state.trace);
            art("trace.json");
            write_scatter_svg(path("separation.svg"), emb, &clabels, &sep.state.trace);
            art("separation.svg");
            plot_labels = std::move(clabels);
        }

        stage = "export";
        write_embedding_csv(path("embedding.csv"), emb,
                            plot_labels.empty() ? nullptr : &plot_labels);
        art("embedding.csv");
        stage = "plot";
        write_scatter_svg(path("scatter.svg"), emb, plot_labels.empty() ? nullptr : &plot_labels);
        art("scatter.svg");

        stage = "manifest";
        outcome.ok = true;
        write_manifest(true);
        return outcome;
    } catch (const InvalidParameter& ex) {
        outcome.error = ex.what();
        write_manifest(false);
        throw;  // config-class: the caller maps this to its own exit code
    } catch (const std::exception& ex) {
        outcome.error = ex.what();
        outcome.failed_stage = stage;
        write_manifest(false);
        return outcome;
    }
}

}  // namespace isumap

#endif
