// Command line front end: geodesic distances, two-stage MDS embedding and
// optional cluster separation over coordinate csv files or the built-in
// sample datasets. Exit codes: 0 success, 2 bad configuration, 3 a pipeline
// stage failed (details in <out>/manifest.json either way).

#include <cstdint>
#include <exception>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "isumap/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"isumap: manifold learning via local metrics and t-conorm merging"};

    std::string config_path, input, generate, tconorm, rho, sigma, fill, mode, mds, linkage,
        labels, out;
    std::uint64_t n = 0, k = 0, dim = 0, clusters = 0, iters = 0, seed = 0, blobs = 0;
    double alpha = 0.0, beta = 0.0, lr = 0.0, blob_sigma = 0.0, blob_spacing = 0.0;

    app.add_option("config", config_path, "key=value config file, flags override it");
    auto* o_input = app.add_option("--input", input, "coordinate csv (header optional)");
    auto* o_generate = app.add_option("--generate", generate,
                                      "dataset: hemisphere, torus, swisshole, blobs");
    auto* o_n = app.add_option("--n", n, "generated point count");
    auto* o_k = app.add_option("--k", k, "neighborhood size");
    auto* o_tconorm = app.add_option("--tconorm", tconorm, "merge rule: max, probsum, bsum");
    auto* o_rho = app.add_option("--rho", rho, "local offset: zero, nn");
    auto* o_sigma = app.add_option("--sigma", sigma, "local radius: one, knn, smooth");
    auto* o_fill = app.add_option("--fill", fill, "non-neighbor fill: none, sum, sum-sqrt2, ambient");
    auto* o_mode = app.add_option("--mode", mode, "merge carrier: um, epmet");
    auto* o_dim = app.add_option("--dim", dim, "embedding dimension");
    auto* o_mds = app.add_option("--mds", mds, "embedding: cmds, cmds+sgd");
    auto* o_clusters = app.add_option("--clusters", clusters, "cluster count for the linkage step");
    auto* o_linkage = app.add_option("--linkage", linkage, "merge rule: single, average, complete");
    auto* o_labels = app.add_option("--labels", labels, "external cluster labels csv");
    auto* o_alpha = app.add_option("--alpha", alpha, "separation penalty weight");
    auto* o_beta = app.add_option("--beta", beta, "separation anchor weight");
    auto* o_iters = app.add_option("--iters", iters, "sgd epochs / separation iterations");
    auto* o_lr = app.add_option("--lr", lr, "step size");
    auto* o_seed = app.add_option("--seed", seed, "rng seed");
    auto* o_out = app.add_option("--out", out, "output directory");
    auto* o_blobs = app.add_option("--blobs", blobs, "blob count for --generate blobs");
    auto* o_blob_sigma = app.add_option("--blob-sigma", blob_sigma, "blob spread");
    auto* o_blob_spacing = app.add_option("--blob-spacing", blob_spacing, "blob center scale");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        std::map<std::string, std::string> kv;
        if (!config_path.empty()) kv = isumap::parse_config_file(config_path);
        auto fmt = isumap::detail::fmt_double;
        if (o_input->count()) kv["input"] = input;
        if (o_generate->count()) kv["generate"] = generate;
        if (o_n->count()) kv["n"] = std::to_string(n);
        if (o_k->count()) kv["k"] = std::to_string(k);
        if (o_tconorm->count()) kv["tconorm"] = tconorm;
        if (o_rho->count()) kv["rho"] = rho;
        if (o_sigma->count()) kv["sigma"] = sigma;
        if (o_fill->count()) kv["fill"] = fill;
        if (o_mode->count()) kv["mode"] = mode;
        if (o_dim->count()) kv["dim"] = std::to_string(dim);
        if (o_mds->count()) kv["mds"] = mds;
        if (o_clusters->count()) kv["clusters"] = std::to_string(clusters);
        if (o_linkage->count()) kv["linkage"] = linkage;
        if (o_labels->count()) kv["labels"] = labels;
        if (o_alpha->count()) kv["alpha"] = fmt(alpha);
        if (o_beta->count()) kv["beta"] = fmt(beta);
        if (o_iters->count()) kv["iters"] = std::to_string(iters);
        if (o_lr->count()) kv["lr"] = fmt(lr);
        if (o_seed->count()) kv["seed"] = std::to_string(seed);
        if (o_out->count()) kv["out"] = out;
        if (o_blobs->count()) kv["blobs"] = std::to_string(blobs);
        if (o_blob_sigma->count()) kv["blob_sigma"] = fmt(blob_sigma);
        if (o_blob_spacing->count()) kv["blob_spacing"] = fmt(blob_spacing);

        auto cfg = isumap::resolve_config(kv);
        auto outcome = isumap::run_pipeline(cfg);
        if (!outcome.ok) {
            std::cerr << "isumap: stage '" << outcome.failed_stage << "' failed: " << outcome.error
                      << "\n";
            return 3;
        }
        for (const auto& w : outcome.warnings) std::cerr << "isumap: warning: " << w << "\n";
        std::cout << outcome.out_dir << "/manifest.json\n";
        return 0;
    } catch (const isumap::InvalidParameter& ex) {
        std::cerr << "isumap: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "isumap: " << ex.what() << "\n";
        return 3;
    }
}
