// revnet: command-line front end.
//
//   revnet synth        --out DIR
//   revnet build-graph  --reviews FILE --out DIR [--min-weight N]
//   revnet features     --reviews FILE [--embeddings FILE] --out DIR
//   revnet train        --features FILE --labels FILE --out DIR
//   revnet evaluate     --features FILE --labels FILE --out DIR [--feature-sets a,b]
//   revnet predict      --features FILE --model FILE --out DIR
//   revnet cluster      --features FILE [--model FILE] --out DIR [--k N]
//
// Every subcommand accepts --config FILE (JSON); flags override it.

#include "revnet/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

using namespace revnet;

namespace {

struct Overrides {
    std::string config;
    std::string reviews, embeddings, features, labels, model, output;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint32_t> min_weight;
    std::vector<std::string> feature_sets;
    std::optional<double> alpha;
    std::optional<int> k;
    bool stratified = false;
    std::string tfidf_mode;
    std::string pagerank_variant;
    bool text = false;
    bool no_image = false;
    bool angular = false;
    bool network_only = false;
    std::vector<std::string> cluster_groups;
    std::optional<int> trees;
    std::optional<int> threads;
};

PipelineConfig resolve(const Overrides& o) {
    PipelineConfig cfg;
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) throw Error("cli", "cannot open config '" + o.config + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw Error("cli", "config '" + o.config + "' is not valid JSON: " + e.what());
        }
        apply_json(cfg, j);
    }
    nlohmann::json j = nlohmann::json::object();
    auto path = [&](const char* key, const std::string& v) {
        if (!v.empty()) j[key] = v;
    };
    path("reviews", o.reviews);
    path("embeddings", o.embeddings);
    path("features", o.features);
    path("labels", o.labels);
    path("model", o.model);
    path("output", o.output);
    if (o.min_weight) j["min_weight"] = *o.min_weight;
    if (!o.feature_sets.empty()) j["feature_sets"] = o.feature_sets;
    if (o.stratified) j["stratified"] = true;
    if (o.alpha) j["solver"]["alpha"] = *o.alpha;
    if (!o.pagerank_variant.empty()) j["solver"]["pagerank_variant"] = o.pagerank_variant;
    if (!o.tfidf_mode.empty()) j["features_options"]["tfidf_mode"] = o.tfidf_mode;
    if (o.text) j["features_options"]["text"] = true;
    if (o.no_image) j["features_options"]["image"] = false;
    if (o.angular) j["features_options"]["angular"] = true;
    if (o.network_only)
        for (const char* group : {"metadata", "image", "text"}) j["features_options"][group] = false;
    if (!o.cluster_groups.empty()) j["cluster_groups"] = o.cluster_groups;
    if (o.k) j["kmeans"]["k"] = *o.k;
    if (o.trees) j["forest"]["n_estimators"] = *o.trees;
    // One seed drives every random component unless the config sets them apart.
    if (o.seed) {
        j["seed"] = *o.seed;
        j["synth"]["seed"] = *o.seed;
        j["forest"]["seed"] = *o.seed;
        j["kmeans"]["seed"] = *o.seed;
    }
    apply_json(cfg, j);
    if (o.threads) cfg.forest.n_threads = *o.threads;
    return cfg;
}

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config, "JSON config file");
    sub->add_option("--out", o.output, "output directory")->required();
    sub->add_option("--seed", o.seed, "seed for every random component");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"revnet: co-review network features for fake-review buyer detection"};
    app.require_subcommand(1);
    Overrides o;

    auto* synth = app.add_subcommand("synth", "generate a labeled synthetic marketplace");
    add_common(synth, o);

    auto* graph = app.add_subcommand("build-graph", "project reviews onto the product network");
    add_common(graph, o);
    graph->add_option("--reviews", o.reviews, "reviews (.csv or .jsonl)")->required();
    graph->add_option("--min-weight", o.min_weight, "drop edges lighter than this");

    auto* features = app.add_subcommand("features", "compute the per-product feature table");
    add_common(features, o);
    features->add_option("--reviews", o.reviews, "reviews (.csv or .jsonl)")->required();
    features->add_option("--embeddings", o.embeddings, "image embeddings (.jsonl)");
    features->add_option("--alpha", o.alpha, "PageRank damping factor");
    features->add_option("--pagerank-variant", o.pagerank_variant, "standard or literal");
    features->add_option("--tfidf-mode", o.tfidf_mode, "additive or multiplicative");
    features->add_flag("--text", o.text, "add the TF-IDF text columns");
    features->add_flag("--no-image", o.no_image, "skip image features");
    features->add_flag("--angular", o.angular, "angular instead of cosine image similarity");
    features->add_flag("--network-only", o.network_only, "only the four network columns");

    auto* train = app.add_subcommand("train", "fit a random forest on all labeled rows");
    add_common(train, o);
    train->add_option("--features", o.features)->required();
    train->add_option("--labels", o.labels)->required();
    train->add_option("--trees", o.trees, "number of trees");
    train->add_option("--threads", o.threads, "worker threads (0 = all cores)");

    auto* evaluate = app.add_subcommand("evaluate", "compare feature sets on a held-out split");
    add_common(evaluate, o);
    evaluate->add_option("--features", o.features)->required();
    evaluate->add_option("--labels", o.labels)->required();
    evaluate->add_option("--feature-sets", o.feature_sets, "comma separated groups or columns")->delimiter(',');
    evaluate->add_flag("--stratified", o.stratified, "stratify the train/test split");
    evaluate->add_option("--trees", o.trees, "number of trees");
    evaluate->add_option("--threads", o.threads, "worker threads (0 = all cores)");

    auto* predict = app.add_subcommand("predict", "score products with a saved model");
    add_common(predict, o);
    predict->add_option("--features", o.features)->required();
    predict->add_option("--model", o.model)->required();

    auto* cluster = app.add_subcommand("cluster", "k-means over network and metadata features");
    add_common(cluster, o);
    cluster->add_option("--features", o.features)->required();
    cluster->add_option("--model", o.model, "model used to flag products in the profile");
    cluster->add_option("--k", o.k, "number of clusters");
    cluster->add_option("--groups", o.cluster_groups, "comma separated groups or columns to cluster on")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = resolve(o);
        std::filesystem::create_directories(cfg.output);
        std::vector<std::filesystem::path> written;
        std::string summary;
        if (*synth) written = cmd_synth(cfg);
        else if (*graph) written = cmd_build_graph(cfg);
        else if (*features) written = cmd_features(cfg);
        else if (*train) written = cmd_train(cfg);
        else if (*evaluate) written = cmd_evaluate(cfg, &summary);
        else if (*predict) written = cmd_predict(cfg);
        else if (*cluster) written = cmd_cluster(cfg);
        std::cout << summary;
        for (const auto& p : written) std::cout << "wrote " << p.string() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
