#include "revnet/pipeline.hpp"

#include "revnet/csv.hpp"

#include <cstdio>
#include <set>

namespace revnet {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kModule = "cli";

std::string_view mode_name(TfidfMode m) { return m == TfidfMode::additive ? "additive" : "multiplicative"; }

TfidfMode parse_mode(const std::string& s) {
    if (s == "additive") return TfidfMode::additive;
    if (s == "multiplicative") return TfidfMode::multiplicative;
    throw Error(kModule, "tfidf mode must be additive or multiplicative, got '" + s + "'");
}

std::string_view pagerank_name(PageRankVariant v) { return v == PageRankVariant::standard ? "standard" : "literal"; }
std::string_view clustering_name(ClusteringVariant v) {
    return v == ClusteringVariant::neighbor_links ? "neighbor_links" : "literal";
}

/// Applies only known keys; reports the first unknown one.
template <typename F>
void for_keys(const json& j, std::string_view where, const std::set<std::string>& known, F&& apply) {
    if (!j.is_object()) throw Error(kModule, "config section '" + std::string(where) + "' must be an object");
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw Error(kModule, "unknown config key '" + std::string(where) + "." + key + "'");
        apply(key, value);
    }
}

/// Files written so far by one command; removed again unless the command
/// finishes, so a failed run leaves no partial output set behind.
class Outputs {
public:
    ~Outputs() {
        if (done_) return;
        std::error_code ec;
        for (const auto& p : paths_) fs::remove(p, ec);
    }
    void push_back(fs::path p) { paths_.push_back(std::move(p)); }
    std::vector<fs::path> finish() {
        done_ = true;
        return paths_;
    }

private:
    std::vector<fs::path> paths_;
    bool done_ = false;
};

fs::path out_file(const PipelineConfig& cfg, const std::string& name) {
    if (cfg.output.empty()) throw Error(kModule, "no output directory configured");
    return cfg.output / name;
}

void write_manifest(const PipelineConfig& cfg, const std::string& command, Outputs& written) {
    ordered_json m;
    m["command"] = command;
    m["config"] = to_json(cfg);
    const auto path = out_file(cfg, "manifest_" + command + ".json");
    write_file_atomic(path, m.dump(2) + "\n");
    written.push_back(path);
}

void require(const fs::path& p, const char* what) {
    if (p.empty()) throw Error(kModule, std::string("missing required path: ") + what);
    if (!fs::exists(p)) throw Error(kModule, std::string(what) + " '" + p.string() + "' does not exist");
}

LabelMap load_labels(const PipelineConfig& cfg) {
    require(cfg.labels, "labels");
    return labels_from_csv(read_file(cfg.labels));
}

}  // namespace

ordered_json to_json(const PipelineConfig& cfg) {
    ordered_json j;
    j["reviews"] = cfg.reviews.string();
    j["embeddings"] = cfg.embeddings.string();
    j["features"] = cfg.features.string();
    j["labels"] = cfg.labels.string();
    j["model"] = cfg.model.string();
    j["output"] = cfg.output.string();
    j["seed"] = cfg.seed;
    j["synth"] = ordered_json::parse(synth_manifest(cfg.synth));
    j["synth"].erase("generator");
    const auto& f = cfg.feature_options;
    j["features_options"] = {{"network", f.network},
                             {"metadata", f.metadata},
                             {"image", f.image},
                             {"text", f.text},
                             {"angular", f.angular},
                             {"tfidf_mode", mode_name(f.text_options.mode)},
                             {"log_base", f.text_options.log_base},
                             {"top_k", f.text_options.top_k},
                             {"global_top", f.text_options.global_top}};
    j["solver"] = {{"alpha", f.solver.alpha},
                   {"tol", f.solver.tol},
                   {"max_iter", f.solver.max_iter},
                   {"pagerank_variant", pagerank_name(f.solver.pagerank_variant)},
                   {"clustering_variant", clustering_name(f.solver.clustering_variant)}};
    const auto& fc = cfg.forest;
    j["forest"] = {{"n_estimators", fc.n_estimators},
                   {"min_samples_leaf", fc.min_samples_leaf},
                   {"min_samples_split", fc.min_samples_split},
                   {"max_features", fc.max_features.to_string()},
                   {"max_depth", fc.max_depth},
                   {"bootstrap", fc.bootstrap},
                   {"criterion", fc.criterion == SplitCriterion::gini ? "gini" : "entropy"},
                   {"seed", fc.seed}};
    j["kmeans"] = {{"k", cfg.kmeans.k},
                   {"max_iter", cfg.kmeans.max_iter},
                   {"seed", cfg.kmeans.seed},
                   {"n_restarts", cfg.kmeans.n_restarts},
                   {"init", cfg.kmeans.init == KMeansInit::random_partition ? "random_partition" : "kmeanspp"}};
    j["min_weight"] = cfg.min_weight;
    j["test_fraction"] = cfg.test_fraction;
    j["stratified"] = cfg.stratified;
    j["feature_sets"] = cfg.feature_sets;
    j["train_set"] = cfg.train_set;
    j["cluster_groups"] = cfg.cluster_groups;
    return j;
}

void apply_json(PipelineConfig& cfg, const json& j) {
    try {
        for_keys(j, "config",
                 {"reviews", "embeddings", "features", "labels", "model", "output", "seed", "synth", "features_options",
                  "solver", "forest", "kmeans", "min_weight", "test_fraction", "stratified", "feature_sets", "train_set",
                  "cluster_groups"},
                 [&](const std::string& key, const json& v) {
                     if (key == "reviews") cfg.reviews = v.get<std::string>();
                     else if (key == "embeddings") cfg.embeddings = v.get<std::string>();
                     else if (key == "features") cfg.features = v.get<std::string>();
                     else if (key == "labels") cfg.labels = v.get<std::string>();
                     else if (key == "model") cfg.model = v.get<std::string>();
                     else if (key == "output") cfg.output = v.get<std::string>();
                     else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
                     else if (key == "min_weight") cfg.min_weight = v.get<std::uint32_t>();
                     else if (key == "test_fraction") cfg.test_fraction = v.get<double>();
                     else if (key == "stratified") cfg.stratified = v.get<bool>();
                     else if (key == "feature_sets") cfg.feature_sets = v.get<std::vector<std::string>>();
                     else if (key == "train_set") cfg.train_set = v.get<std::string>();
                     else if (key == "cluster_groups") cfg.cluster_groups = v.get<std::vector<std::string>>();
                     else if (key == "synth") {
                         auto& s = cfg.synth;
                         for_keys(v, "synth",
                                  {"seed", "n_organic_products", "n_fake_products", "organic_pool", "fake_pool",
                                   "reviews_per_product", "fake_mix", "organic_rating_probs", "fake_rating_probs",
                                   "mean_gap_days_organic", "mean_gap_days_fake", "organic_photo_rate", "fake_photo_rate",
                                   "organic_helpful_rate", "fake_helpful_rate", "vocabulary_size",
                                   "topic_vocabulary_size", "topic_word_rate", "embedding_dim", "product_image_signal",
                                   "fake_image_signal", "active_pool", "active_share_max", "active_share_power", "rating_tilt_sd", "gap_log_sd"},
                                  [&](const std::string& k, const json& x) {
                                      if (k == "seed") s.seed = x.get<std::uint64_t>();
                                      else if (k == "n_organic_products") s.n_organic_products = x.get<int>();
                                      else if (k == "n_fake_products") s.n_fake_products = x.get<int>();
                                      else if (k == "organic_pool") s.organic_pool = x.get<int>();
                                      else if (k == "fake_pool") s.fake_pool = x.get<int>();
                                      else if (k == "reviews_per_product") {
                                          const auto r = x.get<std::vector<int>>();
                                          if (r.size() != 2) throw Error(kModule, "reviews_per_product must be [min, max]");
                                          s.min_reviews = r[0];
                                          s.max_reviews = r[1];
                                      } else if (k == "fake_mix") s.fake_mix = x.get<double>();
                                      else if (k == "organic_rating_probs") s.organic_rating_probs = x.get<std::array<double, 5>>();
                                      else if (k == "fake_rating_probs") s.fake_rating_probs = x.get<std::array<double, 5>>();
                                      else if (k == "mean_gap_days_organic") s.mean_gap_days_organic = x.get<double>();
                                      else if (k == "mean_gap_days_fake") s.mean_gap_days_fake = x.get<double>();
                                      else if (k == "organic_photo_rate") s.organic_photo_rate = x.get<double>();
                                      else if (k == "fake_photo_rate") s.fake_photo_rate = x.get<double>();
                                      else if (k == "organic_helpful_rate") s.organic_helpful_rate = x.get<double>();
                                      else if (k == "fake_helpful_rate") s.fake_helpful_rate = x.get<double>();
                                      else if (k == "vocabulary_size") s.vocabulary_size = x.get<int>();
                                      else if (k == "topic_vocabulary_size") s.topic_vocabulary_size = x.get<int>();
                                      else if (k == "topic_word_rate") s.topic_word_rate = x.get<double>();
                                      else if (k == "embedding_dim") s.embedding_dim = x.get<Index>();
                                      else if (k == "product_image_signal") s.product_image_signal = x.get<double>();
                                      else if (k == "fake_image_signal") s.fake_image_signal = x.get<double>();
                                      else if (k == "active_pool") s.active_pool = x.get<int>();
                                      else if (k == "active_share_max") s.active_share_max = x.get<double>();
                                      else if (k == "active_share_power") s.active_share_power = x.get<double>();
                                      else if (k == "rating_tilt_sd") s.rating_tilt_sd = x.get<double>();
                                      else if (k == "gap_log_sd") s.gap_log_sd = x.get<double>();
                                  });
                     } else if (key == "features_options") {
                         auto& f = cfg.feature_options;
                         for_keys(v, "features_options",
                                  {"network", "metadata", "image", "text", "angular", "tfidf_mode", "log_base", "top_k",
                                   "global_top"},
                                  [&](const std::string& k, const json& x) {
                                      if (k == "network") f.network = x.get<bool>();
                                      else if (k == "metadata") f.metadata = x.get<bool>();
                                      else if (k == "image") f.image = x.get<bool>();
                                      else if (k == "text") f.text = x.get<bool>();
                                      else if (k == "angular") f.angular = x.get<bool>();
                                      else if (k == "tfidf_mode") f.text_options.mode = parse_mode(x.get<std::string>());
                                      else if (k == "log_base") f.text_options.log_base = x.get<double>();
                                      else if (k == "top_k") f.text_options.top_k = x.get<std::size_t>();
                                      else if (k == "global_top") f.text_options.global_top = x.get<bool>();
                                  });
                     } else if (key == "solver") {
                         auto& s = cfg.feature_options.solver;
                         for_keys(v, "solver", {"alpha", "tol", "max_iter", "pagerank_variant", "clustering_variant"},
                                  [&](const std::string& k, const json& x) {
                                      if (k == "alpha") s.alpha = x.get<double>();
                                      else if (k == "tol") s.tol = x.get<double>();
                                      else if (k == "max_iter") s.max_iter = x.get<int>();
                                      else if (k == "pagerank_variant") {
                                          const auto name = x.get<std::string>();
                                          if (name != "standard" && name != "literal")
                                              throw Error(kModule, "pagerank_variant must be standard or literal");
                                          s.pagerank_variant = name == "standard" ? PageRankVariant::standard : PageRankVariant::literal;
                                      } else if (k == "clustering_variant") {
                                          const auto name = x.get<std::string>();
                                          if (name != "neighbor_links" && name != "literal")
                                              throw Error(kModule, "clustering_variant must be neighbor_links or literal");
                                          s.clustering_variant =
                                              name == "literal" ? ClusteringVariant::literal : ClusteringVariant::neighbor_links;
                                      }
                                  });
                     } else if (key == "forest") {
                         auto& f = cfg.forest;
                         for_keys(v, "forest",
                                  {"n_estimators", "min_samples_leaf", "min_samples_split", "max_features", "max_depth",
                                   "bootstrap", "criterion", "seed"},
                                  [&](const std::string& k, const json& x) {
                                      if (k == "n_estimators") f.n_estimators = x.get<int>();
                                      else if (k == "min_samples_leaf") f.min_samples_leaf = x.get<int>();
                                      else if (k == "min_samples_split") f.min_samples_split = x.get<int>();
                                      else if (k == "max_features")
                                          f.max_features = MaxFeatures::parse(x.is_string() ? x.get<std::string>() : std::to_string(x.get<int>()));
                                      else if (k == "max_depth") f.max_depth = x.get<int>();
                                      else if (k == "bootstrap") f.bootstrap = x.get<bool>();
                                      else if (k == "criterion") {
                                          const auto name = x.get<std::string>();
                                          if (name != "gini" && name != "entropy") throw Error(kModule, "criterion must be gini or entropy");
                                          f.criterion = name == "gini" ? SplitCriterion::gini : SplitCriterion::entropy;
                                      } else if (k == "seed") f.seed = x.get<std::uint64_t>();
                                  });
                     } else if (key == "kmeans") {
                         auto& km = cfg.kmeans;
                         for_keys(v, "kmeans", {"k", "max_iter", "seed", "n_restarts", "init"},
                                  [&](const std::string& k, const json& x) {
                                      if (k == "k") km.k = x.get<int>();
                                      else if (k == "max_iter") km.max_iter = x.get<int>();
                                      else if (k == "seed") km.seed = x.get<std::uint64_t>();
                                      else if (k == "n_restarts") km.n_restarts = x.get<int>();
                                      else if (k == "init") {
                                          const auto name = x.get<std::string>();
                                          if (name != "random_partition" && name != "kmeanspp")
                                              throw Error(kModule, "init must be random_partition or kmeanspp");
                                          km.init = name == "kmeanspp" ? KMeansInit::kmeanspp : KMeansInit::random_partition;
                                      }
                                  });
                     }
                 });
    } catch (const json::exception& e) {
        throw Error(kModule, std::string("bad config value: ") + e.what());
    }
}

std::vector<fs::path> cmd_synth(const PipelineConfig& cfg) {
    cfg.synth.validate();
    const auto data = generate(cfg.synth);
    Outputs written;
    const auto reviews = out_file(cfg, "reviews.jsonl");
    const auto embeddings = out_file(cfg, "embeddings.jsonl");
    write_reviews(reviews, data.reviews, ReviewFormat::jsonl);
    written.push_back(reviews);
    write_embeddings(embeddings, data.embeddings);
    written.push_back(embeddings);
    const auto manifest = out_file(cfg, "manifest.json");
    write_file_atomic(manifest, synth_manifest(cfg.synth));
    written.push_back(manifest);
    return written.finish();
}

std::vector<fs::path> cmd_build_graph(const PipelineConfig& cfg) {
    require(cfg.reviews, "reviews");
    const auto data = load_reviews(cfg.reviews, review_format_from_path(cfg.reviews));
    const auto net = project(data);
    Outputs written;
    const auto path = out_file(cfg, "edges.csv");
    write_file_atomic(path, edges_to_csv(export_edges(net, cfg.min_weight)));
    written.push_back(path);
    write_manifest(cfg, "build-graph", written);
    return written.finish();
}

FeatureTable features_from_files(const PipelineConfig& cfg, LabelMap* labels) {
    require(cfg.reviews, "reviews");
    const auto data = load_reviews(cfg.reviews, review_format_from_path(cfg.reviews));
    EmbeddingIndex embeddings;
    if (cfg.feature_options.image && !cfg.embeddings.empty()) {
        require(cfg.embeddings, "embeddings");
        embeddings = load_embeddings(cfg.embeddings);
    }
    if (labels) *labels = labels_of(data);
    return build_feature_table(data, embeddings, cfg.feature_options);
}

std::vector<fs::path> cmd_features(const PipelineConfig& cfg) {
    cfg.feature_options.solver.validate();
    LabelMap labels;
    const auto table = features_from_files(cfg, &labels);
    Outputs written;
    const auto path = out_file(cfg, "features.csv");
    write_feature_table(path, table);
    written.push_back(path);
    if (!labels.empty()) {
        const auto lp = out_file(cfg, "labels.csv");
        write_file_atomic(lp, labels_to_csv(labels));
        written.push_back(lp);
    }
    write_manifest(cfg, "features", written);
    return written.finish();
}

std::vector<fs::path> cmd_train(const PipelineConfig& cfg) {
    cfg.forest.validate();
    require(cfg.features, "features");
    const auto table = load_feature_table(cfg.features);
    const auto labels = aligned_labels(table, load_labels(cfg));
    const auto sets = resolve_feature_sets(table, {cfg.train_set});
    std::vector<Index> rows(static_cast<std::size_t>(table.rows()));
    for (Index i = 0; i < table.rows(); ++i) rows[static_cast<std::size_t>(i)] = i;
    const auto model = fit_pipeline(table, labels, sets.front().columns, rows, cfg.forest);

    Outputs written;
    const auto path = out_file(cfg, "model.rvf");
    save_model(path, model);
    written.push_back(path);
    std::string imp = "feature,importance\n";
    for (const auto& [name, w] : feature_importances(model)) imp += csv::escape(name) + "," + format_number(w) + "\n";
    const auto ip = out_file(cfg, "importances.csv");
    write_file_atomic(ip, imp);
    written.push_back(ip);
    write_manifest(cfg, "train", written);
    return written.finish();
}

std::string format_metrics(const std::vector<FeatureSetResult>& results) {
    std::string out;
    for (const auto& r : results) {
        const auto& m = r.report;
        out += "[" + r.name + "]\n";
        out += "columns = " + std::to_string(r.columns.size()) + "\n";
        out += "auc = " + format_number(m.auc) + "\n";
        out += "accuracy = " + format_number(m.accuracy) + "\n";
        out += "tnr = " + format_number(m.tnr) + "\n";
        out += "tpr = " + format_number(m.tpr) + "\n";
        out += "f1 = " + format_number(m.f1) + "\n";
        out += "tp = " + std::to_string(m.tp) + "\nfp = " + std::to_string(m.fp) + "\ntn = " + std::to_string(m.tn) +
               "\nfn = " + std::to_string(m.fn) + "\n\n";
    }
    return out;
}

std::vector<fs::path> cmd_evaluate(const PipelineConfig& cfg, std::string* summary) {
    cfg.forest.validate();
    require(cfg.features, "features");
    const auto table = load_feature_table(cfg.features);
    const auto labels = aligned_labels(table, load_labels(cfg));
    auto names = cfg.feature_sets;
    if (names.empty()) {
        for (const char* g : {"network", "top2_network", "metadata", "text", "image", "all"})
            if (!feature_group(table, g).empty()) names.emplace_back(g);
    }
    const auto sets = resolve_feature_sets(table, names);
    ComparisonOptions opts;
    opts.forest = cfg.forest;
    opts.test_fraction = cfg.test_fraction;
    opts.split_seed = cfg.seed;
    opts.stratified = cfg.stratified;
    const auto results = compare_feature_sets(table, labels, sets, opts);

    Outputs written;
    const auto mp = out_file(cfg, "metrics.txt");
    write_file_atomic(mp, format_metrics(results));
    written.push_back(mp);
    for (const auto& r : results) {
        const auto rp = out_file(cfg, "roc_" + r.name + ".csv");
        write_file_atomic(rp, roc_to_csv(r.report.roc));
        written.push_back(rp);
    }
    write_manifest(cfg, "evaluate", written);
    if (summary) *summary = format_comparison(results);
    return written.finish();
}

std::vector<fs::path> cmd_predict(const PipelineConfig& cfg) {
    require(cfg.features, "features");
    require(cfg.model, "model");
    const auto table = load_feature_table(cfg.features);
    const auto model = load_model(cfg.model);
    for (const auto& name : model.feature_names)
        if (!table.has_column(name)) throw Error(kModule, "feature table lacks model feature '" + name + "'");
    const Vector scores = score_rows(model, table.select(model.feature_names));
    std::string out = "product_id,score,label\n";
    for (Index i = 0; i < table.rows(); ++i)
        out += csv::escape(table.product_ids[static_cast<std::size_t>(i)]) + "," + format_number(scores[i]) + "," +
               (scores[i] >= 0.5 ? "1" : "0") + "\n";
    Outputs written;
    const auto path = out_file(cfg, "predictions.csv");
    write_file_atomic(path, out);
    written.push_back(path);
    write_manifest(cfg, "predict", written);
    return written.finish();
}

std::vector<std::string> cluster_columns(const FeatureTable& table, const std::vector<std::string>& groups) {
    std::set<std::string> wanted;
    for (const auto& g : groups) {
        const auto cols = is_builtin_group(g) ? feature_group(table, g) : std::vector<std::string>{g};
        for (const auto& c : cols) {
            if (!table.has_column(c)) throw Error(kModule, "unknown clustering column '" + c + "'");
            wanted.insert(c);
        }
    }
    std::vector<std::string> out;
    for (const auto& c : table.columns)
        if (wanted.count(c)) out.push_back(c);
    if (out.empty()) throw Error(kModule, "no clustering columns selected");
    return out;
}

std::vector<fs::path> cmd_cluster(const PipelineConfig& cfg) {
    require(cfg.features, "features");
    const auto table = load_feature_table(cfg.features);
    std::optional<ForestModel> model;
    if (!cfg.model.empty()) {
        require(cfg.model, "model");
        model = load_model(cfg.model);
    }
    const auto cols = cluster_columns(table, cfg.cluster_groups);
    const Matrix raw = table.select(cols);
    const Matrix x = Standardizer::fit(raw).apply(raw);
    auto report = kmeans(x, cfg.kmeans);
    report = profile_clusters(std::move(report), table, model ? &*model : nullptr);

    Outputs written;
    const auto ap = out_file(cfg, "clusters.csv");
    write_file_atomic(ap, assignments_to_csv(report, table.product_ids));
    written.push_back(ap);
    const auto pp = out_file(cfg, "cluster_profile.csv");
    write_file_atomic(pp, profile_to_csv(report));
    written.push_back(pp);
    write_manifest(cfg, "cluster", written);
    return written.finish();
}

}  // namespace revnet
