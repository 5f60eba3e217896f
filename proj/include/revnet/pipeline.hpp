#pragma once

#include "revnet/cluster.hpp"
#include "revnet/compare.hpp"
#include "revnet/features.hpp"
#include "revnet/forest.hpp"
#include "revnet/synth.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace revnet {

/// Everything a subcommand needs. Loaded from a JSON config file, then
/// overridden by command-line flags; the resolved value is written next to
/// every output as manifest.json.
struct PipelineConfig {
    std::filesystem::path reviews;
    std::filesystem::path embeddings;
    std::filesystem::path features;
    std::filesystem::path labels;
    std::filesystem::path model;
    std::filesystem::path output;

    std::uint64_t seed = 42;
    SynthConfig synth;
    FeatureOptions feature_options;
    ForestConfig forest;
    KMeansConfig kmeans;
    std::uint32_t min_weight = 1;
    double test_fraction = 0.2;
    bool stratified = false;
    /// Empty: every built-in group with columns in the table.
    std::vector<std::string> feature_sets;
    std::string train_set = "all";
    std::vector<std::string> cluster_groups{"network", "metadata"};
};

nlohmann::ordered_json to_json(const PipelineConfig& cfg);

/// Applies the keys present in `j` on top of `cfg`. Unknown keys are errors.
void apply_json(PipelineConfig& cfg, const nlohmann::json& j);

/// Each command writes its outputs into cfg.output and returns the list of
/// files written. Errors leave no partially written file behind.
std::vector<std::filesystem::path> cmd_synth(const PipelineConfig& cfg);
std::vector<std::filesystem::path> cmd_build_graph(const PipelineConfig& cfg);
std::vector<std::filesystem::path> cmd_features(const PipelineConfig& cfg);
std::vector<std::filesystem::path> cmd_train(const PipelineConfig& cfg);
std::vector<std::filesystem::path> cmd_evaluate(const PipelineConfig& cfg, std::string* summary = nullptr);
std::vector<std::filesystem::path> cmd_predict(const PipelineConfig& cfg);
std::vector<std::filesystem::path> cmd_cluster(const PipelineConfig& cfg);

/// Loads reviews and (when configured) embeddings, then builds the table.
FeatureTable features_from_files(const PipelineConfig& cfg, LabelMap* labels = nullptr);

/// Columns for clustering: the union of cluster_groups, in table order.
std::vector<std::string> cluster_columns(const FeatureTable& table, const std::vector<std::string>& groups);

/// Evaluation report as structured text, one block per feature set.
std::string format_metrics(const std::vector<FeatureSetResult>& results);

}  // namespace revnet
