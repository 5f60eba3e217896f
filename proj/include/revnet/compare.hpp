#pragma once

#include "revnet/eval.hpp"
#include "revnet/features.hpp"
#include "revnet/forest.hpp"

#include <string>
#include <vector>

namespace revnet {

struct FeatureSet {
    std::string name;
    std::vector<std::string> columns;
};

/// Resolves names to column groups: built-in group names expand via
/// feature_group; anything else must be a single column name.
std::vector<FeatureSet> resolve_feature_sets(const FeatureTable& table, const std::vector<std::string>& names);

struct FeatureSetResult {
    std::string name;
    std::vector<std::string> columns;
    EvalReport report;
    ForestModel model;
};

struct ComparisonOptions {
    ForestConfig forest;
    double test_fraction = 0.2;
    std::uint64_t split_seed = 42;
    bool stratified = false;
};

/// One split shared by every set; per set: standardize on train rows, train
/// a forest, score the test rows.
std::vector<FeatureSetResult> compare_feature_sets(const FeatureTable& table, const std::vector<Label>& labels,
                                                   const std::vector<FeatureSet>& sets, const ComparisonOptions& opts = {});

/// Standardize-then-train on the given rows; the fitted scaler is stored in
/// the returned model.
ForestModel fit_pipeline(const FeatureTable& table, const std::vector<Label>& labels,
                         const std::vector<std::string>& columns, const std::vector<Index>& rows, const ForestConfig& cfg);

/// One row per feature set: AUC, accuracy, TNR, TPR, F1, precision.
std::string format_comparison(const std::vector<FeatureSetResult>& results);

}  // namespace revnet
