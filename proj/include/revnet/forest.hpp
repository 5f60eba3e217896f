#pragma once

#include "revnet/common.hpp"
#include "revnet/eval.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace revnet {

enum class SplitCriterion { gini, entropy };

struct MaxFeatures {
    enum class Kind { sqrt, all, fixed } kind = Kind::sqrt;
    int count = 0;  // used when kind == fixed

    int resolve(int p) const;
    std::string to_string() const;
    static MaxFeatures parse(std::string_view text);
};

struct ForestConfig {
    int n_estimators = 200;
    int min_samples_leaf = 4;
    int min_samples_split = 2;
    MaxFeatures max_features;
    int max_depth = 20;
    bool bootstrap = true;
    SplitCriterion criterion = SplitCriterion::gini;
    std::uint64_t seed = 42;
    int n_threads = 0;  // 0 = hardware concurrency; results do not depend on it

    void validate() const;
};

/// Flat binary tree. Internal nodes test x[feature] <= threshold (left) and
/// leaves carry in-bag class counts.
struct DecisionTree {
    struct Node {
        int feature = -1;  // -1 for leaves
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double count0 = 0.0;
        double count1 = 0.0;
        int depth = 0;
    };
    std::vector<Node> nodes;

    const Node& leaf_for(std::span<const double> row) const;
    /// Leaf majority; ties go to class 0.
    int vote(std::span<const double> row) const;
    int depth() const;
};

struct ForestModel {
    static constexpr int kFormatVersion = 1;

    std::vector<DecisionTree> trees;
    std::vector<std::string> feature_names;
    Vector importances;  // mean decrease in impurity, sums to 1 (or all zero)
    ForestConfig config;
    int format_version = kFormatVersion;
    /// Training-set scaling, applied by score_rows before prediction.
    std::optional<Standardizer> scaler;
};

/// Trees grow on bootstrap samples (when enabled); at each node max_features
/// columns are sampled without replacement and the split with the lowest
/// weighted impurity wins. Ties keep the lowest feature index, then the
/// lowest threshold.
ForestModel train_forest(const Matrix& x, std::span<const Label> y, const ForestConfig& cfg = {},
                         std::vector<std::string> feature_names = {});

/// Fraction of trees voting class 1, per row. Rows must already be scaled
/// the way the training rows were.
Vector predict_proba(const ForestModel& model, const Matrix& x);

/// Applies the stored scaler (if any) first, then predict_proba.
Vector score_rows(const ForestModel& model, const Matrix& raw);

std::vector<int> predict_labels(const Vector& scores, double threshold = 0.5);

/// (name, weight), weight descending; ties keep column order.
std::vector<std::pair<std::string, double>> feature_importances(const ForestModel& model);

std::string serialize_model(const ForestModel& model);
ForestModel deserialize_model(std::string_view bytes);
void save_model(const std::filesystem::path& path, const ForestModel& model);
ForestModel load_model(const std::filesystem::path& path);

}  // namespace revnet
