#pragma once

#include "revnet/common.hpp"
#include "revnet/features.hpp"
#include "revnet/forest.hpp"

#include <optional>
#include <string>
#include <vector>

namespace revnet {

enum class KMeansInit { random_partition, kmeanspp };

struct KMeansConfig {
    int k = 20;
    int max_iter = 300;
    std::uint64_t seed = 42;
    int n_restarts = 10;
    KMeansInit init = KMeansInit::random_partition;
};

struct ClusterReport {
    std::vector<int> assignments;  // row -> cluster id
    Matrix centroids;              // k x p
    double objective = 0.0;        // within-cluster sum of squared distances
    std::vector<double> objective_history;  // best restart, one entry per iteration
    std::vector<double> restart_objectives;
    int iterations = 0;
    bool converged = false;
    std::vector<int> sizes;

    // Filled by profile_clusters.
    std::vector<std::string> feature_names;
    Matrix feature_means;  // k x columns
    std::vector<int> flagged_count;
    std::vector<double> flagged_share;       // flagged / cluster size
    std::vector<double> share_of_flagged;    // flagged in cluster / all flagged
    bool has_flagged = false;
};

/// Sum of squared Euclidean distances of each row to its cluster centroid.
double within_cluster_ss(const Matrix& x, const std::vector<int>& assignments, const Matrix& centroids);

/// Lloyd's algorithm with best-of-n_restarts. Rows are processed in a
/// canonical (lexicographic) order and cluster ids are numbered by first
/// appearance in that order, so permuting the input only permutes the
/// output rows. Empty clusters seize the point farthest from its centroid.
ClusterReport kmeans(const Matrix& x, const KMeansConfig& cfg = {});

/// Per-cluster means of every table column; with a model, the flagged count
/// and share per cluster.
ClusterReport profile_clusters(ClusterReport report, const FeatureTable& table,
                               const ForestModel* model = nullptr);

std::string assignments_to_csv(const ClusterReport& report, const std::vector<std::string>& product_ids);
std::string profile_to_csv(const ClusterReport& report);

}  // namespace revnet
