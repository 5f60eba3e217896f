#pragma once

#include "revnet/common.hpp"
#include "revnet/graph.hpp"

#include <optional>

namespace revnet {

enum class PageRankVariant {
    standard,  // neighbor mass split by the neighbor's own degree |N_j|
    literal,   // normalized by the receiving node's degree |N_i|, renormalized to sum 1
};

enum class ClusteringVariant {
    neighbor_links,  // 2 L_i / (|N_i| (|N_i| - 1)), L_i = links among neighbors
    literal,         // numerator sums [A]_ij over neighbor pairs; 1 whenever |N_i| >= 2
};

struct SolverConfig {
    double alpha = 0.85;
    double tol = 1e-10;  // max-norm change between iterates
    int max_iter = 1000;
    PageRankVariant pagerank_variant = PageRankVariant::standard;
    ClusteringVariant clustering_variant = ClusteringVariant::neighbor_links;

    void validate() const;
};

/// d_i = sum of r_ij over neighbors.
Vector degree(const ProductNetwork& net);

struct EigenvectorResult {
    Vector centrality;  // unit Euclidean norm, non-negative
    double lambda1 = 0.0;
    int iterations = 0;
};

/// Dominant eigenvector of the binary adjacency by power iteration on A + I
/// (the shift keeps bipartite components from oscillating without changing
/// eigenvectors). Isolated nodes get 0. Throws when the network has no edges
/// or the iteration does not settle within max_iter.
EigenvectorResult eigenvector_centrality(const ProductNetwork& net, const SolverConfig& cfg = {},
                                         const std::optional<Vector>& start = std::nullopt);

/// PageRank fixed point; sums to 1. Isolated nodes are dangling and their mass
/// is spread uniformly.
Vector pagerank(const ProductNetwork& net, const SolverConfig& cfg = {});

Vector clustering_coefficient(const ProductNetwork& net, const SolverConfig& cfg = {});

/// Triangles through each node, counted once per triangle.
Eigen::VectorXi triangle_counts(const ProductNetwork& net);

struct NetworkFeatures {
    Vector degree;
    Vector eigenvector_cent;
    Vector pagerank;
    Vector clustering_coef;
    double lambda1 = 0.0;
};

NetworkFeatures compute_network_features(const ProductNetwork& net, const SolverConfig& cfg = {});

}  // namespace revnet
