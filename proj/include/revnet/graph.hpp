#pragma once

#include "revnet/common.hpp"
#include "revnet/ingest.hpp"

#include <Eigen/SparseCore>

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace revnet {

/// Weighted undirected product-product co-reviewer network.
///
/// Nodes are products, sorted by id. An edge (i, j) carries r_ij, the number
/// of distinct reviewers who reviewed both products. Storage is CSR with
/// ascending neighbor indices; there are no self-loops and every stored weight
/// is at least 1.
class ProductNetwork {
public:
    ProductNetwork() = default;

    /// Builds from undirected edge triples (i < j, weight >= 1). Duplicate pairs
    /// are summed.
    ProductNetwork(std::vector<std::string> products,
                   std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> edges);

    Index size() const { return static_cast<Index>(products_.size()); }
    std::size_t edge_count() const { return neighbors_.size() / 2; }

    const std::vector<std::string>& products() const { return products_; }
    const std::string& product(Index i) const { return products_[static_cast<std::size_t>(i)]; }
    Index index_of(const std::string& product_id) const;  // -1 when absent

    std::span<const std::uint32_t> neighbors(Index i) const;
    std::span<const std::uint32_t> weights(Index i) const;
    std::size_t neighbor_count(Index i) const { return offsets_[static_cast<std::size_t>(i) + 1] - offsets_[static_cast<std::size_t>(i)]; }

    /// r_ij, or 0 when i and j share no reviewers.
    std::uint32_t weight(Index i, Index j) const;

    /// Binary adjacency A: [A]_ij = 1 iff r_ij >= 1.
    Eigen::SparseMatrix<double, Eigen::RowMajor> adjacency() const;

    /// Weighted adjacency with entries r_ij.
    Eigen::SparseMatrix<double, Eigen::RowMajor> weighted_adjacency() const;

private:
    std::vector<std::string> products_;
    std::unordered_map<std::string, Index> index_;
    std::vector<std::size_t> offsets_{0};
    std::vector<std::uint32_t> neighbors_;
    std::vector<std::uint32_t> weights_;
};

/// One-mode projection of the product-reviewer bipartite graph. A reviewer who
/// reviewed a product several times still counts once for that product.
ProductNetwork project(const Dataset& data);

struct EdgeRow {
    std::string product_i;
    std::string product_j;
    std::uint32_t weight = 0;

    friend bool operator==(const EdgeRow&, const EdgeRow&) = default;
};

/// Edges with r_ij >= min_weight, each unordered pair once (product_i <
/// product_j), sorted lexicographically.
std::vector<EdgeRow> export_edges(const ProductNetwork& net, std::uint32_t min_weight = 1);

std::string edges_to_csv(const std::vector<EdgeRow>& rows);

}  // namespace revnet
