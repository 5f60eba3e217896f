#include "revnet/graph.hpp"

#include "revnet/csv.hpp"

#include <algorithm>

namespace revnet {

ProductNetwork::ProductNetwork(std::vector<std::string> products,
                               std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> edges)
    : products_(std::move(products)) {
    const auto n = products_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!index_.emplace(products_[i], static_cast<Index>(i)).second)
            throw Error("graph", "duplicate product id '" + products_[i] + "'");
    }

    // Symmetrize, then merge duplicate pairs.
    std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> directed;
    directed.reserve(edges.size() * 2);
    for (const auto& [i, j, w] : edges) {
        if (i == j) throw Error("graph", "self-loop on product '" + products_.at(i) + "'");
        if (i >= n || j >= n) throw Error("graph", "edge endpoint out of range");
        if (w == 0) continue;
        directed.emplace_back(i, j, w);
        directed.emplace_back(j, i, w);
    }
    std::sort(directed.begin(), directed.end());

    offsets_.assign(n + 1, 0);
    neighbors_.reserve(directed.size());
    weights_.reserve(directed.size());
    for (std::size_t k = 0; k < directed.size();) {
        const auto [i, j, w0] = directed[k];
        std::uint32_t w = 0;
        for (; k < directed.size() && std::get<0>(directed[k]) == i && std::get<1>(directed[k]) == j; ++k)
            w += std::get<2>(directed[k]);
        neighbors_.push_back(j);
        weights_.push_back(w);
        ++offsets_[i + 1];
    }
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
}

Index ProductNetwork::index_of(const std::string& product_id) const {
    auto it = index_.find(product_id);
    return it == index_.end() ? -1 : it->second;
}

std::span<const std::uint32_t> ProductNetwork::neighbors(Index i) const {
    const auto k = static_cast<std::size_t>(i);
    return {neighbors_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
}

std::span<const std::uint32_t> ProductNetwork::weights(Index i) const {
    const auto k = static_cast<std::size_t>(i);
    return {weights_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
}

std::uint32_t ProductNetwork::weight(Index i, Index j) const {
    const auto nb = neighbors(i);
    auto it = std::lower_bound(nb.begin(), nb.end(), static_cast<std::uint32_t>(j));
    if (it == nb.end() || *it != static_cast<std::uint32_t>(j)) return 0;
    return weights(i)[static_cast<std::size_t>(it - nb.begin())];
}

namespace {

Eigen::SparseMatrix<double, Eigen::RowMajor> build_sparse(const ProductNetwork& net, bool weighted) {
    const Index n = net.size();
    Eigen::SparseMatrix<double, Eigen::RowMajor> a(n, n);
    Eigen::VectorXi per_row(n);
    for (Index i = 0; i < n; ++i) per_row[i] = static_cast<int>(net.neighbor_count(i));
    a.reserve(per_row);
    for (Index i = 0; i < n; ++i) {
        const auto nb = net.neighbors(i);
        const auto w = net.weights(i);
        for (std::size_t k = 0; k < nb.size(); ++k)
            a.insert(i, static_cast<Index>(nb[k])) = weighted ? static_cast<double>(w[k]) : 1.0;
    }
    a.makeCompressed();
    return a;
}

}  // namespace

Eigen::SparseMatrix<double, Eigen::RowMajor> ProductNetwork::adjacency() const { return build_sparse(*this, false); }

Eigen::SparseMatrix<double, Eigen::RowMajor> ProductNetwork::weighted_adjacency() const {
    return build_sparse(*this, true);
}

ProductNetwork project(const Dataset& data) {
    if (data.empty()) throw Error("graph", "cannot project an empty dataset");

    std::vector<std::string> products;
    products.reserve(data.size());
    for (const auto& set : data) products.push_back(set.product_id);
    std::sort(products.begin(), products.end());
    if (std::adjacent_find(products.begin(), products.end()) != products.end())
        throw Error("graph", "product appears in more than one review set");

    std::unordered_map<std::string, std::uint32_t> product_index;
    product_index.reserve(products.size());
    for (std::size_t i = 0; i < products.size(); ++i) product_index.emplace(products[i], static_cast<std::uint32_t>(i));

    // Reviewer-centric pass: each reviewer's distinct product list.
    std::unordered_map<std::string, std::vector<std::uint32_t>> by_reviewer;
    for (const auto& set : data) {
        const auto p = product_index.at(set.product_id);
        for (const auto& r : set.reviews) by_reviewer[r.reviewer_id].push_back(p);
    }

    std::vector<std::uint64_t> pairs;
    for (auto& [_, list] : by_reviewer) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        for (std::size_t a = 0; a < list.size(); ++a)
            for (std::size_t b = a + 1; b < list.size(); ++b)
                pairs.push_back((static_cast<std::uint64_t>(list[a]) << 32) | list[b]);
    }
    std::sort(pairs.begin(), pairs.end());

    std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> edges;
    for (std::size_t k = 0; k < pairs.size();) {
        std::size_t end = k;
        while (end < pairs.size() && pairs[end] == pairs[k]) ++end;
        edges.emplace_back(static_cast<std::uint32_t>(pairs[k] >> 32), static_cast<std::uint32_t>(pairs[k] & 0xffffffffu),
                           static_cast<std::uint32_t>(end - k));
        k = end;
    }
    return ProductNetwork(std::move(products), std::move(edges));
}

std::vector<EdgeRow> export_edges(const ProductNetwork& net, std::uint32_t min_weight) {
    if (min_weight < 1) throw Error("graph", "min_weight must be >= 1");
    std::vector<EdgeRow> rows;
    // Products are sorted by id, so i < j already gives lexicographic order.
    for (Index i = 0; i < net.size(); ++i) {
        const auto nb = net.neighbors(i);
        const auto w = net.weights(i);
        for (std::size_t k = 0; k < nb.size(); ++k)
            if (static_cast<Index>(nb[k]) > i && w[k] >= min_weight)
                rows.push_back({net.product(i), net.product(static_cast<Index>(nb[k])), w[k]});
    }
    return rows;
}

std::string edges_to_csv(const std::vector<EdgeRow>& rows) {
    std::string out = "product_i,product_j,weight\n";
    for (const auto& r : rows) out += csv::join({r.product_i, r.product_j, std::to_string(r.weight)}) + "\n";
    return out;
}

}  // namespace revnet
