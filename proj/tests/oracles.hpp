#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. Everything here works on small dense matrices and favors obviousness
// over speed.

#include "revnet/graph.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using revnet::Index;
using revnet::Matrix;
using revnet::Vector;

/// Small undirected simple graph as an adjacency bitmask per vertex.
struct SmallGraph {
    int n = 0;
    std::vector<std::uint32_t> adj;

    bool has(int i, int j) const { return (adj[static_cast<std::size_t>(i)] >> j) & 1u; }
    void link(int i, int j) {
        adj[static_cast<std::size_t>(i)] |= 1u << j;
        adj[static_cast<std::size_t>(j)] |= 1u << i;
    }
    int edges() const {
        int e = 0;
        for (auto a : adj) e += std::popcount(a);
        return e / 2;
    }
};

inline std::string vertex_name(int i) {
    std::string s = "v";
    if (i < 10) s += '0';
    return s + std::to_string(i);
}

/// ProductNetwork with vertex i named v00, v01, ... so indices line up.
inline revnet::ProductNetwork to_network(const SmallGraph& g, const std::vector<std::uint32_t>* weights = nullptr) {
    std::vector<std::string> names;
    for (int i = 0; i < g.n; ++i) names.push_back(vertex_name(i));
    std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> edges;
    std::size_t k = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j)
            if (g.has(i, j)) edges.emplace_back(i, j, weights ? (*weights)[k++] : 1u);
    return revnet::ProductNetwork(std::move(names), std::move(edges));
}

inline Matrix dense_adjacency(const SmallGraph& g) {
    Matrix a = Matrix::Zero(g.n, g.n);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            if (g.has(i, j)) a(i, j) = 1.0;
    return a;
}

namespace detail {

/// Canonical form: color refinement from degrees, then the lexicographically
/// largest upper-triangle bitstring over orderings that respect the colors.
inline std::uint64_t canonical(const SmallGraph& g) {
    const int n = g.n;
    std::vector<int> color(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) color[static_cast<std::size_t>(i)] = std::popcount(g.adj[static_cast<std::size_t>(i)]);
    for (int round = 0; round < n; ++round) {
        std::vector<std::vector<int>> sig(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            auto& s = sig[static_cast<std::size_t>(i)];
            s.push_back(color[static_cast<std::size_t>(i)]);
            std::vector<int> nb;
            for (int j = 0; j < n; ++j)
                if (g.has(i, j)) nb.push_back(color[static_cast<std::size_t>(j)]);
            std::sort(nb.begin(), nb.end());
            s.insert(s.end(), nb.begin(), nb.end());
        }
        auto sorted = sig;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<int> next(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            next[static_cast<std::size_t>(i)] =
                static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sig[static_cast<std::size_t>(i)]) - sorted.begin());
        if (next == color) break;
        color = next;
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::pair(color[static_cast<std::size_t>(a)], a) < std::pair(color[static_cast<std::size_t>(b)], b);
    });
    // Cells of equal color; permute within each.
    std::vector<std::pair<int, int>> cells;
    for (int s = 0; s < n;) {
        int e = s;
        while (e < n && color[static_cast<std::size_t>(order[static_cast<std::size_t>(e)])] ==
                            color[static_cast<std::size_t>(order[static_cast<std::size_t>(s)])])
            ++e;
        cells.emplace_back(s, e);
        s = e;
    }
    std::uint64_t best = 0;
    bool first = true;
    auto encode = [&]() {
        std::uint64_t code = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                code = (code << 1) | (g.has(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]) ? 1u : 0u);
        return code;
    };
    // Odometer over the per-cell permutations.
    for (auto& [s, e] : cells) std::sort(order.begin() + s, order.begin() + e);
    while (true) {
        const auto code = encode();
        if (first || code > best) best = code;
        first = false;
        std::size_t c = 0;
        for (; c < cells.size(); ++c) {
            auto [s, e] = cells[c];
            if (std::next_permutation(order.begin() + s, order.begin() + e)) break;
        }
        if (c == cells.size()) break;
    }
    return (best << 4) | static_cast<std::uint64_t>(n);
}

}  // namespace detail

/// Every connected simple graph on 1..max_n vertices, one per isomorphism
/// class. Each connected graph keeps a non-cut vertex, so adding one vertex
/// with a non-empty neighbor set to every connected graph on n-1 vertices
/// reaches every connected graph on n.
inline std::vector<SmallGraph> connected_graphs(int max_n) {
    std::vector<SmallGraph> out;
    std::vector<SmallGraph> level{SmallGraph{1, {0u}}};
    out.push_back(level.front());
    for (int n = 2; n <= max_n; ++n) {
        std::set<std::uint64_t> seen;
        std::vector<SmallGraph> next;
        for (const auto& g : level) {
            for (std::uint32_t mask = 1; mask < (1u << (n - 1)); ++mask) {
                SmallGraph h{n, g.adj};
                h.adj.push_back(0u);
                for (int j = 0; j < n - 1; ++j)
                    if ((mask >> j) & 1u) h.link(n - 1, j);
                if (seen.insert(detail::canonical(h)).second) next.push_back(std::move(h));
            }
        }
        out.insert(out.end(), next.begin(), next.end());
        level = std::move(next);
    }
    return out;
}

/// Connected random graph: a random spanning tree plus extra edges.
template <typename Rng>
SmallGraph random_connected(int n, double extra_p, Rng& rng) {
    SmallGraph g{n, std::vector<std::uint32_t>(static_cast<std::size_t>(n), 0u)};
    for (int v = 1; v < n; ++v) g.link(v, static_cast<int>(rng.index(static_cast<std::size_t>(v))));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!g.has(i, j) && rng.uniform() < extra_p) g.link(i, j);
    return g;
}

/// Leading eigenpair of a symmetric matrix, vector normalized to unit length
/// with non-negative sum.
inline std::pair<double, Vector> leading_eigenpair(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    const Index last = a.rows() - 1;
    Vector v = es.eigenvectors().col(last);
    if (v.sum() < 0) v = -v;
    return {es.eigenvalues()[last], v.normalized()};
}

/// Standard PageRank by direct solve of (I - alpha W) p = (1 - alpha)/n 1 with
/// W_ij = A_ij / deg_j. Dangling columns spread uniformly.
inline Vector pagerank_solve(const Matrix& a, double alpha) {
    const Index n = a.rows();
    Matrix w(n, n);
    for (Index j = 0; j < n; ++j) {
        const double d = a.col(j).sum();
        if (d > 0) w.col(j) = a.col(j) / d;
        else w.col(j).setConstant(1.0 / static_cast<double>(n));
    }
    const Matrix m = Matrix::Identity(n, n) - alpha * w;
    const Vector rhs = Vector::Constant(n, (1.0 - alpha) / static_cast<double>(n));
    return m.fullPivLu().solve(rhs);
}

/// Local clustering coefficient by enumerating neighbor pairs.
inline std::vector<double> clustering_by_enumeration(const SmallGraph& g) {
    std::vector<double> c(static_cast<std::size_t>(g.n), 0.0);
    for (int i = 0; i < g.n; ++i) {
        std::vector<int> nb;
        for (int j = 0; j < g.n; ++j)
            if (g.has(i, j)) nb.push_back(j);
        if (nb.size() < 2) continue;
        int links = 0;
        for (std::size_t a = 0; a < nb.size(); ++a)
            for (std::size_t b = a + 1; b < nb.size(); ++b)
                if (g.has(nb[a], nb[b])) ++links;
        c[static_cast<std::size_t>(i)] = 2.0 * links / (static_cast<double>(nb.size()) * static_cast<double>(nb.size() - 1));
    }
    return c;
}

/// Mann-Whitney AUC by counting every positive-negative pair.
inline double auc_by_pairs(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0.0;
    long pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

}  // namespace oracle
