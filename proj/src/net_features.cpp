#include "revnet/net_features.hpp"

#include <cmath>

namespace revnet {

namespace {
constexpr std::string_view kModule = "net_features";
}

void SolverConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(kModule, "alpha must lie in (0, 1), got " + format_number(alpha));
    if (!(tol > 0.0)) throw Error(kModule, "tol must be positive");
    if (max_iter < 1) throw Error(kModule, "max_iter must be >= 1");
}

Vector degree(const ProductNetwork& net) {
    Vector d = Vector::Zero(net.size());
    for (Index i = 0; i < net.size(); ++i)
        for (auto w : net.weights(i)) d[i] += w;
    return d;
}

EigenvectorResult eigenvector_centrality(const ProductNetwork& net, const SolverConfig& cfg,
                                         const std::optional<Vector>& start) {
    cfg.validate();
    if (net.edge_count() == 0) throw Error(kModule, "centrality undefined on empty adjacency");
    const Index n = net.size();
    const auto a = net.adjacency();

    Eigen::ArrayXd connected(n);
    for (Index i = 0; i < n; ++i) connected[i] = net.neighbor_count(i) > 0 ? 1.0 : 0.0;

    Vector x = start ? *start : Vector::Ones(n);
    if (x.size() != n) throw Error(kModule, "start vector has wrong length");
    x = (x.array().abs() * connected).matrix();
    if (x.norm() == 0.0) throw Error(kModule, "start vector is zero on every connected node");
    x.normalize();

    EigenvectorResult result;
    Vector y(n);
    for (int it = 1; it <= cfg.max_iter; ++it) {
        y.noalias() = a * x;
        y += x;
        y.normalize();
        const double change = (y - x).lpNorm<Eigen::Infinity>();
        x.swap(y);
        if (change < cfg.tol) {
            result.iterations = it;
            result.centrality = x.cwiseMax(0.0);
            result.centrality.normalize();
            result.lambda1 = result.centrality.dot(a * result.centrality);
            return result;
        }
        if (it == cfg.max_iter)
            throw Error(kModule, "eigenvector centrality did not converge in " + std::to_string(cfg.max_iter) +
                                     " iterations (residual " + format_number(change) + ")");
    }
    return result;
}

Vector pagerank(const ProductNetwork& net, const SolverConfig& cfg) {
    cfg.validate();
    const Index n = net.size();
    if (n == 0) return Vector();
    const auto a = net.adjacency();
    const double teleport = (1.0 - cfg.alpha) / static_cast<double>(n);

    Eigen::ArrayXd inv_deg(n);
    for (Index i = 0; i < n; ++i) {
        const auto k = net.neighbor_count(i);
        inv_deg[i] = k > 0 ? 1.0 / static_cast<double>(k) : 0.0;
    }
    const Eigen::ArrayXd dangling = (inv_deg == 0.0).cast<double>();

    Vector p = Vector::Constant(n, 1.0 / static_cast<double>(n));
    Vector next(n);
    for (int it = 1; it <= cfg.max_iter; ++it) {
        if (cfg.pagerank_variant == PageRankVariant::standard) {
            const double dangling_mass = (p.array() * dangling).sum();
            next.noalias() = a * (p.array() * inv_deg).matrix();
            next = (cfg.alpha * next.array() + teleport + cfg.alpha * dangling_mass / static_cast<double>(n)).matrix();
        } else {
            next.noalias() = a * p;
            next = (cfg.alpha * next.array() * inv_deg + teleport).matrix();
        }
        const double change = (next - p).lpNorm<Eigen::Infinity>();
        p.swap(next);
        if (change < cfg.tol) {
            if (cfg.pagerank_variant == PageRankVariant::literal) p /= p.sum();
            return p;
        }
    }
    throw Error(kModule, "pagerank did not converge in " + std::to_string(cfg.max_iter) + " iterations");
}

Eigen::VectorXi triangle_counts(const ProductNetwork& net) {
    const Index n = net.size();
    Eigen::VectorXi tri = Eigen::VectorXi::Zero(n);
    std::vector<char> marked(static_cast<std::size_t>(n), 0);
    for (Index i = 0; i < n; ++i) {
        const auto ni = net.neighbors(i);
        for (auto j : ni) marked[j] = 1;
        for (auto j : ni) {
            if (static_cast<Index>(j) <= i) continue;
            for (auto k : net.neighbors(j)) {
                if (k <= j) continue;
                if (marked[k]) {
                    ++tri[i];
                    ++tri[j];
                    ++tri[k];
                }
            }
        }
        for (auto j : ni) marked[j] = 0;
    }
    return tri;
}

Vector clustering_coefficient(const ProductNetwork& net, const SolverConfig& cfg) {
    const Index n = net.size();
    Vector c = Vector::Zero(n);
    if (cfg.clustering_variant == ClusteringVariant::literal) {
        for (Index i = 0; i < n; ++i) c[i] = net.neighbor_count(i) >= 2 ? 1.0 : 0.0;
        return c;
    }
    const auto tri = triangle_counts(net);
    for (Index i = 0; i < n; ++i) {
        const auto k = static_cast<double>(net.neighbor_count(i));
        if (k >= 2) c[i] = 2.0 * tri[i] / (k * (k - 1.0));
    }
    return c;
}

NetworkFeatures compute_network_features(const ProductNetwork& net, const SolverConfig& cfg) {
    NetworkFeatures f;
    f.degree = degree(net);
    auto ev = eigenvector_centrality(net, cfg);
    f.eigenvector_cent = std::move(ev.centrality);
    f.lambda1 = ev.lambda1;
    f.pagerank = pagerank(net, cfg);
    f.clustering_coef = clustering_coefficient(net, cfg);
    return f;
}

}  // namespace revnet
