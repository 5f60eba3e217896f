#include "revnet/cluster.hpp"

#include "revnet/csv.hpp"

#include <algorithm>
#include <numeric>

namespace revnet {

namespace {

constexpr std::string_view kModule = "cluster";

Matrix centroids_of(const Matrix& x, const std::vector<int>& assign, int k, std::vector<int>& sizes) {
    Matrix c = Matrix::Zero(k, x.cols());
    sizes.assign(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < x.rows(); ++i) {
        const int a = assign[static_cast<std::size_t>(i)];
        c.row(a) += x.row(i);
        ++sizes[static_cast<std::size_t>(a)];
    }
    for (int j = 0; j < k; ++j)
        if (sizes[static_cast<std::size_t>(j)] > 0) c.row(j) /= sizes[static_cast<std::size_t>(j)];
    return c;
}

/// Recomputes centroids, moving the point farthest from its own centroid
/// into each empty cluster (lowest empty id first).
Matrix centroids_with_repair(const Matrix& x, std::vector<int>& assign, int k) {
    std::vector<int> sizes;
    Matrix c = centroids_of(x, assign, k, sizes);
    for (int empty = 0; empty < k; ++empty) {
        if (sizes[static_cast<std::size_t>(empty)] > 0) continue;
        Index far = -1;
        double far_d = -1.0;
        for (Index i = 0; i < x.rows(); ++i) {
            const int a = assign[static_cast<std::size_t>(i)];
            if (sizes[static_cast<std::size_t>(a)] < 2) continue;
            const double d = (x.row(i) - c.row(a)).squaredNorm();
            if (d > far_d) {
                far_d = d;
                far = i;
            }
        }
        if (far < 0) throw Error(kModule, "cannot repair empty cluster");
        assign[static_cast<std::size_t>(far)] = empty;
        c = centroids_of(x, assign, k, sizes);
    }
    return c;
}

std::vector<int> nearest(const Matrix& x, const Matrix& c) {
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    for (Index i = 0; i < x.rows(); ++i) {
        Index best = 0;
        // Lowest id wins ties.
        (c.rowwise() - x.row(i)).rowwise().squaredNorm().minCoeff(&best);
        out[static_cast<std::size_t>(i)] = static_cast<int>(best);
    }
    return out;
}

struct Run {
    std::vector<int> assign;
    Matrix centroids;
    double objective = 0.0;
    std::vector<double> history;
    int iterations = 0;
    bool converged = false;
};

std::vector<int> initial_assignment(const Matrix& x, int k, KMeansInit init, Rng& rng) {
    const auto n = static_cast<std::size_t>(x.rows());
    if (init == KMeansInit::random_partition) {
        std::vector<int> a(n);
        for (auto& v : a) v = static_cast<int>(rng.index(static_cast<std::size_t>(k)));
        return a;
    }
    // k-means++ seeding, then nearest-centre assignment.
    Matrix centers(k, x.cols());
    centers.row(0) = x.row(static_cast<Index>(rng.index(n)));
    Vector d2 = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (int j = 1; j < k; ++j) {
        const double total = d2.sum();
        Index pick = 0;
        if (total > 0.0) {
            const double u = rng.uniform() * total;
            double acc = 0.0;
            pick = x.rows() - 1;
            for (Index i = 0; i < x.rows(); ++i) {
                acc += d2[i];
                if (u < acc) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<Index>(rng.index(n));
        }
        centers.row(j) = x.row(pick);
        d2 = d2.cwiseMin((x.rowwise() - centers.row(j)).rowwise().squaredNorm());
    }
    return nearest(x, centers);
}

Run lloyd(const Matrix& x, const KMeansConfig& cfg, Rng rng) {
    Run run;
    run.assign = initial_assignment(x, cfg.k, cfg.init, rng);
    for (int it = 1; it <= cfg.max_iter; ++it) {
        run.centroids = centroids_with_repair(x, run.assign, cfg.k);
        auto next = nearest(x, run.centroids);
        run.history.push_back(within_cluster_ss(x, next, run.centroids));
        run.iterations = it;
        const bool changed = next != run.assign;
        run.assign = std::move(next);
        if (!changed) {
            run.converged = true;
            break;
        }
    }
    run.centroids = centroids_with_repair(x, run.assign, cfg.k);
    run.objective = within_cluster_ss(x, run.assign, run.centroids);
    return run;
}

}  // namespace

double within_cluster_ss(const Matrix& x, const std::vector<int>& assignments, const Matrix& centroids) {
    double total = 0.0;
    for (Index i = 0; i < x.rows(); ++i) total += (x.row(i) - centroids.row(assignments[static_cast<std::size_t>(i)])).squaredNorm();
    return total;
}

ClusterReport kmeans(const Matrix& x, const KMeansConfig& cfg) {
    const Index n = x.rows();
    if (cfg.k < 1) throw Error(kModule, "k must be >= 1");
    if (cfg.k > n) throw Error(kModule, "k = " + std::to_string(cfg.k) + " exceeds the number of rows (" + std::to_string(n) + ")");
    if (cfg.n_restarts < 1) throw Error(kModule, "n_restarts must be >= 1");
    if (cfg.max_iter < 1) throw Error(kModule, "max_iter must be >= 1");
    if (!x.allFinite()) throw Error(kModule, "non-finite feature value");

    // Canonical row order.
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        for (Index c = 0; c < x.cols(); ++c) {
            if (x(a, c) != x(b, c)) return x(a, c) < x(b, c);
        }
        return false;
    });
    Matrix xc(n, x.cols());
    for (Index i = 0; i < n; ++i) xc.row(i) = x.row(order[static_cast<std::size_t>(i)]);

    ClusterReport report;
    Run best;
    for (int r = 0; r < cfg.n_restarts; ++r) {
        Run run = lloyd(xc, cfg, Rng::derive(cfg.seed, static_cast<std::uint64_t>(r)));
        report.restart_objectives.push_back(run.objective);
        if (r == 0 || run.objective < best.objective) best = std::move(run);
    }

    // Relabel clusters by first appearance in canonical order.
    std::vector<int> relabel(static_cast<std::size_t>(cfg.k), -1);
    int next_label = 0;
    for (int a : best.assign)
        if (relabel[static_cast<std::size_t>(a)] < 0) relabel[static_cast<std::size_t>(a)] = next_label++;
    for (auto& r : relabel)
        if (r < 0) r = next_label++;

    report.assignments.assign(static_cast<std::size_t>(n), 0);
    for (Index i = 0; i < n; ++i)
        report.assignments[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] =
            relabel[static_cast<std::size_t>(best.assign[static_cast<std::size_t>(i)])];
    report.centroids.resize(cfg.k, x.cols());
    for (int j = 0; j < cfg.k; ++j) report.centroids.row(relabel[static_cast<std::size_t>(j)]) = best.centroids.row(j);
    report.objective = best.objective;
    report.objective_history = std::move(best.history);
    report.iterations = best.iterations;
    report.converged = best.converged;
    report.sizes.assign(static_cast<std::size_t>(cfg.k), 0);
    for (int a : report.assignments) ++report.sizes[static_cast<std::size_t>(a)];
    return report;
}

ClusterReport profile_clusters(ClusterReport report, const FeatureTable& table, const ForestModel* model) {
    if (static_cast<Index>(report.assignments.size()) != table.rows())
        throw Error(kModule, "assignment count differs from feature table rows");
    const int k = static_cast<int>(report.centroids.rows());
    report.feature_names = table.columns;
    report.feature_means = Matrix::Zero(k, table.values.cols());
    report.sizes.assign(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < table.rows(); ++i) {
        const int a = report.assignments[static_cast<std::size_t>(i)];
        report.feature_means.row(a) += table.values.row(i);
        ++report.sizes[static_cast<std::size_t>(a)];
    }
    for (int j = 0; j < k; ++j)
        if (report.sizes[static_cast<std::size_t>(j)] > 0) report.feature_means.row(j) /= report.sizes[static_cast<std::size_t>(j)];

    if (model) {
        std::vector<std::string> missing;
        for (const auto& name : model->feature_names)
            if (!table.has_column(name)) missing.push_back(name);
        if (!missing.empty()) {
            std::string list;
            for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
            throw Error(kModule, "feature table lacks model features: " + list);
        }
        const auto labels = predict_labels(score_rows(*model, table.select(model->feature_names)));
        report.flagged_count.assign(static_cast<std::size_t>(k), 0);
        int total = 0;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == 1) {
                ++report.flagged_count[static_cast<std::size_t>(report.assignments[i])];
                ++total;
            }
        report.flagged_share.assign(static_cast<std::size_t>(k), 0.0);
        report.share_of_flagged.assign(static_cast<std::size_t>(k), 0.0);
        for (int j = 0; j < k; ++j) {
            const auto sj = static_cast<std::size_t>(j);
            if (report.sizes[sj] > 0) report.flagged_share[sj] = static_cast<double>(report.flagged_count[sj]) / report.sizes[sj];
            if (total > 0) report.share_of_flagged[sj] = static_cast<double>(report.flagged_count[sj]) / total;
        }
        report.has_flagged = true;
    }
    return report;
}

std::string assignments_to_csv(const ClusterReport& report, const std::vector<std::string>& product_ids) {
    if (product_ids.size() != report.assignments.size()) throw Error(kModule, "product id count differs from assignments");
    std::string out = "product_id,cluster\n";
    for (std::size_t i = 0; i < product_ids.size(); ++i)
        out += csv::escape(product_ids[i]) + "," + std::to_string(report.assignments[i]) + "\n";
    return out;
}

std::string profile_to_csv(const ClusterReport& report) {
    std::string out = "cluster,size";
    if (report.has_flagged) out += ",flagged_count,flagged_share,share_of_flagged";
    for (const auto& name : report.feature_names) out += "," + csv::escape(name);
    out += "\n";
    const auto k = static_cast<int>(report.sizes.size());
    for (int j = 0; j < k; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        out += std::to_string(j) + "," + std::to_string(report.sizes[sj]);
        if (report.has_flagged)
            out += "," + std::to_string(report.flagged_count[sj]) + "," + format_number(report.flagged_share[sj]) + "," +
                   format_number(report.share_of_flagged[sj]);
        for (Index c = 0; c < report.feature_means.cols(); ++c) out += "," + format_number(report.feature_means(j, c));
        out += "\n";
    }
    return out;
}

}  // namespace revnet
