#include "revnet/features.hpp"

#include "revnet/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

namespace revnet {

namespace {
constexpr std::string_view kModule = "features";
}

const std::vector<std::string>& network_columns() {
    static const std::vector<std::string> cols = {"degree", "eigenvector_cent", "pagerank", "clustering_coef"};
    return cols;
}

const std::vector<std::string>& top2_network_columns() {
    static const std::vector<std::string> cols = {"clustering_coef", "eigenvector_cent"};
    return cols;
}

const std::vector<std::string>& metadata_columns() {
    static const std::vector<std::string> cols = {
        "n_reviews",     "avg_rating",  "gap_avg",     "gap_min",     "gap_max",          "gap_std",
        "share_helpful", "share_1star", "share_5star", "share_photo", "stdev_review_len", "tfidf_sim",
        "tfidf_sim_missing"};
    return cols;
}

const std::vector<std::string>& image_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> out;
        for (const char* group : {"img_sim", "sim_review", "sim_product"}) {
            for (const char* stat : {"avg", "min", "max", "std", "missing"}) out.push_back(std::string(group) + "_" + stat);
        }
        return out;
    }();
    return cols;
}

std::vector<std::string> text_columns(std::size_t top_k) {
    std::vector<std::string> out;
    out.reserve(top_k);
    char buf[32];
    for (std::size_t k = 1; k <= top_k; ++k) {
        std::snprintf(buf, sizeof(buf), "tfidf_%04zu", k);
        out.emplace_back(buf);
    }
    return out;
}

bool is_builtin_group(const std::string& group) {
    return group == "network" || group == "top2_network" || group == "metadata" || group == "text" ||
           group == "image" || group == "all";
}

std::vector<std::string> feature_group(const FeatureTable& table, const std::string& group) {
    auto present = [&](const std::vector<std::string>& wanted) {
        std::vector<std::string> out;
        for (const auto& c : wanted)
            if (table.has_column(c)) out.push_back(c);
        return out;
    };
    if (group == "network") return present(network_columns());
    if (group == "top2_network") return present(top2_network_columns());
    if (group == "metadata") return present(metadata_columns());
    if (group == "image") return present(image_columns());
    if (group == "text") {
        std::vector<std::string> out;
        for (const auto& c : table.columns)
            if (c.rfind("tfidf_", 0) == 0 && c != "tfidf_sim" && c != "tfidf_sim_missing") out.push_back(c);
        return out;
    }
    if (group == "all") return table.columns;
    throw Error(kModule, "unknown feature group '" + group + "'");
}

Index FeatureTable::column_index(const std::string& name) const {
    auto it = std::find(columns.begin(), columns.end(), name);
    return it == columns.end() ? -1 : static_cast<Index>(it - columns.begin());
}

Matrix FeatureTable::select(const std::vector<std::string>& names) const {
    Matrix out(values.rows(), static_cast<Index>(names.size()));
    for (std::size_t k = 0; k < names.size(); ++k) {
        const Index c = column_index(names[k]);
        if (c < 0) throw Error(kModule, "feature table has no column '" + names[k] + "'");
        out.col(static_cast<Index>(k)) = values.col(c);
    }
    return out;
}

FeatureTable FeatureTable::select_rows(const std::vector<Index>& rows) const {
    FeatureTable out;
    out.columns = columns;
    out.values.resize(static_cast<Index>(rows.size()), values.cols());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        out.product_ids.push_back(product_ids[static_cast<std::size_t>(rows[k])]);
        out.values.row(static_cast<Index>(k)) = values.row(rows[k]);
    }
    return out;
}

FeatureTable build_feature_table(const Dataset& data, const EmbeddingIndex& embeddings, const FeatureOptions& opts) {
    if (data.empty()) throw Error(kModule, "no products");
    FeatureTable table;
    for (const auto& set : data) table.product_ids.push_back(set.product_id);
    const Index n = static_cast<Index>(data.size());
    std::vector<Vector> cols;

    auto add = [&](const std::string& name, Vector v) {
        table.columns.push_back(name);
        cols.push_back(std::move(v));
    };

    if (opts.network) {
        const auto net = project(data);
        const auto f = compute_network_features(net, opts.solver);
        // The projection orders products by id; map back to dataset order.
        std::vector<Index> at(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) at[static_cast<std::size_t>(i)] = net.index_of(data[static_cast<std::size_t>(i)].product_id);
        auto reorder = [&](const Vector& v) {
            Vector out(n);
            for (Index i = 0; i < n; ++i) out[i] = v[at[static_cast<std::size_t>(i)]];
            return out;
        };
        add("degree", reorder(f.degree));
        add("eigenvector_cent", reorder(f.eigenvector_cent));
        add("pagerank", reorder(f.pagerank));
        add("clustering_coef", reorder(f.clustering_coef));
    }

    if (opts.metadata) {
        Matrix m(n, static_cast<Index>(metadata_columns().size()));
        for (Index i = 0; i < n; ++i) {
            const auto r = metadata_features(data[static_cast<std::size_t>(i)], opts.text_options);
            m.row(i) << r.n_reviews, r.avg_rating, r.gap_avg, r.gap_min, r.gap_max, r.gap_std, r.share_helpful,
                r.share_1star, r.share_5star, r.share_photo, r.stdev_review_len, r.tfidf_sim,
                r.tfidf_sim_missing ? 1.0 : 0.0;
        }
        for (std::size_t k = 0; k < metadata_columns().size(); ++k) add(metadata_columns()[k], m.col(static_cast<Index>(k)));
    }

    if (opts.image) {
        Matrix m(n, static_cast<Index>(image_columns().size()));
        for (Index i = 0; i < n; ++i) {
            const auto r = image_features(data[static_cast<std::size_t>(i)].product_id, embeddings, opts.angular);
            Index c = 0;
            for (const SimStats* s : {&r.img_sim, &r.sim_review, &r.sim_product}) {
                m(i, c++) = s->avg;
                m(i, c++) = s->min;
                m(i, c++) = s->max;
                m(i, c++) = s->std;
                m(i, c++) = s->missing ? 1.0 : 0.0;
            }
        }
        for (std::size_t k = 0; k < image_columns().size(); ++k) add(image_columns()[k], m.col(static_cast<Index>(k)));
    }

    if (opts.text) {
        const auto text = product_text_features(data, opts.text_options);
        const auto names = text_columns(opts.text_options.top_k);
        for (std::size_t k = 0; k < names.size(); ++k) add(names[k], text.values.col(static_cast<Index>(k)));
    }

    table.values.resize(n, static_cast<Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) table.values.col(static_cast<Index>(k)) = cols[k];
    return table;
}

std::string feature_table_to_csv(const FeatureTable& table) {
    std::string out = "product_id";
    for (const auto& c : table.columns) out += "," + csv::escape(c);
    out += "\n";
    for (Index i = 0; i < table.rows(); ++i) {
        out += csv::escape(table.product_ids[static_cast<std::size_t>(i)]);
        for (Index c = 0; c < table.values.cols(); ++c) {
            out.push_back(',');
            out += format_number(table.values(i, c));
        }
        out.push_back('\n');
    }
    return out;
}

FeatureTable feature_table_from_csv(std::string_view content) {
    const auto rows = csv::parse(content);
    if (rows.empty() || rows.front().fields.empty() || rows.front().fields.front() != "product_id")
        throw Error(kModule, "feature table must start with a product_id column");
    FeatureTable table;
    table.columns.assign(rows.front().fields.begin() + 1, rows.front().fields.end());
    const auto p = static_cast<Index>(table.columns.size());
    table.values.resize(static_cast<Index>(rows.size() - 1), p);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r].fields;
        if (static_cast<Index>(f.size()) != p + 1)
            throw Error(kModule, "line " + std::to_string(rows[r].line) + ": expected " + std::to_string(p + 1) + " fields");
        table.product_ids.push_back(f[0]);
        for (Index c = 0; c < p; ++c) {
            const auto& s = f[static_cast<std::size_t>(c + 1)];
            double v = 0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || ptr != s.data() + s.size())
                throw Error(kModule, "line " + std::to_string(rows[r].line) + ", column '" +
                                         table.columns[static_cast<std::size_t>(c)] + "': not a number");
            table.values(static_cast<Index>(r - 1), c) = v;
        }
    }
    return table;
}

void write_feature_table(const std::filesystem::path& path, const FeatureTable& table) {
    write_file_atomic(path, feature_table_to_csv(table));
}

FeatureTable load_feature_table(const std::filesystem::path& path) { return feature_table_from_csv(read_file(path)); }

LabelMap labels_of(const Dataset& data) {
    LabelMap out;
    for (const auto& set : data)
        if (set.label) out.emplace(set.product_id, *set.label);
    return out;
}

std::string labels_to_csv(const LabelMap& labels) {
    std::string out = "product_id,label\n";
    for (const auto& [id, label] : labels) out += csv::escape(id) + "," + std::string(to_string(label)) + "\n";
    return out;
}

LabelMap labels_from_csv(std::string_view content) {
    const auto rows = csv::parse(content);
    if (rows.empty() || rows.front().fields != std::vector<std::string>{"product_id", "label"})
        throw Error(kModule, "labels file must have header product_id,label");
    LabelMap out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r].fields;
        if (f.size() != 2) throw Error(kModule, "labels line " + std::to_string(rows[r].line) + ": expected 2 fields");
        if (f[1].empty()) continue;
        out[f[0]] = parse_label(f[1]);
    }
    return out;
}

std::vector<Label> aligned_labels(const FeatureTable& table, const LabelMap& labels) {
    std::vector<Label> out;
    out.reserve(table.product_ids.size());
    for (const auto& id : table.product_ids) {
        auto it = labels.find(id);
        if (it == labels.end()) throw Error(kModule, "no label for product '" + id + "'");
        out.push_back(it->second);
    }
    return out;
}

}  // namespace revnet
