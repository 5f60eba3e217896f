#pragma once

#include "revnet/common.hpp"
#include "revnet/content_features.hpp"
#include "revnet/graph.hpp"
#include "revnet/ingest.hpp"
#include "revnet/net_features.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace revnet {

/// Per-product named feature columns. Row order follows `product_ids`.
struct FeatureTable {
    std::vector<std::string> product_ids;
    std::vector<std::string> columns;
    Matrix values;  // rows = products, cols = columns

    Index rows() const { return values.rows(); }
    Index column_index(const std::string& name) const;  // -1 when absent
    bool has_column(const std::string& name) const { return column_index(name) >= 0; }
    Matrix select(const std::vector<std::string>& names) const;
    FeatureTable select_rows(const std::vector<Index>& rows) const;

    friend bool operator==(const FeatureTable& a, const FeatureTable& b) {
        return a.product_ids == b.product_ids && a.columns == b.columns && a.values == b.values;
    }
};

const std::vector<std::string>& network_columns();
const std::vector<std::string>& top2_network_columns();
const std::vector<std::string>& metadata_columns();
const std::vector<std::string>& image_columns();
std::vector<std::string> text_columns(std::size_t top_k = 1000);

/// Columns of a built-in group present in `table`: network, top2_network,
/// metadata, text, image or all.
std::vector<std::string> feature_group(const FeatureTable& table, const std::string& group);
bool is_builtin_group(const std::string& group);

struct FeatureOptions {
    bool network = true;
    bool metadata = true;
    bool image = true;
    bool text = false;
    bool angular = false;
    SolverConfig solver;
    TextOptions text_options;
};

/// Builds the full table for every product in `data`. Network features are
/// computed on the projection of the whole dataset.
FeatureTable build_feature_table(const Dataset& data, const EmbeddingIndex& embeddings, const FeatureOptions& opts = {});

std::string feature_table_to_csv(const FeatureTable& table);
FeatureTable feature_table_from_csv(std::string_view content);
void write_feature_table(const std::filesystem::path& path, const FeatureTable& table);
FeatureTable load_feature_table(const std::filesystem::path& path);

/// product_id,label pairs.
using LabelMap = std::map<std::string, Label>;

LabelMap labels_of(const Dataset& data);
std::string labels_to_csv(const LabelMap& labels);
LabelMap labels_from_csv(std::string_view content);

/// Labels aligned with the table rows; throws naming the first product
/// without a label.
std::vector<Label> aligned_labels(const FeatureTable& table, const LabelMap& labels);

}  // namespace revnet
