#include "revnet/compare.hpp"

#include <cstdio>
#include <set>

namespace revnet {

namespace {
constexpr std::string_view kModule = "eval";
}

std::vector<FeatureSet> resolve_feature_sets(const FeatureTable& table, const std::vector<std::string>& names) {
    std::vector<FeatureSet> out;
    std::set<std::string> seen;
    for (const auto& name : names) {
        if (!seen.insert(name).second) throw Error(kModule, "feature set '" + name + "' listed twice");
        FeatureSet set{name, {}};
        if (is_builtin_group(name)) {
            set.columns = feature_group(table, name);
        } else if (table.has_column(name)) {
            set.columns = {name};
        } else {
            throw Error(kModule, "unknown feature set or column '" + name + "'");
        }
        if (set.columns.empty()) throw Error(kModule, "feature set '" + name + "' has no columns in this table");
        out.push_back(std::move(set));
    }
    return out;
}

ForestModel fit_pipeline(const FeatureTable& table, const std::vector<Label>& labels,
                         const std::vector<std::string>& columns, const std::vector<Index>& rows, const ForestConfig& cfg) {
    const Matrix all = table.select(columns);
    Matrix train(static_cast<Index>(rows.size()), all.cols());
    std::vector<Label> y;
    y.reserve(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        train.row(static_cast<Index>(k)) = all.row(rows[k]);
        y.push_back(labels[static_cast<std::size_t>(rows[k])]);
    }
    auto scaler = Standardizer::fit(train);
    auto model = train_forest(scaler.apply(train), y, cfg, columns);
    model.scaler = std::move(scaler);
    return model;
}

std::vector<FeatureSetResult> compare_feature_sets(const FeatureTable& table, const std::vector<Label>& labels,
                                                   const std::vector<FeatureSet>& sets, const ComparisonOptions& opts) {
    if (static_cast<Index>(labels.size()) != table.rows()) throw Error(kModule, "label count differs from table rows");
    std::set<std::string> names;
    for (const auto& s : sets) {
        if (s.columns.empty()) throw Error(kModule, "feature set '" + s.name + "' is empty");
        if (!names.insert(s.name).second) throw Error(kModule, "duplicate feature set name '" + s.name + "'");
        for (const auto& c : s.columns)
            if (!table.has_column(c)) throw Error(kModule, "feature set '" + s.name + "' names unknown column '" + c + "'");
    }

    const auto parts = split(labels, opts.test_fraction, opts.split_seed, opts.stratified);
    std::vector<Label> y_test;
    for (auto i : parts.test) y_test.push_back(labels[static_cast<std::size_t>(i)]);
    const auto test_rows = table.select_rows(parts.test);

    std::vector<FeatureSetResult> results;
    for (const auto& s : sets) {
        FeatureSetResult r;
        r.name = s.name;
        r.columns = s.columns;
        r.model = fit_pipeline(table, labels, s.columns, parts.train, opts.forest);
        const Vector scores = score_rows(r.model, test_rows.select(s.columns));
        r.report = classification_report(std::span<const double>(scores.data(), static_cast<std::size_t>(scores.size())), y_test);
        results.push_back(std::move(r));
    }
    return results;
}

std::string format_comparison(const std::vector<FeatureSetResult>& results) {
    std::string out = "Features            AUC   Accuracy  TNR    TPR    F1\n";
    char line[160];
    for (const auto& r : results) {
        std::snprintf(line, sizeof(line), "%-18s  %.3f  %.3f     %.3f  %.3f  %.3f\n", r.name.c_str(), r.report.auc,
                      r.report.accuracy, r.report.tnr, r.report.tpr, r.report.f1);
        out += line;
    }
    return out;
}

}  // namespace revnet
