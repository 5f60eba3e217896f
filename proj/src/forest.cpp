#include "revnet/forest.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <mutex>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

namespace revnet {

using nlohmann::json;

namespace {

constexpr std::string_view kModule = "model";

double impurity(double c0, double c1, SplitCriterion criterion) {
    const double n = c0 + c1;
    if (n <= 0.0) return 0.0;
    const double q0 = c0 / n;
    const double q1 = c1 / n;
    if (criterion == SplitCriterion::gini) return 1.0 - q0 * q0 - q1 * q1;
    double h = 0.0;
    if (q0 > 0.0) h -= q0 * std::log2(q0);
    if (q1 > 0.0) h -= q1 * std::log2(q1);
    return h;
}

struct Sample {
    Index row;
    double weight;
};

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, std::span<const Label> y, const ForestConfig& cfg, Rng rng)
        : x_(x), y_(y), cfg_(cfg), rng_(std::move(rng)),
          n_try_(cfg.max_features.resolve(static_cast<int>(x.cols()))), decrease_(Vector::Zero(x.cols())) {}

    DecisionTree build(std::vector<Sample> samples) {
        DecisionTree tree;
        tree.nodes.reserve(64);
        grow(tree, std::move(samples), 0);
        return tree;
    }

    const Vector& impurity_decrease() const { return decrease_; }

private:
    struct Best {
        int feature = -1;
        double threshold = 0.0;
        double score = std::numeric_limits<double>::infinity();  // weighted child impurity
    };

    int grow(DecisionTree& tree, std::vector<Sample> samples, int depth) {
        double c0 = 0, c1 = 0;
        for (const auto& s : samples) (y_[static_cast<std::size_t>(s.row)] == Label::fake_buyer ? c1 : c0) += s.weight;
        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({-1, 0.0, -1, -1, c0, c1, depth});

        const double w = c0 + c1;
        if (depth >= cfg_.max_depth || w < cfg_.min_samples_split || c0 == 0.0 || c1 == 0.0) return id;

        const Best best = find_split(samples, w);
        if (best.feature < 0) return id;

        std::vector<Sample> left, right;
        double wl = 0, l1 = 0, wr = 0, r1 = 0;
        for (const auto& s : samples) {
            const bool pos = y_[static_cast<std::size_t>(s.row)] == Label::fake_buyer;
            if (x_(s.row, best.feature) <= best.threshold) {
                left.push_back(s);
                wl += s.weight;
                l1 += pos ? s.weight : 0.0;
            } else {
                right.push_back(s);
                wr += s.weight;
                r1 += pos ? s.weight : 0.0;
            }
        }
        const double parent = w * impurity(c0, c1, cfg_.criterion);
        const double children =
            wl * impurity(wl - l1, l1, cfg_.criterion) + wr * impurity(wr - r1, r1, cfg_.criterion);
        decrease_[best.feature] += std::max(0.0, parent - children);

        samples.clear();
        samples.shrink_to_fit();
        const int l = grow(tree, std::move(left), depth + 1);
        const int r = grow(tree, std::move(right), depth + 1);
        auto& node = tree.nodes[static_cast<std::size_t>(id)];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = l;
        node.right = r;
        return id;
    }

    Best find_split(const std::vector<Sample>& samples, double total) {
        const int p = static_cast<int>(x_.cols());
        std::vector<int> features(static_cast<std::size_t>(p));
        std::iota(features.begin(), features.end(), 0);

        // Visit features in random order until n_try non-constant ones have
        // been evaluated; the winner is chosen by (score, feature, threshold).
        std::vector<std::pair<double, double>> values;  // (x, y weight contribution)
        std::vector<Sample> sorted = samples;
        Best best;
        int evaluated = 0;
        for (int k = 0; k < p && evaluated < n_try_; ++k) {
            const auto pick = static_cast<std::size_t>(k) + rng_.index(static_cast<std::size_t>(p - k));
            std::swap(features[static_cast<std::size_t>(k)], features[pick]);
            const int f = features[static_cast<std::size_t>(k)];

            std::sort(sorted.begin(), sorted.end(),
                      [&](const Sample& a, const Sample& b) { return x_(a.row, f) < x_(b.row, f); });
            if (x_(sorted.front().row, f) == x_(sorted.back().row, f)) continue;
            ++evaluated;
            evaluate_feature(sorted, f, total, best);
        }
        return best;
    }

    void evaluate_feature(const std::vector<Sample>& sorted, int f, double total, Best& best) const {
        double tot1 = 0;
        for (const auto& s : sorted) tot1 += y_[static_cast<std::size_t>(s.row)] == Label::fake_buyer ? s.weight : 0.0;
        double wl = 0, l1 = 0;
        const double leaf = cfg_.min_samples_leaf;
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
            const auto& s = sorted[i];
            wl += s.weight;
            l1 += y_[static_cast<std::size_t>(s.row)] == Label::fake_buyer ? s.weight : 0.0;
            const double v = x_(s.row, f);
            const double next = x_(sorted[i + 1].row, f);
            if (v == next) continue;
            const double wr = total - wl;
            if (wl < leaf || wr < leaf) continue;
            const double r1 = tot1 - l1;
            const double score = (wl * impurity(wl - l1, l1, cfg_.criterion) + wr * impurity(wr - r1, r1, cfg_.criterion)) / total;
            double threshold = v + (next - v) / 2.0;
            if (!(threshold < next)) threshold = v;
            const bool better = score < best.score - 1e-12 ||
                                (std::abs(score - best.score) <= 1e-12 &&
                                 (f < best.feature || (f == best.feature && threshold < best.threshold)));
            if (better) best = {f, threshold, score};
        }
    }

    const Matrix& x_;
    std::span<const Label> y_;
    const ForestConfig& cfg_;
    Rng rng_;
    int n_try_;
    Vector decrease_;
};

}  // namespace

int MaxFeatures::resolve(int p) const {
    switch (kind) {
    case Kind::sqrt: return std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(p)) - 1e-12)));
    case Kind::all: return p;
    case Kind::fixed: return std::clamp(count, 1, p);
    }
    return p;
}

std::string MaxFeatures::to_string() const {
    switch (kind) {
    case Kind::sqrt: return "sqrt";
    case Kind::all: return "all";
    case Kind::fixed: return std::to_string(count);
    }
    return "sqrt";
}

MaxFeatures MaxFeatures::parse(std::string_view text) {
    if (text == "sqrt" || text == "auto") return {Kind::sqrt, 0};
    if (text == "all") return {Kind::all, 0};
    int k = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
    if (ec != std::errc() || ptr != text.data() + text.size() || k < 1)
        throw Error(kModule, "max_features must be sqrt, all or a positive integer");
    return {Kind::fixed, k};
}

void ForestConfig::validate() const {
    if (n_estimators < 1) throw Error(kModule, "n_estimators must be >= 1");
    if (min_samples_leaf < 1) throw Error(kModule, "min_samples_leaf must be >= 1");
    if (min_samples_split < 2) throw Error(kModule, "min_samples_split must be >= 2");
    if (max_depth < 1) throw Error(kModule, "max_depth must be >= 1");
    if (max_features.kind == MaxFeatures::Kind::fixed && max_features.count < 1)
        throw Error(kModule, "max_features must be positive");
}

const DecisionTree::Node& DecisionTree::leaf_for(std::span<const double> row) const {
    const Node* node = &nodes.front();
    while (node->feature >= 0)
        node = &nodes[static_cast<std::size_t>(row[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left : node->right)];
    return *node;
}

int DecisionTree::vote(std::span<const double> row) const {
    const auto& leaf = leaf_for(row);
    return leaf.count1 > leaf.count0 ? 1 : 0;
}

int DecisionTree::depth() const {
    int d = 0;
    for (const auto& n : nodes) d = std::max(d, n.depth);
    return d;
}

ForestModel train_forest(const Matrix& x, std::span<const Label> y, const ForestConfig& cfg,
                         std::vector<std::string> feature_names) {
    cfg.validate();
    const Index n = x.rows();
    const Index p = x.cols();
    if (static_cast<std::size_t>(n) != y.size()) throw Error(kModule, "X rows and y length differ");
    if (n < 2) throw Error(kModule, "need at least 2 training rows");
    if (p < 1) throw Error(kModule, "need at least 1 feature");
    const auto pos = std::count(y.begin(), y.end(), Label::fake_buyer);
    if (pos == 0 || pos == static_cast<std::ptrdiff_t>(n)) throw Error(kModule, "training labels contain a single class");
    if (feature_names.empty())
        for (Index c = 0; c < p; ++c) feature_names.push_back("x" + std::to_string(c));
    if (static_cast<Index>(feature_names.size()) != p) throw Error(kModule, "feature_names length differs from X columns");
    for (Index c = 0; c < p; ++c)
        if (!x.col(c).allFinite())
            throw Error(kModule, "non-finite value in column '" + feature_names[static_cast<std::size_t>(c)] + "'");

    ForestModel model;
    model.config = cfg;
    model.feature_names = std::move(feature_names);
    model.trees.resize(static_cast<std::size_t>(cfg.n_estimators));
    std::vector<Vector> per_tree(static_cast<std::size_t>(cfg.n_estimators));

    auto train_one = [&](int t) {
        Rng rng = Rng::derive(cfg.seed, static_cast<std::uint64_t>(t));
        std::vector<double> weight(static_cast<std::size_t>(n), cfg.bootstrap ? 0.0 : 1.0);
        if (cfg.bootstrap)
            for (Index k = 0; k < n; ++k) weight[rng.index(static_cast<std::size_t>(n))] += 1.0;
        std::vector<Sample> samples;
        for (Index r = 0; r < n; ++r)
            if (weight[static_cast<std::size_t>(r)] > 0) samples.push_back({r, weight[static_cast<std::size_t>(r)]});
        TreeBuilder builder(x, y, cfg, std::move(rng));
        model.trees[static_cast<std::size_t>(t)] = builder.build(std::move(samples));
        per_tree[static_cast<std::size_t>(t)] = builder.impurity_decrease();
    };

    const int threads = std::max(1, std::min(cfg.n_threads > 0 ? cfg.n_threads : static_cast<int>(std::thread::hardware_concurrency()),
                                             cfg.n_estimators));
    if (threads == 1) {
        for (int t = 0; t < cfg.n_estimators; ++t) train_one(t);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex failure_mutex;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (int t = next++; t < cfg.n_estimators; t = next++) {
                    try {
                        train_one(t);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    // Normalize per tree, average in tree order, renormalize.
    model.importances = Vector::Zero(p);
    for (const auto& d : per_tree) {
        const double s = d.sum();
        if (s > 0.0) model.importances += d / s;
    }
    const double total = model.importances.sum();
    if (total > 0.0) model.importances /= total;
    return model;
}

Vector predict_proba(const ForestModel& model, const Matrix& x) {
    const auto p = static_cast<Index>(model.feature_names.size());
    if (x.cols() != p)
        throw Error(kModule, "model expects " + std::to_string(p) + " columns, got " + std::to_string(x.cols()));
    Vector scores(x.rows());
    std::vector<double> row(static_cast<std::size_t>(p));
    for (Index i = 0; i < x.rows(); ++i) {
        for (Index c = 0; c < p; ++c) row[static_cast<std::size_t>(c)] = x(i, c);
        int votes = 0;
        for (const auto& tree : model.trees) votes += tree.vote(row);
        scores[i] = static_cast<double>(votes) / static_cast<double>(model.trees.size());
    }
    return scores;
}

Vector score_rows(const ForestModel& model, const Matrix& raw) {
    return model.scaler ? predict_proba(model, model.scaler->apply(raw)) : predict_proba(model, raw);
}

std::vector<int> predict_labels(const Vector& scores, double threshold) {
    std::vector<int> out(static_cast<std::size_t>(scores.size()));
    for (Index i = 0; i < scores.size(); ++i) out[static_cast<std::size_t>(i)] = scores[i] >= threshold ? 1 : 0;
    return out;
}

std::vector<std::pair<std::string, double>> feature_importances(const ForestModel& model) {
    std::vector<std::pair<std::string, double>> out;
    for (std::size_t k = 0; k < model.feature_names.size(); ++k)
        out.emplace_back(model.feature_names[k], model.importances[static_cast<Index>(k)]);
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

// --- serialization ------------------------------------------------------------

namespace {

constexpr std::string_view kMagic = "revnet-forest";

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Vector vector_from_json(const json& j) {
    Vector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Index>(i)] = j[i].get<double>();
    return v;
}

}  // namespace

std::string serialize_model(const ForestModel& model) {
    json body;
    body["format_version"] = model.format_version;
    body["feature_names"] = model.feature_names;
    const auto& c = model.config;
    body["config"] = {{"n_estimators", c.n_estimators},
                      {"min_samples_leaf", c.min_samples_leaf},
                      {"min_samples_split", c.min_samples_split},
                      {"max_features", c.max_features.to_string()},
                      {"max_depth", c.max_depth},
                      {"bootstrap", c.bootstrap},
                      {"criterion", c.criterion == SplitCriterion::gini ? "gini" : "entropy"},
                      {"seed", c.seed}};
    body["importances"] = vector_to_json(model.importances);
    if (model.scaler)
        body["scaler"] = {{"mean", vector_to_json(model.scaler->mean())}, {"scale", vector_to_json(model.scaler->scale())}};
    else
        body["scaler"] = nullptr;
    json trees = json::array();
    for (const auto& tree : model.trees) {
        json nodes = json::array();
        for (const auto& n : tree.nodes)
            nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.count0, n.count1, n.depth}));
        trees.push_back(std::move(nodes));
    }
    body["trees"] = std::move(trees);

    const std::string payload = body.dump();
    char hash[17];
    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(fnv1a(payload)));
    return std::string(kMagic) + " " + std::to_string(model.format_version) + " " + hash + "\n" + payload + "\n";
}

ForestModel deserialize_model(std::string_view bytes) {
    const auto nl = bytes.find('\n');
    if (nl == std::string_view::npos) throw Error(kModule, "model file is truncated (no header)");
    std::istringstream header{std::string(bytes.substr(0, nl))};
    std::string magic, hash;
    int version = 0;
    if (!(header >> magic >> version >> hash) || magic != kMagic) throw Error(kModule, "not a model file (bad header)");
    if (version != ForestModel::kFormatVersion)
        throw Error(kModule, "model format version " + std::to_string(version) + " is not supported (expected " +
                                 std::to_string(ForestModel::kFormatVersion) + ")");
    auto payload = bytes.substr(nl + 1);
    if (payload.empty() || payload.back() != '\n') throw Error(kModule, "model file is truncated");
    payload.remove_suffix(1);
    char expected[17];
    std::snprintf(expected, sizeof(expected), "%016llx", static_cast<unsigned long long>(fnv1a(payload)));
    if (hash != expected) throw Error(kModule, "model file checksum mismatch (corrupted or truncated)");

    ForestModel model;
    try {
        const json body = json::parse(payload);
        if (body.at("format_version").get<int>() != version) throw Error(kModule, "header/body version disagree");
        model.format_version = version;
        model.feature_names = body.at("feature_names").get<std::vector<std::string>>();
        const auto& c = body.at("config");
        model.config.n_estimators = c.at("n_estimators").get<int>();
        model.config.min_samples_leaf = c.at("min_samples_leaf").get<int>();
        model.config.min_samples_split = c.at("min_samples_split").get<int>();
        model.config.max_features = MaxFeatures::parse(c.at("max_features").get<std::string>());
        model.config.max_depth = c.at("max_depth").get<int>();
        model.config.bootstrap = c.at("bootstrap").get<bool>();
        model.config.criterion = c.at("criterion").get<std::string>() == "entropy" ? SplitCriterion::entropy : SplitCriterion::gini;
        model.config.seed = c.at("seed").get<std::uint64_t>();
        model.importances = vector_from_json(body.at("importances"));
        if (!body.at("scaler").is_null())
            model.scaler = Standardizer(vector_from_json(body.at("scaler").at("mean")),
                                        vector_from_json(body.at("scaler").at("scale")));
        const auto p = static_cast<int>(model.feature_names.size());
        for (const auto& jt : body.at("trees")) {
            DecisionTree tree;
            for (const auto& jn : jt) {
                DecisionTree::Node n;
                n.feature = jn.at(0).get<int>();
                n.threshold = jn.at(1).get<double>();
                n.left = jn.at(2).get<int>();
                n.right = jn.at(3).get<int>();
                n.count0 = jn.at(4).get<double>();
                n.count1 = jn.at(5).get<double>();
                n.depth = jn.at(6).get<int>();
                tree.nodes.push_back(n);
            }
            const int size = static_cast<int>(tree.nodes.size());
            if (size == 0) throw Error(kModule, "empty tree in model file");
            for (const auto& n : tree.nodes) {
                if (n.feature >= p) throw Error(kModule, "tree references unknown feature");
                if (n.feature >= 0 && (n.left <= 0 || n.left >= size || n.right <= 0 || n.right >= size))
                    throw Error(kModule, "tree has out-of-range child index");
            }
            model.trees.push_back(std::move(tree));
        }
        if (model.trees.empty()) throw Error(kModule, "model has no trees");
        if (model.importances.size() != p) throw Error(kModule, "importances length differs from feature count");
    } catch (const json::exception& e) {
        throw Error(kModule, std::string("malformed model body: ") + e.what());
    }
    return model;
}

void save_model(const std::filesystem::path& path, const ForestModel& model) {
    write_file_atomic(path, serialize_model(model));
}

ForestModel load_model(const std::filesystem::path& path) { return deserialize_model(read_file(path)); }

}  // namespace revnet
