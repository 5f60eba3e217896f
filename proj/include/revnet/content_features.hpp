#pragma once

#include "revnet/common.hpp"
#include "revnet/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace revnet {

// --- text --------------------------------------------------------------------

/// Lowercases ASCII letters, splits on runs of non-alphanumeric characters
/// and drops tokens made only of digits. Bytes >= 0x80 are kept inside
/// tokens so UTF-8 words survive intact.
std::vector<std::string> tokenize(std::string_view text);

enum class TfidfMode {
    additive,        // tf + idf
    multiplicative,  // tf * idf
};

struct TextOptions {
    TfidfMode mode = TfidfMode::additive;
    double log_base = std::numbers::e;
    std::size_t top_k = 1000;
    bool global_top = false;  // rank terms corpus-wide instead of per product
};

/// Sparse term weights sorted by term.
using TermVector = std::vector<std::pair<std::string, double>>;

/// Per-review term statistics for one product.
struct TermStats {
    std::vector<std::vector<std::pair<std::string, int>>> counts;  // f_{w,r}, sorted by term
    std::vector<std::pair<std::string, int>> document_frequency;   // |{r : w in r}|, sorted by term
    std::size_t review_count = 0;                                 // |R|
};

TermStats term_stats(const ProductReviewSet& product);

double term_frequency(int count, int review_length);
double inverse_document_frequency(std::size_t documents, std::size_t containing, double log_base = std::numbers::e);

/// One sparse vector per review. Support is the set of terms present in the
/// review; an empty review yields an empty vector.
std::vector<TermVector> tfidf_vectors(const ProductReviewSet& product, const TextOptions& opts = {});

double cosine_similarity(const TermVector& a, const TermVector& b);

struct ScoredValue {
    double value = 0.0;
    bool missing = false;
};

/// Mean cosine similarity over all pairs of reviews with non-empty text.
/// Fewer than two such reviews: 0 with the missing flag set.
ScoredValue tfidf_similarity(const ProductReviewSet& product, const TextOptions& opts = {});

/// Product-level text block: each product's concatenated reviews form one
/// document scored against the corpus of all products.
struct TextFeatures {
    std::vector<std::string> terms;  // column terms, lexicographic, at most top_k
    Matrix values;                   // products x top_k, zero padded
};

TextFeatures product_text_features(const Dataset& data, const TextOptions& opts = {});

/// Score table of each product-document: rows follow `data`, entries sorted by term.
std::vector<TermVector> document_scores(const Dataset& data, const TextOptions& opts = {});

// --- metadata ----------------------------------------------------------------

struct MetadataRow {
    double n_reviews = 0;
    double avg_rating = 0;
    double gap_avg = 0, gap_min = 0, gap_max = 0, gap_std = 0;
    double share_helpful = 0, share_1star = 0, share_5star = 0, share_photo = 0;
    double stdev_review_len = 0;
    double tfidf_sim = 0;
    bool tfidf_sim_missing = false;
};

/// Gap statistics use consecutive time-sorted reviews (population std); with
/// fewer than two reviews they are 0.
MetadataRow metadata_features(const ProductReviewSet& product, const TextOptions& opts = {});

// --- images ------------------------------------------------------------------

/// u.v / (|u||v|), clamped to [-1, 1]. Zero vectors are rejected.
template <typename DerivedA, typename DerivedB>
double cosine_similarity(const Eigen::MatrixBase<DerivedA>& u, const Eigen::MatrixBase<DerivedB>& v) {
    if (u.size() != v.size()) throw Error("content_features", "cosine similarity of vectors with different lengths");
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 || nv == 0.0) throw Error("content_features", "cosine similarity undefined for a zero vector");
    return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

/// Arc-cosine normalized similarity 1 - arccos(s)/pi, in [0, 1].
inline double angular_similarity(double cosine) {
    return 1.0 - std::acos(std::clamp(cosine, -1.0, 1.0)) / std::numbers::pi;
}

struct SimStats {
    double avg = 0, min = 0, max = 0, std = 0;
    bool missing = true;
};

SimStats summarize(const std::vector<double>& values);

struct ImageSimRow {
    SimStats img_sim;      // reviews as mean of their images, pairs of reviews
    SimStats sim_review;   // all pairs of individual review images
    SimStats sim_product;  // product image x review image
};

ImageSimRow image_features(const std::string& product_id, const EmbeddingIndex& embeddings, bool angular = false);

}  // namespace revnet
