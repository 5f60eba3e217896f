#pragma once

#include "revnet/common.hpp"
#include "revnet/ingest.hpp"

#include <array>
#include <string>
#include <vector>

namespace revnet {

/// Synthetic marketplace. Organic products draw reviewers from a large pool;
/// fake-review buyers draw a fraction `fake_mix` of theirs from a small shared
/// pool. Every per-review property (rating, arrival gap, text, photo, image)
/// follows the law of the pool the reviewer came from, so fake_mix = 0 makes
/// the two classes indistinguishable.
struct SynthConfig {
    std::uint64_t seed = 42;
    int n_organic_products = 100;
    int n_fake_products = 50;
    int organic_pool = 50000;
    int fake_pool = 300;
    int min_reviews = 20;
    int max_reviews = 40;
    double fake_mix = 0.8;
    std::array<double, 5> organic_rating_probs{0.10, 0.07, 0.10, 0.23, 0.50};
    std::array<double, 5> fake_rating_probs{0.02, 0.02, 0.03, 0.08, 0.85};
    double mean_gap_days_organic = 4.0;
    double mean_gap_days_fake = 2.0;

    // Product heterogeneity, drawn the same way for both classes.
    int active_pool = 300;           // organic ids [0, active_pool) are prolific "power" reviewers
    double active_share_max = 1.0;   // per product, share of organic reviews from power reviewers = max * U^power
    double active_share_power = 4.0;  // skew: most products get few power reviewers, a few get many
    double rating_tilt_sd = 0.6;     // per-product quality tilt of the star distribution
    double gap_log_sd = 0.6;         // per-product popularity: log-normal multiplier on mean gaps

    // Review content.
    double organic_photo_rate = 0.25;
    double fake_photo_rate = 0.3;
    double organic_helpful_rate = 0.3;
    double fake_helpful_rate = 0.3;
    int vocabulary_size = 1500;
    int topic_vocabulary_size = 60;
    double topic_word_rate = 0.08; // share of tokens drawn from the topical vocabulary in fake-pool reviews

    // Images.
    Index embedding_dim = kEmbeddingDim;
    double product_image_signal = 1.0;  // per-coordinate scale of the product's own direction
    double fake_image_signal = 0.15;    // per-coordinate scale of the shared fake direction

    void validate() const;
};

struct SynthDataset {
    Dataset reviews;
    std::vector<ImageEmbedding> embeddings;
};

SynthDataset generate(const SynthConfig& cfg);

/// JSON manifest capturing the full config.
std::string synth_manifest(const SynthConfig& cfg);

}  // namespace revnet
