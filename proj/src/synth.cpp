#include "revnet/synth.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

namespace revnet {

namespace {

constexpr std::string_view kModule = "synth";

std::string numbered(char prefix, long value, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%c%0*ld", prefix, width, value);
    return buf;
}

/// Pronounceable pseudo-word for vocabulary index k (letters only).
std::string word(int k, std::string_view stem) {
    static constexpr std::string_view syllables[] = {"ka", "lo", "mi", "ne", "ru", "sa", "ti", "vo", "ze", "pa",
                                                     "qu", "do", "fe", "gi", "ho", "ju"};
    std::string w(stem);
    do {
        w += syllables[k % 16];
        k /= 16;
    } while (k > 0);
    return w;
}

std::vector<std::size_t> sample_without_replacement(std::size_t pool, std::size_t count, Rng& rng) {
    std::vector<std::size_t> out;
    out.reserve(count);
    if (count * 4 > pool) {
        // Partial Fisher-Yates over the full pool.
        std::vector<std::size_t> all(pool);
        for (std::size_t i = 0; i < pool; ++i) all[i] = i;
        for (std::size_t i = 0; i < count; ++i) {
            std::swap(all[i], all[i + rng.index(pool - i)]);
            out.push_back(all[i]);
        }
        return out;
    }
    std::unordered_set<std::size_t> seen;
    while (out.size() < count) {
        const auto v = rng.index(pool);
        if (seen.insert(v).second) out.push_back(v);
    }
    return out;
}

Vector gaussian(Index dim, Rng& rng) {
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) v[i] = rng.normal();
    return v;
}

Vector quantized(Vector v) {
    // Four decimals keeps files compact; an all-zero result is nudged.
    v = (v.array() * 1e4).round() / 1e4;
    if ((v.array() == 0.0).all()) v[0] = 1e-4;
    return v;
}

void check_probs(const std::array<double, 5>& p, const char* name) {
    double s = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) throw Error(kModule, std::string(name) + " has a negative entry");
        s += v;
    }
    if (std::abs(s - 1.0) > 1e-9) throw Error(kModule, std::string(name) + " must sum to 1, sums to " + format_number(s));
}

}  // namespace

void SynthConfig::validate() const {
    if (n_organic_products < 0 || n_fake_products < 0 || n_organic_products + n_fake_products < 1)
        throw Error(kModule, "need at least one product");
    if (organic_pool < 1 || fake_pool < 1) throw Error(kModule, "reviewer pools must be non-empty");
    if (!(fake_pool < organic_pool)) throw Error(kModule, "fake_pool must be smaller than organic_pool");
    if (min_reviews < 1 || max_reviews < min_reviews) throw Error(kModule, "invalid reviews_per_product range");
    if (!(fake_mix >= 0.0 && fake_mix <= 1.0)) throw Error(kModule, "fake_mix must lie in [0, 1], got " + format_number(fake_mix));
    check_probs(organic_rating_probs, "organic_rating_probs");
    check_probs(fake_rating_probs, "fake_rating_probs");
    if (!(mean_gap_days_organic > 0.0 && mean_gap_days_fake > 0.0)) throw Error(kModule, "mean gaps must be positive");
    for (double r : {organic_photo_rate, fake_photo_rate, organic_helpful_rate, fake_helpful_rate, topic_word_rate})
        if (!(r >= 0.0 && r <= 1.0)) throw Error(kModule, "rates must lie in [0, 1]");
    if (vocabulary_size < 1 || topic_vocabulary_size < 1) throw Error(kModule, "vocabulary sizes must be positive");
    if (embedding_dim < 1) throw Error(kModule, "embedding_dim must be positive");
    const auto needed = static_cast<long>(std::ceil(fake_mix * max_reviews - 1e-12));
    if (n_fake_products > 0 && needed > fake_pool)
        throw Error(kModule, "fake_mix * max_reviews = " + std::to_string(needed) + " exceeds fake_pool (" +
                                 std::to_string(fake_pool) + "); cannot sample without replacement");
    if (max_reviews > organic_pool) throw Error(kModule, "max_reviews exceeds organic_pool");
    if (active_pool < 0 || active_pool >= organic_pool) throw Error(kModule, "active_pool must lie in [0, organic_pool)");
    if (!(active_share_max >= 0.0 && active_share_max <= 1.0)) throw Error(kModule, "active_share_max must lie in [0, 1]");
    if (active_share_max > 0.0 && (active_pool < max_reviews || max_reviews > organic_pool - active_pool))
        throw Error(kModule, "active_pool too small (or too large) for max_reviews");
    if (!(active_share_power > 0.0)) throw Error(kModule, "active_share_power must be positive");
    if (!(rating_tilt_sd >= 0.0) || !(gap_log_sd >= 0.0)) throw Error(kModule, "dispersions must be non-negative");
}

SynthDataset generate(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    const int n = cfg.n_organic_products + cfg.n_fake_products;

    // Shuffle which product ids are fake so ids carry no signal.
    std::vector<bool> is_fake(static_cast<std::size_t>(n), false);
    for (int i = 0; i < cfg.n_fake_products; ++i) is_fake[static_cast<std::size_t>(i)] = true;
    for (std::size_t i = is_fake.size(); i > 1; --i) {
        const auto j = rng.index(i);
        const bool tmp = is_fake[i - 1];
        is_fake[i - 1] = is_fake[j];
        is_fake[j] = tmp;
    }

    const Vector fake_direction = gaussian(cfg.embedding_dim, rng);
    SynthDataset out;
    out.reviews.reserve(static_cast<std::size_t>(n));
    const int width = n > 9999 ? 6 : 4;

    for (int p = 0; p < n; ++p) {
        const bool fake = is_fake[static_cast<std::size_t>(p)];
        ProductReviewSet set;
        set.product_id = numbered('p', p, width);
        set.label = fake ? Label::fake_buyer : Label::organic;

        const int k = cfg.min_reviews + static_cast<int>(rng.index(static_cast<std::size_t>(cfg.max_reviews - cfg.min_reviews + 1)));
        const int from_fake = fake ? static_cast<int>(std::ceil(cfg.fake_mix * k - 1e-12)) : 0;
        const auto fake_ids = sample_without_replacement(static_cast<std::size_t>(cfg.fake_pool), static_cast<std::size_t>(from_fake), rng);
        // Organic reviewers: a product-specific share comes from the power reviewers.
        const int n_organic = k - from_fake;
        const double active_share = cfg.active_share_max * std::pow(rng.uniform(), cfg.active_share_power);
        const int from_active = cfg.active_pool > 0 ? static_cast<int>(std::round(active_share * n_organic)) : 0;
        auto organic_ids = sample_without_replacement(static_cast<std::size_t>(cfg.active_pool), static_cast<std::size_t>(from_active), rng);
        for (auto id : sample_without_replacement(static_cast<std::size_t>(cfg.organic_pool - cfg.active_pool),
                                                  static_cast<std::size_t>(n_organic - from_active), rng))
            organic_ids.push_back(static_cast<std::size_t>(cfg.active_pool) + id);

        // Quality tilts the star distribution; popularity scales arrival gaps.
        const double tilt = cfg.rating_tilt_sd * rng.normal();
        const double gap_scale = std::exp(cfg.gap_log_sd * rng.normal());
        auto tilted = [tilt](const std::array<double, 5>& p) {
            std::array<double, 5> q{};
            double s = 0.0;
            for (int i = 0; i < 5; ++i) s += q[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)] * std::exp(tilt * (i - 2));
            for (auto& v : q) v /= s;
            return q;
        };
        const auto organic_probs = tilted(cfg.organic_rating_probs);
        const auto fake_probs = tilted(cfg.fake_rating_probs);

        // (reviewer index in the combined id space, came from fake pool)
        std::vector<std::pair<std::size_t, bool>> reviewers;
        for (auto id : organic_ids) reviewers.emplace_back(id, false);
        for (auto id : fake_ids) reviewers.emplace_back(static_cast<std::size_t>(cfg.organic_pool) + id, true);
        for (std::size_t i = reviewers.size(); i > 1; --i) std::swap(reviewers[i - 1], reviewers[rng.index(i)]);

        // Product-specific words make product documents distinct.
        std::vector<std::string> product_words;
        for (int w = 0; w < 5; ++w) product_words.push_back(word(static_cast<int>(rng.index(100000)), "x"));

        const Vector product_direction = gaussian(cfg.embedding_dim, rng);
        const int n_product_images = 1 + static_cast<int>(rng.index(3));
        for (int im = 0; im < n_product_images; ++im) {
            ImageEmbedding e;
            e.owner = ImageOwner::product_image;
            e.product_id = set.product_id;
            e.image_id = set.product_id + "_pi" + std::to_string(im);
            e.vector = quantized(cfg.product_image_signal * product_direction + gaussian(cfg.embedding_dim, rng));
            out.embeddings.push_back(std::move(e));
        }

        double t = rng.uniform() * 365.0;
        for (std::size_t r = 0; r < reviewers.size(); ++r) {
            const bool from_fake_pool = reviewers[r].second;
            ReviewRecord rec;
            rec.product_id = set.product_id;
            rec.reviewer_id = numbered('u', static_cast<long>(reviewers[r].first), 6);
            rec.label = set.label;
            if (r > 0) t += rng.exponential(gap_scale * (from_fake_pool ? cfg.mean_gap_days_fake : cfg.mean_gap_days_organic));
            rec.timestamp = std::round(t * 1e6) / 1e6;
            const auto& probs = from_fake_pool ? fake_probs : organic_probs;
            rec.rating = 1 + static_cast<int>(rng.categorical(probs.data(), probs.size()));
            if (rng.uniform() < (from_fake_pool ? cfg.fake_helpful_rate : cfg.organic_helpful_rate))
                rec.helpful_votes = 1 + static_cast<int>(rng.exponential(2.0));
            rec.has_photo = rng.uniform() < (from_fake_pool ? cfg.fake_photo_rate : cfg.organic_photo_rate);

            const int length = 5 + static_cast<int>(rng.index(36));
            for (int w = 0; w < length; ++w) {
                if (w) rec.text.push_back(' ');
                const double u = rng.uniform();
                if (from_fake_pool && u < cfg.topic_word_rate) {
                    rec.text += word(static_cast<int>(rng.index(static_cast<std::size_t>(cfg.topic_vocabulary_size))), "t");
                } else if (u > 0.95) {
                    rec.text += product_words[rng.index(product_words.size())];
                } else {
                    rec.text += word(static_cast<int>(rng.index(static_cast<std::size_t>(cfg.vocabulary_size))), "w");
                }
            }

            if (rec.has_photo) {
                const std::string review_id = set.product_id + "_r" + std::to_string(r);
                const int images = 1 + static_cast<int>(rng.index(2));
                for (int im = 0; im < images; ++im) {
                    ImageEmbedding e;
                    e.owner = ImageOwner::review_image;
                    e.product_id = set.product_id;
                    e.review_id = review_id;
                    e.image_id = review_id + "_i" + std::to_string(im);
                    Vector v = cfg.product_image_signal * product_direction + gaussian(cfg.embedding_dim, rng);
                    if (from_fake_pool) v += cfg.fake_image_signal * fake_direction;
                    e.vector = quantized(std::move(v));
                    out.embeddings.push_back(std::move(e));
                }
            }
            set.reviews.push_back(std::move(rec));
        }
        std::sort(set.reviews.begin(), set.reviews.end(), [](const ReviewRecord& a, const ReviewRecord& b) {
            return std::tie(a.timestamp, a.reviewer_id) < std::tie(b.timestamp, b.reviewer_id);
        });
        out.reviews.push_back(std::move(set));
    }
    return out;
}

std::string synth_manifest(const SynthConfig& cfg) {
    nlohmann::ordered_json j;
    j["generator"] = "revnet synth";
    j["seed"] = cfg.seed;
    j["n_organic_products"] = cfg.n_organic_products;
    j["n_fake_products"] = cfg.n_fake_products;
    j["organic_pool"] = cfg.organic_pool;
    j["fake_pool"] = cfg.fake_pool;
    j["reviews_per_product"] = {cfg.min_reviews, cfg.max_reviews};
    j["fake_mix"] = cfg.fake_mix;
    j["organic_rating_probs"] = cfg.organic_rating_probs;
    j["fake_rating_probs"] = cfg.fake_rating_probs;
    j["mean_gap_days_organic"] = cfg.mean_gap_days_organic;
    j["mean_gap_days_fake"] = cfg.mean_gap_days_fake;
    j["active_pool"] = cfg.active_pool;
    j["active_share_max"] = cfg.active_share_max;
    j["active_share_power"] = cfg.active_share_power;
    j["rating_tilt_sd"] = cfg.rating_tilt_sd;
    j["gap_log_sd"] = cfg.gap_log_sd;
    j["organic_photo_rate"] = cfg.organic_photo_rate;
    j["fake_photo_rate"] = cfg.fake_photo_rate;
    j["organic_helpful_rate"] = cfg.organic_helpful_rate;
    j["fake_helpful_rate"] = cfg.fake_helpful_rate;
    j["vocabulary_size"] = cfg.vocabulary_size;
    j["topic_vocabulary_size"] = cfg.topic_vocabulary_size;
    j["topic_word_rate"] = cfg.topic_word_rate;
    j["embedding_dim"] = cfg.embedding_dim;
    j["product_image_signal"] = cfg.product_image_signal;
    j["fake_image_signal"] = cfg.fake_image_signal;
    return j.dump(2) + "\n";
}

}  // namespace revnet
