#include "revnet/content_features.hpp"

#include <cctype>
#include <map>
#include <tuple>
#include <numeric>

namespace revnet {

namespace {

constexpr std::string_view kModule = "content_features";

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::vector<std::pair<std::string, int>> count_terms(const std::vector<std::string>& tokens) {
    std::map<std::string, int> counts;
    for (const auto& t : tokens) ++counts[t];
    return {counts.begin(), counts.end()};
}

double combine(double tf, double idf, TfidfMode mode) {
    return mode == TfidfMode::additive ? tf + idf : tf * idf;
}

double population_std(const std::vector<double>& v, double mean) {
    if (v.empty()) return 0.0;
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty() &&
            !std::all_of(current.begin(), current.end(), [](unsigned char c) { return std::isdigit(c); }))
            tokens.push_back(current);
        current.clear();
    };
    for (unsigned char c : text) {
        if (is_word_byte(c)) {
            current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

TermStats term_stats(const ProductReviewSet& product) {
    TermStats stats;
    stats.review_count = product.reviews.size();
    std::map<std::string, int> df;
    for (const auto& r : product.reviews) {
        auto counts = count_terms(tokenize(r.text));
        for (const auto& [term, _] : counts) ++df[term];
        stats.counts.push_back(std::move(counts));
    }
    stats.document_frequency.assign(df.begin(), df.end());
    return stats;
}

double term_frequency(int count, int review_length) {
    return review_length > 0 ? static_cast<double>(count) / review_length : 0.0;
}

double inverse_document_frequency(std::size_t documents, std::size_t containing, double log_base) {
    if (containing == 0 || containing > documents)
        throw Error(kModule, "document frequency must lie in [1, |R|]");
    return std::log(static_cast<double>(documents) / static_cast<double>(containing)) / std::log(log_base);
}

std::vector<TermVector> tfidf_vectors(const ProductReviewSet& product, const TextOptions& opts) {
    const auto stats = term_stats(product);
    std::map<std::string_view, int> df(stats.document_frequency.begin(), stats.document_frequency.end());
    std::vector<TermVector> out;
    out.reserve(stats.counts.size());
    for (const auto& counts : stats.counts) {
        int length = 0;
        for (const auto& [_, c] : counts) length += c;
        TermVector v;
        v.reserve(counts.size());
        for (const auto& [term, c] : counts) {
            const double tf = term_frequency(c, length);
            const double idf =
                inverse_document_frequency(stats.review_count, static_cast<std::size_t>(df.at(term)), opts.log_base);
            v.emplace_back(term, combine(tf, idf, opts.mode));
        }
        out.push_back(std::move(v));
    }
    return out;
}

double cosine_similarity(const TermVector& a, const TermVector& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [_, w] : a) na += w * w;
    for (const auto& [_, w] : b) nb += w * w;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            dot += ia->second * ib->second;
            ++ia;
            ++ib;
        }
    }
    // Multiplicative mode can zero out a review whose terms all occur in every
    // review; such a pair contributes 0.
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

ScoredValue tfidf_similarity(const ProductReviewSet& product, const TextOptions& opts) {
    auto vectors = tfidf_vectors(product, opts);
    std::erase_if(vectors, [](const TermVector& v) { return v.empty(); });
    if (vectors.size() < 2) return {0.0, true};
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < vectors.size(); ++i)
        for (std::size_t j = i + 1; j < vectors.size(); ++j) {
            total += cosine_similarity(vectors[i], vectors[j]);
            ++pairs;
        }
    return {total / static_cast<double>(pairs), false};
}

std::vector<TermVector> document_scores(const Dataset& data, const TextOptions& opts) {
    std::vector<std::vector<std::pair<std::string, int>>> docs;
    docs.reserve(data.size());
    std::map<std::string, std::size_t> df;
    for (const auto& product : data) {
        std::vector<std::string> tokens;
        for (const auto& r : product.reviews) {
            auto t = tokenize(r.text);
            tokens.insert(tokens.end(), std::make_move_iterator(t.begin()), std::make_move_iterator(t.end()));
        }
        auto counts = count_terms(tokens);
        for (const auto& [term, _] : counts) ++df[term];
        docs.push_back(std::move(counts));
    }
    std::vector<TermVector> scores;
    scores.reserve(docs.size());
    for (const auto& counts : docs) {
        int length = 0;
        for (const auto& [_, c] : counts) length += c;
        TermVector v;
        v.reserve(counts.size());
        for (const auto& [term, c] : counts) {
            const double idf = inverse_document_frequency(docs.size(), df.at(term), opts.log_base);
            v.emplace_back(term, combine(term_frequency(c, length), idf, opts.mode));
        }
        scores.push_back(std::move(v));
    }
    return scores;
}

TextFeatures product_text_features(const Dataset& data, const TextOptions& opts) {
    auto scores = document_scores(data, opts);
    auto by_score = [](const std::pair<std::string, double>& a, const std::pair<std::string, double>& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    };

    if (!opts.global_top) {
        // Keep each product's own top_k terms.
        for (auto& v : scores) {
            if (v.size() <= opts.top_k) continue;
            std::sort(v.begin(), v.end(), by_score);
            v.resize(opts.top_k);
            std::sort(v.begin(), v.end());
        }
    }

    // Columns: the top_k candidate terms by their best score in any product.
    std::map<std::string, double> best;
    for (const auto& v : scores)
        for (const auto& [term, s] : v) {
            auto [it, inserted] = best.emplace(term, s);
            if (!inserted) it->second = std::max(it->second, s);
        }
    std::vector<std::pair<std::string, double>> ranked(best.begin(), best.end());
    std::sort(ranked.begin(), ranked.end(), by_score);
    if (ranked.size() > opts.top_k) ranked.resize(opts.top_k);

    TextFeatures out;
    for (auto& [term, _] : ranked) out.terms.push_back(term);
    std::sort(out.terms.begin(), out.terms.end());
    std::map<std::string_view, Index> column;
    for (std::size_t k = 0; k < out.terms.size(); ++k) column.emplace(out.terms[k], static_cast<Index>(k));

    out.values = Matrix::Zero(static_cast<Index>(data.size()), static_cast<Index>(opts.top_k));
    for (std::size_t p = 0; p < scores.size(); ++p)
        for (const auto& [term, s] : scores[p])
            if (auto it = column.find(term); it != column.end()) out.values(static_cast<Index>(p), it->second) = s;
    return out;
}

MetadataRow metadata_features(const ProductReviewSet& product, const TextOptions& opts) {
    MetadataRow row;
    const auto& reviews = product.reviews;
    const auto n = reviews.size();
    row.n_reviews = static_cast<double>(n);
    if (n == 0) {
        row.tfidf_sim_missing = true;
        return row;
    }

    // Sort locally so the result does not depend on the caller's order.
    std::vector<double> times;
    times.reserve(n);
    double rating_sum = 0;
    std::size_t helpful = 0, one = 0, five = 0, photo = 0;
    std::vector<double> lengths;
    lengths.reserve(n);
    for (const auto& r : reviews) {
        times.push_back(r.timestamp);
        rating_sum += r.rating;
        helpful += r.helpful_votes >= 1;
        one += r.rating == 1;
        five += r.rating == 5;
        photo += r.has_photo;
        lengths.push_back(static_cast<double>(tokenize(r.text).size()));
    }
    std::sort(times.begin(), times.end());
    const double dn = static_cast<double>(n);
    row.avg_rating = rating_sum / dn;
    row.share_helpful = static_cast<double>(helpful) / dn;
    row.share_1star = static_cast<double>(one) / dn;
    row.share_5star = static_cast<double>(five) / dn;
    row.share_photo = static_cast<double>(photo) / dn;
    const double mean_len = std::accumulate(lengths.begin(), lengths.end(), 0.0) / dn;
    row.stdev_review_len = population_std(lengths, mean_len);

    if (n >= 2) {
        std::vector<double> gaps;
        gaps.reserve(n - 1);
        for (std::size_t i = 1; i < n; ++i) gaps.push_back(times[i] - times[i - 1]);
        row.gap_avg = std::accumulate(gaps.begin(), gaps.end(), 0.0) / static_cast<double>(gaps.size());
        row.gap_min = *std::min_element(gaps.begin(), gaps.end());
        row.gap_max = *std::max_element(gaps.begin(), gaps.end());
        row.gap_std = population_std(gaps, row.gap_avg);
    }

    // Review order does not matter for the pairwise mean, but tfidf_vectors
    // is defined on the stored order; use a sorted copy for stability.
    ProductReviewSet sorted = product;
    std::sort(sorted.reviews.begin(), sorted.reviews.end(), [](const ReviewRecord& a, const ReviewRecord& b) {
        return std::tie(a.timestamp, a.reviewer_id) < std::tie(b.timestamp, b.reviewer_id);
    });
    const auto sim = tfidf_similarity(sorted, opts);
    row.tfidf_sim = sim.value;
    row.tfidf_sim_missing = sim.missing;
    return row;
}

SimStats summarize(const std::vector<double>& values) {
    SimStats s;
    if (values.empty()) return s;
    s.missing = false;
    s.avg = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    s.avg = std::clamp(s.avg, s.min, s.max);
    s.std = population_std(values, s.avg);
    return s;
}

ImageSimRow image_features(const std::string& product_id, const EmbeddingIndex& embeddings, bool angular) {
    const auto product_images = embeddings.find(product_id, ImageOwner::product_image);
    const auto review_images = embeddings.find(product_id, ImageOwner::review_image);
    auto sim = [angular](const auto& u, const auto& v) {
        const double c = cosine_similarity(u, v);
        return angular ? angular_similarity(c) : c;
    };

    ImageSimRow row;

    std::map<std::string, std::pair<Vector, int>> per_review;
    for (const auto* e : review_images) {
        auto [it, inserted] = per_review.try_emplace(e->review_id, Vector::Zero(e->vector.size()), 0);
        if (it->second.first.size() != e->vector.size())
            throw Error(kModule, "review '" + e->review_id + "' mixes embedding lengths");
        it->second.first += e->vector;
        ++it->second.second;
    }
    std::vector<Vector> review_means;
    for (auto& [_, acc] : per_review) review_means.push_back(acc.first / acc.second);
    std::vector<double> values;
    for (std::size_t i = 0; i < review_means.size(); ++i)
        for (std::size_t j = i + 1; j < review_means.size(); ++j) {
            // Opposite images can average to zero; such a review has no direction.
            if (review_means[i].norm() == 0.0 || review_means[j].norm() == 0.0) continue;
            values.push_back(sim(review_means[i], review_means[j]));
        }
    row.img_sim = summarize(values);

    values.clear();
    for (std::size_t i = 0; i < review_images.size(); ++i)
        for (std::size_t j = i + 1; j < review_images.size(); ++j)
            values.push_back(sim(review_images[i]->vector, review_images[j]->vector));
    row.sim_review = summarize(values);

    values.clear();
    for (const auto* p : product_images)
        for (const auto* r : review_images) values.push_back(sim(p->vector, r->vector));
    row.sim_product = summarize(values);
    return row;
}

}  // namespace revnet
