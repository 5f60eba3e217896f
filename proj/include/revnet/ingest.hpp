#pragma once

#include "revnet/common.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace revnet {

/// One review as observed on the marketplace.
struct ReviewRecord {
    std::string product_id;
    std::string reviewer_id;
    int rating = 5;           // 1..5 stars
    double timestamp = 0.0;   // days since 1970-01-01, fractional allowed
    std::string text;
    int helpful_votes = 0;
    bool has_photo = false;
    std::optional<Label> label;  // product-level, replicated on records

    friend bool operator==(const ReviewRecord&, const ReviewRecord&) = default;
};

/// All reviews of one product, ordered by (timestamp, reviewer_id).
struct ProductReviewSet {
    std::string product_id;
    std::vector<ReviewRecord> reviews;
    std::optional<Label> label;

    friend bool operator==(const ProductReviewSet&, const ProductReviewSet&) = default;
};

using Dataset = std::vector<ProductReviewSet>;

enum class ReviewFormat { csv, jsonl };

ReviewFormat review_format_from_path(const std::filesystem::path& path);

/// Validates records and groups them by product. Products come back sorted by
/// id, so the result does not depend on input order.
Dataset group_reviews(std::vector<ReviewRecord> records);

Dataset load_reviews(const std::filesystem::path& path, ReviewFormat format);
Dataset parse_reviews(std::string_view content, ReviewFormat format);

void write_reviews(const std::filesystem::path& path, const Dataset& data, ReviewFormat format);
std::string serialize_reviews(const Dataset& data, ReviewFormat format);

/// Accepts a numeric day count or an ISO-8601 date ("2020-03-01", optionally
/// followed by "THH:MM[:SS]" and a trailing "Z").
double parse_timestamp(std::string_view text);

inline constexpr Index kEmbeddingDim = 2048;

enum class ImageOwner { product_image, review_image };

struct ImageEmbedding {
    ImageOwner owner = ImageOwner::product_image;
    std::string product_id;
    std::string review_id;  // empty for product images
    std::string image_id;
    Vector vector;
};

/// Embeddings indexed by (product_id, owner). Insertion order is preserved
/// within each bucket.
class EmbeddingIndex {
public:
    EmbeddingIndex() = default;
    explicit EmbeddingIndex(std::vector<ImageEmbedding> embeddings);

    const std::vector<ImageEmbedding>& all() const { return embeddings_; }
    std::vector<const ImageEmbedding*> find(const std::string& product_id, ImageOwner owner) const;
    std::size_t size() const { return embeddings_.size(); }

private:
    std::vector<ImageEmbedding> embeddings_;
    std::map<std::pair<std::string, ImageOwner>, std::vector<std::size_t>> buckets_;
};

/// Validates dimension and rejects all-zero vectors. `expected_dim` exists for
/// small test fixtures; files on disk use kEmbeddingDim.
void validate_embedding(const ImageEmbedding& embedding, Index expected_dim = kEmbeddingDim);

EmbeddingIndex load_embeddings(const std::filesystem::path& path, Index expected_dim = kEmbeddingDim);
EmbeddingIndex parse_embeddings(std::string_view content, Index expected_dim = kEmbeddingDim);
void write_embeddings(const std::filesystem::path& path, const std::vector<ImageEmbedding>& embeddings);
std::string serialize_embeddings(const std::vector<ImageEmbedding>& embeddings);

std::string_view to_string(ImageOwner owner);

}  // namespace revnet
