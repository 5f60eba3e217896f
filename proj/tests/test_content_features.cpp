#include "helpers.hpp"
#include "revnet/content_features.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace revnet;
using testing::review;

namespace {

ProductReviewSet product(std::vector<std::string> texts) {
    ProductReviewSet p;
    p.product_id = "P";
    for (std::size_t i = 0; i < texts.size(); ++i)
        p.reviews.push_back(review("P", "u" + std::to_string(i), static_cast<double>(i), 5, texts[i]));
    return p;
}

double score_of(const TermVector& v, const std::string& term) {
    for (const auto& [t, s] : v)
        if (t == term) return s;
    return 0.0;
}

ImageEmbedding image(ImageOwner owner, std::string review_id, std::string id, std::vector<double> xs) {
    ImageEmbedding e;
    e.owner = owner;
    e.product_id = "P";
    e.review_id = std::move(review_id);
    e.image_id = std::move(id);
    e.vector = Eigen::Map<Vector>(xs.data(), static_cast<Index>(xs.size()));
    return e;
}

}  // namespace

TEST_SUITE("content_features") {

TEST_CASE("tokenizer lowercases and splits on punctuation") {
    CHECK(tokenize("Great, GREAT product!! 10/10 a-b") == std::vector<std::string>{"great", "great", "product", "a", "b"});
    CHECK(tokenize("").empty());
}

TEST_CASE("tf and idf formulas") {
    CHECK(term_frequency(2, 3) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(inverse_document_frequency(4, 4) == 0.0);
    CHECK(inverse_document_frequency(4, 1) == doctest::Approx(1.3862943611198906).epsilon(1e-15));
    CHECK_THROWS_AS(inverse_document_frequency(4, 0), Error);
}

TEST_CASE("per-review vectors: tf of 'a b a' and idf of a word in every review") {
    const auto v = tfidf_vectors(product({"a b a", "a c"}));
    REQUIRE(v.size() == 2);
    // 'a' is in both reviews: idf 0, additive score = tf.
    CHECK(score_of(v[0], "a") == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(score_of(v[0], "b") == doctest::Approx(1.0 / 3 + std::log(2.0)).epsilon(1e-15));
    TextOptions mult;
    mult.mode = TfidfMode::multiplicative;
    const auto m = tfidf_vectors(product({"a b a", "a c"}), mult);
    CHECK(score_of(m[0], "a") == 0.0);
    CHECK(score_of(m[0], "c") == 0.0);  // absent term
    CHECK(tfidf_vectors(product({"", "x"}))[0].empty());
}

TEST_CASE("idf of a word in 1 of 4 reviews is ln 4") {
    const auto v = tfidf_vectors(product({"rare common", "common", "common", "common"}));
    CHECK(score_of(v[0], "rare") == doctest::Approx(0.5 + 1.3862943611198906).epsilon(1e-15));
}

TEST_CASE("tfidf similarity fixtures") {
    CHECK(tfidf_similarity(product({"same words here", "same words here", "same words here"})).value ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(tfidf_similarity(product({"alpha beta", "gamma delta"})).value == 0.0);
    // Pairwise oracle: cosines 0.5, 0.40122594967756, 0.58225229695153.
    const auto s = tfidf_similarity(product({"a b", "a c", "b c c"}));
    CHECK_FALSE(s.missing);
    CHECK(s.value == doctest::Approx(0.49449274887636596).epsilon(1e-14));
    const auto one = tfidf_similarity(product({"only one", ""}));
    CHECK(one.missing);
    CHECK(one.value == 0.0);
}

TEST_CASE("tfidf similarity is invariant under review order") {
    const auto a = tfidf_similarity(product({"a b", "a c", "b c c", "d a"}));
    const auto b = tfidf_similarity(product({"d a", "b c c", "a b", "a c"}));
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-15));
}

TEST_CASE("product documents: 3-product toy corpus score table") {
    Dataset data(3);
    data[0] = product({"a b a"});
    data[1] = product({"b c"});
    data[2] = product({"c c d"});
    data[0].product_id = "P1";
    data[1].product_id = "P2";
    data[2].product_id = "P3";
    const auto s = document_scores(data);
    CHECK(score_of(s[0], "a") == doctest::Approx(1.7652789553347765).epsilon(1e-15));
    CHECK(score_of(s[0], "b") == doctest::Approx(0.7387984414414976).epsilon(1e-15));
    CHECK(score_of(s[1], "b") == doctest::Approx(0.9054651081081644).epsilon(1e-15));
    CHECK(score_of(s[1], "c") == doctest::Approx(0.9054651081081644).epsilon(1e-15));
    CHECK(score_of(s[2], "c") == doctest::Approx(1.0721317747748311).epsilon(1e-15));
    CHECK(score_of(s[2], "d") == doctest::Approx(1.431945622001443).epsilon(1e-15));
    TextOptions mult;
    mult.mode = TfidfMode::multiplicative;
    const auto m = document_scores(data, mult);
    CHECK(score_of(m[0], "a") == doctest::Approx(0.7324081924454064).epsilon(1e-15));
    CHECK(score_of(m[0], "b") == doctest::Approx(0.13515503603605478).epsilon(1e-15));
    CHECK(score_of(m[1], "c") == doctest::Approx(0.2027325540540822).epsilon(1e-15));
    CHECK(score_of(m[2], "c") == doctest::Approx(0.27031007207210955).epsilon(1e-15));
    CHECK(score_of(m[2], "d") == doctest::Approx(0.3662040962227032).epsilon(1e-15));

    TextOptions top2;
    top2.top_k = 2;
    const auto tf = product_text_features(data, top2);
    CHECK(tf.terms == std::vector<std::string>{"a", "d"});
    REQUIRE(tf.values.cols() == 2);
    CHECK(tf.values(0, 0) == doctest::Approx(1.7652789553347765).epsilon(1e-15));
    CHECK(tf.values(1, 0) == 0.0);
    CHECK(tf.values(1, 1) == 0.0);
    CHECK(tf.values(2, 1) == doctest::Approx(1.431945622001443).epsilon(1e-15));
}

TEST_CASE("corpus of one product: scores are tf") {
    Dataset data{product({"x y x"})};
    const auto tf = product_text_features(data);
    CHECK(tf.values.cols() == 1000);
    CHECK(tf.terms == std::vector<std::string>{"x", "y"});
    CHECK(tf.values(0, 0) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(tf.values(0, 1) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(tf.values.rightCols(998).isZero());
}

TEST_CASE("disjoint vocabularies give disjoint support") {
    Dataset data{product({"a b"}), product({"c d"})};
    data[1].product_id = "Q";
    const auto tf = product_text_features(data);
    for (Index c = 0; c < tf.values.cols(); ++c) CHECK((tf.values(0, c) == 0.0 || tf.values(1, c) == 0.0));
}

TEST_CASE("metadata: gaps, shares and ratings") {
    ProductReviewSet p;
    p.product_id = "P";
    p.reviews = {review("P", "u1", 6, 1, "one two three"), review("P", "u2", 0, 5, "one"), review("P", "u3", 2, 5, "")};
    p.reviews[0].helpful_votes = 3;
    p.reviews[1].has_photo = true;
    const auto m = metadata_features(p);
    CHECK(m.n_reviews == 3);
    CHECK(m.gap_avg == 3.0);
    CHECK(m.gap_min == 2.0);
    CHECK(m.gap_max == 4.0);
    CHECK(m.gap_std == 1.0);
    CHECK(m.avg_rating == doctest::Approx(11.0 / 3).epsilon(1e-15));
    CHECK(m.share_5star == doctest::Approx(2.0 / 3));
    CHECK(m.share_1star == doctest::Approx(1.0 / 3));
    CHECK(m.share_helpful == doctest::Approx(1.0 / 3));
    CHECK(m.share_photo == doctest::Approx(1.0 / 3));
    CHECK(m.stdev_review_len == doctest::Approx(std::sqrt(14.0 / 9)).epsilon(1e-15));  // lengths 3,1,0

    auto shuffled = p;
    std::reverse(shuffled.reviews.begin(), shuffled.reviews.end());
    const auto m2 = metadata_features(shuffled);
    CHECK(m2.gap_std == m.gap_std);
    CHECK(m2.tfidf_sim == m.tfidf_sim);
}

TEST_CASE("metadata: all five stars and single review") {
    auto p = product({"x", "y"});
    const auto m = metadata_features(p);
    CHECK(m.share_5star == 1.0);
    CHECK(m.share_1star == 0.0);
    const auto single = metadata_features(product({"lonely review"}));
    CHECK(single.gap_avg == 0.0);
    CHECK(single.gap_std == 0.0);
    CHECK(single.stdev_review_len == 0.0);
    CHECK(single.tfidf_sim_missing);
}

TEST_CASE("cosine similarity of embeddings") {
    Vector a(2), b(2), c(2);
    a << 1, 0;
    b << 1, 1;
    c << 0, 3;
    CHECK(cosine_similarity(a, a) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cosine_similarity(a, c) == 0.0);
    CHECK(cosine_similarity(a, b) == doctest::Approx(0.70710678118654752).epsilon(1e-15));
    CHECK_THROWS_AS(cosine_similarity(a, Vector::Zero(2)), Error);
    CHECK(angular_similarity(1.0) == 1.0);
    CHECK(angular_similarity(0.0) == doctest::Approx(0.5));
}

TEST_CASE("image features: review means collapse multi-image reviews") {
    const EmbeddingIndex idx({image(ImageOwner::review_image, "r1", "i1", {1, 2, 0}),
                              image(ImageOwner::review_image, "r1", "i2", {1, 2, 0}),
                              image(ImageOwner::review_image, "r2", "i3", {1, 2, 0})});
    const auto row = image_features("P", idx);
    CHECK_FALSE(row.img_sim.missing);
    CHECK(row.img_sim.avg == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(row.sim_product.missing);
    CHECK(row.sim_product.avg == 0.0);
}

TEST_CASE("image features: no review images flags missing") {
    const EmbeddingIndex idx({image(ImageOwner::product_image, "", "p1", {1, 0})});
    const auto row = image_features("P", idx);
    CHECK(row.sim_review.missing);
    CHECK(row.img_sim.missing);
    CHECK(row.sim_review.max == 0.0);
}

TEST_CASE("image features: 3 review images and 1 product image against all-pairs oracle") {
    std::vector<std::vector<double>> rv{{1, 2, 3}, {-1, 0.5, 2}, {0.3, -2, 1}};
    std::vector<double> pv{2, 1, -1};
    std::vector<ImageEmbedding> es{image(ImageOwner::product_image, "", "p", pv)};
    for (int i = 0; i < 3; ++i) es.push_back(image(ImageOwner::review_image, "r" + std::to_string(i), "i" + std::to_string(i), rv[static_cast<std::size_t>(i)]));
    const auto row = image_features("P", EmbeddingIndex(es));
    auto cos = [](const std::vector<double>& x, const std::vector<double>& y) {
        double d = 0, nx = 0, ny = 0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            d += x[k] * y[k];
            nx += x[k] * x[k];
            ny += y[k] * y[k];
        }
        return d / std::sqrt(nx * ny);
    };
    std::vector<double> prod;
    for (const auto& r : rv) prod.push_back(cos(pv, r));
    const double avg = (prod[0] + prod[1] + prod[2]) / 3;
    CHECK(row.sim_product.avg == doctest::Approx(avg).epsilon(1e-14));
    CHECK(row.sim_product.min == doctest::Approx(*std::min_element(prod.begin(), prod.end())).epsilon(1e-14));
    CHECK(row.sim_product.max == doctest::Approx(*std::max_element(prod.begin(), prod.end())).epsilon(1e-14));
    double var = 0;
    for (double v : prod) var += (v - avg) * (v - avg);
    CHECK(row.sim_product.std == doctest::Approx(std::sqrt(var / 3)).epsilon(1e-12));
    const double pair01 = cos(rv[0], rv[1]), pair02 = cos(rv[0], rv[2]), pair12 = cos(rv[1], rv[2]);
    CHECK(row.sim_review.avg == doctest::Approx((pair01 + pair02 + pair12) / 3).epsilon(1e-14));
    // Each review has one image, so review-level and image-level pairs agree.
    CHECK(row.img_sim.avg == doctest::Approx(row.sim_review.avg).epsilon(1e-14));
    for (const auto* g : {&row.img_sim, &row.sim_review, &row.sim_product}) {
        CHECK(g->min <= g->avg);
        CHECK(g->avg <= g->max);
    }
}

}  // TEST_SUITE
