#include "oracles.hpp"
#include "revnet/eval.hpp"

#include <doctest.h>

#include <limits>
#include <set>

using namespace revnet;

namespace {
std::vector<Label> labels_of(std::initializer_list<int> v) {
    std::vector<Label> out;
    for (int x : v) out.push_back(x ? Label::fake_buyer : Label::organic);
    return out;
}
}  // namespace

TEST_SUITE("eval") {

TEST_CASE("split sizes and determinism") {
    std::vector<Label> y(100, Label::organic);
    for (int i = 0; i < 50; ++i) y[static_cast<std::size_t>(i)] = Label::fake_buyer;
    const auto s = split(y, 0.2, 42);
    CHECK(s.train.size() == 80);
    CHECK(s.test.size() == 20);
    std::set<Index> all(s.train.begin(), s.train.end());
    all.insert(s.test.begin(), s.test.end());
    CHECK(all.size() == 100);
    const auto again = split(y, 0.2, 42);
    CHECK(again.train == s.train);
    CHECK(again.test == s.test);
    CHECK(split(y, 0.2, 43).test != s.test);
}

TEST_CASE("stratified split keeps class balance") {
    std::vector<Label> y(100, Label::organic);
    for (int i = 0; i < 100; i += 2) y[static_cast<std::size_t>(i)] = Label::fake_buyer;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = split(y, 0.2, seed, true);
        int pos = 0;
        for (auto i : s.test) pos += y[static_cast<std::size_t>(i)] == Label::fake_buyer;
        CHECK(std::abs(pos - 10) <= 1);
        CHECK(s.test.size() == 20);
    }
}

TEST_CASE("split with an empty side is an error") {
    std::vector<Label> y(3, Label::organic);
    CHECK_THROWS_AS(split(y, 0.0, 1), Error);
    CHECK_THROWS_AS(split(y, 1.0, 1), Error);
}

TEST_CASE("standardizer") {
    Matrix x(3, 2);
    x << 1, 7, 2, 7, 3, 7;
    const auto s = Standardizer::fit(x);
    const Matrix z = s.apply(x);
    CHECK(z(0, 0) == doctest::Approx(-1.224744871391589).epsilon(1e-15));
    CHECK(z(1, 0) == 0.0);
    CHECK(z(2, 0) == doctest::Approx(1.224744871391589).epsilon(1e-15));
    CHECK(z.col(1).isZero());
    Matrix held(2, 2);
    held << 4, 8, 0, 7;
    const Matrix h = s.apply(held);
    // (4 - 2) / sqrt(2/3), (0 - 2) / sqrt(2/3); constant column stays 0.
    CHECK(h(0, 0) == doctest::Approx(2.449489742783178).epsilon(1e-15));
    CHECK(h(1, 0) == doctest::Approx(-2.449489742783178).epsilon(1e-15));
    CHECK(h(0, 1) == 0.0);
    CHECK_THROWS_AS(s.apply(Matrix::Zero(1, 3)), Error);
}

TEST_CASE("auc fixtures") {
    const std::vector<double> s{0.9, 0.8, 0.4, 0.3};
    CHECK(auc(s, labels_of({1, 0, 1, 0})) == 0.75);
    CHECK(auc(s, labels_of({1, 1, 0, 0})) == 1.0);
    const std::vector<double> same{0.5, 0.5, 0.5, 0.5};
    CHECK(auc(same, labels_of({1, 0, 1, 0})) == 0.5);
    CHECK_THROWS_AS(auc(s, labels_of({1, 1, 1, 1})), Error);
}

TEST_CASE("auc equals pair counting on random tied data") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.index(60);
        std::vector<double> scores(n);
        std::vector<int> y(n);
        std::vector<Label> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = static_cast<double>(rng.index(6)) / 5.0;
            y[i] = static_cast<int>(rng.index(2));
        }
        y[0] = 0;
        y[1] = 1;
        for (std::size_t i = 0; i < n; ++i) labels[i] = y[i] ? Label::fake_buyer : Label::organic;
        CHECK(std::abs(auc(scores, labels) - oracle::auc_by_pairs(scores, y)) <= 1e-12);
        CHECK(std::abs(roc_area(roc_curve(scores, labels)) - oracle::auc_by_pairs(scores, y)) <= 1e-12);
    }
}

TEST_CASE("roc curve shape") {
    const std::vector<double> s{0.9, 0.8, 0.4, 0.3};
    const auto roc = roc_curve(s, labels_of({1, 0, 1, 0}));
    REQUIRE(roc.size() == 5);
    CHECK(roc.front().threshold == std::numeric_limits<double>::infinity());
    CHECK(roc.front().fpr == 0.0);
    CHECK(roc.back().fpr == 1.0);
    CHECK(roc.back().tpr == 1.0);
    CHECK(roc_to_csv(roc).rfind("threshold,fpr,tpr\ninf,0,0\n0.9,0,0.5\n", 0) == 0);
}

TEST_CASE("classification report definitions") {
    // tp=3, fp=1, fn=1, tn=5
    const std::vector<double> s{0.9, 0.9, 0.9, 0.9, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
    const auto y = labels_of({1, 1, 1, 0, 1, 0, 0, 0, 0, 0});
    const auto r = classification_report(s, y);
    CHECK(r.tp == 3);
    CHECK(r.fp == 1);
    CHECK(r.fn == 1);
    CHECK(r.tn == 5);
    CHECK(r.precision == 0.75);
    CHECK(r.tpr == 0.75);
    CHECK(r.f1 == 0.75);
    CHECK(r.accuracy == 0.8);
    CHECK(r.tnr == doctest::Approx(5.0 / 6));
}

TEST_CASE("all correct and no predicted positives") {
    const auto y = labels_of({1, 0, 1, 0});
    const std::vector<double> perfect{1, 0, 1, 0};
    const auto r = classification_report(perfect, y);
    CHECK(r.accuracy == 1.0);
    CHECK(r.f1 == 1.0);
    CHECK(r.tpr == 1.0);
    CHECK(r.tnr == 1.0);
    const std::vector<double> none{0.1, 0.1, 0.1, 0.1};
    CHECK(classification_report(none, y).f1 == 0.0);
}

}  // TEST_SUITE
