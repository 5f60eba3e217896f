#include "revnet/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace revnet {

namespace {

constexpr std::string_view kModule = "eval";

void check_inputs(std::span<const double> scores, std::span<const Label> labels) {
    if (scores.size() != labels.size()) throw Error(kModule, "scores and labels differ in length");
    const auto pos = std::count(labels.begin(), labels.end(), Label::fake_buyer);
    if (pos == 0 || pos == static_cast<std::ptrdiff_t>(labels.size()))
        throw Error(kModule, "both classes must be present");
    for (double s : scores)
        if (std::isnan(s)) throw Error(kModule, "NaN score");
}

void shuffle(std::vector<Index>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.index(i)]);
}

}  // namespace

Standardizer Standardizer::fit(const Matrix& train) {
    if (train.rows() == 0) throw Error(kModule, "cannot fit a standardizer on zero rows");
    Vector mean = train.colwise().mean().transpose();
    Vector scale(train.cols());
    for (Index c = 0; c < train.cols(); ++c) {
        const double var = (train.col(c).array() - mean[c]).square().mean();
        const double sd = std::sqrt(var);
        // Columns whose spread is rounding noise relative to their magnitude
        // count as constant.
        scale[c] = sd > 1e-12 * std::max(1.0, std::abs(mean[c])) ? sd : 0.0;
    }
    return Standardizer(std::move(mean), std::move(scale));
}

Split split(std::span<const Label> labels, double test_fraction, std::uint64_t seed, bool stratified) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw Error(kModule, "test_fraction must lie in (0, 1)");
    const std::size_t n = labels.size();
    const auto pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::fake_buyer));
    if (pos == 0 || pos == n) throw Error(kModule, "both classes must be present to split");
    const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * (1.0 - test_fraction) + 1e-9));
    if (n_train == 0 || n_train == n)
        throw Error(kModule, "split of " + std::to_string(n) + " rows leaves one side empty");

    Rng rng(seed);
    Split out;
    if (!stratified) {
        std::vector<Index> order(n);
        std::iota(order.begin(), order.end(), Index{0});
        shuffle(order, rng);
        out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
        out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    } else {
        std::vector<Index> by_class[2];
        for (std::size_t i = 0; i < n; ++i) by_class[static_cast<int>(labels[i])].push_back(static_cast<Index>(i));
        double exact[2];
        std::size_t quota[2];
        for (int c = 0; c < 2; ++c) {
            exact[c] = static_cast<double>(by_class[c].size()) * static_cast<double>(n_train) / static_cast<double>(n);
            quota[c] = static_cast<std::size_t>(std::floor(exact[c]));
        }
        if (quota[0] + quota[1] < n_train) {
            // Largest remainder; class 1 wins exact ties.
            const int c = (exact[1] - static_cast<double>(quota[1]) >= exact[0] - static_cast<double>(quota[0])) ? 1 : 0;
            ++quota[c];
        }
        for (int c = 0; c < 2; ++c) {
            shuffle(by_class[c], rng);
            out.train.insert(out.train.end(), by_class[c].begin(), by_class[c].begin() + static_cast<std::ptrdiff_t>(quota[c]));
            out.test.insert(out.test.end(), by_class[c].begin() + static_cast<std::ptrdiff_t>(quota[c]), by_class[c].end());
        }
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

double auc(std::span<const double> scores, std::span<const Label> labels) {
    check_inputs(scores, labels);
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Count pairs directly per tie block: every negative below a positive
    // scores 1, negatives in the same block score 1/2. Integer-exact until the
    // final division.
    double n_pos = 0, n_neg = 0;
    double negatives_below = 0;
    double wins = 0;  // doubled to keep ties integral
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        double block_pos = 0, block_neg = 0;
        while (j < n && scores[order[j]] == scores[order[i]]) {
            (labels[order[j]] == Label::fake_buyer ? block_pos : block_neg) += 1;
            ++j;
        }
        wins += block_pos * (2.0 * negatives_below + block_neg);
        negatives_below += block_neg;
        n_pos += block_pos;
        n_neg += block_neg;
        i = j;
    }
    return wins / (2.0 * n_pos * n_neg);
}

std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const Label> labels) {
    check_inputs(scores, labels);
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    const double n_pos = static_cast<double>(std::count(labels.begin(), labels.end(), Label::fake_buyer));
    const double n_neg = static_cast<double>(n) - n_pos;

    std::vector<RocPoint> roc{{std::numeric_limits<double>::infinity(), 0.0, 0.0}};
    double tp = 0, fp = 0;
    for (std::size_t i = 0; i < n;) {
        const double s = scores[order[i]];
        while (i < n && scores[order[i]] == s) {
            (labels[order[i]] == Label::fake_buyer ? tp : fp) += 1;
            ++i;
        }
        roc.push_back({s, fp / n_neg, tp / n_pos});
    }
    return roc;
}

double roc_area(const std::vector<RocPoint>& roc) {
    double area = 0.0;
    for (std::size_t i = 1; i < roc.size(); ++i)
        area += (roc[i].fpr - roc[i - 1].fpr) * (roc[i].tpr + roc[i - 1].tpr) / 2.0;
    return area;
}

EvalReport classification_report(std::span<const double> scores, std::span<const Label> labels, double threshold) {
    check_inputs(scores, labels);
    EvalReport r;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool predicted = scores[i] >= threshold;
        const bool actual = labels[i] == Label::fake_buyer;
        if (predicted && actual) ++r.tp;
        else if (predicted) ++r.fp;
        else if (actual) ++r.fn;
        else ++r.tn;
    }
    const auto d = [](std::size_t x) { return static_cast<double>(x); };
    r.accuracy = d(r.tp + r.tn) / d(r.tp + r.tn + r.fp + r.fn);
    r.tpr = d(r.tp) / d(r.tp + r.fn);
    r.tnr = d(r.tn) / d(r.tn + r.fp);
    r.precision = r.tp + r.fp > 0 ? d(r.tp) / d(r.tp + r.fp) : 0.0;
    r.f1 = r.tp > 0 ? 2.0 * r.precision * r.tpr / (r.precision + r.tpr) : 0.0;
    r.auc = auc(scores, labels);
    r.roc = roc_curve(scores, labels);
    return r;
}

std::string roc_to_csv(const std::vector<RocPoint>& roc) {
    std::string out = "threshold,fpr,tpr\n";
    for (const auto& p : roc) out += format_number(p.threshold) + "," + format_number(p.fpr) + "," + format_number(p.tpr) + "\n";
    return out;
}

}  // namespace revnet
