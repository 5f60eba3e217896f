#pragma once

#include "revnet/common.hpp"

#include <span>
#include <string>
#include <vector>

namespace revnet {

/// Z-scoring learned from training rows only. Zero-variance columns map to 0.
class Standardizer {
public:
    Standardizer() = default;
    Standardizer(Vector mean, Vector scale) : mean_(std::move(mean)), scale_(std::move(scale)) {}

    /// Population (divide-by-n) standard deviation.
    static Standardizer fit(const Matrix& train);

    template <typename Derived>
    Matrix apply(const Eigen::MatrixBase<Derived>& x) const {
        if (x.cols() != mean_.size()) throw Error("eval", "standardizer expects " + std::to_string(mean_.size()) +
                                                              " columns, got " + std::to_string(x.cols()));
        Matrix out = x.rowwise() - mean_.transpose();
        for (Index c = 0; c < out.cols(); ++c) {
            if (scale_[c] > 0.0) {
                out.col(c) /= scale_[c];
            } else {
                out.col(c).setZero();
            }
        }
        return out;
    }

    const Vector& mean() const { return mean_; }
    /// Standard deviation per column; 0 marks a zero-variance column.
    const Vector& scale() const { return scale_; }
    Index dimension() const { return mean_.size(); }

private:
    Vector mean_;
    Vector scale_;
};

struct Split {
    std::vector<Index> train;  // ascending
    std::vector<Index> test;   // ascending
};

/// Random train/test split of n = labels.size() rows. Train receives
/// floor(n (1 - test_fraction)) rows. Stratified mode allocates the train
/// quota per class by largest remainder.
Split split(std::span<const Label> labels, double test_fraction = 0.2, std::uint64_t seed = 42, bool stratified = false);

/// Mann-Whitney AUC with half credit for ties.
double auc(std::span<const double> scores, std::span<const Label> labels);

struct RocPoint {
    double threshold;
    double fpr;
    double tpr;
};

/// ROC through every distinct score, threshold descending, starting at
/// (+inf, 0, 0).
std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const Label> labels);

/// Trapezoidal area under a ROC curve.
double roc_area(const std::vector<RocPoint>& roc);

struct EvalReport {
    double auc = 0, accuracy = 0, tnr = 0, tpr = 0, f1 = 0, precision = 0;
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::vector<RocPoint> roc;
};

/// Predicted positive when score >= threshold. F1 is 0 when there are no
/// true positives.
EvalReport classification_report(std::span<const double> scores, std::span<const Label> labels, double threshold = 0.5);

std::string roc_to_csv(const std::vector<RocPoint>& roc);

}  // namespace revnet
