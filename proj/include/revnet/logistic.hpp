#pragma once

#include "revnet/common.hpp"

#include <span>

namespace revnet {

struct LogisticModel {
    Vector coefficients;
    double intercept = 0.0;
    int iterations = 0;
    double gradient_norm = 0.0;  // max-norm of the final gradient
};

/// Maximizes mean log-likelihood - (l2 / 2) |w|^2 (intercept unpenalized) by
/// batch gradient ascent with step 1/L, L an upper bound on the curvature.
/// Stops when the gradient max-norm drops below tol.
LogisticModel train_logistic(const Matrix& x, std::span<const Label> y, double l2 = 1e-2, int max_iter = 100000,
                             double tol = 1e-8);

/// Gradient of the penalized objective: (d/dw, d/db) stacked, intercept last.
Vector logistic_gradient(const Matrix& x, std::span<const Label> y, const Vector& coefficients, double intercept,
                         double l2);

Vector predict_logistic(const LogisticModel& model, const Matrix& x);

}  // namespace revnet
