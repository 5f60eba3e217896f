#include "revnet/logistic.hpp"

#include <algorithm>
#include <cmath>

namespace revnet {

namespace {

constexpr std::string_view kModule = "model";

Eigen::ArrayXd sigmoid(const Eigen::ArrayXd& z) {
    // Split by sign so exp never overflows.
    return z.unaryExpr([](double t) { return t >= 0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t)); });
}

Eigen::ArrayXd targets(std::span<const Label> y) {
    Eigen::ArrayXd t(static_cast<Index>(y.size()));
    for (std::size_t i = 0; i < y.size(); ++i) t[static_cast<Index>(i)] = y[i] == Label::fake_buyer ? 1.0 : 0.0;
    return t;
}

}  // namespace

Vector logistic_gradient(const Matrix& x, std::span<const Label> y, const Vector& w, double b, double l2) {
    const double n = static_cast<double>(x.rows());
    const Eigen::ArrayXd residual = targets(y) - sigmoid((x * w).array() + b);
    Vector g(x.cols() + 1);
    g.head(x.cols()) = x.transpose() * residual.matrix() / n - l2 * w;
    g[x.cols()] = residual.sum() / n;
    return g;
}

LogisticModel train_logistic(const Matrix& x, std::span<const Label> y, double l2, int max_iter, double tol) {
    if (static_cast<std::size_t>(x.rows()) != y.size()) throw Error(kModule, "X rows and y length differ");
    if (x.rows() < 2) throw Error(kModule, "need at least 2 training rows");
    const auto pos = std::count(y.begin(), y.end(), Label::fake_buyer);
    if (pos == 0 || pos == static_cast<std::ptrdiff_t>(y.size())) throw Error(kModule, "training labels contain a single class");
    if (!x.allFinite()) throw Error(kModule, "non-finite feature value");
    if (l2 < 0) throw Error(kModule, "l2 must be non-negative");

    // Hessian of the mean log-likelihood is bounded by X~'X~ / (4n), X~ = [X 1].
    const double n = static_cast<double>(x.rows());
    const double lipschitz = (x.squaredNorm() + n) / (4.0 * n) + l2;
    const double step = 1.0 / lipschitz;

    LogisticModel m;
    m.coefficients = Vector::Zero(x.cols());
    for (int it = 1; it <= max_iter; ++it) {
        const Vector g = logistic_gradient(x, y, m.coefficients, m.intercept, l2);
        m.gradient_norm = g.lpNorm<Eigen::Infinity>();
        m.iterations = it;
        if (m.gradient_norm <= tol) return m;
        m.coefficients += step * g.head(x.cols());
        m.intercept += step * g[x.cols()];
    }
    throw Error(kModule, "logistic regression did not converge in " + std::to_string(max_iter) +
                             " iterations (gradient max-norm " + format_number(m.gradient_norm) + ")");
}

Vector predict_logistic(const LogisticModel& model, const Matrix& x) {
    if (x.cols() != model.coefficients.size()) throw Error(kModule, "column count differs from the fitted model");
    return sigmoid((x * model.coefficients).array() + model.intercept).matrix();
}

}  // namespace revnet
