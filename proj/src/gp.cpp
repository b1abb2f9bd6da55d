#include "lpqa/gp.hpp"

#include <cmath>
#include <stdexcept>

namespace lpqa {

GaussianProcess::GaussianProcess(KernelType kernel, double length_scale, double noise)
    : kernel_type_(kernel), length_scale_(length_scale), noise_(noise) {
    if (length_scale <= 0.0) throw std::invalid_argument("length_scale must be > 0");
    if (noise < 0.0) throw std::invalid_argument("noise must be >= 0");
}

double GaussianProcess::kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    const double r = (a - b).norm() / length_scale_;
    if (kernel_type_ == KernelType::SquaredExponential) {
        return std::exp(-0.5 * r * r);
    }
    const double s = std::sqrt(5.0) * r;
    return (1.0 + s + s * s / 3.0) * std::exp(-s);
}

void GaussianProcess::fit(const std::vector<Eigen::VectorXd>& points,
                          const std::vector<double>& values) {
    if (points.size() < 2 || points.size() != values.size())
        throw std::invalid_argument("GP fit needs >= 2 observations");
    points_ = points;
    const auto n = static_cast<Eigen::Index>(points.size());

    prior_mean_ = 0.0;
    for (double v : values) prior_mean_ += v;
    prior_mean_ /= static_cast<double>(n);

    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            K(i, j) = K(j, i) = kernel(points[i], points[j]);
        }
        K(i, i) += noise_ + 1e-12;  // jitter
    }
    chol_.compute(K);
    if (chol_.info() != Eigen::Success)
        throw std::runtime_error("singular kernel matrix in GP fit");

    Eigen::VectorXd centered(n);
    for (Eigen::Index i = 0; i < n; ++i) centered(i) = values[i] - prior_mean_;
    alpha_ = chol_.solve(centered);
}

GaussianProcess::Posterior GaussianProcess::predict(const Eigen::VectorXd& query) const {
    const auto n = static_cast<Eigen::Index>(points_.size());
    Eigen::VectorXd k(n);
    for (Eigen::Index i = 0; i < n; ++i) k(i) = kernel(query, points_[i]);
    const double mean = prior_mean_ + k.dot(alpha_);
    const Eigen::VectorXd v = chol_.solve(k);
    const double variance = std::max(0.0, kernel(query, query) - k.dot(v));
    return {mean, variance};
}

double expected_improvement(double mean, double variance, double best) {
    const double s = std::sqrt(std::max(variance, 0.0));
    if (s < 1e-12) return std::max(0.0, mean - best);
    const double gamma = (mean - best) / s;
    const double cdf = 0.5 * std::erfc(-gamma / std::sqrt(2.0));
    const double pdf = std::exp(-0.5 * gamma * gamma) / std::sqrt(2.0 * M_PI);
    return s * (gamma * cdf + pdf);
}

}  // namespace lpqa
