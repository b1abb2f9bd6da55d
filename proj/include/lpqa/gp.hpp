#pragma once

#include <vector>

#include <Eigen/Dense>

namespace lpqa {

enum class KernelType { SquaredExponential, Matern52 };

/// Zero-jitter-free GP regression on the unit box. The prior mean is the
/// empirical mean of the observed values; signal variance is 1.
class GaussianProcess {
public:
    GaussianProcess(KernelType kernel, double length_scale, double noise);

    /// Requires >= 2 observations. Throws on a numerically singular kernel
    /// matrix (identical points, conflicting values, zero noise).
    void fit(const std::vector<Eigen::VectorXd>& points,
             const std::vector<double>& values);

    struct Posterior {
        double mean = 0.0;
        double variance = 0.0;
    };
    Posterior predict(const Eigen::VectorXd& query) const;

    double kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

private:
    KernelType kernel_type_;
    double length_scale_;
    double noise_;
    std::vector<Eigen::VectorXd> points_;
    double prior_mean_ = 0.0;
    Eigen::VectorXd alpha_;
    Eigen::LLT<Eigen::MatrixXd> chol_;
};

/// Expected improvement for maximization given a posterior and incumbent.
double expected_improvement(double mean, double variance, double best);

}  // namespace lpqa
