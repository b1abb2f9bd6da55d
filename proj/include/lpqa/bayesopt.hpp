#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "lpqa/gp.hpp"
#include "lpqa/graph.hpp"

namespace lpqa {

struct BoConfig {
    int n_initial = 10;
    int n_iterations = 50;
    KernelType kernel = KernelType::Matern52;
    double length_scale = 0.3;  // on the unit box
    double noise = 1e-4;
    int acq_restarts = 16;
    std::uint64_t seed = 0;
};

struct BoTrace {
    struct Evaluation {
        ThetaParams theta;
        double value = 0.0;
    };
    std::vector<Evaluation> evaluations;
    Evaluation best;
};

/// Map theta to/from the optimizer's unit box (gg rescaled from [-1,0]).
Eigen::VectorXd theta_to_unit(const ThetaParams& theta);
ThetaParams unit_to_theta(const Eigen::VectorXd& u);

/// EI-maximizing next point: multi-start random seeds polished by
/// coordinate descent with shrinking steps, clamped to the unit box.
ThetaParams propose_next(const BoTrace& trace, const BoConfig& cfg,
                         std::mt19937_64& rng);

using Objective = std::function<double(const ThetaParams&)>;

/// Random initial design, then sequential propose-and-evaluate.
BoTrace optimize(const Objective& objective, const BoConfig& cfg);

}  // namespace lpqa
