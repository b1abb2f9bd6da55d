#include "lpqa/bayesopt.hpp"

#include <algorithm>
#include <stdexcept>

namespace lpqa {

namespace {
constexpr int kDim = 9;
}

Eigen::VectorXd theta_to_unit(const ThetaParams& t) {
    Eigen::VectorXd u(kDim);
    u << t.vw, t.ew, t.gr, t.ar, t.aa, t.ga, t.qg, t.qa, t.gg + 1.0;
    return u;
}

ThetaParams unit_to_theta(const Eigen::VectorXd& u) {
    ThetaParams t;
    t.vw = u(0);
    t.ew = u(1);
    t.gr = u(2);
    t.ar = u(3);
    t.aa = u(4);
    t.ga = u(5);
    t.qg = u(6);
    t.qa = u(7);
    t.gg = u(8) - 1.0;
    return t;
}

namespace {

Eigen::VectorXd clamp_unit(Eigen::VectorXd u) {
    for (int i = 0; i < u.size(); ++i) u(i) = std::clamp(u(i), 0.0, 1.0);
    return u;
}

Eigen::VectorXd random_unit(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Eigen::VectorXd u(kDim);
    for (int i = 0; i < kDim; ++i) u(i) = uni(rng);
    return u;
}

}  // namespace

ThetaParams propose_next(const BoTrace& trace, const BoConfig& cfg,
                         std::mt19937_64& rng) {
    if (trace.evaluations.empty())
        throw std::invalid_argument("propose_next needs a nonempty trace");

    std::vector<Eigen::VectorXd> points;
    std::vector<double> values;
    double incumbent = trace.evaluations.front().value;
    for (const auto& ev : trace.evaluations) {
        points.push_back(theta_to_unit(ev.theta));
        values.push_back(ev.value);
        incumbent = std::max(incumbent, ev.value);
    }

    GaussianProcess gp(cfg.kernel, cfg.length_scale, cfg.noise);
    gp.fit(points, values);

    auto ei_at = [&](const Eigen::VectorXd& u) {
        const auto post = gp.predict(u);
        return expected_improvement(post.mean, post.variance, incumbent);
    };

    Eigen::VectorXd best_u = clamp_unit(random_unit(rng));
    double best_ei = ei_at(best_u);
    for (int r = 0; r < cfg.acq_restarts; ++r) {
        Eigen::VectorXd u = random_unit(rng);
        double ei = ei_at(u);
        // Coordinate descent with shrinking steps.
        for (double step = 0.25; step > 1e-3; step *= 0.5) {
            bool improved = true;
            while (improved) {
                improved = false;
                for (int d = 0; d < kDim; ++d) {
                    for (double dir : {+1.0, -1.0}) {
                        Eigen::VectorXd cand = u;
                        cand(d) = std::clamp(cand(d) + dir * step, 0.0, 1.0);
                        const double cand_ei = ei_at(cand);
                        if (cand_ei > ei + 1e-15) {
                            u = cand;
                            ei = cand_ei;
                            improved = true;
                        }
                    }
                }
            }
        }
        if (ei > best_ei) {
            best_ei = ei;
            best_u = u;
        }
    }
    return unit_to_theta(best_u);
}

BoTrace optimize(const Objective& objective, const BoConfig& cfg) {
    if (cfg.n_initial < 2)
        throw std::invalid_argument("n_initial must be >= 2");
    std::mt19937_64 rng(cfg.seed);

    BoTrace trace;
    auto record = [&](const ThetaParams& theta) {
        const double value = objective(theta);
        trace.evaluations.push_back({theta, value});
        if (trace.evaluations.size() == 1 || value > trace.best.value)
            trace.best = trace.evaluations.back();
    };

    for (int i = 0; i < cfg.n_initial; ++i) record(unit_to_theta(random_unit(rng)));
    for (int i = 0; i < cfg.n_iterations; ++i)
        record(propose_next(trace, cfg, rng));
    return trace;
}

}  // namespace lpqa
