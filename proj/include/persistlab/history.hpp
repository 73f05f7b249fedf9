#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "persistlab/population.hpp"
#include "persistlab/rng.hpp"

namespace persistlab {

// Cost of treatment as a function of the instrument and the interacting
// historical process s_tau. The reversal feedback lowers the cost in the
// z=0 arm over time, loaded on each location's latent trait, which is how
// defiers can arise alongside compliers.
struct CostSchedule {
    double cost_z0 = 1.0;
    double cost_z1 = 0.0;
    double shock_sensitivity = 0.0;
    bool reversal_feedback = false;
    double feedback_magnitude = 0.0;

    double base(int z) const { return z >= 1 ? cost_z1 : cost_z0; }
};

// Outcome / innovation noise: y = alpha + beta*x + u,  x_t = rho*x_{t-h} + eps.
struct NoiseModel {
    double alpha = 0.0;
    double u_sd = 0.0;
    double eps_sd = 0.0;

    void validate() const {
        if (u_sd < 0.0 || eps_sd < 0.0)
            throw std::invalid_argument("NoiseModel: sds must be >= 0");
        if (!std::isfinite(alpha))
            throw std::invalid_argument("NoiseModel: non-finite alpha");
    }
};

// i.i.d. innovations of the interacting process s_tau.
struct ShockProcess {
    double lo = 0.0;
    double hi = 1.0;

    double draw(std::uint64_t seed, std::size_t i, std::uint64_t tau) const {
        return lo + (hi - lo) * rng::uniform(seed, i, rng::Stream::shock, tau);
    }
};

// One realized cross-section.
struct SimulatedPanel {
    std::vector<int> z;
    std::vector<int> x_hist;
    std::vector<int> x_now;
    std::vector<int> proxy;
    std::vector<double> x_now_real;  // continuous-treatment scenarios
    std::vector<double> outcome;
};

struct ComplianceCounts {
    std::size_t always_takers = 0;
    std::size_t never_takers = 0;
    std::size_t compliers = 0;
    std::size_t defiers = 0;

    std::size_t total() const {
        return always_takers + never_takers + compliers + defiers;
    }
};

enum class ComplianceLabel { always_taker, never_taker, complier, defier };

// Cutoff take-up at t-h: treated iff benefit covers the cost; ties take.
inline std::vector<int> takeup_baseline(const Population& pop,
                                        const CostSchedule& costs,
                                        const std::vector<int>& z) {
    if (!std::isfinite(costs.cost_z0) || !std::isfinite(costs.cost_z1))
        throw std::invalid_argument("takeup_baseline: non-finite costs");
    if (z.size() != pop.size())
        throw std::invalid_argument("takeup_baseline: size mismatch");
    std::vector<int> x(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i)
        x[i] = pop.benefit[i] >= costs.base(z[i]) ? 1 : 0;
    return x;
}

inline std::vector<int> evolve_perfect_persistence(std::vector<int> x_hist) {
    return x_hist;
}

namespace detail {

// Absorbing take-up with per-period cost c(z, s_tau). When with_feedback
// is set, the z=0 arm gets an extra trait-scaled cost reduction.
inline std::vector<int> evolve_absorbing(const Population& pop,
                                         const CostSchedule& costs,
                                         const std::vector<int>& z,
                                         const ShockProcess& s_process,
                                         int horizon, std::uint64_t seed,
                                         bool with_feedback) {
    if (horizon < 1)
        throw std::invalid_argument("evolve: horizon must be >= 1");
    if (z.size() != pop.size())
        throw std::invalid_argument("evolve: size mismatch");
    std::vector<int> x(pop.size(), 0);
    for (std::size_t i = 0; i < pop.size(); ++i) {
        for (int tau = 0; tau < horizon; ++tau) {
            const double s =
                s_process.draw(seed, i, static_cast<std::uint64_t>(tau));
            double cost = costs.base(z[i]) + costs.shock_sensitivity * s;
            if (with_feedback && z[i] == 0)
                cost -= costs.feedback_magnitude * pop.latent_trait[i] * s;
            if (pop.benefit[i] >= cost) {
                x[i] = 1;
                break;  // absorbing
            }
        }
    }
    return x;
}

}  // namespace detail

inline std::vector<int> evolve_dynamic_takeup(const Population& pop,
                                              const CostSchedule& costs,
                                              const std::vector<int>& z,
                                              const ShockProcess& s_process,
                                              int horizon, std::uint64_t seed) {
    return detail::evolve_absorbing(pop, costs, z, s_process, horizon, seed,
                                    /*with_feedback=*/false);
}

inline std::vector<int> evolve_with_reversal_channel(
    const Population& pop, const CostSchedule& costs, const std::vector<int>& z,
    const ShockProcess& s_process, int horizon, std::uint64_t seed) {
    if (!costs.reversal_feedback)
        throw std::invalid_argument(
            "evolve_with_reversal_channel: reversal_feedback not enabled");
    return detail::evolve_absorbing(pop, costs, z, s_process, horizon, seed,
                                    /*with_feedback=*/true);
}

// One aggregated h-lag transition: Pr(x_t=1|x_{t-h}=0) = 1-p_i,
// Pr(x_t=1|x_{t-h}=1) = q_i. The same uniform draw serves both arms so
// counterfactual classification uses common random numbers.
inline std::vector<int> evolve_markov_persistence(const Population& pop,
                                                  const std::vector<int>& x_hist,
                                                  std::uint64_t seed) {
    if (x_hist.size() != pop.size())
        throw std::invalid_argument("evolve_markov_persistence: size mismatch");
    std::vector<int> x(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const double p = pop.persist_p[i];
        const double q = pop.persist_q[i];
        if (p < 0.0 || p > 1.0 || q < 0.0 || q > 1.0)
            throw std::invalid_argument(
                "evolve_markov_persistence: probability outside [0,1]");
        const double u = rng::uniform(seed, i, rng::Stream::markov);
        x[i] = x_hist[i] == 1 ? (u < q ? 1 : 0) : (u < 1.0 - p ? 1 : 0);
    }
    return x;
}

// x_t = rho_i * x_{t-h} + eps_i.
inline std::vector<double> continuous_ar_step(const Population& pop,
                                              const std::vector<double>& x_hist,
                                              const NoiseModel& noise,
                                              std::uint64_t seed) {
    noise.validate();
    if (x_hist.size() != pop.size())
        throw std::invalid_argument("continuous_ar_step: size mismatch");
    std::vector<double> x(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        if (!std::isfinite(x_hist[i]))
            throw std::invalid_argument("continuous_ar_step: non-finite input");
        double eps = noise.eps_sd == 0.0
                         ? 0.0
                         : noise.eps_sd * rng::normal(seed, i, rng::Stream::eps);
        x[i] = pop.rho[i] * x_hist[i] + eps;
    }
    return x;
}

// p = 1 iff x > x_tilde; equality maps to 0.
inline std::vector<int> proxy_from_threshold(const std::vector<double>& x_hist,
                                             double x_tilde) {
    std::vector<int> p(x_hist.size());
    for (std::size_t i = 0; i < x_hist.size(); ++i)
        p[i] = x_hist[i] > x_tilde ? 1 : 0;
    return p;
}

// y = alpha + beta_i * x_i + u_i.
inline std::vector<double> outcome(const Population& pop,
                                   const std::vector<double>& x_now,
                                   const NoiseModel& noise,
                                   std::uint64_t seed) {
    noise.validate();
    if (x_now.size() != pop.size())
        throw std::invalid_argument("outcome: size mismatch");
    std::vector<double> y(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        double u = noise.u_sd == 0.0
                       ? 0.0
                       : noise.u_sd *
                             rng::normal(seed, i, rng::Stream::outcome_noise);
        y[i] = noise.alpha + pop.return_beta[i] * x_now[i] + u;
    }
    return y;
}

inline std::vector<double> outcome(const Population& pop,
                                   const std::vector<int>& x_now,
                                   const NoiseModel& noise,
                                   std::uint64_t seed) {
    return outcome(pop, std::vector<double>(x_now.begin(), x_now.end()), noise,
                   seed);
}

}  // namespace persistlab
