#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "persistlab/estimators.hpp"
#include "persistlab/scenarios.hpp"

// Closed-form population limits of the estimators, computed from scenario
// parameters without simulation. These are the ground truth the sampled
// estimates are verified against.

namespace persistlab {

struct OracleValues {
    double wald_limit = std::numeric_limits<double>::quiet_NaN();
    double late = std::numeric_limits<double>::quiet_NaN();
    double ate = std::numeric_limits<double>::quiet_NaN();
    double first_stage_limit = std::numeric_limits<double>::quiet_NaN();
    std::string notes;
};

struct ScenarioInconsistencyError : std::runtime_error {
    explicit ScenarioInconsistencyError(const std::string& what)
        : std::runtime_error("scenario inconsistency: " + what) {}
};

// Two-type cutoff model. With c1 < beta_l < c0 < beta_h the l-types comply
// and the Wald limit is beta_l; under the swapped cost structure the h-types
// comply and it is beta_h.
inline OracleValues oracle_two_type(double pi_h, double beta_h, double beta_l,
                                    double c0, double c1) {
    OracleValues v;
    v.ate = pi_h * beta_h + (1.0 - pi_h) * beta_l;
    if (c1 < beta_l && beta_l < c0 && c0 < beta_h) {
        v.wald_limit = beta_l;
        v.first_stage_limit = 1.0 - pi_h;
        v.notes = "two-type cutoff: compliers are the low-return type";
    } else if (beta_l < c1 && c1 <= beta_h && beta_h < c0) {
        v.wald_limit = beta_h;
        v.first_stage_limit = pi_h;
        v.notes = "two-type cutoff: compliers are the high-return type";
    } else {
        throw ScenarioInconsistencyError(
            "cost structure matches neither two-type compliance pattern");
    }
    v.late = v.wald_limit;
    return v;
}

// Wald limit when compliers and defiers coexist: a weighted average of the
// two conditional means where one weight is negative.
inline double oracle_defier(double pi_c, double pi_d, double mean_beta_c,
                            double mean_beta_d) {
    if (pi_c < 0.0 || pi_c >= 1.0 || pi_d < 0.0 || pi_d >= 1.0)
        throw std::invalid_argument("oracle_defier: masses must be in [0,1)");
    if (std::abs(pi_c - pi_d) < kWeakFirstStageTol) throw WeakFirstStageError{};
    const double denom = pi_c - pi_d;
    return mean_beta_c * pi_c / denom - mean_beta_d * pi_d / denom;
}

// Heterogeneous one-step Markov persistence:
//   wald = sum_i pi_i beta_i (p_i+q_i-1) / sum_i pi_i (p_i+q_i-1).
inline OracleValues oracle_markov(const std::vector<double>& pi,
                                  const std::vector<double>& beta,
                                  const std::vector<double>& p,
                                  const std::vector<double>& q) {
    const std::size_t k = pi.size();
    if (beta.size() != k || p.size() != k || q.size() != k || k == 0)
        throw std::invalid_argument("oracle_markov: size mismatch");
    double pi_sum = 0.0, num = 0.0, den = 0.0, ate = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        if (p[i] < 0.0 || p[i] > 1.0 || q[i] < 0.0 || q[i] > 1.0)
            throw std::invalid_argument("oracle_markov: p,q must be in [0,1]");
        pi_sum += pi[i];
        const double w = p[i] + q[i] - 1.0;
        num += pi[i] * beta[i] * w;
        den += pi[i] * w;
        ate += pi[i] * beta[i];
    }
    if (std::abs(pi_sum - 1.0) > 1e-12)
        throw std::invalid_argument("oracle_markov: pi must sum to 1");
    if (std::abs(den) < kWeakFirstStageTol) throw WeakFirstStageError{};
    OracleValues v;
    v.wald_limit = num / den;
    v.late = v.wald_limit;
    v.ate = ate;
    v.first_stage_limit = den;
    v.notes = "markov transition wald formula";
    return v;
}

// One piece of the latent-trait law with its persistence coefficient.
struct TraitSegment {
    double weight = 1.0;
    bool atom = true;
    double lo = 0.0;  // atom value when atom==true
    double hi = 0.0;
    double rho = 0.0;
};

// E(rho x | x > x_tilde) - E(rho x | x <= x_tilde), exact over atoms and
// piecewise-uniform intervals.
inline double oracle_rho_reduced(const std::vector<TraitSegment>& segments,
                                 double x_tilde) {
    double mass_hi = 0.0, mass_lo = 0.0, sum_hi = 0.0, sum_lo = 0.0;
    for (const auto& s : segments) {
        if (s.weight <= 0.0)
            throw std::invalid_argument("oracle_rho_reduced: bad weight");
        if (s.atom) {
            if (s.lo > x_tilde) {
                mass_hi += s.weight;
                sum_hi += s.weight * s.rho * s.lo;
            } else {
                mass_lo += s.weight;
                sum_lo += s.weight * s.rho * s.lo;
            }
        } else {
            if (!(s.lo < s.hi))
                throw std::invalid_argument(
                    "oracle_rho_reduced: bad interval");
            const double len = s.hi - s.lo;
            const double a = std::min(std::max(x_tilde, s.lo), s.hi);
            // below-threshold part [lo, a], above part (a, hi]
            if (a > s.lo) {
                const double m = s.weight * (a - s.lo) / len;
                mass_lo += m;
                sum_lo += s.weight * s.rho * (a * a - s.lo * s.lo) / (2.0 * len);
            }
            if (a < s.hi) {
                const double m = s.weight * (s.hi - a) / len;
                mass_hi += m;
                sum_hi += s.weight * s.rho * (s.hi * s.hi - a * a) / (2.0 * len);
            }
        }
    }
    if (mass_hi <= 0.0 || mass_lo <= 0.0)
        throw std::runtime_error("oracle_rho_reduced: empty proxy cell");
    return sum_hi / mass_hi - sum_lo / mass_lo;
}

// Convenience form: trait atoms with rho assigned by threshold at x_bar
// (rho_hi above, rho_lo at or below), or homogeneous when rho_lo == rho_hi.
inline double oracle_rho_reduced(const std::vector<double>& atoms,
                                 const std::vector<double>& weights,
                                 double x_tilde, double x_bar, double rho_lo,
                                 double rho_hi) {
    if (atoms.size() != weights.size() || atoms.empty())
        throw std::invalid_argument("oracle_rho_reduced: size mismatch");
    std::vector<TraitSegment> segs;
    for (std::size_t i = 0; i < atoms.size(); ++i)
        segs.push_back({weights[i], true, atoms[i], atoms[i],
                        atoms[i] > x_bar ? rho_hi : rho_lo});
    return oracle_rho_reduced(segs, x_tilde);
}

namespace detail {

// Deterministic per-type compliance for the cutoff-style mechanisms.
struct TypeArms {
    bool treated_z0 = false;
    bool treated_z1 = false;
};

inline TypeArms cutoff_arms(const ScenarioConfig& cfg, const MixComponent& c) {
    TypeArms arms;
    switch (cfg.mechanism) {
        case Mechanism::baseline_cutoff:
        case Mechanism::instrumented_proxy:
            arms.treated_z0 = c.profile.benefit >= cfg.costs.cost_z0;
            arms.treated_z1 = c.profile.benefit >= cfg.costs.cost_z1;
            break;
        case Mechanism::dynamic_takeup: {
            if (cfg.costs.shock_sensitivity != 0.0)
                throw std::runtime_error(
                    "no closed-form oracle for dynamic take-up with nonzero "
                    "shock sensitivity");
            arms.treated_z0 = c.profile.benefit >= cfg.costs.cost_z0;
            arms.treated_z1 = c.profile.benefit >= cfg.costs.cost_z1;
            break;
        }
        case Mechanism::reversal: {
            if (cfg.costs.shock_sensitivity != 0.0)
                throw std::runtime_error(
                    "no closed-form oracle for reversal with nonzero shock "
                    "sensitivity");
            if (c.trait.kind != TraitLaw::Kind::constant)
                throw std::runtime_error(
                    "reversal oracle needs constant per-type traits");
            arms.treated_z1 = c.profile.benefit >= cfg.costs.cost_z1;
            // Long-horizon limit: sup of the feedback shock approaches
            // shock.hi, so the z=0 cost floor is c0 - magnitude*trait*hi.
            const double floor =
                cfg.costs.cost_z0 -
                cfg.costs.feedback_magnitude * c.trait.value * cfg.shock.hi;
            arms.treated_z0 = c.profile.benefit >= cfg.costs.cost_z0 ||
                              (cfg.costs.feedback_magnitude * c.trait.value >
                                   0.0 &&
                               c.profile.benefit > floor);
            break;
        }
        default:
            throw std::logic_error("cutoff_arms: not a cutoff mechanism");
    }
    return arms;
}

}  // namespace detail

// Population limit of the pairwise Wald for the ternary-instrument model:
// taker types sit at the optimum (x=1, return accrues) for every z, the
// rest track z mechanically and earn the return only at z=1.
inline double oracle_pairwise_ternary(const ScenarioConfig& cfg, int low,
                                      int high) {
    if (cfg.instrument.kind != InstrumentRule::Kind::ternary_uniform)
        throw std::invalid_argument(
            "oracle_pairwise_ternary: not a ternary scenario");
    double ex[3] = {0, 0, 0}, ey[3] = {0, 0, 0};
    for (const auto& c : cfg.mix.components) {
        const bool taker = c.profile.benefit >= cfg.costs.cost_z0;
        for (int z = 0; z < 3; ++z) {
            const double x = taker ? 1.0 : static_cast<double>(z);
            ex[z] += c.proportion * x;
            ey[z] += c.proportion *
                     (x == 1.0 ? c.profile.return_beta : 0.0);
        }
    }
    const double den = ex[high] - ex[low];
    if (std::abs(den) < kWeakFirstStageTol) throw WeakFirstStageError{};
    return (ey[high] - ey[low]) / den;
}

// Dispatch to the closed form matching the scenario's mechanism.
inline OracleValues oracle_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    OracleValues v;

    switch (cfg.mechanism) {
        case Mechanism::baseline_cutoff:
        case Mechanism::dynamic_takeup:
        case Mechanism::reversal: {
            if (cfg.instrument.kind == InstrumentRule::Kind::ternary_uniform) {
                v.wald_limit = oracle_pairwise_ternary(cfg, 0, 1);
                v.late = v.wald_limit;
                double a = 0.0;
                for (const auto& c : cfg.mix.components)
                    a += c.proportion * c.profile.return_beta;
                v.ate = a;
                v.notes =
                    "ternary diversity model, pairwise wald on the (0,1) arm";
                return v;
            }
            double pi_c = 0.0, pi_d = 0.0, sum_c = 0.0, sum_d = 0.0, a = 0.0;
            for (const auto& c : cfg.mix.components) {
                const auto arms = detail::cutoff_arms(cfg, c);
                a += c.proportion * c.profile.return_beta;
                if (arms.treated_z1 && !arms.treated_z0) {
                    pi_c += c.proportion;
                    sum_c += c.proportion * c.profile.return_beta;
                } else if (arms.treated_z0 && !arms.treated_z1) {
                    pi_d += c.proportion;
                    sum_d += c.proportion * c.profile.return_beta;
                }
            }
            v.ate = a;
            v.first_stage_limit = pi_c - pi_d;
            if (pi_c > 0.0) v.late = sum_c / pi_c;
            if (pi_d > 0.0) {
                v.wald_limit = oracle_defier(pi_c, pi_d, sum_c / pi_c,
                                             sum_d / pi_d);
                v.notes = "defier-weighted wald formula";
            } else {
                if (std::abs(v.first_stage_limit) < kWeakFirstStageTol)
                    throw WeakFirstStageError{};
                v.wald_limit = v.late;
                v.notes = "complier-mean cutoff identity";
            }
            return v;
        }
        case Mechanism::markov: {
            std::vector<double> pi, beta, p, q;
            for (const auto& c : cfg.mix.components) {
                pi.push_back(c.proportion);
                beta.push_back(c.profile.return_beta);
                p.push_back(c.profile.persist_p);
                q.push_back(c.profile.persist_q);
            }
            return oracle_markov(pi, beta, p, q);
        }
        case Mechanism::continuous_proxy: {
            std::vector<TraitSegment> segs;
            double a = 0.0;
            for (const auto& c : cfg.mix.components) {
                TraitSegment s;
                s.weight = c.proportion;
                s.rho = c.profile.rho;
                if (c.trait.kind == TraitLaw::Kind::constant) {
                    s.atom = true;
                    s.lo = s.hi = c.trait.value;
                } else {
                    s.atom = false;
                    s.lo = c.trait.lo;
                    s.hi = c.trait.hi;
                }
                segs.push_back(s);
                a += c.proportion * c.profile.rho;
            }
            v.wald_limit = oracle_rho_reduced(segs, cfg.x_tilde);
            v.ate = a;
            v.notes = "threshold-proxy slope decomposition";
            return v;
        }
        case Mechanism::instrumented_proxy: {
            double pi_c = 0.0, sum_c = 0.0, a = 0.0;
            for (const auto& c : cfg.mix.components) {
                const auto arms = detail::cutoff_arms(cfg, c);
                a += c.proportion * c.profile.rho;
                if (arms.treated_z1 && !arms.treated_z0) {
                    pi_c += c.proportion;
                    sum_c += c.proportion * c.profile.rho;
                }
            }
            if (pi_c < kWeakFirstStageTol) throw WeakFirstStageError{};
            v.wald_limit = sum_c / pi_c;
            v.late = v.wald_limit;
            v.ate = a;
            v.first_stage_limit = pi_c;
            v.notes = "complier-mean persistence identity";
            return v;
        }
    }
    throw std::logic_error("oracle_scenario: unknown mechanism");
}

}  // namespace persistlab
