#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "persistlab/history.hpp"
#include "persistlab/population.hpp"

namespace persistlab {

// Which behavioral-equilibrium model drives treatment between t-h and t.
enum class Mechanism {
    baseline_cutoff,    // one-shot cutoff take-up, perfect persistence
    dynamic_takeup,     // absorbing take-up at any tau, cost shocked by s_tau
    reversal,           // dynamic take-up with a feedback channel in the z=0 arm
    markov,             // x_{t-h}=z, one aggregated Markov transition to t
    continuous_proxy,   // no instrument: AR step, proxy by threshold
    instrumented_proxy  // binary proxy instrumented by z, AR step to x_t
};

inline std::string mechanism_tag(Mechanism m) {
    switch (m) {
        case Mechanism::baseline_cutoff: return "baseline-cutoff";
        case Mechanism::dynamic_takeup: return "dynamic";
        case Mechanism::reversal: return "reversal";
        case Mechanism::markov: return "markov";
        case Mechanism::continuous_proxy: return "continuous-proxy";
        case Mechanism::instrumented_proxy: return "instrumented-proxy";
    }
    throw std::logic_error("mechanism_tag: unknown mechanism");
}

inline Mechanism mechanism_from_tag(const std::string& tag) {
    if (tag == "baseline-cutoff") return Mechanism::baseline_cutoff;
    if (tag == "dynamic") return Mechanism::dynamic_takeup;
    if (tag == "reversal") return Mechanism::reversal;
    if (tag == "markov") return Mechanism::markov;
    if (tag == "continuous-proxy") return Mechanism::continuous_proxy;
    if (tag == "instrumented-proxy") return Mechanism::instrumented_proxy;
    throw std::invalid_argument("unknown mechanism tag: " + tag);
}

// Full specification of one data-generating process.
struct ScenarioConfig {
    std::string name;
    Mechanism mechanism = Mechanism::baseline_cutoff;
    TypeMix mix;
    CostSchedule costs;  // also holds the benefit-of-trade schedule d(z)
    InstrumentRule instrument;
    NoiseModel noise;
    ShockProcess shock;
    double x_tilde = 0.0;
    double x_bar = 0.0;
    int horizon = 1;
    std::size_t n = 200000;
    int reps = 200;

    bool binary_treatment() const {
        return mechanism != Mechanism::continuous_proxy &&
               mechanism != Mechanism::instrumented_proxy;
    }

    void validate() const {
        mix.validate();
        noise.validate();
        if (n < 1) throw std::invalid_argument("ScenarioConfig: n must be >= 1");
        if (reps < 1)
            throw std::invalid_argument("ScenarioConfig: reps must be >= 1");
        if (horizon < 1)
            throw std::invalid_argument("ScenarioConfig: horizon must be >= 1");
        if (costs.cost_z1 > costs.cost_z0)
            throw std::invalid_argument(
                "ScenarioConfig: cost_z1 must not exceed cost_z0");
        if (mechanism == Mechanism::reversal && !costs.reversal_feedback)
            throw std::invalid_argument(
                "ScenarioConfig: reversal mechanism requires reversal_feedback");
        if (mechanism != Mechanism::reversal && costs.reversal_feedback)
            throw std::invalid_argument(
                "ScenarioConfig: reversal_feedback set on a non-reversal "
                "mechanism");
        if (mechanism == Mechanism::markov &&
            instrument.kind == InstrumentRule::Kind::ternary_uniform)
            throw std::invalid_argument(
                "ScenarioConfig: markov mechanism needs a binary instrument");
        // Exactly one persistence mode may be active.
        for (const auto& c : mix.components) {
            if (binary_treatment() && c.profile.rho != 0.0)
                throw std::invalid_argument(
                    "ScenarioConfig: rho set in a binary-treatment scenario");
            if (mechanism != Mechanism::markov &&
                (c.profile.persist_p != 1.0 || c.profile.persist_q != 1.0))
                throw std::invalid_argument(
                    "ScenarioConfig: persist_p/persist_q set outside the "
                    "markov mechanism");
        }
        if (binary_treatment() && noise.eps_sd != 0.0)
            throw std::invalid_argument(
                "ScenarioConfig: eps_sd set in a binary-treatment scenario");
        if (!binary_treatment() && noise.u_sd != 0.0)
            throw std::invalid_argument(
                "ScenarioConfig: u_sd set in a continuous scenario (the "
                "outcome is x_t itself)");
    }
};

namespace detail {

inline MixComponent component(double proportion, LocationProfile profile,
                              TraitLaw trait = TraitLaw::constant(0.0)) {
    MixComponent c;
    c.proportion = proportion;
    c.profile = profile;
    c.trait = trait;
    return c;
}

}  // namespace detail

// Two country types; l-types comply with the cost-reducing instrument.
// Benefits equal returns (the perfect-correlation lead case).
inline ScenarioConfig ajr_two_type(double pi_h = 0.4, double beta_h = 2.0,
                                   double beta_l = 1.0, double c0 = 1.5,
                                   double c1 = 0.5) {
    const bool l_comply = c1 < beta_l && beta_l < c0 && c0 < beta_h;
    const bool h_comply = beta_l < c1 && c1 <= beta_h && beta_h < c0;
    if (!l_comply && !h_comply)
        throw std::invalid_argument(
            "ajr_two_type: costs must satisfy c1 < beta_l < c0 < beta_h (or "
            "the swapped variant beta_l < c1 <= beta_h < c0)");
    ScenarioConfig cfg;
    cfg.name = "ajr";
    cfg.mechanism = Mechanism::baseline_cutoff;
    cfg.mix.components = {
        detail::component(pi_h, {.benefit = beta_h, .return_beta = beta_h}),
        detail::component(1.0 - pi_h,
                          {.benefit = beta_l, .return_beta = beta_l})};
    cfg.costs.cost_z0 = c0;
    cfg.costs.cost_z1 = c1;
    cfg.noise.u_sd = 0.5;
    return cfg;
}

// Ternary instrument over ordered distances; h-types reach the optimal
// diversity level (x=1) regardless of z, l-types track z. The outcome is
// hump-shaped: beta accrues only at x=1.
inline ScenarioConfig ag_ternary(double pi_h = 0.4, double beta_h = 2.0,
                                 double beta_l = 1.0, double cost = 1.5) {
    if (!(beta_l < cost && cost < beta_h))
        throw std::invalid_argument(
            "ag_ternary: need peak benefits b_l < cost < b_h");
    ScenarioConfig cfg;
    cfg.name = "ag";
    cfg.mechanism = Mechanism::baseline_cutoff;
    cfg.instrument.kind = InstrumentRule::Kind::ternary_uniform;
    cfg.mix.components = {
        detail::component(pi_h, {.benefit = beta_h, .return_beta = beta_h}),
        detail::component(1.0 - pi_h,
                          {.benefit = beta_l, .return_beta = beta_l})};
    cfg.costs.cost_z0 = cost;
    cfg.costs.cost_z1 = cost;
    cfg.noise.u_sd = 0.5;
    return cfg;
}

// Four declared compliance masses. Defier-type locations carry latent_trait=1,
// which loads the z=0 feedback cost reduction on them; every other type is
// classified deterministically by the cutoff.
inline ScenarioConfig reversal_defiers(double pi_c = 0.3, double pi_d = 0.1,
                                       double beta_c = 1.0,
                                       double beta_d = 2.0) {
    if (!(pi_c > 0.0 && pi_d >= 0.0 && pi_c + pi_d < 1.0))
        throw std::invalid_argument("reversal_defiers: bad masses");
    const double rest = 1.0 - pi_c - pi_d;
    const double pi_a = rest / 3.0;
    const double pi_n = rest - pi_a;
    ScenarioConfig cfg;
    cfg.name = "defiers";
    cfg.mechanism = Mechanism::reversal;
    cfg.mix.components = {
        detail::component(pi_a, {.benefit = 2.5, .return_beta = 1.5}),
        detail::component(pi_n, {.benefit = 0.5, .return_beta = 1.0}),
        detail::component(pi_c, {.benefit = 1.5, .return_beta = beta_c}),
        detail::component(pi_d, {.benefit = 0.9, .return_beta = beta_d,
                                 .latent_trait = 1.0},
                          TraitLaw::constant(1.0))};
    cfg.costs.cost_z0 = 2.0;
    cfg.costs.cost_z1 = 1.0;
    cfg.costs.reversal_feedback = true;
    cfg.costs.feedback_magnitude = 2.0;
    cfg.horizon = 64;
    cfg.noise.u_sd = 0.5;
    return cfg;
}

// Historical treatment pinned to the instrument, heterogeneous one-step
// Markov persistence to the present.
inline ScenarioConfig markov_persistence(double pi_1 = 0.5, double beta_1 = 1.0,
                                         double beta_2 = 2.0, double p_1 = 0.8,
                                         double p_2 = 0.8, double q_1 = 0.6,
                                         double q_2 = 0.9) {
    ScenarioConfig cfg;
    cfg.name = "markov";
    cfg.mechanism = Mechanism::markov;
    cfg.mix.components = {
        detail::component(pi_1, {.return_beta = beta_1, .persist_p = p_1,
                                 .persist_q = q_1}),
        detail::component(1.0 - pi_1, {.return_beta = beta_2, .persist_p = p_2,
                                       .persist_q = q_2})};
    cfg.noise.u_sd = 0.5;
    return cfg;
}

// No instrument: latent historical level at discrete atoms, persistence
// thresholded at x_bar, proxy thresholded at x_tilde. The estimand is the
// OLS slope of x_t on the proxy.
inline ScenarioConfig vv_pogroms(std::vector<double> atoms = {0.25, 0.75, 1.25,
                                                              1.75},
                                 double x_tilde = 0.5, double x_bar = 1.0,
                                 double rho_l = 0.2, double rho_h = 0.8,
                                 double eps_sd = 0.1) {
    if (atoms.empty()) throw std::invalid_argument("vv_pogroms: no atoms");
    ScenarioConfig cfg;
    cfg.name = "vv";
    cfg.mechanism = Mechanism::continuous_proxy;
    const double w = 1.0 / static_cast<double>(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const double a = atoms[i];
        const double rho = a > x_bar ? rho_h : rho_l;
        double prop = i + 1 == atoms.size()
                          ? 1.0 - w * static_cast<double>(atoms.size() - 1)
                          : w;
        cfg.mix.components.push_back(detail::component(
            prop, {.rho = rho, .latent_trait = a}, TraitLaw::constant(a)));
    }
    cfg.x_tilde = x_tilde;
    cfg.x_bar = x_bar;
    cfg.noise.eps_sd = eps_sd;
    return cfg;
}

// Interval variant of the pogrom scenario: latent level uniform on [lo, hi],
// split at x_bar into the low- and high-persistence pieces.
inline ScenarioConfig vv_pogroms_interval(double lo, double hi, double x_tilde,
                                          double x_bar, double rho_l,
                                          double rho_h, double eps_sd = 0.1) {
    if (!(lo < x_bar && x_bar < hi))
        throw std::invalid_argument(
            "vv_pogroms_interval: x_bar must split (lo, hi)");
    ScenarioConfig cfg;
    cfg.name = "vv";
    cfg.mechanism = Mechanism::continuous_proxy;
    const double w_lo = (x_bar - lo) / (hi - lo);
    cfg.mix.components = {
        detail::component(w_lo, {.rho = rho_l}, TraitLaw::uniform(lo, x_bar)),
        detail::component(1.0 - w_lo, {.rho = rho_h},
                          TraitLaw::uniform(x_bar, hi))};
    cfg.x_tilde = x_tilde;
    cfg.x_bar = x_bar;
    cfg.noise.eps_sd = eps_sd;
    return cfg;
}

namespace detail {

inline ScenarioConfig instrumented_persistence(std::string name, double pi_h,
                                               double b_h, double b_l,
                                               double thresh_z0,
                                               double thresh_z1, double rho_h,
                                               double rho_l, double eps_sd) {
    ScenarioConfig cfg;
    cfg.name = std::move(name);
    cfg.mechanism = Mechanism::instrumented_proxy;
    cfg.mix.components = {
        component(pi_h, {.benefit = b_h, .rho = rho_h}),
        component(1.0 - pi_h, {.benefit = b_l, .rho = rho_l})};
    cfg.costs.cost_z0 = thresh_z0;
    cfg.costs.cost_z1 = thresh_z1;
    cfg.noise.eps_sd = eps_sd;
    return cfg;
}

}  // namespace detail

// Trust adopted when its benefit beats the benefit of slave trade d(z).
// With b_l < d(1) < b_h < d(0), only high-benefit groups switch: compliers
// are the h-types, whose persistence is highest.
inline ScenarioConfig nw_trust(double b_h = 2.0, double b_l = 0.5,
                               double d0 = 3.0, double d1 = 1.0,
                               double rho_h = 0.8, double rho_l = 0.3,
                               double pi_h = 0.5, double eps_sd = 0.2) {
    if (!(b_l < d1 && d1 < b_h && b_h < d0))
        throw std::invalid_argument("nw_trust: need b_l < d(1) < b_h < d(0)");
    return detail::instrumented_persistence("nw", pi_h, b_h, b_l, d0, d1,
                                            rho_h, rho_l, eps_sd);
}

// Self-government adopted when returns beat the coordination cost c(z).
// With c(1) <= b_l < c(0) <= b_h, compliers are the low-return cities.
inline ScenarioConfig gsz_civic(double b_h = 2.0, double b_l = 1.0,
                                double c0 = 1.5, double c1 = 0.5,
                                double rho_h = 0.8, double rho_l = 0.3,
                                double pi_h = 0.5, double eps_sd = 0.2) {
    if (!(c1 <= b_l && b_l < c0 && c0 <= b_h))
        throw std::invalid_argument("gsz_civic: need c(1) <= b_l < c(0) <= b_h");
    return detail::instrumented_persistence("gsz", pi_h, b_h, b_l, c0, c1,
                                            rho_h, rho_l, eps_sd);
}

// Plow adoption: always-takers are attitude-motivated adopters; compliers
// are suitability-induced adopters with weaker persistence.
inline ScenarioConfig agn_plow(double b_h = 2.0, double b_l = 1.0,
                               double c0 = 1.6, double c1 = 0.4,
                               double rho_h = 0.9, double rho_l = 0.4,
                               double pi_h = 0.3, double eps_sd = 0.2) {
    if (!(c1 <= b_l && b_l < c0 && c0 <= b_h))
        throw std::invalid_argument("agn_plow: need c(1) <= b_l < c(0) <= b_h");
    return detail::instrumented_persistence("agn", pi_h, b_h, b_l, c0, c1,
                                            rho_h, rho_l, eps_sd);
}

// Two ability types; low-ability students take the extra year only when
// quarter of birth forces them in.
inline ScenarioConfig schooling_appendix(double r_lo = 0.05, double r_hi = 0.12,
                                         double pi_hi = 0.5, double c0 = 0.08,
                                         double c1 = 0.02) {
    if (!(c1 < r_lo && r_lo < c0 && c0 < r_hi))
        throw std::invalid_argument(
            "schooling_appendix: need c1 < r_lo < c0 < r_hi");
    ScenarioConfig cfg = ajr_two_type(pi_hi, r_hi, r_lo, c0, c1);
    cfg.name = "schooling";
    cfg.noise.u_sd = 0.05;
    return cfg;
}

inline const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {
        "ajr", "ag", "defiers", "markov", "vv", "nw", "gsz", "agn",
        "schooling"};
    return names;
}

inline ScenarioConfig make_scenario(const std::string& name) {
    if (name == "ajr") return ajr_two_type();
    if (name == "ag") return ag_ternary();
    if (name == "defiers") return reversal_defiers();
    if (name == "markov") return markov_persistence();
    if (name == "vv") return vv_pogroms();
    if (name == "nw") return nw_trust();
    if (name == "gsz") return gsz_civic();
    if (name == "agn") return agn_plow();
    if (name == "schooling") return schooling_appendix();
    throw std::invalid_argument("unknown scenario name: " + name);
}

}  // namespace persistlab
