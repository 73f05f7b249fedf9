#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "persistlab/scenarios.hpp"

// JSON (de)serialization of ScenarioConfig plus dotted-key overrides for the
// CLI's --set flag. Keys use dotted paths (mix.0.proportion, costs.cost_z0);
// a handful of short aliases (q2, u_sd, ...) are accepted for convenience.

namespace persistlab {

inline void to_json(nlohmann::json& j, const TraitLaw& law) {
    if (law.kind == TraitLaw::Kind::constant)
        j = {{"kind", "constant"}, {"value", law.value}};
    else
        j = {{"kind", "uniform"}, {"lo", law.lo}, {"hi", law.hi}};
}

inline void from_json(const nlohmann::json& j, TraitLaw& law) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") {
        law = TraitLaw::constant(j.at("value").get<double>());
    } else if (kind == "uniform") {
        law = TraitLaw::uniform(j.at("lo").get<double>(),
                                j.at("hi").get<double>());
    } else {
        throw std::invalid_argument("unknown trait law kind: " + kind);
    }
}

inline void to_json(nlohmann::json& j, const LocationProfile& p) {
    j = {{"benefit", p.benefit},       {"return_beta", p.return_beta},
         {"persist_p", p.persist_p},   {"persist_q", p.persist_q},
         {"rho", p.rho},               {"latent_trait", p.latent_trait}};
}

inline void from_json(const nlohmann::json& j, LocationProfile& p) {
    p.benefit = j.value("benefit", 0.0);
    p.return_beta = j.value("return_beta", 0.0);
    p.persist_p = j.value("persist_p", 1.0);
    p.persist_q = j.value("persist_q", 1.0);
    p.rho = j.value("rho", 0.0);
    p.latent_trait = j.value("latent_trait", 0.0);
}

inline void to_json(nlohmann::json& j, const MixComponent& c) {
    j = {{"proportion", c.proportion},
         {"profile", c.profile},
         {"trait", c.trait}};
}

inline void from_json(const nlohmann::json& j, MixComponent& c) {
    j.at("proportion").get_to(c.proportion);
    j.at("profile").get_to(c.profile);
    if (j.contains("trait")) j.at("trait").get_to(c.trait);
}

inline void to_json(nlohmann::json& j, const CostSchedule& c) {
    j = {{"cost_z0", c.cost_z0},
         {"cost_z1", c.cost_z1},
         {"shock_sensitivity", c.shock_sensitivity},
         {"reversal_feedback", c.reversal_feedback},
         {"feedback_magnitude", c.feedback_magnitude}};
}

inline void from_json(const nlohmann::json& j, CostSchedule& c) {
    c.cost_z0 = j.value("cost_z0", 1.0);
    c.cost_z1 = j.value("cost_z1", 0.0);
    c.shock_sensitivity = j.value("shock_sensitivity", 0.0);
    c.reversal_feedback = j.value("reversal_feedback", false);
    c.feedback_magnitude = j.value("feedback_magnitude", 0.0);
}

inline void to_json(nlohmann::json& j, const InstrumentRule& r) {
    const char* kind = r.kind == InstrumentRule::Kind::bernoulli
                           ? "bernoulli"
                           : r.kind == InstrumentRule::Kind::split_by_index
                                 ? "split-by-index"
                                 : "ternary-uniform";
    j = {{"kind", kind}, {"share", r.share}};
}

inline void from_json(const nlohmann::json& j, InstrumentRule& r) {
    const std::string kind = j.value("kind", "bernoulli");
    if (kind == "bernoulli")
        r.kind = InstrumentRule::Kind::bernoulli;
    else if (kind == "split-by-index")
        r.kind = InstrumentRule::Kind::split_by_index;
    else if (kind == "ternary-uniform")
        r.kind = InstrumentRule::Kind::ternary_uniform;
    else
        throw std::invalid_argument("unknown instrument rule: " + kind);
    r.share = j.value("share", 0.5);
}

inline void to_json(nlohmann::json& j, const NoiseModel& n) {
    j = {{"alpha", n.alpha}, {"u_sd", n.u_sd}, {"eps_sd", n.eps_sd}};
}

inline void from_json(const nlohmann::json& j, NoiseModel& n) {
    n.alpha = j.value("alpha", 0.0);
    n.u_sd = j.value("u_sd", 0.0);
    n.eps_sd = j.value("eps_sd", 0.0);
}

inline void to_json(nlohmann::json& j, const ShockProcess& s) {
    j = {{"lo", s.lo}, {"hi", s.hi}};
}

inline void from_json(const nlohmann::json& j, ShockProcess& s) {
    s.lo = j.value("lo", 0.0);
    s.hi = j.value("hi", 1.0);
}

inline void to_json(nlohmann::json& j, const ScenarioConfig& cfg) {
    j = {{"name", cfg.name},
         {"mechanism", mechanism_tag(cfg.mechanism)},
         {"mix", cfg.mix.components},
         {"costs", cfg.costs},
         {"instrument", cfg.instrument},
         {"noise", cfg.noise},
         {"shock", cfg.shock},
         {"x_tilde", cfg.x_tilde},
         {"x_bar", cfg.x_bar},
         {"horizon", cfg.horizon},
         {"n", cfg.n},
         {"reps", cfg.reps}};
}

inline void from_json(const nlohmann::json& j, ScenarioConfig& cfg) {
    cfg.name = j.value("name", "custom");
    cfg.mechanism = mechanism_from_tag(j.at("mechanism").get<std::string>());
    cfg.mix.components = j.at("mix").get<std::vector<MixComponent>>();
    if (j.contains("costs")) j.at("costs").get_to(cfg.costs);
    if (j.contains("instrument")) j.at("instrument").get_to(cfg.instrument);
    if (j.contains("noise")) j.at("noise").get_to(cfg.noise);
    if (j.contains("shock")) j.at("shock").get_to(cfg.shock);
    cfg.x_tilde = j.value("x_tilde", 0.0);
    cfg.x_bar = j.value("x_bar", 0.0);
    cfg.horizon = j.value("horizon", 1);
    cfg.n = j.value("n", std::size_t{200000});
    cfg.reps = j.value("reps", 200);
}

namespace detail {

// Short aliases for common override keys: p1/q2/beta1 address the mixture
// components, the rest address scalar fields.
inline std::string expand_override_key(const std::string& key) {
    if (key.find('.') != std::string::npos) return key;
    if (key.size() >= 2 && key.back() >= '1' && key.back() <= '9') {
        const std::string stem = key.substr(0, key.size() - 1);
        const char idx = static_cast<char>(key.back() - 1);
        const std::string comp = std::string("mix.") + idx + ".profile.";
        if (stem == "p") return comp + "persist_p";
        if (stem == "q") return comp + "persist_q";
        if (stem == "beta") return comp + "return_beta";
        if (stem == "b") return comp + "benefit";
        if (stem == "rho") return comp + "rho";
        if (stem == "pi") return std::string("mix.") + idx + ".proportion";
    }
    if (key == "u_sd" || key == "eps_sd" || key == "alpha")
        return "noise." + key;
    if (key == "cost_z0" || key == "cost_z1" || key == "shock_sensitivity" ||
        key == "feedback_magnitude")
        return "costs." + key;
    if (key == "share") return "instrument.share";
    return key;  // top-level field (n, reps, horizon, x_tilde, x_bar, ...)
}

}  // namespace detail

// Applies one KEY=VALUE override to a config JSON document. Numeric path
// tokens index arrays; values parse as JSON when possible, else as strings.
inline void apply_override(nlohmann::json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw std::invalid_argument("override must be KEY=VALUE: " +
                                    assignment);
    const std::string key =
        detail::expand_override_key(assignment.substr(0, eq));
    const std::string raw = assignment.substr(eq + 1);

    nlohmann::json* node = &doc;
    std::size_t pos = 0;
    while (true) {
        const auto dot = key.find('.', pos);
        const std::string token = key.substr(pos, dot - pos);
        const bool last = dot == std::string::npos;
        const bool is_index = !token.empty() &&
                              token.find_first_not_of("0123456789") ==
                                  std::string::npos;
        if (is_index) {
            const std::size_t idx = std::stoul(token);
            if (!node->is_array() || idx >= node->size())
                throw std::invalid_argument("override index out of range: " +
                                            key);
            node = &(*node)[idx];
        } else {
            if (last && !node->contains(token))
                throw std::invalid_argument("unknown override key: " + key);
            node = &(*node)[token];
        }
        if (last) break;
        pos = dot + 1;
    }
    const nlohmann::json value =
        nlohmann::json::parse(raw, nullptr, /*allow_exceptions=*/false);
    *node = value.is_discarded() ? nlohmann::json(raw) : value;
}

inline ScenarioConfig config_from_json(const nlohmann::json& doc) {
    ScenarioConfig cfg = doc.get<ScenarioConfig>();
    cfg.validate();
    return cfg;
}

}  // namespace persistlab
