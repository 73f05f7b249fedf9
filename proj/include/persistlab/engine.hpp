#pragma once

#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "persistlab/estimators.hpp"
#include "persistlab/history.hpp"
#include "persistlab/population.hpp"
#include "persistlab/rng.hpp"
#include "persistlab/scenarios.hpp"

// Runs a scenario end to end: sample a population, realize the history
// between t-h and t, produce the panel, classify compliance by
// counterfactual re-simulation, and apply the estimators.

namespace persistlab {

struct TernaryInstrumentError : std::runtime_error {
    TernaryInstrumentError()
        : std::runtime_error(
              "ternary instrument: classification is defined pairwise; use "
              "classify_compliance_pairwise") {}
};

namespace detail {

inline std::vector<double> to_real(const std::vector<int>& v) {
    return std::vector<double>(v.begin(), v.end());
}

// Realized treatment under a forced instrument arm, using the same seed in
// both arms (common random numbers).
inline std::vector<int> forced_arm_treatment(const ScenarioConfig& cfg,
                                             const Population& pop, int z_value,
                                             std::uint64_t seed) {
    const std::vector<int> z(pop.size(), z_value);
    switch (cfg.mechanism) {
        case Mechanism::baseline_cutoff:
        case Mechanism::instrumented_proxy:
            return takeup_baseline(pop, cfg.costs, z);
        case Mechanism::dynamic_takeup:
            return evolve_dynamic_takeup(pop, cfg.costs, z, cfg.shock,
                                         cfg.horizon, seed);
        case Mechanism::reversal:
            return evolve_with_reversal_channel(pop, cfg.costs, z, cfg.shock,
                                                cfg.horizon, seed);
        case Mechanism::markov:
            // x_{t-h} is pinned to the instrument.
            return evolve_markov_persistence(pop, z, seed);
        case Mechanism::continuous_proxy:
            throw std::runtime_error(
                "classify_compliance: scenario has no instrument");
    }
    throw std::logic_error("forced_arm_treatment: unknown mechanism");
}

}  // namespace detail

// Labels each location by re-simulating both instrument arms under common
// random numbers.
inline std::pair<ComplianceCounts, std::vector<ComplianceLabel>>
classify_compliance(const Population& pop, const ScenarioConfig& cfg,
                    std::uint64_t seed) {
    if (cfg.instrument.kind == InstrumentRule::Kind::ternary_uniform)
        throw TernaryInstrumentError{};
    const auto arm0 = detail::forced_arm_treatment(cfg, pop, 0, seed);
    const auto arm1 = detail::forced_arm_treatment(cfg, pop, 1, seed);
    ComplianceCounts counts;
    std::vector<ComplianceLabel> labels(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        if (arm0[i] == 1 && arm1[i] == 1) {
            labels[i] = ComplianceLabel::always_taker;
            ++counts.always_takers;
        } else if (arm0[i] == 0 && arm1[i] == 0) {
            labels[i] = ComplianceLabel::never_taker;
            ++counts.never_takers;
        } else if (arm1[i] == 1) {
            labels[i] = ComplianceLabel::complier;
            ++counts.compliers;
        } else {
            labels[i] = ComplianceLabel::defier;
            ++counts.defiers;
        }
    }
    return {counts, labels};
}

// Pairwise compliance for a ternary instrument: "treated" means sitting at
// the optimum level x=1.
inline std::pair<ComplianceCounts, std::vector<ComplianceLabel>>
classify_compliance_pairwise(const Population& pop, const ScenarioConfig& cfg,
                             int low, int high) {
    if (cfg.instrument.kind != InstrumentRule::Kind::ternary_uniform)
        throw std::invalid_argument(
            "classify_compliance_pairwise: not a ternary scenario");
    ComplianceCounts counts;
    std::vector<ComplianceLabel> labels(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const bool taker = pop.benefit[i] >= cfg.costs.cost_z0;
        const bool t_lo = taker || low == 1;
        const bool t_hi = taker || high == 1;
        if (t_lo && t_hi) {
            labels[i] = ComplianceLabel::always_taker;
            ++counts.always_takers;
        } else if (!t_lo && !t_hi) {
            labels[i] = ComplianceLabel::never_taker;
            ++counts.never_takers;
        } else if (t_hi) {
            labels[i] = ComplianceLabel::complier;
            ++counts.compliers;
        } else {
            labels[i] = ComplianceLabel::defier;
            ++counts.defiers;
        }
    }
    return {counts, labels};
}

// One realized cross-section for a scenario.
inline SimulatedPanel simulate_panel(const ScenarioConfig& cfg,
                                     const Population& pop,
                                     std::uint64_t seed) {
    SimulatedPanel panel;
    panel.z = assign_instrument(pop, cfg.instrument, seed);
    switch (cfg.mechanism) {
        case Mechanism::baseline_cutoff: {
            if (cfg.instrument.kind == InstrumentRule::Kind::ternary_uniform) {
                // Taker types hold the optimum; the rest track z.
                panel.x_hist.resize(pop.size());
                for (std::size_t i = 0; i < pop.size(); ++i)
                    panel.x_hist[i] = pop.benefit[i] >= cfg.costs.cost_z0
                                          ? 1
                                          : panel.z[i];
                panel.x_now = evolve_perfect_persistence(panel.x_hist);
                std::vector<int> at_peak(pop.size());
                for (std::size_t i = 0; i < pop.size(); ++i)
                    at_peak[i] = panel.x_now[i] == 1 ? 1 : 0;
                panel.outcome = outcome(pop, at_peak, cfg.noise, seed);
            } else {
                panel.x_hist = takeup_baseline(pop, cfg.costs, panel.z);
                panel.x_now = evolve_perfect_persistence(panel.x_hist);
                panel.outcome = outcome(pop, panel.x_now, cfg.noise, seed);
            }
            break;
        }
        case Mechanism::dynamic_takeup: {
            panel.x_hist = takeup_baseline(pop, cfg.costs, panel.z);
            panel.x_now = evolve_dynamic_takeup(pop, cfg.costs, panel.z,
                                                cfg.shock, cfg.horizon, seed);
            panel.outcome = outcome(pop, panel.x_now, cfg.noise, seed);
            break;
        }
        case Mechanism::reversal: {
            panel.x_hist = takeup_baseline(pop, cfg.costs, panel.z);
            panel.x_now = evolve_with_reversal_channel(
                pop, cfg.costs, panel.z, cfg.shock, cfg.horizon, seed);
            panel.outcome = outcome(pop, panel.x_now, cfg.noise, seed);
            break;
        }
        case Mechanism::markov: {
            panel.x_hist = panel.z;
            panel.x_now = evolve_markov_persistence(pop, panel.x_hist, seed);
            panel.outcome = outcome(pop, panel.x_now, cfg.noise, seed);
            break;
        }
        case Mechanism::continuous_proxy: {
            panel.proxy = proxy_from_threshold(pop.latent_trait, cfg.x_tilde);
            panel.x_now_real =
                continuous_ar_step(pop, pop.latent_trait, cfg.noise, seed);
            panel.outcome = panel.x_now_real;
            break;
        }
        case Mechanism::instrumented_proxy: {
            panel.x_hist = takeup_baseline(pop, cfg.costs, panel.z);
            panel.proxy = panel.x_hist;
            panel.x_now_real = continuous_ar_step(
                pop, detail::to_real(panel.x_hist), cfg.noise, seed);
            panel.outcome = panel.x_now_real;
            break;
        }
    }
    return panel;
}

namespace detail {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct RepStats {
    double wald = kNaN;
    double first_stage = kNaN;
    double reduced_form = kNaN;
    double ols_slope = kNaN;
    double late_classified = kNaN;
    double ate = kNaN;
    double pairwise_12 = kNaN;
    ComplianceCounts counts;
    bool void_first_stage = false;
};

inline RepStats run_rep(const ScenarioConfig& cfg, std::uint64_t rep_seed) {
    RepStats r;
    const Population pop = sample_population(cfg.mix, cfg.n, rep_seed);
    const SimulatedPanel panel = simulate_panel(cfg, pop, rep_seed);

    try {
        switch (cfg.mechanism) {
            case Mechanism::baseline_cutoff:
            case Mechanism::dynamic_takeup:
            case Mechanism::reversal:
            case Mechanism::markov: {
                const auto d = to_real(panel.x_now);
                if (cfg.instrument.kind ==
                    InstrumentRule::Kind::ternary_uniform) {
                    r.wald = pairwise_wald(panel.z, d, panel.outcome, 0, 1);
                    r.pairwise_12 =
                        pairwise_wald(panel.z, d, panel.outcome, 1, 2);
                    auto [counts, labels] =
                        classify_compliance_pairwise(pop, cfg, 0, 1);
                    r.counts = counts;
                    r.late_classified =
                        late_classified(labels, pop, LateTarget::beta);
                } else {
                    r.first_stage = first_stage(panel.z, d);
                    r.reduced_form = reduced_form(panel.z, panel.outcome);
                    r.wald = wald(panel.z, d, panel.outcome);
                    auto [counts, labels] =
                        classify_compliance(pop, cfg, rep_seed);
                    r.counts = counts;
                    r.late_classified =
                        late_classified(labels, pop, LateTarget::beta);
                }
                r.ols_slope = ols_slope(d, panel.outcome);
                r.ate = ate(pop, LateTarget::beta);
                break;
            }
            case Mechanism::continuous_proxy: {
                r.ols_slope = ols_slope(panel.proxy, panel.outcome);
                r.ate = ate(pop, LateTarget::rho_contrast);
                break;
            }
            case Mechanism::instrumented_proxy: {
                r.first_stage = first_stage(panel.z, panel.proxy);
                r.reduced_form = reduced_form(panel.z, panel.outcome);
                r.wald = wald(panel.z, panel.proxy, panel.outcome);
                r.ols_slope = ols_slope(panel.proxy, panel.outcome);
                auto [counts, labels] = classify_compliance(pop, cfg, rep_seed);
                r.counts = counts;
                r.late_classified =
                    late_classified(labels, pop, LateTarget::rho_contrast);
                r.ate = ate(pop, LateTarget::rho_contrast);
                break;
            }
        }
    } catch (const WeakFirstStageError&) {
        r.void_first_stage = true;
    } catch (const DegenerateInstrumentError&) {
        r.void_first_stage = true;
    }
    return r;
}

}  // namespace detail

// Runs the full DGP and the estimators `reps` times. Deterministic given
// (cfg, seed) and independent of the thread count: rep seeds are derived by
// rep index and results are aggregated in rep order.
inline EstimateReport monte_carlo(const ScenarioConfig& cfg, int reps,
                                  std::uint64_t seed, int threads = 1) {
    cfg.validate();
    if (reps < 1) throw std::invalid_argument("monte_carlo: reps must be >= 1");
    if (threads < 1) threads = 1;

    std::vector<detail::RepStats> stats(static_cast<std::size_t>(reps));
    auto worker = [&](int first, int last) {
        for (int rep = first; rep < last; ++rep)
            stats[static_cast<std::size_t>(rep)] = detail::run_rep(
                cfg, rng::derive_seed(seed, static_cast<std::uint64_t>(rep)));
    };
    if (threads == 1 || reps == 1) {
        worker(0, reps);
    } else {
        threads = std::min(threads, reps);
        std::vector<std::thread> pool;
        const int chunk = (reps + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int first = t * chunk;
            const int last = std::min(reps, first + chunk);
            if (first < last) pool.emplace_back(worker, first, last);
        }
        for (auto& th : pool) th.join();
    }

    EstimateReport report;
    report.n_reps = reps;
    report.headline = cfg.mechanism == Mechanism::continuous_proxy
                          ? "ols_slope"
                          : "wald";

    auto collect = [&](const std::string& name, auto getter) {
        std::vector<double> all;
        std::vector<double> valid;
        all.reserve(stats.size());
        for (const auto& s : stats) {
            const double v = getter(s);
            all.push_back(v);
            if (!std::isnan(v)) valid.push_back(v);
        }
        report.rep_values[name] = std::move(all);
        if (!valid.empty()) report.estimands[name] = summarize(valid);
    };
    collect("wald", [](const detail::RepStats& s) { return s.wald; });
    collect("first_stage",
            [](const detail::RepStats& s) { return s.first_stage; });
    collect("reduced_form",
            [](const detail::RepStats& s) { return s.reduced_form; });
    collect("ols_slope", [](const detail::RepStats& s) { return s.ols_slope; });
    collect("late_classified",
            [](const detail::RepStats& s) { return s.late_classified; });
    collect("ate", [](const detail::RepStats& s) { return s.ate; });
    if (cfg.instrument.kind == InstrumentRule::Kind::ternary_uniform)
        collect("pairwise_wald_12",
                [](const detail::RepStats& s) { return s.pairwise_12; });

    for (const auto& s : stats) {
        report.rep_counts.push_back(s.counts);
        if (s.void_first_stage) ++report.excluded_reps;
    }
    if (auto it = report.estimands.find(report.headline);
        it != report.estimands.end())
        report.mc = it->second;

    // Scalar fields come from the first rep with a usable first stage, so
    // the Wald identity holds on them exactly.
    for (const auto& s : stats) {
        if (s.void_first_stage) continue;
        report.wald = s.wald;
        report.first_stage = s.first_stage;
        report.reduced_form = s.reduced_form;
        report.ols_slope = s.ols_slope;
        report.late_classified = s.late_classified;
        report.ate = s.ate;
        break;
    }
    return report;
}

}  // namespace persistlab
