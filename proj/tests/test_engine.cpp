#include <doctest.h>

#include <cmath>

#include "persistlab/engine.hpp"
#include "persistlab/oracles.hpp"

using namespace persistlab;

namespace {

ScenarioConfig small(ScenarioConfig cfg, std::size_t n) {
    cfg.n = n;
    return cfg;
}

}  // namespace

TEST_CASE("monte carlo is deterministic and thread-count invariant") {
    const auto cfg = small(ajr_two_type(), 5000);
    const auto a = monte_carlo(cfg, 12, 77, 1);
    const auto b = monte_carlo(cfg, 12, 77, 4);
    const auto c = monte_carlo(cfg, 12, 77, 8);
    for (const auto& [name, values] : a.rep_values) {
        CAPTURE(name);
        CHECK(values == b.rep_values.at(name));
        CHECK(values == c.rep_values.at(name));
    }
    CHECK(a.mc.mean == b.mc.mean);
    CHECK(a.mc.sd == c.mc.sd);

    const auto d = monte_carlo(cfg, 12, 78, 1);
    CHECK(a.mc.mean != d.mc.mean);
}

TEST_CASE("scalar fields satisfy the wald identity exactly") {
    for (const auto& name : {"ajr", "markov", "nw", "gsz", "agn",
                             "schooling"}) {
        CAPTURE(name);
        auto cfg = make_scenario(name);
        cfg.n = 5000;
        const auto r = monte_carlo(cfg, 3, 5);
        CHECK(r.wald == r.reduced_form / r.first_stage);
    }
}

TEST_CASE("rep estimates concentrate on the oracle") {
    for (const auto& name : scenario_names()) {
        CAPTURE(name);
        auto cfg = make_scenario(name);
        cfg.n = 40000;
        const auto oracle = oracle_scenario(cfg);
        const auto r = monte_carlo(cfg, 20, 99, 4);
        const double se = r.mc.sd / std::sqrt(20.0);
        CHECK(std::abs(r.mc.mean - oracle.wald_limit) < 4.0 * se + 1e-9);
    }
}

TEST_CASE("a single rep yields zero monte carlo dispersion") {
    const auto r = monte_carlo(small(ajr_two_type(), 2000), 1, 3);
    CHECK(r.n_reps == 1);
    CHECK(r.mc.sd == 0.0);
    CHECK(r.mc.ci_lo == r.mc.mean);
}

TEST_CASE("void first stage is counted, not dropped") {
    ScenarioConfig cfg;
    cfg.name = "void";
    cfg.mechanism = Mechanism::baseline_cutoff;
    cfg.mix.components = {
        {1.0, {.benefit = 2.0, .return_beta = 1.0}, TraitLaw::constant(0.0)}};
    cfg.costs.cost_z0 = 1.5;
    cfg.costs.cost_z1 = 1.5;  // everyone always takes: no contrast in x
    cfg.n = 500;
    const auto r = monte_carlo(cfg, 5, 3);
    CHECK(r.n_reps == 5);
    CHECK(r.excluded_reps == 5);
    CHECK(r.estimands.count("wald") == 0);
    CHECK(std::isnan(r.wald));
    for (double v : r.rep_values.at("wald")) CHECK(std::isnan(v));
}

TEST_CASE("headline estimand follows the mechanism") {
    CHECK(monte_carlo(small(ajr_two_type(), 1000), 2, 1).headline == "wald");
    CHECK(monte_carlo(small(vv_pogroms(), 1000), 2, 1).headline ==
          "ols_slope");
}

TEST_CASE("ternary scenario reports both pairwise walds") {
    auto cfg = ag_ternary();
    cfg.n = 40000;
    const auto r = monte_carlo(cfg, 10, 21, 2);
    CHECK(std::abs(r.estimands.at("wald").mean - 1.0) < 0.05);
    CHECK(std::abs(r.estimands.at("pairwise_wald_12").mean + 1.0) < 0.05);
    CHECK(std::abs(r.estimands.at("late_classified").mean - 1.0) < 1e-12);
}

TEST_CASE("markov panel pins the historical state to the instrument") {
    auto cfg = markov_persistence();
    cfg.n = 1000;
    const auto pop = sample_population(cfg.mix, cfg.n, 5);
    const auto panel = simulate_panel(cfg, pop, 5);
    CHECK(panel.x_hist == panel.z);
}

TEST_CASE("continuous scenario has no instrument to classify against") {
    const auto cfg = small(vv_pogroms(), 500);
    const auto pop = sample_population(cfg.mix, cfg.n, 5);
    CHECK_THROWS_AS((void)classify_compliance(pop, cfg, 5),
                    std::runtime_error);
    const auto r = monte_carlo(cfg, 3, 5);
    CHECK(r.estimands.count("wald") == 0);
    CHECK(r.estimands.count("ols_slope") == 1);
}
