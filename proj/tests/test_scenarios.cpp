#include <doctest.h>

#include <json.hpp>

#include "persistlab/config_io.hpp"
#include "persistlab/engine.hpp"
#include "persistlab/scenarios.hpp"

using namespace persistlab;

TEST_CASE("every named scenario validates") {
    CHECK(scenario_names().size() == 9);
    for (const auto& name : scenario_names()) {
        CAPTURE(name);
        const auto cfg = make_scenario(name);
        CHECK(cfg.name == name);
        CHECK_NOTHROW(cfg.validate());
    }
    CHECK_THROWS_AS((void)make_scenario("nope"), std::invalid_argument);
}

TEST_CASE("constructor guards") {
    // cost chain must pin down a unique complier type
    CHECK_THROWS_AS((void)ajr_two_type(0.4, 2.0, 1.0, 5.0, 4.0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)ag_ternary(0.4, 2.0, 1.0, 3.0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)reversal_defiers(0.7, 0.4), std::invalid_argument);
    CHECK_THROWS_AS((void)vv_pogroms({}), std::invalid_argument);
    CHECK_THROWS_AS((void)vv_pogroms_interval(0.0, 2.0, 0.5, 2.5, 0.2, 0.8),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)nw_trust(2.0, 0.5, 3.0, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)gsz_civic(2.0, 1.0, 0.5, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)schooling_appendix(0.05, 0.12, 0.5, 0.2, 0.15),
                    std::invalid_argument);
}

TEST_CASE("config validation rejects inconsistent persistence modes") {
    auto cfg = ajr_two_type();
    cfg.mix.components[0].profile.rho = 0.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = ajr_two_type();
    cfg.mix.components[0].profile.persist_q = 0.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = ajr_two_type();
    cfg.noise.eps_sd = 0.1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = vv_pogroms();
    cfg.noise.u_sd = 0.1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = ajr_two_type();
    cfg.costs.cost_z1 = cfg.costs.cost_z0 + 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = ajr_two_type();
    cfg.costs.reversal_feedback = true;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = markov_persistence();
    cfg.instrument.kind = InstrumentRule::Kind::ternary_uniform;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("json round trip preserves every scenario bit-exactly") {
    for (const auto& name : scenario_names()) {
        CAPTURE(name);
        const auto cfg = make_scenario(name);
        const nlohmann::json doc = cfg;
        const auto back = config_from_json(doc);
        CHECK(nlohmann::json(back) == doc);
    }
}

TEST_CASE("override keys expand and apply") {
    nlohmann::json doc = ajr_two_type();
    apply_override(doc, "q2=0.5");
    CHECK(doc["mix"][1]["profile"]["persist_q"] == 0.5);
    apply_override(doc, "u_sd=0");
    CHECK(doc["noise"]["u_sd"] == 0.0);
    apply_override(doc, "cost_z0=1.7");
    CHECK(doc["costs"]["cost_z0"] == 1.7);
    apply_override(doc, "mix.0.proportion=0.25");
    CHECK(doc["mix"][0]["proportion"] == 0.25);
    apply_override(doc, "n=1000");
    CHECK(doc["n"] == 1000);

    CHECK_THROWS_AS(apply_override(doc, "no_such_key=1"),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_override(doc, "mix.7.proportion=0.1"),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_override(doc, "just-a-key"), std::invalid_argument);
}

TEST_CASE("config_from_json validates the parsed config") {
    nlohmann::json doc = ajr_two_type();
    apply_override(doc, "mix.0.proportion=0.9");  // breaks the unit sum
    CHECK_THROWS_AS((void)config_from_json(doc), std::invalid_argument);
}

TEST_CASE("classification matches the declared compliance pattern by type") {
    const std::size_t n = 20000;

    // l-types (index 1) comply; h-types take in both arms.
    {
        const auto cfg = ajr_two_type();
        const auto pop = sample_population(cfg.mix, n, 11);
        const auto [counts, labels] = classify_compliance(pop, cfg, 11);
        CHECK(counts.defiers == 0);
        CHECK(counts.never_takers == 0);
        CHECK(counts.total() == n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(labels[i] == (pop.type_index[i] == 1
                                    ? ComplianceLabel::complier
                                    : ComplianceLabel::always_taker));
    }

    // Four declared compliance types, one per mixture component.
    {
        const auto cfg = reversal_defiers();
        const auto pop = sample_population(cfg.mix, n, 13);
        const auto [counts, labels] = classify_compliance(pop, cfg, 13);
        CHECK(counts.defiers > 0);
        CHECK(counts.compliers > 0);
        const ComplianceLabel by_type[4] = {
            ComplianceLabel::always_taker, ComplianceLabel::never_taker,
            ComplianceLabel::complier, ComplianceLabel::defier};
        for (std::size_t i = 0; i < n; ++i)
            CHECK(labels[i] == by_type[pop.type_index[i]]);
    }

    // Instrumented persistence: h-types comply in nw, l-types in gsz.
    {
        const auto cfg = nw_trust();
        const auto pop = sample_population(cfg.mix, n, 17);
        const auto [counts, labels] = classify_compliance(pop, cfg, 17);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(labels[i] == (pop.type_index[i] == 0
                                    ? ComplianceLabel::complier
                                    : ComplianceLabel::never_taker));
        CHECK(counts.always_takers == 0);
    }
    {
        const auto cfg = gsz_civic();
        const auto pop = sample_population(cfg.mix, n, 19);
        const auto [counts, labels] = classify_compliance(pop, cfg, 19);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(labels[i] == (pop.type_index[i] == 1
                                    ? ComplianceLabel::complier
                                    : ComplianceLabel::always_taker));
        CHECK(counts.never_takers == 0);
    }

    // Ternary classification is pairwise by construction.
    {
        const auto cfg = ag_ternary();
        const auto pop = sample_population(cfg.mix, n, 23);
        CHECK_THROWS_AS((void)classify_compliance(pop, cfg, 23),
                        TernaryInstrumentError);
        const auto [counts, labels] =
            classify_compliance_pairwise(pop, cfg, 0, 1);
        CHECK(counts.defiers == 0);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(labels[i] == (pop.type_index[i] == 0
                                    ? ComplianceLabel::always_taker
                                    : ComplianceLabel::complier));
        // On the (1,2) pair the non-takers leave the optimum: defiers.
        const auto [c12, l12] = classify_compliance_pairwise(pop, cfg, 1, 2);
        CHECK(c12.compliers == 0);
        CHECK(c12.defiers == counts.compliers);
    }
}
