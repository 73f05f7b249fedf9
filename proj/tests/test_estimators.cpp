#include <doctest.h>

#include <cmath>
#include <random>

#include "persistlab/estimators.hpp"
#include "persistlab/population.hpp"

using namespace persistlab;

namespace {

// A small hand-made sample with a working first stage.
struct Sample {
    std::vector<int> z;
    std::vector<double> d;
    std::vector<double> y;
};

Sample make_sample(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::bernoulli_distribution z_law(0.5);
    std::normal_distribution<double> noise(0.0, 0.3);
    Sample s;
    for (int i = 0; i < 4000; ++i) {
        const int z = z_law(gen) ? 1 : 0;
        const double d = z == 1 || z_law(gen) ? 1.0 : 0.0;
        s.z.push_back(z);
        s.d.push_back(d);
        s.y.push_back(1.5 * d + noise(gen));
    }
    return s;
}

}  // namespace

TEST_CASE("first stage and reduced form are conditional-mean contrasts") {
    const std::vector<int> z = {0, 0, 1, 1};
    const std::vector<double> d = {0.0, 1.0, 1.0, 1.0};
    const std::vector<double> y = {1.0, 3.0, 4.0, 6.0};
    CHECK(first_stage(z, d) == 0.5);
    CHECK(reduced_form(z, y) == 3.0);
    CHECK(wald(z, d, y) == 6.0);
}

TEST_CASE("wald equals reduced form over first stage on every sample") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = make_sample(seed);
        CHECK(wald(s.z, s.d, s.y) ==
              reduced_form(s.z, s.y) / first_stage(s.z, s.d));
    }
}

TEST_CASE("wald is invariant to an outcome intercept shift") {
    const auto s = make_sample(5);
    auto shifted = s.y;
    for (double& v : shifted) v += 100.0;
    CHECK(std::abs(wald(s.z, s.d, shifted) - wald(s.z, s.d, s.y)) < 1e-9);
}

TEST_CASE("ols slope on a binary regressor is the mean difference") {
    const auto s = make_sample(9);
    double m1 = 0.0, m0 = 0.0;
    std::size_t n1 = 0, n0 = 0;
    for (std::size_t i = 0; i < s.d.size(); ++i) {
        if (s.d[i] == 1.0) {
            m1 += s.y[i];
            ++n1;
        } else {
            m0 += s.y[i];
            ++n0;
        }
    }
    const double diff = m1 / static_cast<double>(n1) -
                        m0 / static_cast<double>(n0);
    CHECK(std::abs(ols_slope(s.d, s.y) - diff) < 1e-12);
}

TEST_CASE("ols slope recovers an exact linear relation") {
    const std::vector<double> x = {-1.0, 0.0, 2.0, 5.0};
    std::vector<double> y;
    for (double xi : x) y.push_back(3.0 - 0.7 * xi);
    CHECK(std::abs(ols_slope(x, y) + 0.7) < 1e-14);
}

TEST_CASE("degenerate instrument throws") {
    const std::vector<int> z = {1, 1, 1};
    const std::vector<double> d = {0.0, 1.0, 1.0};
    CHECK_THROWS_AS((void)first_stage(z, d), DegenerateInstrumentError);
    CHECK_THROWS_AS((void)wald(z, d, d), DegenerateInstrumentError);
}

TEST_CASE("void first stage throws") {
    const std::vector<int> z = {0, 0, 1, 1};
    const std::vector<double> d = {1.0, 0.0, 0.0, 1.0};  // contrast 0
    const std::vector<double> y = {1.0, 2.0, 3.0, 4.0};
    CHECK_THROWS_AS((void)wald(z, d, y), WeakFirstStageError);
}

TEST_CASE("ols rejects a constant regressor and size mismatches") {
    CHECK_THROWS_AS((void)ols_slope(std::vector<double>{1.0, 1.0},
                                    std::vector<double>{1.0, 2.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)ols_slope(std::vector<double>{1.0},
                                    std::vector<double>{1.0, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("pairwise wald restricts to the two requested arms") {
    // Arms: z=0 -> (d,y)=(0,0); z=1 -> (1,2); z=2 -> (2,2).
    const std::vector<int> z = {0, 1, 2, 0, 1, 2};
    const std::vector<double> d = {0, 1, 2, 0, 1, 2};
    const std::vector<double> y = {0, 2, 2, 0, 2, 2};
    CHECK(pairwise_wald(z, d, y, 0, 1) == 2.0);
    CHECK(pairwise_wald(z, d, y, 1, 2) == 0.0);
    CHECK(pairwise_wald(z, d, y, 0, 2) == 1.0);
    CHECK_THROWS_AS((void)pairwise_wald(z, d, y, 1, 1),
                    std::invalid_argument);
}

TEST_CASE("threshold-proxy slope, homogeneous persistence") {
    // Atoms {1,2,3} with equal mass, rho = 0.5, threshold 1.5: the slope of
    // rho*x on 1(x > 1.5) is 0.5*2.5 - 0.5*1 = 0.75 exactly.
    const std::vector<double> proxy = {0.0, 1.0, 1.0};
    const std::vector<double> y = {0.5, 1.0, 1.5};
    CHECK(std::abs(ols_slope(proxy, y) - 0.75) < 1e-14);
}

TEST_CASE("threshold-proxy slope, heterogeneous persistence") {
    // Atoms {0.25, 0.75, 1.25, 1.75}, rho 0.2 at or below 1.0 and 0.8 above,
    // proxy threshold 0.5: slope = mean(0.15, 1.0, 1.4) - 0.05 = 0.80.
    const std::vector<double> atoms = {0.25, 0.75, 1.25, 1.75};
    std::vector<double> proxy, y;
    for (double a : atoms) {
        proxy.push_back(a > 0.5 ? 1.0 : 0.0);
        y.push_back((a > 1.0 ? 0.8 : 0.2) * a);
    }
    CHECK(std::abs(ols_slope(proxy, y) - 0.80) < 1e-14);
}

TEST_CASE("late over classified compliers and the population ate") {
    TypeMix mix;
    mix.components = {
        {0.5, {.return_beta = 2.0, .rho = 0.9}, TraitLaw::constant(0.0)},
        {0.5, {.return_beta = 1.0, .rho = 0.1}, TraitLaw::constant(0.0)}};
    const auto pop = sample_population(mix, 1000, 8);
    std::vector<ComplianceLabel> labels(pop.size(),
                                        ComplianceLabel::never_taker);
    for (std::size_t i = 0; i < pop.size(); ++i)
        if (pop.type_index[i] == 1) labels[i] = ComplianceLabel::complier;
    CHECK(late_classified(labels, pop) == 1.0);
    CHECK(std::abs(late_classified(labels, pop, LateTarget::rho_contrast) -
                   0.1) < 1e-15);
    CHECK(std::abs(ate(pop) - 1.5) < 0.05);

    std::fill(labels.begin(), labels.end(), ComplianceLabel::always_taker);
    CHECK_THROWS_AS((void)late_classified(labels, pop), std::runtime_error);
}

TEST_CASE("monte carlo summary statistics") {
    const auto s = summarize({1.0, 2.0, 3.0, 4.0});
    CHECK(s.mean == 2.5);
    CHECK(std::abs(s.sd - std::sqrt(5.0 / 3.0)) < 1e-14);
    const double se = s.sd / 2.0;
    CHECK(std::abs(s.ci_lo - (2.5 - 1.959963984540054 * se)) < 1e-12);
    CHECK(std::abs(s.ci_hi - (2.5 + 1.959963984540054 * se)) < 1e-12);

    const auto one = summarize({7.0});
    CHECK(one.mean == 7.0);
    CHECK(one.sd == 0.0);
    CHECK(one.ci_lo == 7.0);
    CHECK(one.ci_hi == 7.0);

    CHECK(std::isnan(summarize({}).mean));
}
