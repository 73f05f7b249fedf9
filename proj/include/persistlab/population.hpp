#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "persistlab/rng.hpp"

namespace persistlab {

// Structural parameters of one synthetic location.
struct LocationProfile {
    double benefit = 0.0;       // take-up benefit b_i
    double return_beta = 0.0;   // treatment effect on the outcome
    double persist_p = 1.0;     // Pr(stay untreated | untreated)
    double persist_q = 1.0;     // Pr(stay treated | treated)
    double rho = 0.0;           // AR persistence for continuous processes
    double latent_trait = 0.0;  // latent historical level for threshold proxies
};

// Distribution of the latent trait within a mixture component.
struct TraitLaw {
    enum class Kind { constant, uniform };
    Kind kind = Kind::constant;
    double value = 0.0;  // constant
    double lo = 0.0;     // uniform bounds
    double hi = 1.0;

    static TraitLaw constant(double v) {
        TraitLaw law;
        law.kind = Kind::constant;
        law.value = v;
        return law;
    }
    static TraitLaw uniform(double lo, double hi) {
        if (!(lo < hi)) throw std::invalid_argument("TraitLaw: lo must be < hi");
        TraitLaw law;
        law.kind = Kind::uniform;
        law.lo = lo;
        law.hi = hi;
        return law;
    }

    double draw(double u) const {
        return kind == Kind::constant ? value : lo + u * (hi - lo);
    }
    double mean() const {
        return kind == Kind::constant ? value : 0.5 * (lo + hi);
    }
};

struct MixComponent {
    double proportion = 1.0;
    LocationProfile profile;
    TraitLaw trait;
};

struct TypeMix {
    std::vector<MixComponent> components;

    void validate() const {
        if (components.empty())
            throw std::invalid_argument("TypeMix: empty mixture");
        double total = 0.0;
        for (const auto& c : components) {
            if (!(c.proportion > 0.0))
                throw std::invalid_argument(
                    "TypeMix: proportions must be strictly positive");
            total += c.proportion;
            const LocationProfile& p = c.profile;
            for (double v : {p.benefit, p.return_beta, p.persist_p,
                             p.persist_q, p.rho, p.latent_trait})
                if (!std::isfinite(v))
                    throw std::invalid_argument(
                        "TypeMix: non-finite profile field");
            if (p.persist_p < 0.0 || p.persist_p > 1.0 || p.persist_q < 0.0 ||
                p.persist_q > 1.0)
                throw std::invalid_argument(
                    "TypeMix: persist_p/persist_q must be in [0,1]");
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw std::invalid_argument("TypeMix: proportions must sum to 1");
    }
};

// Columnar population of N locations.
struct Population {
    std::vector<double> benefit;
    std::vector<double> return_beta;
    std::vector<double> persist_p;
    std::vector<double> persist_q;
    std::vector<double> rho;
    std::vector<double> latent_trait;
    std::vector<int> type_index;

    std::size_t size() const { return type_index.size(); }
};

inline Population sample_population(const TypeMix& mix, std::size_t n,
                                    std::uint64_t seed) {
    mix.validate();
    if (n < 1) throw std::invalid_argument("sample_population: n must be >= 1");

    Population pop;
    pop.benefit.resize(n);
    pop.return_beta.resize(n);
    pop.persist_p.resize(n);
    pop.persist_q.resize(n);
    pop.rho.resize(n);
    pop.latent_trait.resize(n);
    pop.type_index.resize(n);

    const std::size_t k = mix.components.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng::uniform(seed, i, rng::Stream::type_draw);
        double cum = 0.0;
        std::size_t t = k - 1;
        for (std::size_t j = 0; j < k; ++j) {
            cum += mix.components[j].proportion;
            if (u < cum) {
                t = j;
                break;
            }
        }
        const MixComponent& comp = mix.components[t];
        pop.benefit[i] = comp.profile.benefit;
        pop.return_beta[i] = comp.profile.return_beta;
        pop.persist_p[i] = comp.profile.persist_p;
        pop.persist_q[i] = comp.profile.persist_q;
        pop.rho[i] = comp.profile.rho;
        pop.latent_trait[i] =
            comp.trait.draw(rng::uniform(seed, i, rng::Stream::trait));
        pop.type_index[i] = static_cast<int>(t);
    }
    return pop;
}

// How the historical instrument z is assigned across locations.
struct InstrumentRule {
    enum class Kind { bernoulli, split_by_index, ternary_uniform };
    Kind kind = Kind::bernoulli;
    double share = 0.5;  // Pr(z=1) for bernoulli; z=1 fraction for split
};

inline std::vector<int> assign_instrument(const Population& pop,
                                          const InstrumentRule& rule,
                                          std::uint64_t seed) {
    if (rule.share < 0.0 || rule.share > 1.0)
        throw std::invalid_argument("assign_instrument: share outside [0,1]");
    const std::size_t n = pop.size();
    std::vector<int> z(n, 0);
    switch (rule.kind) {
        case InstrumentRule::Kind::bernoulli:
            for (std::size_t i = 0; i < n; ++i)
                z[i] = rng::uniform(seed, i, rng::Stream::instrument) <
                               rule.share
                           ? 1
                           : 0;
            break;
        case InstrumentRule::Kind::split_by_index: {
            const auto cut = static_cast<std::size_t>(
                std::llround(rule.share * static_cast<double>(n)));
            for (std::size_t i = 0; i < n; ++i) z[i] = i < cut ? 1 : 0;
            break;
        }
        case InstrumentRule::Kind::ternary_uniform:
            for (std::size_t i = 0; i < n; ++i) {
                const double u = rng::uniform(seed, i, rng::Stream::instrument);
                z[i] = u < 1.0 / 3.0 ? 0 : (u < 2.0 / 3.0 ? 1 : 2);
            }
            break;
    }
    return z;
}

}  // namespace persistlab
