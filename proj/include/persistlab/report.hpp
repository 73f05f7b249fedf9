#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "persistlab/config_io.hpp"
#include "persistlab/engine.hpp"
#include "persistlab/oracles.hpp"

namespace persistlab {

// Everything one run produces, labeled by source.
struct RunReport {
    ScenarioConfig config;
    EstimateReport estimates;
    OracleValues oracle;
    bool has_oracle = false;
    std::string oracle_error;
    ComplianceCounts counts;  // from the first rep
    bool has_counts = false;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;  // stdout only, never written to report files
};

namespace detail {

// Shortest-round-trip formatting, stable across runs and thread counts.
inline std::string fmt(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double back = 0.0;
    for (int prec = 1; prec <= 16; ++prec) {
        char probe[40];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
        std::sscanf(probe, "%lf", &back);
        if (back == v) return probe;
    }
    return buf;
}

inline const std::vector<std::string>& csv_estimand_order() {
    static const std::vector<std::string> order = {
        "wald",      "pairwise_wald_12", "first_stage", "reduced_form",
        "ols_slope", "late_classified",  "ate"};
    return order;
}

inline double oracle_column(const OracleValues& oracle,
                            const std::string& estimand) {
    if (estimand == "wald" || estimand == "ols_slope")
        return oracle.wald_limit;
    if (estimand == "first_stage") return oracle.first_stage_limit;
    if (estimand == "late_classified") return oracle.late;
    if (estimand == "ate") return oracle.ate;
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace detail

// One row per estimand:
// scenario,estimand,mc_mean,mc_sd,ci_lo,ci_hi,oracle,late_classified,ate,n,reps,seed
inline std::string summary_csv(const RunReport& r) {
    std::ostringstream out;
    out << "scenario,estimand,mc_mean,mc_sd,ci_lo,ci_hi,oracle,"
           "late_classified,ate,n,reps,seed\n";
    const auto& est = r.estimates;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& name : detail::csv_estimand_order()) {
        const auto it = est.estimands.find(name);
        if (it == est.estimands.end()) continue;
        const EstimandSummary& s = it->second;
        const double oracle_v =
            r.has_oracle ? detail::oracle_column(r.oracle, name) : nan;
        const auto late_it = est.estimands.find("late_classified");
        const auto ate_it = est.estimands.find("ate");
        out << r.config.name << ',' << name << ',' << detail::fmt(s.mean)
            << ',' << detail::fmt(s.sd) << ',' << detail::fmt(s.ci_lo) << ','
            << detail::fmt(s.ci_hi) << ',' << detail::fmt(oracle_v) << ','
            << detail::fmt(late_it != est.estimands.end() ? late_it->second.mean
                                                          : nan)
            << ','
            << detail::fmt(ate_it != est.estimands.end() ? ate_it->second.mean
                                                         : nan)
            << ',' << r.config.n << ',' << est.n_reps << ',' << r.seed << '\n';
    }
    return out.str();
}

// One row per (rep, estimand) value, plus compliance counts per rep.
inline std::string reps_csv(const RunReport& r) {
    std::ostringstream out;
    out << "rep,estimand,value\n";
    const auto& est = r.estimates;
    for (const auto& name : detail::csv_estimand_order()) {
        const auto it = est.rep_values.find(name);
        if (it == est.rep_values.end()) continue;
        for (std::size_t rep = 0; rep < it->second.size(); ++rep)
            out << rep << ',' << name << ','
                << detail::fmt(it->second[rep]) << '\n';
    }
    for (std::size_t rep = 0; rep < est.rep_counts.size(); ++rep) {
        const auto& c = est.rep_counts[rep];
        out << rep << ",always_takers," << c.always_takers << '\n';
        out << rep << ",never_takers," << c.never_takers << '\n';
        out << rep << ",compliers," << c.compliers << '\n';
        out << rep << ",defiers," << c.defiers << '\n';
    }
    return out.str();
}

// Human-readable report; every number is labeled with its source.
inline std::string plain_text(const RunReport& r) {
    std::ostringstream out;
    const auto& est = r.estimates;
    out << "scenario: " << r.config.name << " (mechanism "
        << mechanism_tag(r.config.mechanism) << ")\n";
    out << "n=" << r.config.n << " reps=" << est.n_reps << " seed=" << r.seed
        << " excluded_reps=" << est.excluded_reps << "\n\n";

    out << "estimand            mc_mean      mc_sd        oracle       "
           "delta\n";
    for (const auto& name : detail::csv_estimand_order()) {
        const auto it = est.estimands.find(name);
        if (it == est.estimands.end()) continue;
        const double oracle_v =
            r.has_oracle
                ? detail::oracle_column(r.oracle, name)
                : std::numeric_limits<double>::quiet_NaN();
        char line[160];
        std::snprintf(line, sizeof(line), "%-18s %12.6f %12.6f %12.6f %12.6f\n",
                      name.c_str(), it->second.mean, it->second.sd, oracle_v,
                      it->second.mean - oracle_v);
        out << line;
    }
    if (r.has_oracle) out << "\noracle basis: " << r.oracle.notes << '\n';
    if (!r.oracle_error.empty())
        out << "\noracle unavailable: " << r.oracle_error << '\n';
    if (r.has_counts) {
        out << "\ncompliance (classification, first rep): always="
            << r.counts.always_takers << " never=" << r.counts.never_takers
            << " compliers=" << r.counts.compliers
            << " defiers=" << r.counts.defiers << '\n';
    }
    out << "\nconfig echo:\n"
        << nlohmann::json(r.config).dump(2) << '\n';
    return out.str();
}

// Writes via a temp file in the same directory, then renames.
inline void atomic_write(const std::filesystem::path& path,
                         const std::string& content) {
    std::filesystem::create_directories(path.parent_path().empty()
                                            ? "."
                                            : path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out.flush())
            throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace persistlab
