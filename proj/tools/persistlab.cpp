// Command-line runner: pick or load a scenario, run the Monte Carlo, and
// emit estimator-vs-oracle reports.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "persistlab/config_io.hpp"
#include "persistlab/engine.hpp"
#include "persistlab/oracles.hpp"
#include "persistlab/report.hpp"
#include "persistlab/scenarios.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitDegenerate = 3;

void list_scenarios() {
    std::printf("%-10s %-20s %s\n", "name", "mechanism", "oracle");
    for (const auto& name : persistlab::scenario_names()) {
        const auto cfg = persistlab::make_scenario(name);
        std::string note;
        try {
            note = persistlab::oracle_scenario(cfg).notes;
        } catch (const std::exception& e) {
            note = std::string("unavailable (") + e.what() + ")";
        }
        std::printf("%-10s %-20s %s\n", name.c_str(),
                    persistlab::mechanism_tag(cfg.mechanism).c_str(),
                    note.c_str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"persistlab: simulation lab for instrumented persistence "
                 "models with heterogeneous effects"};

    std::string scenario_name;
    std::string config_path;
    std::string out_dir = "out";
    std::string format = "csv";
    std::vector<std::string> overrides;
    std::uint64_t seed = 12345;
    long long n_override = -1;
    int reps_override = -1;
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    bool list = false;

    app.add_option("--scenario", scenario_name, "built-in scenario name");
    app.add_option("--config", config_path, "scenario config file (JSON)");
    app.add_option("--n", n_override, "population size per rep");
    app.add_option("--reps", reps_override, "Monte Carlo replications");
    auto* seed_opt = app.add_option("--seed", seed, "master RNG seed");
    app.add_option("--set", overrides,
                   "override a config key, KEY=VALUE (repeatable; dotted "
                   "paths or aliases like q2, u_sd)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--format", format, "summary format: csv|plain")
        ->check(CLI::IsMember({"csv", "plain"}));
    app.add_option("--threads", threads, "worker threads for the reps");
    app.add_flag("--list", list, "list scenarios and exit");

    CLI11_PARSE(app, argc, argv);

    if (list) {
        list_scenarios();
        return 0;
    }

    if (!*seed_opt) {
        if (const char* env = std::getenv("PERSISTLAB_SEED"))
            seed = std::strtoull(env, nullptr, 10);
    }
    if (threads < 1) threads = 1;

    if (scenario_name.empty() == config_path.empty()) {
        std::cerr << "error: exactly one of --scenario or --config is "
                     "required (or --list)\n";
        return kExitConfigError;
    }

    nlohmann::json doc;
    try {
        if (!scenario_name.empty()) {
            doc = persistlab::make_scenario(scenario_name);
        } else {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "error: cannot read config " << config_path
                          << '\n';
                return kExitConfigError;
            }
            doc = nlohmann::json::parse(in);  // reports line/column on error
        }
        for (const auto& kv : overrides) persistlab::apply_override(doc, kv);
        if (n_override > 0) doc["n"] = n_override;
        if (reps_override > 0) doc["reps"] = reps_override;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfigError;
    }

    persistlab::RunReport report;
    try {
        report.config = persistlab::config_from_json(doc);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }
    report.seed = seed;

    const auto t0 = std::chrono::steady_clock::now();
    try {
        report.estimates = persistlab::monte_carlo(
            report.config, report.config.reps, seed, threads);
    } catch (const std::exception& e) {
        std::cerr << "run error: " << e.what() << '\n';
        return 1;
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    try {
        report.oracle = persistlab::oracle_scenario(report.config);
        report.has_oracle = true;
    } catch (const std::exception& e) {
        report.oracle_error = e.what();
    }
    if (!report.estimates.rep_counts.empty() &&
        report.config.mechanism != persistlab::Mechanism::continuous_proxy) {
        report.counts = report.estimates.rep_counts.front();
        report.has_counts = true;
    }

    namespace fs = std::filesystem;
    const fs::path dir = out_dir;
    const std::string stem = report.config.name;
    try {
        fs::create_directories(dir);
        if (format == "csv")
            persistlab::atomic_write(dir / (stem + "_summary.csv"),
                                     persistlab::summary_csv(report));
        else
            persistlab::atomic_write(dir / (stem + "_report.txt"),
                                     persistlab::plain_text(report));
        persistlab::atomic_write(dir / (stem + "_reps.csv"),
                                 persistlab::reps_csv(report));
    } catch (const std::exception& e) {
        std::cerr << "output error: " << e.what() << '\n';
        return 1;
    }

    std::cout << persistlab::plain_text(report);
    std::cout << "wall: " << report.wall_seconds << " s\n";

    if (report.estimates.excluded_reps * 10 > report.estimates.n_reps) {
        std::cerr << "error: void first stage in "
                  << report.estimates.excluded_reps << " of "
                  << report.estimates.n_reps << " reps\n";
        return kExitDegenerate;
    }
    return 0;
}
