// Copyright 2026 The rydcnot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// rydcnot command-line front end.  Every subcommand reads an optional config
// file, runs one measurement family and writes CSV tables plus report.txt
// into --out.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical or fit failure,
// 4 acceptance failure.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

#include "rydcnot/acceptance.hpp"
#include "rydcnot/drivers.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitAcceptance = 4;

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> shots;
    std::optional<std::uint64_t> workers;
    std::optional<std::string> out;
    bool no_noise = false;
    bool dump = false;
};

rydcnot::RunConfig effective_config(const Flags& f) {
    rydcnot::RunConfig cfg = f.config.empty() ? rydcnot::RunConfig{} : rydcnot::load_config(f.config);
    if (f.seed) cfg.run.seed = *f.seed;
    if (f.shots) cfg.run.shots = *f.shots;
    if (f.workers) cfg.run.workers = *f.workers;
    if (f.out) cfg.run.out_dir = *f.out;
    if (f.no_noise) {
        cfg.noise.enabled = rydcnot::NoiseChannels::none();
        cfg.trap.temperature = 0.0;
    }
    cfg.validate();
    return cfg;
}

int emit(const rydcnot::RunConfig& cfg, const rydcnot::DriverOutput& out) {
    rydcnot::write_outputs(out, cfg.run.out_dir);
    std::ofstream(std::filesystem::path(cfg.run.out_dir) / "effective.conf") << rydcnot::dump_config(cfg);
    std::cout << out.report;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rydberg blockade CNOT and Bell-state simulator"};
    app.require_subcommand(1);
    Flags flags;
    app.add_option("--config", flags.config, "Configuration file (sectioned key = value)")
        ->check(CLI::ExistingFile);
    app.add_option("--seed", flags.seed, "Master seed");
    app.add_option("--shots", flags.shots, "Shots per data point");
    app.add_option("--workers", flags.workers, "Worker threads");
    app.add_option("--out", flags.out, "Output directory");
    app.add_flag("--dump-config", flags.dump, "Print the effective configuration and exit");
    app.fallthrough();

    auto* budget = app.add_subcommand("error-budget", "Intrinsic error, error budgets, dephasing vs temperature");
    auto* profile = app.add_subcommand("blockade-profile", "Blockade shift, P2 and separation histograms");
    auto* rabi = app.add_subcommand("rabi", "Ground and Rydberg Rabi flopping with crosstalk and blockade");
    auto* tt = app.add_subcommand("truth-table", "State preparation and CNOT truth tables");
    tt->add_flag("--no-noise", flags.no_noise, "Disable every noise channel and thermal motion");
    auto* bell = app.add_subcommand("bell", "Bell state populations");
    auto* parity = app.add_subcommand("parity", "Parity oscillation, fit and entanglement fidelity");
    auto* selftest = app.add_subcommand("selftest", "Run the acceptance checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        const rydcnot::RunConfig cfg = effective_config(flags);
        if (flags.dump) {
            rydcnot::dump_config(cfg, std::cout);
            return 0;
        }
        if (selftest->parsed()) {
            const auto results = rydcnot::acceptance::run_all(
                {cfg.run.seed, static_cast<unsigned>(cfg.run.workers)}, &std::cout);
            int failed = 0;
            for (const auto& r : results) failed += r.passed ? 0 : 1;
            std::cout << (results.size() - failed) << "/" << results.size() << " checks passed\n";
            return failed ? kExitAcceptance : 0;
        }
        if (budget->parsed()) return emit(cfg, rydcnot::error_budget(cfg));
        const rydcnot::ExperimentSetup setup = rydcnot::make_setup(cfg);
        if (profile->parsed()) return emit(cfg, rydcnot::blockade_profile(cfg, setup));
        if (rabi->parsed()) return emit(cfg, rydcnot::rabi(cfg, setup));
        if (tt->parsed()) return emit(cfg, rydcnot::truth_tables(cfg, setup));
        if (bell->parsed()) return emit(cfg, rydcnot::bell(cfg, setup));
        if (parity->parsed()) return emit(cfg, rydcnot::parity(cfg, setup));
    } catch (const rydcnot::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
