// Copyright 2026 The bosonic-memory Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// bosonic-memory: capacity bounds for the lossy channel with squeezed
// environment memory.
//
//   bosonic-memory report --eta 0.7 --photons 1 --env-photons 0.5 --modes 8 --xi 0.1
//   bosonic-memory sweep  --eta 0.7 --env-photons 0.5 --xi-file z.txt --sweep N:0:5:50
//   bosonic-memory verify --config run.cfg
//
// Exit status: 0 ok, 1 invalid input, 2 a verification check failed.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "bosonic_memory/batch.hpp"

namespace {

namespace bm = bosonic_memory;
namespace batch = bosonic_memory::batch;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitVerifyFailed = 2;

struct Flags {
    batch::RunConfig config;
    std::optional<std::string> config_file;
    std::optional<std::string> sweep;
    std::string format = "csv";
    std::optional<std::string> out;
    double perturb = 0.0;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config_file, "key = value file; flags override its entries");
    cmd->add_option("-n,--modes", f.config.modes, "channel uses n (default 1, or the size of --xi-file)");
    cmd->add_option("--eta", f.config.eta, "beam-splitter transmissivity in [0, 1]");
    cmd->add_option("-N,--photons", f.config.photons, "mean input photons per use");
    cmd->add_option("-M,--env-photons", f.config.env_photons, "thermal photons per environment mode");
    cmd->add_option("--xi", f.config.xi, "nearest-neighbour squeezing strength");
    cmd->add_option("--xi-file", f.config.xi_file, "whitespace-separated squeezing matrix");
    cmd->add_option("--seed", f.config.seed, "seed for randomized checks");
}

batch::RunConfig load(const Flags& f, const CLI::App* cmd) {
    batch::RunConfig base;
    if (f.config_file) {
        std::ifstream in(*f.config_file);
        if (!in) throw batch::ValidationError("config: cannot open '" + *f.config_file + "'");
        std::stringstream text;
        text << in.rdbuf();
        base = batch::parse_config_text(text.str());
        // A relative matrix path in a config file is relative to that file.
        if (base.xi_file && std::filesystem::path(*base.xi_file).is_relative()) {
            base.xi_file = (std::filesystem::path(*f.config_file).parent_path() / *base.xi_file).string();
        }
    }
    batch::RunConfig flags = f.config;
    if (f.sweep) flags.sweep = batch::parse_sweep(*f.sweep);
    // verify has no --format option.
    const CLI::Option* format_option = cmd->get_option_no_throw("--format");
    const bool format_given = format_option != nullptr && format_option->count() > 0;
    if (format_given) flags.format = batch::parse_format(f.format);
    return batch::merge(base, flags, format_given, cmd->count("--seed") > 0);
}

int emit(const Flags& f, const std::vector<bm::BoundsReport>& table, batch::OutputFormat format) {
    if (f.out) {
        std::ofstream out(*f.out);
        if (!out) throw batch::ValidationError("out: cannot write '" + *f.out + "'");
        batch::write_table(out, table, format);
    } else {
        batch::write_table(std::cout, table, format);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Capacity bounds for a lossy bosonic channel with squeezed environment memory"};
    app.require_subcommand(1);

    Flags report_flags, sweep_flags, verify_flags;
    CLI::App* report = app.add_subcommand("report", "bounds at a single parameter point");
    add_common(report, report_flags);
    report->add_option("--format", report_flags.format, "csv or jsonl");
    report->add_option("--out", report_flags.out, "output file (default stdout)");

    CLI::App* sweep = app.add_subcommand("sweep", "bounds over an evenly spaced parameter range");
    add_common(sweep, sweep_flags);
    sweep->add_option("--sweep", sweep_flags.sweep, "param:start:stop:steps with param in eta, N, M, xi");
    sweep->add_option("--format", sweep_flags.format, "csv or jsonl");
    sweep->add_option("--out", sweep_flags.out, "output file (default stdout)");

    CLI::App* verify = app.add_subcommand("verify", "numerical self-checks of the channel identities");
    add_common(verify, verify_flags);
    verify->add_option("--perturb", verify_flags.perturb, "offset injected into the decomposed route")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (report->parsed()) {
            const batch::RunConfig config = load(report_flags, report);
            if (config.sweep) throw batch::ValidationError("report: a sweep was requested; use the sweep command");
            return emit(report_flags, {batch::run_report(config)}, config.format);
        }
        if (sweep->parsed()) {
            const batch::RunConfig config = load(sweep_flags, sweep);
            return emit(sweep_flags, batch::run_sweep(config), config.format);
        }
        const batch::RunConfig config = load(verify_flags, verify);
        if (config.sweep) throw batch::ValidationError("verify: sweeps are not supported here");
        batch::VerifyOptions options;
        options.perturbation = verify_flags.perturb;
        const batch::VerifySummary summary = batch::verify(config, options);
        batch::print_summary(std::cout, summary);
        return summary.passed() ? kExitOk : kExitVerifyFailed;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const bm::fock::TruncationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitVerifyFailed;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitVerifyFailed;
    }
}
