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

// Batch front end: single-point reports, parameter sweeps, verification runs
// and their flat-record serialization. The command-line tool is a thin shell
// over these functions.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bosonic_memory/capacity.hpp"
#include "bosonic_memory/channel.hpp"
#include "bosonic_memory/fock.hpp"
#include "bosonic_memory/gaussian.hpp"
#include "bosonic_memory/random_inputs.hpp"
#include "bosonic_memory/spectral.hpp"

namespace bosonic_memory::batch {

/// Bad user input: exit status 1 in the CLI.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { csv, jsonl };

struct SweepSpec {
    std::string parameter;  // eta | N | M | xi
    double start = 0.0;
    double stop = 0.0;
    int steps = 1;
};

struct RunConfig {
    std::optional<int> modes;
    std::optional<double> eta;
    std::optional<double> photons;      // N
    std::optional<double> env_photons;  // M
    std::optional<double> xi;
    std::optional<std::string> xi_file;
    std::optional<SweepSpec> sweep;
    OutputFormat format = OutputFormat::csv;
    std::uint64_t seed = 1;
};

/// "param:start:stop:steps".
inline SweepSpec parse_sweep(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, ':')) parts.push_back(part);
    if (parts.size() != 4) throw ValidationError("sweep: expected param:start:stop:steps, got '" + text + "'");
    SweepSpec spec;
    spec.parameter = parts[0];
    if (spec.parameter != "eta" && spec.parameter != "N" && spec.parameter != "M" && spec.parameter != "xi") {
        throw ValidationError("sweep: parameter must be one of eta, N, M, xi; got '" + spec.parameter + "'");
    }
    try {
        std::size_t used = 0;
        spec.start = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("start");
        spec.stop = std::stod(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument("stop");
        spec.steps = std::stoi(parts[3], &used);
        if (used != parts[3].size()) throw std::invalid_argument("steps");
    } catch (const std::exception&) {
        throw ValidationError("sweep: cannot parse numbers in '" + text + "'");
    }
    if (!(std::isfinite(spec.start) && std::isfinite(spec.stop))) throw ValidationError("sweep: non-finite range");
    if (spec.start > spec.stop) throw ValidationError("sweep: start must be <= stop");
    if (spec.steps < 1) throw ValidationError("sweep: steps must be >= 1");
    return spec;
}

inline OutputFormat parse_format(const std::string& text) {
    if (text == "csv") return OutputFormat::csv;
    if (text == "jsonl") return OutputFormat::jsonl;
    throw ValidationError("format: expected csv or jsonl, got '" + text + "'");
}

/// Parses "key = value" lines ('#' starts a comment). Keys mirror the long
/// command-line flags without dashes in front.
inline RunConfig parse_config_text(const std::string& text) {
    RunConfig config;
    std::stringstream in(text);
    std::string line;
    int line_no = 0;
    const auto trim = [](std::string s) {
        const auto first = s.find_first_not_of(" \t\r");
        if (first == std::string::npos) return std::string();
        const auto last = s.find_last_not_of(" \t\r");
        return s.substr(first, last - first + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = "config line " + std::to_string(line_no) + ": ";
        if (eq == std::string::npos) throw ValidationError(where + "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw ValidationError(where + "empty value for '" + key + "'");
        const auto number = [&](const std::string& v) {
            std::size_t used = 0;
            double out = 0.0;
            try {
                out = std::stod(v, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != v.size()) throw ValidationError(where + "'" + key + "' is not a number: '" + v + "'");
            return out;
        };
        if (key == "eta") config.eta = number(value);
        else if (key == "photons") config.photons = number(value);
        else if (key == "env-photons") config.env_photons = number(value);
        else if (key == "xi") config.xi = number(value);
        else if (key == "xi-file") config.xi_file = value;
        else if (key == "sweep") config.sweep = parse_sweep(value);
        else if (key == "format") config.format = parse_format(value);
        else if (key == "modes" || key == "seed") {
            const double v = number(value);
            if (v != std::floor(v) || v < 0.0) throw ValidationError(where + "'" + key + "' must be a whole number");
            if (key == "modes") config.modes = static_cast<int>(v);
            else config.seed = static_cast<std::uint64_t>(v);
        } else {
            throw ValidationError(where + "unknown key '" + key + "'");
        }
    }
    return config;
}

/// Fields set in `overrides` win; format and seed are taken from overrides
/// only when the caller marks them as explicitly given.
inline RunConfig merge(RunConfig base, const RunConfig& overrides, bool format_given, bool seed_given) {
    if (overrides.modes) base.modes = overrides.modes;
    if (overrides.eta) base.eta = overrides.eta;
    if (overrides.photons) base.photons = overrides.photons;
    if (overrides.env_photons) base.env_photons = overrides.env_photons;
    if (overrides.xi) base.xi = overrides.xi;
    if (overrides.xi_file) base.xi_file = overrides.xi_file;
    if (overrides.sweep) base.sweep = overrides.sweep;
    if (format_given) base.format = overrides.format;
    if (seed_given) base.seed = overrides.seed;
    return base;
}

namespace detail {

inline double required(const std::optional<double>& value, const char* field) {
    if (!value) throw ValidationError(std::string(field) + ": required");
    return *value;
}

inline SqueezingMatrix squeezing_from(const RunConfig& config) {
    if (config.xi && config.xi_file) throw ValidationError("xi, xi-file: give at most one squeezing source");
    if (config.xi_file) {
        SqueezingMatrix z = [&] {
            try {
                return load_squeezing_matrix_file(*config.xi_file);
            } catch (const std::invalid_argument& e) {
                throw ValidationError(std::string("xi-file: ") + e.what());
            }
        }();
        if (config.modes && *config.modes != z.n()) {
            throw ValidationError("modes: " + std::to_string(*config.modes) + " disagrees with the " +
                                  std::to_string(z.n()) + "x" + std::to_string(z.n()) + " matrix in xi-file");
        }
        return z;
    }
    const int n = config.modes.value_or(1);
    if (n < 1) throw ValidationError("modes: must be >= 1");
    if (config.xi) {
        if (!std::isfinite(*config.xi)) throw ValidationError("xi: must be finite");
        return nearest_neighbor_matrix(n, *config.xi);
    }
    return SqueezingMatrix::zero(n);
}

}  // namespace detail

/// Channel parameters and photon budget N described by a (sweep-free) config.
inline std::pair<ChannelParams, double> resolve(const RunConfig& config) {
    const double eta = detail::required(config.eta, "eta");
    const double photons = detail::required(config.photons, "photons");
    const double env = detail::required(config.env_photons, "env-photons");
    if (!(std::isfinite(eta) && eta >= 0.0 && eta <= 1.0)) throw ValidationError("eta: must lie in [0, 1]");
    if (!(std::isfinite(photons) && photons >= 0.0)) throw ValidationError("photons: must be >= 0");
    if (!(std::isfinite(env) && env >= 0.0)) throw ValidationError("env-photons: must be >= 0");
    return {ChannelParams(eta, env, detail::squeezing_from(config)), photons};
}

inline BoundsReport run_report(const RunConfig& config) {
    const auto [params, photons] = resolve(config);
    return bounds_report(params, photons);
}

/// The config with the swept parameter pinned to `value`.
inline RunConfig sweep_point(const RunConfig& config, double value) {
    RunConfig point = config;
    point.sweep.reset();
    const std::string& p = config.sweep->parameter;
    if (p == "eta") point.eta = value;
    else if (p == "N") point.photons = value;
    else if (p == "M") point.env_photons = value;
    else point.xi = value;
    return point;
}

/// steps + 1 evenly spaced records, ordered by the swept value.
inline std::vector<BoundsReport> run_sweep(const RunConfig& config) {
    if (!config.sweep) throw ValidationError("sweep: no --sweep range given");
    const SweepSpec& spec = *config.sweep;
    const std::string& p = spec.parameter;
    const bool fixed = (p == "eta" && config.eta) || (p == "N" && config.photons) ||
                       (p == "M" && config.env_photons) || (p == "xi" && config.xi);
    if (fixed) throw ValidationError("sweep: parameter '" + p + "' is also given a fixed value");
    if (p == "xi" && config.xi_file) throw ValidationError("sweep: cannot sweep xi together with xi-file");

    std::vector<BoundsReport> table;
    table.reserve(static_cast<std::size_t>(spec.steps) + 1);
    for (int i = 0; i <= spec.steps; ++i) {
        const double value =
            i == spec.steps ? spec.stop : spec.start + (spec.stop - spec.start) * static_cast<double>(i) / spec.steps;
        try {
            table.push_back(run_report(sweep_point(config, value)));
        } catch (const ValidationError& e) {
            throw ValidationError("sweep point " + std::to_string(i) + ": " + e.what());
        } catch (const std::exception& e) {
            throw std::runtime_error("sweep point " + std::to_string(i) + ": " + e.what());
        }
    }
    return table;
}

// ---------------------------------------------------------------- output

inline const std::vector<std::string>& report_columns() {
    static const std::vector<std::string> columns = {
        "n",        "eta",    "M",        "N",          "d_bar",      "s0",
        "s1",       "s2",     "n_bar",    "n_prime",    "feasible_lower",
        "baseline", "lower",  "upper_input", "upper_output"};
    return columns;
}

inline std::string format_number(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

namespace detail {

inline std::vector<std::string> report_fields(const BoundsReport& r) {
    return {std::to_string(r.n),         format_number(r.eta),         format_number(r.env_photons),
            format_number(r.photons),    format_number(r.d_bar),       format_number(r.s0),
            format_number(r.s1),         format_number(r.s2),          format_number(r.n_bar),
            format_number(r.n_prime),    r.feasible_lower ? "true" : "false",
            format_number(r.baseline),   format_number(r.lower),       format_number(r.upper_input),
            format_number(r.upper_output)};
}

}  // namespace detail

/// Leading comment of every CSV table.
inline std::string csv_preamble() {
    return "# rates in nats per channel use; Gaussian-rate bounds (capacity formula conjectured)";
}

inline std::string csv_header() {
    std::string out;
    for (const auto& c : report_columns()) out += (out.empty() ? "" : ",") + c;
    return out;
}

inline std::string to_csv_row(const BoundsReport& r) {
    std::string out;
    for (const auto& f : detail::report_fields(r)) out += (out.empty() ? "" : ",") + f;
    return out;
}

inline std::string to_jsonl(const BoundsReport& r) {
    const auto& columns = report_columns();
    const auto fields = detail::report_fields(r);
    std::string out = "{";
    for (std::size_t i = 0; i < columns.size(); ++i) out += "\"" + columns[i] + "\":" + fields[i] + ",";
    out += "\"capacity_formula\":\"conjectured\"}";
    return out;
}

inline void write_table(std::ostream& out, const std::vector<BoundsReport>& table, OutputFormat format) {
    if (format == OutputFormat::csv) {
        out << csv_preamble() << '\n' << csv_header() << '\n';
        for (const auto& r : table) out << to_csv_row(r) << '\n';
    } else {
        for (const auto& r : table) out << to_jsonl(r) << '\n';
    }
}

// ---------------------------------------------------------------- verify

struct CheckResult {
    std::string name;
    double deviation = 0.0;
    double threshold = 0.0;
    bool skipped = false;
    std::string note;

    bool passed() const { return skipped || deviation < threshold; }
};

struct VerifySummary {
    std::vector<CheckResult> checks;

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
    }
};

struct VerifyOptions {
    int random_inputs = 20;
    // Added to one covariance entry of the decomposed route; a nonzero value
    // exercises the failure path of the harness.
    double perturbation = 0.0;
};

inline constexpr int kMaxVerifyUses = 8;

inline VerifySummary verify(const RunConfig& config, const VerifyOptions& options = {}) {
    const auto [params, photons] = resolve(config);
    const int n = params.n();
    if (n > kMaxVerifyUses) {
        throw ValidationError("verify: symplectic checks support at most " + std::to_string(kMaxVerifyUses) +
                              " channel uses, got " + std::to_string(n));
    }
    const SpectralData spec = analyze(params.squeezing());
    const SymplecticTransform omega = multimode_squeezer(params.squeezing());
    Rng rng(config.seed);

    double cov_dev = 0.0;
    double mean_dev = 0.0;
    double out_excess = 0.0;
    double in_excess = 0.0;
    const double out_ceiling = n * output_photon_ceiling(params, photons);
    const double in_ceiling = n * n_bar(photons, spec);
    for (int i = 0; i < options.random_inputs; ++i) {
        const GaussianState input = random_constrained_state(n, photons, rng);
        const GaussianState direct = apply_memory(params, input);
        const GaussianState decomposed = apply_memory_decomposed(params, input);
        Matrix decomposed_cov = decomposed.covariance();
        decomposed_cov(0, 0) += options.perturbation;
        cov_dev = std::max(cov_dev, bosonic_memory::detail::max_abs(Matrix(direct.covariance() - decomposed_cov)));
        mean_dev = std::max(mean_dev, bosonic_memory::detail::max_abs(Vector(direct.mean() - decomposed.mean())));
        out_excess = std::max(out_excess, mean_photon_number(direct) - out_ceiling);
        in_excess = std::max(in_excess, mean_photon_number(apply(omega.inverse(), input)) - in_ceiling);
    }

    VerifySummary summary;
    summary.checks.push_back({"decomposition covariance", cov_dev, 1e-9, false, {}});
    summary.checks.push_back({"decomposition mean", mean_dev, 1e-10, false, {}});
    summary.checks.push_back({"commutation", commutation_check(params), 1e-10, false, {}});
    summary.checks.push_back({"output photon ceiling excess", std::max(0.0, out_excess), 1e-9, false, {}});
    summary.checks.push_back({"n_bar ceiling excess", std::max(0.0, in_excess), 1e-9, false, {}});

    double thermal_sum = 0.0;
    for (int j = 0; j < n; ++j) thermal_sum += std::cosh(4.0 * spec.eigenvalues(j));
    const double thermal_direct = mean_photon_number(apply(omega, thermal_state(n, photons)));
    const double thermal_gap = std::abs(thermal_direct - (thermal_sum * photons + n * spec.s1));
    summary.checks.push_back({"thermal photon identity", thermal_gap, 1e-9, false, {}});

    const bool oracle_ok = n <= fock::kMaxOracleUses &&
                           bosonic_memory::detail::max_abs(params.squeezing().entries()) <= fock::kMaxOracleSqueezing &&
                           params.env_photons() <= 1.0 && photons <= 2.0;
    if (!oracle_ok) {
        const std::string why = "needs n <= 2, |xi| <= 0.2, M <= 1, N <= 2";
        summary.checks.push_back({"fock covariance", 0.0, 1e-5, true, why});
        summary.checks.push_back({"fock photons", 0.0, 1e-5, true, why});
        summary.checks.push_back({"fock entropy", 0.0, 1e-4, true, why});
        return summary;
    }

    // Trace lost to truncation sits near the cutoff, where it weighs about
    // 2 * cutoff in the second moments; hence a budget far below 1e-5.
    fock::SimulationOptions oracle;
    oracle.cutoff = n == 1 ? 40 : fock::default_cutoff(n);
    oracle.tail_tolerance = 1e-7;

    // Coherent input spending the whole budget on every use.
    const double amplitude = std::sqrt(photons);
    fock::FockOperator rho = fock::coherent_density(amplitude, oracle.cutoff);
    Vector mean = Vector::Zero(2 * n);
    mean(0) = std::sqrt(2.0) * amplitude;
    for (int k = 1; k < n; ++k) {
        rho = fock::tensor(rho, fock::coherent_density(amplitude, oracle.cutoff));
        mean(k) = std::sqrt(2.0) * amplitude;
    }
    const GaussianState gaussian_input(mean, 0.5 * Matrix::Identity(2 * n, 2 * n));
    const GaussianState gaussian_out = apply_memory(params, gaussian_input);
    std::optional<fock::FockOperator> fock_out;
    try {
        fock_out = fock::simulate_channel(params, rho, oracle);
    } catch (const fock::TruncationError& e) {
        // The oracle could not resolve this point; that says nothing about the identities.
        const std::string why = "oracle truncation deficit " + format_number(e.deficit()) + " above budget";
        summary.checks.push_back({"fock covariance", 0.0, 1e-5, true, why});
        summary.checks.push_back({"fock photons", 0.0, 1e-5, true, why});
        summary.checks.push_back({"fock entropy", 0.0, 1e-4, true, why});
        return summary;
    }
    const fock::Moments m = fock::moments(*fock_out);
    const double cov = bosonic_memory::detail::max_abs(Matrix(m.covariance - gaussian_out.covariance()));
    const double photon_gap = std::abs(fock::mean_photon_number(*fock_out) - mean_photon_number(gaussian_out));
    const double entropy_gap = std::abs(fock::entropy(*fock_out) - von_neumann_entropy(gaussian_out));
    summary.checks.push_back({"fock covariance", cov, 1e-5, false, {}});
    summary.checks.push_back({"fock photons", photon_gap, 1e-5, false, {}});
    summary.checks.push_back({"fock entropy", entropy_gap, 1e-4, false, {}});
    return summary;
}

inline void print_summary(std::ostream& out, const VerifySummary& summary) {
    for (const auto& c : summary.checks) {
        char line[256];
        if (c.skipped) {
            std::snprintf(line, sizeof(line), "%-30s %12s  threshold %8.1e  SKIP (%s)", c.name.c_str(), "-",
                          c.threshold, c.note.c_str());
        } else {
            std::snprintf(line, sizeof(line), "%-30s %12.3e  threshold %8.1e  %s", c.name.c_str(), c.deviation,
                          c.threshold, c.passed() ? "PASS" : "FAIL");
        }
        out << line << '\n';
    }
    out << (summary.passed() ? "verify: all checks passed" : "verify: FAILED") << '\n';
}

}  // namespace bosonic_memory::batch
