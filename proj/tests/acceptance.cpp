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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. argv[1] is the path of the bosonic-memory executable.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bosonic_memory.hpp"

namespace {

namespace bm = bosonic_memory;
namespace fock = bosonic_memory::fock;
using bm::Matrix;
using bm::Vector;

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2e", v);
    return buf;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }
double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

struct Point {
    bm::ChannelParams params;
    double photons;
};

// n cycles through {1, 2, 4, 8}; eta ~ U[0, 1], M ~ U[0, 2], N ~ U[0, 2],
// Z symmetric with entries in [-0.5, 0.5].
std::vector<Point> random_points(int count, std::uint64_t seed) {
    bm::Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int sizes[] = {1, 2, 4, 8};
    std::vector<Point> out;
    for (int i = 0; i < count; ++i) {
        const int n = sizes[i % 4];
        const double eta = unit(rng);
        const double m = 2.0 * unit(rng);
        const double photons = 2.0 * unit(rng);
        out.push_back({bm::ChannelParams(eta, m, bm::random_squeezing_matrix(n, 0.5, rng)), photons});
    }
    return out;
}

// ---------------------------------------------------------------- criteria

Outcome decomposition() {
    const auto points = random_points(200, 101);
    bm::Rng rng(102);
    double cov = 0.0, mean = 0.0;
    for (const auto& p : points) {
        const auto input = bm::random_constrained_state(p.params.n(), p.photons, rng);
        const auto direct = bm::apply_memory(p.params, input);
        const auto split = bm::apply_memory_decomposed(p.params, input);
        cov = std::max(cov, max_abs(Matrix(direct.covariance() - split.covariance())));
        mean = std::max(mean, max_abs(Vector(direct.mean() - split.mean())));
    }
    return {cov < 1e-9 && mean < 1e-10,
            "200 instances, covariance " + sci(cov) + " (< 1e-9), mean " + sci(mean) + " (< 1e-10)"};
}

Outcome commutation() {
    double worst = 0.0;
    for (const auto& p : random_points(200, 101)) worst = std::max(worst, bm::commutation_check(p.params));
    return {worst < 1e-10, "200 instances, commutator norm " + sci(worst) + " (< 1e-10)"};
}

Outcome memoryless_collapse() {
    bm::Rng rng(301);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double spread = 0.0;
    bool identical = true;
    const int sizes[] = {1, 2, 4, 8};
    for (int i = 0; i < 200; ++i) {
        const int n = sizes[i % 4];
        const auto params = bm::ChannelParams::memoryless(n, unit(rng), 2.0 * unit(rng));
        const double photons = 2.0 * unit(rng);
        const auto r = bm::bounds_report(params, photons);
        const double rates[] = {r.baseline, r.lower, r.upper_input, r.upper_output};
        spread = std::max(spread, *std::max_element(rates, rates + 4) - *std::min_element(rates, rates + 4));
        const auto input = bm::random_constrained_state(n, photons, rng);
        const auto with = bm::apply_memory(params, input);
        const auto without = bm::apply_memoryless(params, input);
        identical = identical && with.covariance() == without.covariance() && with.mean() == without.mean();
    }
    return {spread <= 1e-12 && identical, "200 points with Z = 0, rate spread " + sci(spread) +
                                              " (<= 1e-12), memory output identical to memoryless: " +
                                              (identical ? "yes" : "no")};
}

Outcome sandwich(const std::vector<bm::BoundsReport>& reports) {
    int violations = 0;
    double worst = 0.0;
    for (const auto& r : reports) {
        const double gap = r.lower - std::min(r.upper_input, r.upper_output);
        worst = std::max(worst, gap);
        if (gap > bm::kOrderingTolerance) ++violations;
    }
    return {violations == 0, std::to_string(reports.size()) + " points, " + std::to_string(violations) +
                                 " violations of lower <= min(upper_input, upper_output), largest excess " +
                                 sci(std::max(0.0, worst))};
}

Outcome dominate_baseline(const std::vector<bm::BoundsReport>& reports) {
    int violations = 0;
    for (const auto& r : reports) {
        if (r.baseline - r.upper_input > bm::kOrderingTolerance) ++violations;
        if (r.baseline - r.upper_output > bm::kOrderingTolerance) ++violations;
    }
    return {violations == 0, std::to_string(reports.size()) + " points, " + std::to_string(violations) +
                                 " violations of upper >= baseline"};
}

Outcome photon_bookkeeping(const std::vector<Point>& points) {
    bm::Rng rng(601);
    double in_excess = 0.0, out_excess = 0.0, identity = 0.0;
    for (const auto& p : points) {
        const int n = p.params.n();
        const auto spec = bm::analyze(p.params.squeezing());
        const auto omega = bm::multimode_squeezer(p.params.squeezing());
        const auto input = bm::random_constrained_state(n, p.photons, rng);
        const double in_ceiling = n * bm::n_bar(p.photons, spec);
        in_excess = std::max(in_excess,
                             (bm::mean_photon_number(bm::apply(omega.inverse(), input)) - in_ceiling) / std::max(1.0, in_ceiling));
        const double out_ceiling = n * bm::output_photon_ceiling(p.params, p.photons);
        out_excess = std::max(out_excess, (bm::mean_photon_number(bm::apply_memory(p.params, input)) - out_ceiling) /
                                              std::max(1.0, out_ceiling));
        double cosh_sum = 0.0;
        for (int j = 0; j < n; ++j) cosh_sum += std::cosh(4.0 * spec.eigenvalues(j));
        const double direct = bm::mean_photon_number(bm::apply(omega, bm::thermal_state(n, p.photons)));
        identity = std::max(identity, std::abs(direct - (cosh_sum * p.photons + n * spec.s1)));
    }
    const bool pass = in_excess <= 1e-12 && out_excess <= 1e-12 && identity < 1e-9;
    return {pass, std::to_string(points.size()) + " inputs, relative excess over N-bar ceiling " +
                      sci(std::max(0.0, in_excess)) + ", over output ceiling " + sci(std::max(0.0, out_excess)) +
                      ", thermal identity " + sci(identity) + " (< 1e-9)"};
}

Outcome spectral_identities() {
    bm::Rng rng(701);
    std::uniform_int_distribution<int> size(1, 8);
    std::uniform_real_distribution<double> budget(0.0, 3.0);
    double s1_dev = 0.0, recon = 0.0, nbar_short = 0.0;
    for (int i = 0; i < 500; ++i) {
        const auto z = bm::random_squeezing_matrix(size(rng), 0.5, rng);
        const auto spec = bm::analyze(z);
        s1_dev = std::max(s1_dev, std::abs(spec.s1 - (spec.s0 - 1.0) / 2.0) / std::max(1.0, spec.s0));
        const Matrix rebuilt = spec.eigenvectors * spec.eigenvalues.asDiagonal() * spec.eigenvectors.transpose();
        recon = std::max(recon, max_abs(Matrix(rebuilt - z.entries())));
        const double photons = budget(rng);
        nbar_short = std::max(nbar_short, photons - bm::n_bar(photons, spec));
    }
    return {s1_dev < 1e-12 && recon < 1e-9 && nbar_short <= 0.0,
            "500 matrices, s1 identity " + sci(s1_dev) + " (relative, < 1e-12), reconstruction " + sci(recon) +
                " (< 1e-9), N-bar >= N: " + (nbar_short <= 0.0 ? "always" : "violated")};
}

struct OracleCase {
    std::string label;
    bm::ChannelParams params;
    fock::FockOperator input;
    bm::GaussianState gaussian;
    fock::SimulationOptions options;
};

fock::FockOperator squeezed_vacuum(double d, int cutoff) {
    return fock::conjugate(fock::multimode_squeeze_unitary(bm::SqueezingMatrix(Matrix::Constant(1, 1, d)), cutoff),
                           fock::vacuum_density(1, cutoff));
}

Outcome fock_agreement() {
    std::vector<OracleCase> cases;
    for (double eta : {0.3, 0.7})
        for (double m : {0.0, 0.5}) {
            // One use at cutoff 40: a squeezed thermal input and a coherent one.
            for (double d : {-0.2, 0.0, 0.2}) {
                const bm::ChannelParams params(eta, m, bm::SqueezingMatrix(Matrix::Constant(1, 1, d)));
                fock::SimulationOptions one;
                one.cutoff = 40;
                const auto sq = fock::multimode_squeeze_unitary(bm::SqueezingMatrix(Matrix::Constant(1, 1, 0.1)), 40);
                cases.push_back({"n=1 d=" + sci(d) + " squeezed thermal", params,
                                 fock::conjugate(sq, fock::thermal_density(1, 0.3, 40)),
                                 bm::apply(bm::single_mode_squeezer(0.1), bm::thermal_state(1, 0.3)), one});
                Vector mean(2);
                mean << std::sqrt(2.0) * 0.8, std::sqrt(2.0) * 0.4;
                cases.push_back({"n=1 d=" + sci(d) + " coherent", params,
                                 fock::coherent_density(fock::Complex(0.8, 0.4), 40),
                                 bm::GaussianState(mean, 0.5 * Matrix::Identity(2, 2)), one});
            }
            // Two uses at cutoff 24, coherent arm and squeezed-vacuum arm.
            Vector mean = Vector::Zero(4);
            mean(0) = std::sqrt(2.0) * 0.7;
            const auto gaussian = bm::tensor(bm::GaussianState(Vector(mean.head(2)), 0.5 * Matrix::Identity(2, 2)),
                                             bm::apply(bm::single_mode_squeezer(-0.1), bm::vacuum_state(1)));
            const auto input = fock::tensor(fock::coherent_density(0.7, 24), squeezed_vacuum(-0.1, 24));
            fock::SimulationOptions two;
            two.cutoff = 24;
            const auto general = bm::SqueezingMatrix((Matrix(2, 2) << 0.05, 0.12, 0.12, -0.08).finished());
            cases.push_back({"n=2 nearest-neighbour 0.2", bm::ChannelParams(eta, m, bm::nearest_neighbor_matrix(2, 0.2)),
                             input, gaussian, two});
            cases.push_back({"n=2 general Z", bm::ChannelParams(eta, m, general), input, gaussian, two});
        }

    double cov = 0.0, mean_dev = 0.0, photons = 0.0, entropy = 0.0;
    int largest_cutoff_two = 0;
    for (const auto& c : cases) {
        const auto out = fock::simulate_channel(c.params, c.input, c.options);
        if (c.params.n() == 2) largest_cutoff_two = std::max(largest_cutoff_two, out.cutoff());
        const auto want = bm::apply_memory(c.params, c.gaussian);
        const auto m = fock::moments(out);
        cov = std::max(cov, max_abs(Matrix(m.covariance - want.covariance())));
        mean_dev = std::max(mean_dev, max_abs(Vector(m.mean - want.mean())));
        photons = std::max(photons, std::abs(fock::mean_photon_number(out) - bm::mean_photon_number(want)));
        entropy = std::max(entropy, std::abs(fock::entropy(out) - bm::von_neumann_entropy(want)));
    }
    const bool pass = cov < 1e-5 && photons < 1e-5 && entropy < 1e-4 && mean_dev < 1e-6;
    return {pass, std::to_string(cases.size()) + " cases (n=1 cutoff 40, n=2 cutoff 24 grown to at most " +
                      std::to_string(largest_cutoff_two) + "), covariance " + sci(cov) + " (< 1e-5), photons " +
                      sci(photons) + " (< 1e-5), entropy " + sci(entropy) + " (< 1e-4), mean " + sci(mean_dev) +
                      " (< 1e-6)"};
}

Outcome thermal_entropy() {
    const double at0 = bm::g(0.0);
    const double at1 = bm::g(1.0);
    bool monotone = true, concave = true;
    const int points = 1000;
    const double h = 10.0 / (points - 1);
    std::vector<double> v(points);
    for (int i = 0; i < points; ++i) v[static_cast<std::size_t>(i)] = bm::g(i * h);
    for (std::size_t i = 1; i < v.size(); ++i) monotone = monotone && v[i] > v[i - 1];
    for (std::size_t i = 1; i + 1 < v.size(); ++i) concave = concave && v[i + 1] - 2.0 * v[i] + v[i - 1] < 0.0;
    const double err1 = std::abs(at1 - 2.0 * std::log(2.0));
    return {at0 == 0.0 && err1 < 1e-12 && monotone && concave,
            "g(0) = " + sci(at0) + ", |g(1) - 2 ln 2| = " + sci(err1) + ", 1000-point grid on [0, 10] monotone: " +
                (monotone ? "yes" : "no") + ", concave: " + (concave ? "yes" : "no")};
}

int run(const std::string& command) {
    const int status = std::system(command.c_str());
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<double> csv_numbers(const std::string& line) {
    std::vector<double> out;
    std::stringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        if (cell == "true" || cell == "false") out.push_back(cell == "true" ? 1.0 : 0.0);
        else out.push_back(std::stod(cell));
    }
    return out;
}

Outcome cli_round_trip(const std::string& cli) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("bosonic-memory-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string sweep_cfg = std::string(SAMPLES_DIR) + "/chain_sweep.cfg";
    const std::string verify_cfg = std::string(SAMPLES_DIR) + "/single_use.cfg";
    const auto q = [](const std::string& s) { return "'" + s + "'"; };
    const std::string quiet = " > " + q((dir / "log.txt").string()) + " 2>&1";

    const int s1 = run(q(cli) + " sweep --config " + q(sweep_cfg) + " --out " + q((dir / "a.csv").string()) + quiet);
    const int s2 = run(q(cli) + " sweep --config " + q(sweep_cfg) + " --out " + q((dir / "b.csv").string()) + quiet);
    const std::string a = slurp(dir / "a.csv");
    const bool deterministic = s1 == 0 && s2 == 0 && !a.empty() && a == slurp(dir / "b.csv");

    // First data row: xi = 0 (d_bar 0, s0 1) and all four rates equal.
    bool collapse = false;
    double spread = -1.0;
    std::vector<std::string> rows;
    {
        std::stringstream in(a);
        std::string line;
        while (std::getline(in, line))
            if (!line.empty() && line[0] != '#') rows.push_back(line);
    }
    if (rows.size() >= 2) {
        const auto first = csv_numbers(rows[1]);
        if (first.size() == 15) {
            const double rates[] = {first[11], first[12], first[13], first[14]};
            spread = *std::max_element(rates, rates + 4) - *std::min_element(rates, rates + 4);
            collapse = first[4] == 0.0 && first[5] == 1.0 && spread <= 1e-12;
        }
    }

    const int ok = run(q(cli) + " verify --config " + q(verify_cfg) + quiet);
    const int bad = run(q(cli) + " verify --config " + q(verify_cfg) + " --perturb 1e-6" + quiet);
    fs::remove_all(dir);
    return {deterministic && collapse && ok == 0 && bad == 2,
            std::string("sweep deterministic: ") + (deterministic ? "yes" : "no") + ", " +
                std::to_string(rows.empty() ? 0 : rows.size() - 1) + " rows, first-row rate spread " +
                sci(spread) + ", verify exit " + std::to_string(ok) + " (want 0), perturbed verify exit " +
                std::to_string(bad) + " (want 2)"};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path to bosonic-memory>\n";
        return 2;
    }
    const auto start = std::chrono::steady_clock::now();
    const auto points = random_points(1000, 401);
    std::vector<bm::BoundsReport> reports;
    for (const auto& p : points) reports.push_back(bm::bounds_report(p.params, p.photons));

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"decomposition", decomposition},
        {"commutation", commutation},
        {"memoryless collapse", memoryless_collapse},
        {"sandwich ordering", [&] { return sandwich(reports); }},
        {"uppers dominate baseline", [&] { return dominate_baseline(reports); }},
        {"photon bookkeeping", [&] { return photon_bookkeeping(points); }},
        {"spectral identities", spectral_identities},
        {"Fock-oracle agreement", fock_agreement},
        {"thermal entropy g", thermal_entropy},
        {"CLI round trip", [&] { return cli_round_trip(argv[1]); }},
    };
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.pass;
        std::cout << "AC" << i + 1 << ' ' << (o.pass ? "PASS" : "FAIL") << ' ' << criteria[i].first << ": " << o.detail
                  << std::endl;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "acceptance: " << (all ? "all criteria passed" : "FAILURES") << " in " << sci(seconds) << " s\n";
    return all ? 0 : 1;
}
