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

// Capacity bounds for the memory channel under a mean photon budget N per use.
//
// All rates are built from the Gaussian rate of the memoryless lossy channel,
//   G(n, eta, N, M) = n [g(eta N + (1-eta) M) - g((1-eta) M)],
// which is the classical capacity only under the standing (conjectured)
// assumption that Gaussian encodings are optimal. Nothing here claims a
// capacity value; the report brackets it.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bosonic_memory/channel.hpp"
#include "bosonic_memory/spectral.hpp"
#include "bosonic_memory/thermal_entropy.hpp"

namespace bosonic_memory {

inline constexpr double kOrderingTolerance = 1e-12;

inline double gaussian_rate(int n, double eta, double photons, double env_photons) {
    detail::require(n >= 1, "gaussian_rate: n must be >= 1");
    detail::require(std::isfinite(eta) && eta >= 0.0 && eta <= 1.0, "gaussian_rate: eta must lie in [0, 1]");
    detail::require(std::isfinite(photons) && photons >= 0.0, "gaussian_rate: photon budget N must be >= 0");
    detail::require(std::isfinite(env_photons) && env_photons >= 0.0,
                    "gaussian_rate: environment photons M must be >= 0");
    const double noise = (1.0 - eta) * env_photons;
    return n * (g(eta * photons + noise) - g(noise));
}

/// Memoryless rate at the inflated budget n_bar(N).
inline double upper_bound_input(const ChannelParams& params, double photons) {
    const double inflated = n_bar(photons, analyze(params.squeezing()));
    return gaussian_rate(params.n(), params.eta(), inflated, params.env_photons());
}

/// Thermal output entropy at the output photon ceiling minus the vacuum-input
/// minimum output entropy.
inline double upper_bound_output(const ChannelParams& params, double photons) {
    const double out = output_photon_ceiling(params, photons);
    const double noise = (1.0 - params.eta()) * params.env_photons();
    return params.n() * (g(out) - g(noise));
}

struct LowerBound {
    double rate = 0.0;
    double n_prime = 0.0;  // (N - s1) / s0, may be <= 0
    bool feasible = false;
};

/// Thermal encoding after the anti-squeezer; infeasible when the squeezer
/// alone already spends the whole budget.
inline LowerBound lower_bound(const ChannelParams& params, double photons) {
    detail::require(std::isfinite(photons) && photons >= 0.0, "lower_bound: photon budget N must be >= 0");
    const SpectralData spec = analyze(params.squeezing());
    LowerBound out;
    out.n_prime = (photons - spec.s1) / spec.s0;
    out.feasible = out.n_prime > 0.0;
    out.rate = out.feasible ? gaussian_rate(params.n(), params.eta(), out.n_prime, params.env_photons()) : 0.0;
    return out;
}

/// Per-use rates and the photon-budget scalars behind them.
struct BoundsReport {
    int n = 0;
    double eta = 0.0;
    double env_photons = 0.0;  // M
    double photons = 0.0;      // N
    double d_bar = 0.0;
    double s0 = 1.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double n_bar = 0.0;
    double n_prime = 0.0;
    bool feasible_lower = false;
    double baseline = 0.0;
    double lower = 0.0;
    double upper_input = 0.0;
    double upper_output = 0.0;
};

inline BoundsReport bounds_report(const ChannelParams& params, double photons) {
    detail::require(std::isfinite(photons) && photons >= 0.0, "bounds_report: photon budget N must be >= 0");
    const SpectralData spec = analyze(params.squeezing());
    const double n = params.n();

    BoundsReport r;
    r.n = params.n();
    r.eta = params.eta();
    r.env_photons = params.env_photons();
    r.photons = photons;
    r.d_bar = spec.d_bar;
    r.s0 = spec.s0;
    r.s1 = spec.s1;
    r.s2 = spec.s2;
    r.n_bar = n_bar(photons, spec);
    const LowerBound lower = lower_bound(params, photons);
    r.n_prime = lower.n_prime;
    r.feasible_lower = lower.feasible;
    r.baseline = gaussian_rate(params.n(), params.eta(), photons, params.env_photons()) / n;
    r.lower = lower.rate / n;
    r.upper_input = upper_bound_input(params, photons) / n;
    r.upper_output = upper_bound_output(params, photons) / n;

    const auto slack = [](double bound) { return kOrderingTolerance * std::max(1.0, std::abs(bound)); };
    const double upper = std::min(r.upper_input, r.upper_output);
    if (r.lower > r.baseline + slack(r.baseline) || r.baseline > upper + slack(upper)) {
        throw std::logic_error("bounds_report: ordering lower <= baseline <= min(upper) violated");
    }
    return r;
}

}  // namespace bosonic_memory
