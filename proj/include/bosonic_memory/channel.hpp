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

// Lossy bosonic channels over n uses, with and without environment memory.
//
// Each input mode a_k meets an environment mode b_k on a beam splitter of
// transmissivity eta. The environment starts in n thermal modes with M mean
// photons each; the memory channel first squeezes the environment jointly with
// the multimode squeezer built from Z. Internally the 2n joint modes are laid
// out as (a_1..a_n, b_1..b_n); callers only ever see the n input modes.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bosonic_memory/gaussian.hpp"
#include "bosonic_memory/spectral.hpp"

namespace bosonic_memory {

class ChannelParams {
public:
    ChannelParams(double eta, double env_photons, SqueezingMatrix z)
        : eta_(eta), env_photons_(env_photons), z_(std::move(z)) {
        detail::require(std::isfinite(eta) && eta >= 0.0 && eta <= 1.0,
                        "ChannelParams: eta must lie in [0, 1], got " + std::to_string(eta));
        detail::require(std::isfinite(env_photons) && env_photons >= 0.0,
                        "ChannelParams: environment photon number M must be >= 0, got " + std::to_string(env_photons));
    }

    /// Memoryless channel (Z = 0) over n uses.
    static ChannelParams memoryless(int n, double eta, double env_photons) {
        return ChannelParams(eta, env_photons, SqueezingMatrix::zero(n));
    }

    int n() const { return z_.n(); }
    double eta() const { return eta_; }
    double env_photons() const { return env_photons_; }
    const SqueezingMatrix& squeezing() const { return z_; }

private:
    double eta_;
    double env_photons_;
    SqueezingMatrix z_;
};

/// Beam splitter coupling input mode k with environment mode k, for every k.
inline SymplecticTransform global_beam_splitter(const ChannelParams& params) {
    const int n = params.n();
    const double t = std::sqrt(params.eta());
    const double r = std::sqrt(1.0 - params.eta());
    const Matrix id = Matrix::Identity(n, n);
    Matrix block(2 * n, 2 * n);
    block << t * id, -r * id, r * id, t * id;
    Matrix s = Matrix::Zero(4 * n, 4 * n);
    s.topLeftCorner(2 * n, 2 * n) = block;
    s.bottomRightCorner(2 * n, 2 * n) = block;
    return SymplecticTransform(std::move(s));
}

/// R(V) * [(+)_j squeeze(d_j)] * R(V^T) for Z = V diag(d) V^T; the x block
/// equals exp(2Z) and the p block exp(-2Z).
inline SymplecticTransform multimode_squeezer(const SqueezingMatrix& z) {
    const int n = z.n();
    if (z.is_zero()) return SymplecticTransform::identity(n);
    const SpectralData spec = analyze(z);
    Matrix diag = Matrix::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
        diag(j, j) = std::exp(2.0 * spec.eigenvalues(j));
        diag(n + j, n + j) = std::exp(-2.0 * spec.eigenvalues(j));
    }
    const SymplecticTransform squeezers{std::move(diag)};
    return passive_rotation(spec.eigenvectors) * squeezers * passive_rotation(spec.eigenvectors.transpose());
}

namespace detail {

inline void require_input_modes(const ChannelParams& params, const GaussianState& input, const char* who) {
    require(input.num_modes() == params.n(), std::string(who) + ": input has " + std::to_string(input.num_modes()) +
                                                 " modes, channel has " + std::to_string(params.n()) + " uses");
}

inline GaussianState through_beam_splitters(const ChannelParams& params, const GaussianState& input,
                                            const GaussianState& environment) {
    const GaussianState joint = apply(global_beam_splitter(params), tensor(input, environment));
    return partial_trace(joint, mode_range(0, params.n()));
}

}  // namespace detail

inline GaussianState apply_memoryless(const ChannelParams& params, const GaussianState& input) {
    detail::require_input_modes(params, input, "apply_memoryless");
    return detail::through_beam_splitters(params, input, thermal_state(params.n(), params.env_photons()));
}

inline GaussianState apply_memory(const ChannelParams& params, const GaussianState& input) {
    detail::require_input_modes(params, input, "apply_memory");
    const GaussianState environment =
        apply(multimode_squeezer(params.squeezing()), thermal_state(params.n(), params.env_photons()));
    return detail::through_beam_splitters(params, input, environment);
}

/// The memory channel as anti-squeeze, memoryless channel, squeeze.
inline GaussianState apply_memory_decomposed(const ChannelParams& params, const GaussianState& input) {
    detail::require_input_modes(params, input, "apply_memory_decomposed");
    const SymplecticTransform omega = multimode_squeezer(params.squeezing());
    const GaussianState at_channel_input = apply(omega.inverse(), input);
    const GaussianState memoryless_output =
        apply_memoryless(ChannelParams::memoryless(params.n(), params.eta(), params.env_photons()), at_channel_input);
    return apply(omega, memoryless_output);
}

/// |S_U (Omega (+) Omega_b) - (Omega (+) Omega_b) S_U|_max with the same Z on
/// inputs and environment.
inline double commutation_check(const ChannelParams& params) {
    const SymplecticTransform u = global_beam_splitter(params);
    const SymplecticTransform omega = multimode_squeezer(params.squeezing());
    const SymplecticTransform both = direct_sum(omega, omega);
    return detail::max_abs(Matrix(u.matrix() * both.matrix() - both.matrix() * u.matrix()));
}

/// Per-use ceiling on output photons when inputs carry at most `photons` per use.
inline double output_photon_ceiling(const ChannelParams& params, double photons) {
    detail::require(std::isfinite(photons) && photons >= 0.0, "output_photon_ceiling: photon budget must be >= 0");
    const SpectralData spec = analyze(params.squeezing());
    return params.eta() * photons + (1.0 - params.eta()) * (spec.s0 * params.env_photons() + spec.s1);
}

}  // namespace bosonic_memory
