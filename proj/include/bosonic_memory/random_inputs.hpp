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

// Seeded generators for property checks: orthogonal matrices, squeezing
// matrices, and Gaussian inputs that respect a per-use photon budget.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "bosonic_memory/gaussian.hpp"
#include "bosonic_memory/spectral.hpp"

namespace bosonic_memory {

using Rng = std::mt19937_64;

/// Haar-distributed real orthogonal matrix (QR of a Gaussian matrix, signs fixed).
inline Matrix random_orthogonal(int n, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix a(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a(r, c) = normal(rng);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix rr = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < n; ++c)
        if (rr(c, c) < 0.0) q.col(c) = -q.col(c);
    return q;
}

/// Symmetric Z with entries uniform in [-max_entry, max_entry].
inline SqueezingMatrix random_squeezing_matrix(int n, double max_entry, Rng& rng) {
    std::uniform_real_distribution<double> u(-max_entry, max_entry);
    Matrix z(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) z(r, c) = z(c, r) = u(rng);
    return SqueezingMatrix(std::move(z));
}

struct RandomStateOptions {
    double max_squeezing = 0.3;  // |d| of the single-mode squeezers
    double max_occupation = 1.0;  // thermal photons per mode before rescaling
    double max_displacement = 1.0;
    double min_budget_fraction = 0.5;  // target photons in [fraction, 1] * n * N
};

/// O1 * squeeze(t d) * O2 applied to thermal occupations t * occ, then
/// displaced by t * mu. The scale t in [0, 1] is bisected so the total
/// photon number hits a random target no larger than n * photons_per_use.
inline GaussianState random_constrained_state(int n, double photons_per_use, Rng& rng,
                                              const RandomStateOptions& options = {}) {
    detail::require(n >= 1, "random_constrained_state: n must be >= 1");
    detail::require(photons_per_use >= 0.0, "random_constrained_state: photon budget must be >= 0");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);

    const Matrix o1 = random_orthogonal(n, rng);
    const Matrix o2 = random_orthogonal(n, rng);
    Vector squeeze(n), occupation(n), displacement(2 * n);
    for (int k = 0; k < n; ++k) {
        squeeze(k) = options.max_squeezing * sym(rng);
        occupation(k) = options.max_occupation * unit(rng);
    }
    for (int k = 0; k < 2 * n; ++k) displacement(k) = options.max_displacement * sym(rng);

    const SymplecticTransform r1 = passive_rotation(o1);
    const SymplecticTransform r2 = passive_rotation(o2);
    const auto build = [&](double t) {
        Matrix diag = Matrix::Zero(2 * n, 2 * n);
        Matrix thermal = Matrix::Zero(2 * n, 2 * n);
        for (int k = 0; k < n; ++k) {
            diag(k, k) = std::exp(2.0 * t * squeeze(k));
            diag(n + k, n + k) = std::exp(-2.0 * t * squeeze(k));
            thermal(k, k) = thermal(n + k, n + k) = t * occupation(k) + 0.5;
        }
        const SymplecticTransform s = r1 * SymplecticTransform(std::move(diag)) * r2;
        const GaussianState squeezed = apply(s, GaussianState(Vector::Zero(2 * n), std::move(thermal)));
        return GaussianState(t * displacement, squeezed.covariance());
    };

    const double target =
        n * photons_per_use * (options.min_budget_fraction + (1.0 - options.min_budget_fraction) * unit(rng));
    if (mean_photon_number(build(1.0)) <= target) return build(1.0);
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mean_photon_number(build(mid)) <= target) lo = mid;
        else hi = mid;
    }
    return build(lo);
}

}  // namespace bosonic_memory
