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

// Gaussian states and symplectic transforms in the covariance-matrix picture.
//
// Conventions used throughout the library:
//   a = (x + i p) / sqrt(2),  [x, p] = i,  vacuum variance 1/2 per quadrature.
//   Quadrature vectors are ordered all-x-then-all-p: (x_1..x_m, p_1..p_m).
//   A SymplecticTransform S describes the Heisenberg action X R X^dag = S R of
//   a Gaussian unitary X on the quadrature vector R. apply() maps state
//   moments by mean -> S mean, covariance -> S cov S^T.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bosonic_memory/thermal_entropy.hpp"

namespace bosonic_memory {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kUncertaintyTolerance = 1e-9;
inline constexpr double kSymplecticTolerance = 1e-10;
inline constexpr double kOrthogonalityTolerance = 1e-10;
inline constexpr double kPairingTolerance = 1e-8;

namespace detail {

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
inline double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

inline void require(bool condition, const std::string& message) {
    if (!condition) throw std::invalid_argument(message);
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

// Global quadrature row indices of the listed modes: x rows first, then p rows.
inline std::vector<Eigen::Index> quadrature_indices(int num_modes, const std::vector<int>& modes) {
    std::vector<Eigen::Index> rows;
    rows.reserve(2 * modes.size());
    for (int k : modes) rows.push_back(k);
    for (int k : modes) rows.push_back(num_modes + k);
    return rows;
}

inline std::vector<int> mode_range(int first, int count) {
    std::vector<int> modes(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) modes[static_cast<std::size_t>(k)] = first + k;
    return modes;
}

}  // namespace detail

/// J = [[0, I_m], [-I_m, 0]].
class SymplecticForm {
public:
    explicit SymplecticForm(int num_modes) : num_modes_(num_modes) {
        detail::require(num_modes >= 1, "SymplecticForm: num_modes must be >= 1");
        matrix_ = Matrix::Zero(2 * num_modes, 2 * num_modes);
        matrix_.topRightCorner(num_modes, num_modes).setIdentity();
        matrix_.bottomLeftCorner(num_modes, num_modes) = -Matrix::Identity(num_modes, num_modes);
    }

    int num_modes() const { return num_modes_; }
    const Matrix& matrix() const { return matrix_; }

private:
    int num_modes_;
    Matrix matrix_;
};

/// Positive symplectic eigenvalues of a covariance matrix, sorted descending.
///
/// Computed as the eigenvalue moduli of J * cov. These come in +/- i nu pairs;
/// adjacent moduli are paired and each pair must agree to kPairingTolerance.
inline std::vector<double> symplectic_eigenvalues(const Matrix& covariance) {
    detail::require(covariance.rows() == covariance.cols() && covariance.rows() % 2 == 0 &&
                        covariance.rows() > 0,
                    "symplectic_eigenvalues: covariance must be square with even, nonzero dimension");
    detail::require(covariance.allFinite(), "symplectic_eigenvalues: covariance has non-finite entries");
    const double scale = std::max(1.0, detail::max_abs(covariance));
    detail::require(detail::max_abs(Matrix(covariance - covariance.transpose())) <= kSymmetryTolerance * scale,
                    "symplectic_eigenvalues: covariance is not symmetric");
    Eigen::LLT<Matrix> llt(covariance);
    if (llt.info() != Eigen::Success) {
        throw std::domain_error("symplectic_eigenvalues: covariance is not positive definite");
    }

    const int m = static_cast<int>(covariance.rows() / 2);
    // J V is similar to L^T J L (V = L L^T), and i L^T J L is Hermitian with
    // eigenvalues +-nu_j; the Hermitian solver is far sturdier than a general one.
    const Matrix l = llt.matrixL();
    const Matrix k = l.transpose() * SymplecticForm(m).matrix() * l;
    const Eigen::MatrixXcd h = std::complex<double>(0.0, 1.0) * k.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("symplectic_eigenvalues: eigensolver failed");
    }
    std::vector<double> moduli;
    moduli.reserve(static_cast<std::size_t>(2 * m));
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) moduli.push_back(std::abs(solver.eigenvalues()(i)));
    std::sort(moduli.begin(), moduli.end(), std::greater<>());

    std::vector<double> nu;
    nu.reserve(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i + 1 < moduli.size(); i += 2) {
        const double a = moduli[i];
        const double b = moduli[i + 1];
        if (std::abs(a - b) > kPairingTolerance * std::max(1.0, a)) {
            throw std::domain_error("symplectic_eigenvalues: unpaired eigenvalue moduli " + std::to_string(a) +
                                    " and " + std::to_string(b));
        }
        nu.push_back(0.5 * (a + b));
    }
    return nu;
}

/// Mean vector and covariance matrix of an m-mode Gaussian state.
///
/// Construction validates symmetry and the uncertainty relation
/// (every symplectic eigenvalue >= 1/2 - kUncertaintyTolerance).
class GaussianState {
public:
    GaussianState(Vector mean, Matrix covariance) : mean_(std::move(mean)), covariance_(std::move(covariance)) {
        detail::require(covariance_.rows() == covariance_.cols() && covariance_.rows() % 2 == 0 &&
                            covariance_.rows() >= 2,
                        "GaussianState: covariance must be 2m x 2m with m >= 1");
        detail::require(mean_.size() == covariance_.rows(), "GaussianState: mean length must equal 2m");
        detail::require(mean_.allFinite() && covariance_.allFinite(), "GaussianState: non-finite moments");
        num_modes_ = static_cast<int>(covariance_.rows() / 2);
        const double scale = std::max(1.0, detail::max_abs(covariance_));
        detail::require(detail::max_abs(Matrix(covariance_ - covariance_.transpose())) <= kSymmetryTolerance * scale,
                        "GaussianState: covariance is not symmetric");
        std::vector<double> nu;
        try {
            nu = symplectic_eigenvalues(covariance_);
        } catch (const std::domain_error& e) {
            throw std::invalid_argument(std::string("GaussianState: unphysical covariance (") + e.what() + ")");
        }
        if (nu.back() < 0.5 - kUncertaintyTolerance) {
            throw std::invalid_argument("GaussianState: covariance violates the uncertainty relation (nu_min = " +
                                        std::to_string(nu.back()) + ")");
        }
    }

    int num_modes() const { return num_modes_; }
    const Vector& mean() const { return mean_; }
    const Matrix& covariance() const { return covariance_; }

private:
    int num_modes_ = 0;
    Vector mean_;
    Matrix covariance_;
};

inline GaussianState vacuum_state(int num_modes) {
    detail::require(num_modes >= 1, "vacuum_state: num_modes must be >= 1");
    return GaussianState(Vector::Zero(2 * num_modes), 0.5 * Matrix::Identity(2 * num_modes, 2 * num_modes));
}

/// Product of m thermal modes with `photons` mean photons each.
inline GaussianState thermal_state(int num_modes, double photons) {
    detail::require(num_modes >= 1, "thermal_state: num_modes must be >= 1");
    detail::require(std::isfinite(photons) && photons >= 0.0, "thermal_state: mean photon number must be >= 0");
    return GaussianState(Vector::Zero(2 * num_modes),
                         (photons + 0.5) * Matrix::Identity(2 * num_modes, 2 * num_modes));
}

/// Real 2m x 2m matrix S with S J S^T = J.
class SymplecticTransform {
public:
    explicit SymplecticTransform(Matrix matrix) : matrix_(std::move(matrix)) {
        detail::require(matrix_.rows() == matrix_.cols() && matrix_.rows() % 2 == 0 && matrix_.rows() >= 2,
                        "SymplecticTransform: matrix must be 2m x 2m with m >= 1");
        detail::require(matrix_.allFinite(), "SymplecticTransform: non-finite entries");
        num_modes_ = static_cast<int>(matrix_.rows() / 2);
        const double dev = symplectic_deviation();
        // Rounding in S J S^T grows with |S|^2, so strongly squeezing transforms get a scaled budget.
        const double budget = kSymplecticTolerance * std::max(1.0, std::pow(detail::max_abs(matrix_), 2));
        if (dev > budget) {
            throw std::invalid_argument("SymplecticTransform: |S J S^T - J|_max = " + std::to_string(dev));
        }
    }

    static SymplecticTransform identity(int num_modes) {
        detail::require(num_modes >= 1, "SymplecticTransform::identity: num_modes must be >= 1");
        return SymplecticTransform(Matrix::Identity(2 * num_modes, 2 * num_modes));
    }

    int num_modes() const { return num_modes_; }
    const Matrix& matrix() const { return matrix_; }

    double symplectic_deviation() const {
        const Matrix j = SymplecticForm(num_modes_).matrix();
        return detail::max_abs(Matrix(matrix_ * j * matrix_.transpose() - j));
    }

    // S^-1 = -J S^T J.
    SymplecticTransform inverse() const {
        const Matrix j = SymplecticForm(num_modes_).matrix();
        return SymplecticTransform(Matrix(-j * matrix_.transpose() * j));
    }

    /// Composition: (*this) after `first`.
    SymplecticTransform operator*(const SymplecticTransform& first) const {
        detail::require(first.num_modes_ == num_modes_, "SymplecticTransform: composition of mismatched mode counts");
        return SymplecticTransform(Matrix(matrix_ * first.matrix_));
    }

private:
    int num_modes_ = 0;
    Matrix matrix_;
};

/// Two-mode beam splitter on (a, b):
///   x_a -> sqrt(eta) x_a - sqrt(1-eta) x_b,  x_b -> sqrt(eta) x_b + sqrt(1-eta) x_a,
/// identically on the p quadratures.
inline SymplecticTransform beam_splitter(double eta) {
    detail::require(std::isfinite(eta) && eta >= 0.0 && eta <= 1.0, "beam_splitter: eta must lie in [0, 1]");
    const double t = std::sqrt(eta);
    const double r = std::sqrt(1.0 - eta);
    Eigen::Matrix2d block;
    block << t, -r, r, t;
    Matrix s = Matrix::Zero(4, 4);
    s.topLeftCorner(2, 2) = block;
    s.bottomRightCorner(2, 2) = block;
    return SymplecticTransform(std::move(s));
}

/// x -> e^{2d} x, p -> e^{-2d} p.
inline SymplecticTransform single_mode_squeezer(double d) {
    detail::require(std::isfinite(d), "single_mode_squeezer: squeezing parameter must be finite");
    Matrix s = Matrix::Zero(2, 2);
    s(0, 0) = std::exp(2.0 * d);
    s(1, 1) = std::exp(-2.0 * d);
    return SymplecticTransform(std::move(s));
}

/// Passive (photon-number preserving) transform V (+) V for real orthogonal V.
inline SymplecticTransform passive_rotation(const Matrix& v) {
    detail::require(v.rows() == v.cols() && v.rows() >= 1, "passive_rotation: V must be square and nonempty");
    detail::require(v.allFinite(), "passive_rotation: V has non-finite entries");
    const Eigen::Index n = v.rows();
    const double dev = detail::max_abs(Matrix(v.transpose() * v - Matrix::Identity(n, n)));
    detail::require(dev <= kOrthogonalityTolerance,
                    "passive_rotation: V is not orthogonal (|V^T V - I|_max = " + std::to_string(dev) + ")");
    Matrix s = Matrix::Zero(2 * n, 2 * n);
    s.topLeftCorner(n, n) = v;
    s.bottomRightCorner(n, n) = v;
    return SymplecticTransform(std::move(s));
}

/// Block-diagonal transform acting as `first` on the leading modes and
/// `second` on the trailing ones.
inline SymplecticTransform direct_sum(const SymplecticTransform& first, const SymplecticTransform& second) {
    const int m1 = first.num_modes();
    const int m2 = second.num_modes();
    const int m = m1 + m2;
    const auto rows1 = detail::quadrature_indices(m, detail::mode_range(0, m1));
    const auto rows2 = detail::quadrature_indices(m, detail::mode_range(m1, m2));
    Matrix s = Matrix::Zero(2 * m, 2 * m);
    s(rows1, rows1) = first.matrix();
    s(rows2, rows2) = second.matrix();
    return SymplecticTransform(std::move(s));
}

inline GaussianState apply(const SymplecticTransform& transform, const GaussianState& state) {
    detail::require(transform.num_modes() == state.num_modes(),
                    "apply: transform acts on " + std::to_string(transform.num_modes()) + " modes, state has " +
                        std::to_string(state.num_modes()));
    const Matrix& s = transform.matrix();
    Matrix cov = s * state.covariance() * s.transpose();
    cov = 0.5 * (cov + cov.transpose()).eval();
    return GaussianState(s * state.mean(), std::move(cov));
}

/// Joint state of two uncorrelated systems; modes of `first` come first.
inline GaussianState tensor(const GaussianState& first, const GaussianState& second) {
    const int m1 = first.num_modes();
    const int m2 = second.num_modes();
    const int m = m1 + m2;
    const auto rows1 = detail::quadrature_indices(m, detail::mode_range(0, m1));
    const auto rows2 = detail::quadrature_indices(m, detail::mode_range(m1, m2));
    Vector mean = Vector::Zero(2 * m);
    Matrix cov = Matrix::Zero(2 * m, 2 * m);
    mean(rows1) = first.mean();
    mean(rows2) = second.mean();
    cov(rows1, rows1) = first.covariance();
    cov(rows2, rows2) = second.covariance();
    return GaussianState(std::move(mean), std::move(cov));
}

/// Reduced state on the `keep` modes, in the order given.
inline GaussianState partial_trace(const GaussianState& state, const std::vector<int>& keep) {
    detail::require(!keep.empty(), "partial_trace: keep must be nonempty");
    std::vector<int> sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    detail::require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
                    "partial_trace: keep has duplicate modes");
    detail::require(sorted.front() >= 0 && sorted.back() < state.num_modes(),
                    "partial_trace: mode index out of range");
    const auto rows = detail::quadrature_indices(state.num_modes(), keep);
    return GaussianState(state.mean()(rows), state.covariance()(rows, rows));
}

/// Total mean photon number: tr(cov)/2 + |mean|^2/2 - m/2.
inline double mean_photon_number(const GaussianState& state) {
    const double n = 0.5 * state.covariance().trace() + 0.5 * state.mean().squaredNorm() - 0.5 * state.num_modes();
    return std::max(0.0, n);
}

/// Von Neumann entropy in nats: sum_j g(nu_j - 1/2).
inline double von_neumann_entropy(const GaussianState& state) {
    double s = 0.0;
    for (double nu : symplectic_eigenvalues(state.covariance())) {
        const double occupation = nu - 0.5;
        if (occupation < -kUncertaintyTolerance) {
            throw std::invalid_argument("von_neumann_entropy: covariance violates the uncertainty relation");
        }
        s += g(std::max(0.0, occupation));
    }
    return s;
}

}  // namespace bosonic_memory
