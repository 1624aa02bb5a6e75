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

// Brute-force truncated Fock-space simulation of the channels for one or two
// channel uses. It shares no code path with the covariance-matrix engine and
// exists to certify it.
//
// Basis: product Fock states |n_0 n_1 ... n_{K-1}>, each n_i < cutoff, with
// mode 0 the most significant digit of the flat index.
//
// Unitaries are built literally from their generators:
//   beam splitter   U = exp[theta (a^dag b - a b^dag)],  theta = arctan sqrt((1-eta)/eta)
//   squeezer        W = exp[sum_{kk'} xi_{kk'} (b_k b_k' - b_k^dag b_k'^dag)]
// Their Heisenberg actions X a X^dag are the symplectic matrices of the
// Gaussian engine, whose apply() therefore corresponds to rho -> X^dag rho X.
// conjugate() and simulate_channel() evolve states the same way so that both
// engines describe the same physical process.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "bosonic_memory/channel.hpp"
#include "bosonic_memory/gaussian.hpp"
#include "bosonic_memory/spectral.hpp"

namespace bosonic_memory::fock {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kTailTolerance = 1e-6;
inline constexpr double kMaxOracleSqueezing = 0.2;
inline constexpr int kMaxOracleUses = 2;

inline int default_cutoff(int uses) { return uses <= 1 ? 30 : 16; }

inline long long int_pow(int base, int exponent) {
    long long r = 1;
    for (int i = 0; i < exponent; ++i) r *= base;
    return r;
}

/// Dense operator on `modes` truncated modes of dimension `cutoff` each.
class FockOperator {
public:
    FockOperator(int modes, int cutoff, CMatrix matrix) : modes_(modes), cutoff_(cutoff), matrix_(std::move(matrix)) {
        detail::require(modes >= 1, "FockOperator: modes must be >= 1");
        detail::require(cutoff >= 1, "FockOperator: cutoff must be >= 1");
        const long long dim = int_pow(cutoff, modes);
        detail::require(matrix_.rows() == dim && matrix_.cols() == dim,
                        "FockOperator: matrix must be cutoff^modes square (" + std::to_string(dim) + ")");
    }

    int modes() const { return modes_; }
    int cutoff() const { return cutoff_; }
    Eigen::Index dimension() const { return matrix_.rows(); }
    const CMatrix& matrix() const { return matrix_; }

private:
    int modes_;
    int cutoff_;
    CMatrix matrix_;
};

/// Raised when the truncated simulation loses more than the allowed weight.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, double deficit) : std::runtime_error(what), deficit_(deficit) {}
    double deficit() const { return deficit_; }

private:
    double deficit_;
};

/// Annihilation operator, <m|a|m+1> = sqrt(m+1).
inline FockOperator ladder_operator(int cutoff) {
    detail::require(cutoff >= 2, "ladder_operator: cutoff must be >= 2");
    CMatrix a = CMatrix::Zero(cutoff, cutoff);
    for (int m = 0; m + 1 < cutoff; ++m) a(m, m + 1) = std::sqrt(static_cast<double>(m + 1));
    return FockOperator(1, cutoff, std::move(a));
}

/// Single-mode operator `op` acting on `mode` of a `modes`-mode register.
inline CMatrix embed(const CMatrix& op, int mode, int modes) {
    const int cutoff = static_cast<int>(op.rows());
    const auto left = static_cast<Eigen::Index>(int_pow(cutoff, mode));
    const auto right = static_cast<Eigen::Index>(int_pow(cutoff, modes - mode - 1));
    const Eigen::Index dim = left * cutoff * right;
    CMatrix out = CMatrix::Zero(dim, dim);
    for (Eigen::Index l = 0; l < left; ++l)
        for (Eigen::Index i = 0; i < cutoff; ++i)
            for (Eigen::Index j = 0; j < cutoff; ++j) {
                if (op(i, j) == Complex(0.0)) continue;
                for (Eigen::Index r = 0; r < right; ++r)
                    out((l * cutoff + i) * right + r, (l * cutoff + j) * right + r) = op(i, j);
            }
    return out;
}

/// Two-mode beam splitter on (a, b), a the more significant mode.
///
/// The generator conserves a^dag a + b^dag b, so it is exponentiated block by
/// block in total photon number and every kept entry is exact; the result is
/// unitary only on states with fewer than `cutoff` photons in total. eta = 0
/// uses the exact limit U|n_a, n_b> = (-1)^{n_a} |n_b, n_a>.
inline FockOperator beam_splitter_unitary(double eta, int cutoff) {
    detail::require(std::isfinite(eta) && eta >= 0.0 && eta <= 1.0, "beam_splitter_unitary: eta must lie in [0, 1]");
    detail::require(cutoff >= 2, "beam_splitter_unitary: cutoff must be >= 2");
    const int d = cutoff;
    CMatrix u = CMatrix::Zero(d * d, d * d);
    const auto index = [d](int na, int nb) { return na * d + nb; };
    if (eta == 0.0) {
        for (int na = 0; na < d; ++na)
            for (int nb = 0; nb < d; ++nb) u(index(nb, na), index(na, nb)) = (na % 2 == 0) ? 1.0 : -1.0;
        return FockOperator(2, d, std::move(u));
    }
    const double theta = std::atan(std::sqrt((1.0 - eta) / eta));
    for (int total = 0; total <= 2 * (d - 1); ++total) {
        // The whole block n_a = 0..total, so entries kept inside the box are
        // exact; what leaves the box is simply lost trace.
        const Eigen::Index size = total + 1;
        Matrix gen = Matrix::Zero(size, size);
        for (int na = 0; na <= total; ++na) {
            const int nb = total - na;
            // a^dag b |na, nb> = sqrt((na+1) nb) |na+1, nb-1>
            if (na < total) gen(na + 1, na) += theta * std::sqrt(static_cast<double>((na + 1) * nb));
            // -a b^dag |na, nb> = -sqrt(na (nb+1)) |na-1, nb+1>
            if (na > 0) gen(na - 1, na) -= theta * std::sqrt(static_cast<double>(na * (nb + 1)));
        }
        const Matrix block = gen.exp();
        const int lo = std::max(0, total - (d - 1));
        const int hi = std::min(total, d - 1);
        for (int ra = lo; ra <= hi; ++ra)
            for (int ca = lo; ca <= hi; ++ca) u(index(ra, total - ra), index(ca, total - ca)) = block(ra, ca);
    }
    return FockOperator(2, d, std::move(u));
}

namespace internal {

// Per-mode Fock digits of a flat index.
inline int digit(Eigen::Index index, int mode, int modes, int cutoff) {
    return static_cast<int>((index / int_pow(cutoff, modes - mode - 1)) % cutoff);
}

// Flat index of the same Fock digits in a register with more levels per mode.
inline Eigen::Index widen_index(Eigen::Index index, int modes, int cutoff, int wider) {
    Eigen::Index out = 0;
    for (int m = 0; m < modes; ++m) out = out * wider + digit(index, m, modes, cutoff);
    return out;
}

using SparseMatrix = Eigen::SparseMatrix<double>;

// sum_{kk'} xi_{kk'} (b_k b_k' - b_k^dag b_k'^dag), truncated at `cutoff` levels per mode.
inline SparseMatrix squeeze_generator(const SqueezingMatrix& z, int cutoff) {
    const int n = z.n();
    const auto dim = static_cast<Eigen::Index>(int_pow(cutoff, n));
    std::vector<Eigen::Triplet<double>> entries;
    std::vector<int> occ(static_cast<std::size_t>(n));
    const auto flat = [&](const std::vector<int>& o) {
        Eigen::Index i = 0;
        for (int m = 0; m < n; ++m) i = i * cutoff + o[static_cast<std::size_t>(m)];
        return i;
    };
    for (Eigen::Index col = 0; col < dim; ++col) {
        for (int m = 0; m < n; ++m) occ[static_cast<std::size_t>(m)] = digit(col, m, n, cutoff);
        for (int k = 0; k < n; ++k)
            for (int kp = 0; kp < n; ++kp) {
                const double xi = z(k, kp);
                if (xi == 0.0) continue;
                for (const int step : {-1, 1}) {
                    std::vector<int> o = occ;
                    double amp = 1.0;
                    for (const int mode : {kp, k}) {
                        int& c = o[static_cast<std::size_t>(mode)];
                        amp *= std::sqrt(static_cast<double>(std::max(0, step < 0 ? c : c + 1)));
                        c += step;
                    }
                    const auto fits = [cutoff](int c) { return c >= 0 && c < cutoff; };
                    if (amp == 0.0 || !fits(o[static_cast<std::size_t>(k)]) || !fits(o[static_cast<std::size_t>(kp)]))
                        continue;
                    entries.emplace_back(flat(o), col, step < 0 ? xi * amp : -xi * amp);
                }
            }
    }
    SparseMatrix gen(dim, dim);
    gen.setFromTriplets(entries.begin(), entries.end());
    return gen;
}

// exp(sign * gen) v by scaled Taylor steps; gen has small 1-norm per step.
inline Vector expm_action(const SparseMatrix& gen, double sign, Vector v) {
    double norm = 0.0;
    for (Eigen::Index c = 0; c < gen.outerSize(); ++c) {
        double col = 0.0;
        for (SparseMatrix::InnerIterator it(gen, c); it; ++it) col += std::abs(it.value());
        norm = std::max(norm, col);
    }
    const int steps = std::max(1, static_cast<int>(std::ceil(norm)));
    const double scale = sign / steps;
    for (int s = 0; s < steps; ++s) {
        Vector term = v;
        Vector sum = v;
        for (int j = 1; j <= 80; ++j) {
            term = (scale / j) * (gen * term);
            sum += term;
            if (term.norm() <= 1e-18 * sum.norm()) break;
        }
        v.swap(sum);
    }
    return v;
}

// Squeezer columns are computed on a register this many levels wider per
// mode and then cut back, so every kept entry <m|W|k> is exact to ~1e-12.
inline int squeeze_padding(int cutoff) { return cutoff + 20; }

// Columns of exp(sign * generator) for the given box states, cut back to the box.
inline CMatrix squeeze_columns(const SqueezingMatrix& z, int cutoff, double sign,
                               const std::vector<Eigen::Index>& columns) {
    const int n = z.n();
    const int wide = cutoff + squeeze_padding(cutoff);
    const SparseMatrix gen = squeeze_generator(z, wide);
    const auto dim = static_cast<Eigen::Index>(int_pow(cutoff, n));
    CMatrix out(dim, static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        Vector v = Vector::Zero(gen.rows());
        v(widen_index(columns[c], n, cutoff, wide)) = 1.0;
        v = expm_action(gen, sign, std::move(v));
        for (Eigen::Index r = 0; r < dim; ++r) out(r, static_cast<Eigen::Index>(c)) = v(widen_index(r, n, cutoff, wide));
    }
    return out;
}

}  // namespace internal

/// exp[sum_{kk'} xi_{kk'} (b_k b_k' - b_k^dag b_k'^dag)] on n <= 2 modes: the
/// dense exponential of the truncated generator, orthogonal by construction.
/// Entries near the cutoff are distorted; simulate_channel() therefore works
/// with exact columns from a wider register instead.
inline FockOperator multimode_squeeze_unitary(const SqueezingMatrix& z, int cutoff) {
    const int n = z.n();
    detail::require(n <= kMaxOracleUses, "multimode_squeeze_unitary: at most 2 modes are supported");
    detail::require(detail::max_abs(z.entries()) <= kMaxOracleSqueezing,
                    "multimode_squeeze_unitary: |xi| must be <= 0.2 for the truncated oracle");
    detail::require(cutoff >= 2, "multimode_squeeze_unitary: cutoff must be >= 2");
    const Matrix gen = Matrix(internal::squeeze_generator(z, cutoff));
    return FockOperator(n, cutoff, gen.exp().cast<Complex>());
}

/// X^dag rho X: the state evolution matched to apply(S_X, state).
inline FockOperator conjugate(const FockOperator& x, const FockOperator& rho) {
    detail::require(x.modes() == rho.modes() && x.cutoff() == rho.cutoff(), "conjugate: operator shape mismatch");
    return FockOperator(rho.modes(), rho.cutoff(), x.matrix().adjoint() * rho.matrix() * x.matrix());
}

inline FockOperator tensor(const FockOperator& first, const FockOperator& second) {
    detail::require(first.cutoff() == second.cutoff(), "tensor: cutoff mismatch");
    const Eigen::Index d1 = first.dimension();
    const Eigen::Index d2 = second.dimension();
    CMatrix out(d1 * d2, d1 * d2);
    for (Eigen::Index i = 0; i < d1; ++i)
        for (Eigen::Index j = 0; j < d1; ++j) out.block(i * d2, j * d2, d2, d2) = first.matrix()(i, j) * second.matrix();
    return FockOperator(first.modes() + second.modes(), first.cutoff(), std::move(out));
}

inline FockOperator pure_density(const CVector& psi, int modes, int cutoff) {
    return FockOperator(modes, cutoff, psi * psi.adjoint());
}

inline FockOperator vacuum_density(int modes, int cutoff) {
    CVector psi = CVector::Zero(static_cast<Eigen::Index>(int_pow(cutoff, modes)));
    psi(0) = 1.0;
    return pure_density(psi, modes, cutoff);
}

namespace internal {

inline std::vector<double> thermal_weights(double photons, int cutoff) {
    std::vector<double> w(static_cast<std::size_t>(cutoff));
    const double ratio = photons / (photons + 1.0);
    double p = 1.0 / (photons + 1.0);
    for (int k = 0; k < cutoff; ++k) {
        w[static_cast<std::size_t>(k)] = p;
        p *= ratio;
    }
    return w;
}

}  // namespace internal

/// Product of thermal modes truncated at the cutoff (trace slightly below 1).
inline FockOperator thermal_density(int modes, double photons, int cutoff) {
    detail::require(photons >= 0.0, "thermal_density: photons must be >= 0");
    const std::vector<double> w = internal::thermal_weights(photons, cutoff);
    const auto dim = static_cast<Eigen::Index>(int_pow(cutoff, modes));
    CMatrix rho = CMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        double p = 1.0;
        for (int m = 0; m < modes; ++m) p *= w[static_cast<std::size_t>(internal::digit(i, m, modes, cutoff))];
        rho(i, i) = p;
    }
    return FockOperator(modes, cutoff, std::move(rho));
}

/// Coherent state with amplitude alpha, <a> = alpha, from its Poisson amplitudes.
inline FockOperator coherent_density(Complex alpha, int cutoff) {
    CVector psi(cutoff);
    Complex amp = std::exp(-0.5 * std::norm(alpha));
    for (int k = 0; k < cutoff; ++k) {
        psi(k) = amp;
        amp *= alpha / std::sqrt(static_cast<double>(k + 1));
    }
    return pure_density(psi, 1, cutoff);
}

/// Zero-pads a state into a larger per-mode cutoff.
inline FockOperator pad(const FockOperator& rho, int cutoff) {
    detail::require(cutoff >= rho.cutoff(), "pad: cutoff can only grow");
    if (cutoff == rho.cutoff()) return rho;
    const int modes = rho.modes();
    const auto dim = static_cast<Eigen::Index>(int_pow(cutoff, modes));
    std::vector<Eigen::Index> map(static_cast<std::size_t>(rho.dimension()));
    for (Eigen::Index i = 0; i < rho.dimension(); ++i) {
        Eigen::Index j = 0;
        for (int m = 0; m < modes; ++m) j = j * cutoff + internal::digit(i, m, modes, rho.cutoff());
        map[static_cast<std::size_t>(i)] = j;
    }
    CMatrix out = CMatrix::Zero(dim, dim);
    out(map, map) = rho.matrix();
    return FockOperator(modes, cutoff, std::move(out));
}

inline double trace(const FockOperator& rho) { return rho.matrix().trace().real(); }

namespace internal {

inline Complex expectation(const CMatrix& rho, const CMatrix& op) {
    return (rho.cwiseProduct(op.transpose())).sum();
}

}  // namespace internal

inline double mean_photon_number(const FockOperator& rho) {
    const CMatrix a = ladder_operator(rho.cutoff()).matrix();
    const CMatrix number = a.adjoint() * a;
    double total = 0.0;
    for (int m = 0; m < rho.modes(); ++m) total += internal::expectation(rho.matrix(), embed(number, m, rho.modes())).real();
    return total / trace(rho);
}

struct Moments {
    Vector mean;
    Matrix covariance;
};

/// Quadrature moments in the x-then-p layout, vacuum covariance 1/2.
///
/// Built from normal-ordered <a_i a_j>, <a_i^dag a_j>, which are exact in the
/// truncated space, plus the commutator terms added analytically.
inline Moments moments(const FockOperator& rho_in) {
    const int m = rho_in.modes();
    const CMatrix rho = rho_in.matrix() / trace(rho_in);
    const CMatrix a = ladder_operator(rho_in.cutoff()).matrix();
    std::vector<CMatrix> ops;
    for (int k = 0; k < m; ++k) ops.push_back(embed(a, k, m));

    std::vector<Complex> first(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) first[static_cast<std::size_t>(k)] = internal::expectation(rho, ops[static_cast<std::size_t>(k)]);

    Moments out;
    out.mean.resize(2 * m);
    out.covariance.resize(2 * m, 2 * m);
    const double root2 = std::sqrt(2.0);
    for (int k = 0; k < m; ++k) {
        out.mean(k) = root2 * first[static_cast<std::size_t>(k)].real();
        out.mean(m + k) = root2 * first[static_cast<std::size_t>(k)].imag();
    }
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const auto& ai = ops[static_cast<std::size_t>(i)];
            const auto& aj = ops[static_cast<std::size_t>(j)];
            const Complex aa = internal::expectation(rho, ai * aj);
            const Complex ad_a = internal::expectation(rho, ai.adjoint() * aj);
            const double delta = i == j ? 0.5 : 0.0;
            const double xx = aa.real() + ad_a.real() + delta;
            const double pp = -aa.real() + ad_a.real() + delta;
            const double xp = aa.imag() + ad_a.imag();
            out.covariance(i, j) = xx - out.mean(i) * out.mean(j);
            out.covariance(m + i, m + j) = pp - out.mean(m + i) * out.mean(m + j);
            out.covariance(i, m + j) = xp - out.mean(i) * out.mean(m + j);
            out.covariance(m + j, i) = out.covariance(i, m + j);
        }
    }
    return out;
}

/// -tr(rho ln rho) in nats, from the dense spectrum of the normalized state.
inline double entropy(const FockOperator& rho) {
    const CMatrix normalized = rho.matrix() / trace(rho);
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(normalized, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double p = solver.eigenvalues()(i);
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

struct SimulationOptions {
    int cutoff = 0;  // 0 selects default_cutoff(n)
    double tail_tolerance = kTailTolerance;
    // On truncation failure, retry with the cutoff grown by 1.25x per step,
    // never beyond twice the starting cutoff.
    bool adaptive = true;
};

namespace internal {

struct Branch {
    double weight;
    CVector state;
};

// Keeps the heaviest branches until the dropped weight would exceed `budget`.
inline std::vector<Branch> prune(std::vector<Branch> branches, double budget) {
    std::sort(branches.begin(), branches.end(), [](const Branch& x, const Branch& y) { return x.weight > y.weight; });
    double dropped = 0.0;
    while (!branches.empty()) {
        const double w = std::max(0.0, branches.back().weight);
        if (dropped + w > budget) break;
        dropped += w;
        branches.pop_back();
    }
    return branches;
}

template <typename Scalar>
struct SparseEntry {
    Eigen::Index row;
    Eigen::Index col;
    Scalar value;
};

template <typename Scalar>
std::vector<SparseEntry<Scalar>> nonzeros(const CMatrix& m) {
    std::vector<SparseEntry<Scalar>> out;
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (m(r, c) == Complex(0.0)) continue;
            if constexpr (std::is_same_v<Scalar, double>) out.push_back({r, c, m(r, c).real()});
            else out.push_back({r, c, m(r, c)});
        }
    return out;
}

// Applies a two-mode gate (mode_a the more significant gate digit) to a register vector.
template <typename Vec, typename Scalar>
void apply_two_mode(Vec& psi, const std::vector<SparseEntry<Scalar>>& gate, int mode_a, int mode_b, int modes,
                    int cutoff) {
    const Eigen::Index stride_a = int_pow(cutoff, modes - mode_a - 1);
    const Eigen::Index stride_b = int_pow(cutoff, modes - mode_b - 1);
    Vec out = Vec::Zero(psi.size());
    for (Eigen::Index base = 0; base < psi.size(); ++base) {
        if (digit(base, mode_a, modes, cutoff) != 0 || digit(base, mode_b, modes, cutoff) != 0) continue;
        for (const auto& e : gate) {
            const Eigen::Index to = base + (e.row / cutoff) * stride_a + (e.row % cutoff) * stride_b;
            const Eigen::Index from = base + (e.col / cutoff) * stride_a + (e.col % cutoff) * stride_b;
            out(to) += e.value * psi(from);
        }
    }
    psi.swap(out);
}

inline bool is_real(const CMatrix& m) { return m.imag().cwiseAbs().maxCoeff() == 0.0; }

// Eigen-branches of a density matrix; real eigenvectors for a real matrix.
inline std::vector<Branch> spectral_branches(const FockOperator& rho) {
    std::vector<Branch> out;
    const auto collect = [&out](const auto& solver) {
        for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
            const double w = solver.eigenvalues()(i);
            if (w > 0.0) out.push_back({w, solver.eigenvectors().col(i).template cast<Complex>()});
        }
    };
    if (is_real(rho.matrix())) collect(Eigen::SelfAdjointEigenSolver<Matrix>(rho.matrix().real()));
    else collect(Eigen::SelfAdjointEigenSolver<CMatrix>(rho.matrix()));
    return out;
}

// sum over branch pairs of w_i w_e Tr_b |psi><psi|, psi = U^dag (in_i (x) env_e),
// in Scalar arithmetic (double when every ingredient is real: ~4x cheaper).
template <typename Scalar>
CMatrix reduced_output(const std::vector<Branch>& in, const std::vector<Branch>& env, const CMatrix& gate_matrix,
                       int n, int cutoff) {
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const auto narrow = [](const CVector& v) -> Vec {
        if constexpr (std::is_same_v<Scalar, double>) return v.real();
        else return v;
    };
    const auto side = static_cast<Eigen::Index>(int_pow(cutoff, n));
    const auto gate = nonzeros<Scalar>(gate_matrix);
    std::vector<Vec> env_states;
    for (const auto& e : env) env_states.push_back(narrow(e.state));
    Mat out = Mat::Zero(side, side);
    for (const auto& i : in) {
        const Vec input = narrow(i.state);
        for (std::size_t k = 0; k < env.size(); ++k) {
            Vec psi(side * side);
            for (Eigen::Index r = 0; r < side; ++r) psi.segment(r * side, side) = input(r) * env_states[k];
            for (int m = 0; m < n; ++m) apply_two_mode(psi, gate, m, n + m, 2 * n, cutoff);
            // psi(a * side + b) viewed column-major is P(b, a); rho_a = P^T conj(P).
            const Eigen::Map<const Mat> p(psi.data(), side, side);
            const Mat pt = p.transpose();
            out.template selfadjointView<Eigen::Lower>().rankUpdate(pt, i.weight * env[k].weight);
        }
    }
    out = out.template selfadjointView<Eigen::Lower>();
    return out.template cast<Complex>();
}

struct SimulationResult {
    FockOperator output;
    double deficit;
};

inline SimulationResult simulate_once(const ChannelParams& params, const FockOperator& input, int cutoff,
                                      double tail_tolerance) {
    const int n = params.n();
    const auto side = static_cast<Eigen::Index>(int_pow(cutoff, n));
    const double budget = 0.01 * tail_tolerance;

    // Environment: thermal Fock branches |k>, then the squeezer, rho_b -> W^dag rho_b W.
    const std::vector<double> tw = thermal_weights(params.env_photons(), cutoff);
    std::vector<std::pair<double, Eigen::Index>> levels;
    for (Eigen::Index k = 0; k < side; ++k) {
        double p = 1.0;
        for (int m = 0; m < n; ++m) p *= tw[static_cast<std::size_t>(digit(k, m, n, cutoff))];
        levels.emplace_back(p, k);
    }
    std::sort(levels.begin(), levels.end(), std::greater<>());
    double dropped = 0.0;
    while (!levels.empty() && dropped + levels.back().first <= budget) {
        dropped += levels.back().first;
        levels.pop_back();
    }
    std::vector<Eigen::Index> columns;
    for (const auto& level : levels) columns.push_back(level.second);
    // W^dag = exp(-generator); the generator is real antisymmetric.
    const CMatrix env_states = squeeze_columns(params.squeezing(), cutoff, -1.0, columns);
    std::vector<Branch> env;
    for (std::size_t i = 0; i < levels.size(); ++i)
        env.push_back({levels[i].first, env_states.col(static_cast<Eigen::Index>(i))});
    // Everything the box cannot hold, pruned branches included, is lost trace.
    double env_trace = 0.0;
    for (const auto& e : env) env_trace += e.weight * e.state.squaredNorm();
    if (1.0 - env_trace > tail_tolerance) {
        return {FockOperator(n, cutoff, CMatrix::Zero(side, side)), 1.0 - env_trace};
    }

    const std::vector<Branch> in = prune(spectral_branches(input), budget);
    const CMatrix gate = beam_splitter_unitary(params.eta(), cutoff).matrix().adjoint();
    // Environment columns and beam splitter are real; so is everything when the input is.
    CMatrix out = is_real(input.matrix()) ? reduced_output<double>(in, env, gate, n, cutoff)
                                                : reduced_output<Complex>(in, env, gate, n, cutoff);
    const double deficit = std::max(0.0, trace(input) - out.trace().real());
    return {FockOperator(n, cutoff, std::move(out)), deficit};
}

}  // namespace internal

/// Output of the memory channel: Tr_b[ U^dag (rho (x) W^dag rho_b W) U ] with
/// a thermal environment rho_b of M photons per mode.
inline FockOperator simulate_channel(const ChannelParams& params, const FockOperator& input,
                                     const SimulationOptions& options = {}) {
    const int n = params.n();
    detail::require(n <= kMaxOracleUses, "simulate_channel: at most 2 channel uses are supported");
    detail::require(input.modes() == n, "simulate_channel: input mode count must equal channel uses");
    detail::require(detail::max_abs(params.squeezing().entries()) <= kMaxOracleSqueezing,
                    "simulate_channel: |xi| must be <= 0.2 for the truncated oracle");
    int cutoff = options.cutoff > 0 ? options.cutoff : std::max(default_cutoff(n), input.cutoff());
    detail::require(cutoff >= input.cutoff(), "simulate_channel: cutoff below the input's cutoff");

    internal::SimulationResult result = internal::simulate_once(params, pad(input, cutoff), cutoff, options.tail_tolerance);
    const int ceiling = 2 * cutoff;
    while (result.deficit > options.tail_tolerance && options.adaptive && cutoff < ceiling) {
        cutoff = std::min(ceiling, (5 * cutoff + 3) / 4);
        result = internal::simulate_once(params, pad(input, cutoff), cutoff, options.tail_tolerance);
    }
    if (result.deficit > options.tail_tolerance) {
        throw TruncationError("simulate_channel: truncation deficit " + std::to_string(result.deficit) +
                                  " exceeds tolerance " + std::to_string(options.tail_tolerance) + " at cutoff " +
                                  std::to_string(cutoff),
                              result.deficit);
    }
    return std::move(result.output);
}

}  // namespace bosonic_memory::fock
