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

// Squeezing matrices and their spectral summary.
//
// The environment correlations are set by a real symmetric n x n matrix Z of
// squeezing parameters. Writing Z = V diag(d) V^T, every photon-budget
// quantity the capacity bounds need is a symmetric function of the d_j:
//
//   s0 = sum_j cosh(4 d_j) / n
//   s1 = sum_j sinh^2(2 d_j) / n
//   s2 = sum_j sinh(4 |d_j|) / (2n)
//   d_bar = the d_j of largest magnitude

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bosonic_memory/gaussian.hpp"

namespace bosonic_memory {

inline constexpr double kLoadSymmetryTolerance = 1e-9;
inline constexpr double kReconstructionTolerance = 1e-9;

/// Real symmetric n x n matrix of squeezing parameters xi_{kk'}.
class SqueezingMatrix {
public:
    explicit SqueezingMatrix(Matrix entries) : entries_(std::move(entries)) {
        detail::require(entries_.rows() == entries_.cols() && entries_.rows() >= 1,
                        "SqueezingMatrix: matrix must be square and nonempty");
        detail::require(entries_.allFinite(), "SqueezingMatrix: entries must be finite");
        const double scale = std::max(1.0, detail::max_abs(entries_));
        detail::require(detail::max_abs(Matrix(entries_ - entries_.transpose())) <= kSymmetryTolerance * scale,
                        "unsupported: non-symmetric/complex squeezing matrix");
    }

    static SqueezingMatrix zero(int n) {
        detail::require(n >= 1, "SqueezingMatrix::zero: n must be >= 1");
        return SqueezingMatrix(Matrix::Zero(n, n));
    }

    int n() const { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }
    double operator()(int row, int col) const { return entries_(row, col); }
    bool is_zero() const { return detail::max_abs(entries_) == 0.0; }

private:
    Matrix entries_;
};

/// Parses n lines of n whitespace-separated reals. Blank lines and lines
/// starting with '#' are skipped. Asymmetry up to kLoadSymmetryTolerance is
/// averaged away; anything larger is rejected naming the offending pair.
inline SqueezingMatrix load_squeezing_matrix(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream lines(text);
    std::string line;
    int line_number = 0;
    while (std::getline(lines, line)) {
        ++line_number;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream tokens(line);
        std::string token;
        std::vector<double> row;
        while (tokens >> token) {
            std::size_t used = 0;
            double value = 0.0;
            try {
                value = std::stod(token, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != token.size()) {
                const bool complex_like = token.find_first_of("iIjJ") != std::string::npos &&
                                          token.find("inf") == std::string::npos &&
                                          token.find("INF") == std::string::npos;
                if (complex_like) {
                    throw std::invalid_argument("unsupported: non-symmetric/complex squeezing entry '" + token +
                                                "' on line " + std::to_string(line_number));
                }
                throw std::invalid_argument("squeezing matrix: cannot parse '" + token + "' on line " +
                                            std::to_string(line_number));
            }
            if (!std::isfinite(value)) {
                throw std::invalid_argument("squeezing matrix: non-finite entry at row " +
                                            std::to_string(rows.size() + 1) + ", column " +
                                            std::to_string(row.size() + 1));
            }
            row.push_back(value);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("squeezing matrix: no rows");
    const std::size_t n = rows.size();
    for (std::size_t r = 0; r < n; ++r) {
        if (rows[r].size() != n) {
            throw std::invalid_argument("squeezing matrix: not square, row " + std::to_string(r + 1) + " has " +
                                        std::to_string(rows[r].size()) + " entries, expected " + std::to_string(n));
        }
    }
    const auto size = static_cast<Eigen::Index>(n);
    Matrix z(size, size);
    for (Eigen::Index r = 0; r < size; ++r)
        for (Eigen::Index c = 0; c < size; ++c) z(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    for (Eigen::Index r = 0; r < size; ++r) {
        for (Eigen::Index c = r + 1; c < size; ++c) {
            if (std::abs(z(r, c) - z(c, r)) > kLoadSymmetryTolerance) {
                throw std::invalid_argument("unsupported: non-symmetric/complex squeezing, entries (" +
                                            std::to_string(r + 1) + "," + std::to_string(c + 1) + ")/(" +
                                            std::to_string(c + 1) + "," + std::to_string(r + 1) + ") differ");
            }
        }
    }
    return SqueezingMatrix(Matrix(0.5 * (z + z.transpose())));
}

inline SqueezingMatrix load_squeezing_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("squeezing matrix: cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_squeezing_matrix(buffer.str());
}

/// Each channel use squeezed jointly with the next: xi_{k,k+1} = xi_{k+1,k} = xi.
inline SqueezingMatrix nearest_neighbor_matrix(int n, double xi) {
    detail::require(n >= 1, "nearest_neighbor_matrix: n must be >= 1");
    detail::require(std::isfinite(xi), "nearest_neighbor_matrix: xi must be finite");
    Matrix z = Matrix::Zero(n, n);
    for (int k = 0; k + 1 < n; ++k) {
        z(k, k + 1) = xi;
        z(k + 1, k) = xi;
    }
    return SqueezingMatrix(std::move(z));
}

struct SpectralData {
    Vector eigenvalues;   // d_j, descending |d_j|, ties by descending value
    Matrix eigenvectors;  // V, column j pairs with d_j
    double d_bar = 0.0;
    double s0 = 1.0;
    double s1 = 0.0;
    double s2 = 0.0;

    int n() const { return static_cast<int>(eigenvalues.size()); }
};

inline SpectralData analyze(const SqueezingMatrix& z) {
    const int n = z.n();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(z.entries());
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("analyze: symmetric eigensolver failed on the squeezing matrix");
    }
    const Vector& values = solver.eigenvalues();
    const Matrix& vectors = solver.eigenvectors();

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    const double tie = 1e-12 * std::max(1.0, values.cwiseAbs().maxCoeff());
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double ma = std::abs(values(a));
        const double mb = std::abs(values(b));
        if (std::abs(ma - mb) > tie) return ma > mb;
        return values(a) > values(b);
    });

    SpectralData out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (int j = 0; j < n; ++j) {
        const int src = order[static_cast<std::size_t>(j)];
        out.eigenvalues(j) = values(src);
        Vector column = vectors.col(src);
        Eigen::Index pivot = 0;
        column.cwiseAbs().maxCoeff(&pivot);
        if (column(pivot) < 0.0) column = -column;
        out.eigenvectors.col(j) = column;
    }

    double c = 0.0;
    double s = 0.0;
    double t = 0.0;
    for (int j = 0; j < n; ++j) {
        const double d = out.eigenvalues(j);
        c += std::cosh(4.0 * d);
        s += std::pow(std::sinh(2.0 * d), 2);
        t += std::sinh(4.0 * std::abs(d));
    }
    out.s0 = c / n;
    out.s1 = s / n;
    out.s2 = t / (2.0 * n);
    out.d_bar = out.eigenvalues(0);
    return out;
}

/// Largest mean photon number per use the anti-squeezed input can carry when
/// the physical input carries at most `photons` per use.
inline double n_bar(double photons, const SpectralData& spec) {
    detail::require(std::isfinite(photons) && photons >= 0.0, "n_bar: photon budget must be >= 0");
    const double d = spec.d_bar;
    return photons * (std::cosh(4.0 * d) + std::sinh(4.0 * std::abs(d))) + spec.s1 + spec.s2;
}

}  // namespace bosonic_memory
