// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file linalg.hpp
 * @brief Dense and tridiagonal numerical kernels shared by every model.
 *
 * Eigensolvers follow the EISPACK tred2/tql2 lineage: Householder reduction
 * to tridiagonal form, then implicit-shift QL with accumulated rotations.
 * All routines are pure functions over value types.
 */

#pragma once

#include "condqpt/tolerances.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace condqpt::linalg {

/// Row-major dense real matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<const double> data() const noexcept { return data_; }

    Matrix transposed() const;
    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

/// max_ij |a_ij - b_ij|; shapes must agree.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Symmetric tridiagonal matrix: diag has length N, offdiag N-1.
struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> offdiag;

    std::size_t size() const noexcept { return diag.size(); }
    void validate() const;
    Matrix to_dense() const;
};

/// Ascending eigenvalues; column j of `vectors` belongs to values[j].
/// Sign convention: the largest-magnitude component of every eigenvector is
/// positive, ties broken toward the lowest index.
struct EigenSystem {
    std::vector<double> values;
    Matrix vectors;
};

EigenSystem eig_symtridiag(const SymTridiag& m, const Tolerances& tol = default_tolerances());

/// Householder tridiagonalization followed by the same QL iteration.
EigenSystem eig_dense_sym(const Matrix& a, const Tolerances& tol = default_tolerances());

/// det(a)^2 by partial-pivoting LU. Exactly zero when a pivot vanishes.
double det_abs2(const Matrix& a);

/// log det(A diag(exp(2 s)) A^T) for an n x m matrix A with n <= m.
///
/// Column-pivoted Householder QR on A with the column scales exp(s_j) kept
/// in log form, so the result is accurate even when the scales span
/// thousands of e-folds. Returns -inf when the Gram matrix is singular.
double log_det_scaled_gram(const Matrix& a, std::span<const double> log_scales);

struct LeastSquaresProblem {
    Matrix design;                 ///< one row per point, one column per basis function
    std::vector<double> targets;
};

struct LinearFit {
    std::vector<double> coefficients;
    std::vector<double> residuals;  ///< targets - design * coefficients
    double chi2 = 0.0;              ///< sum of squared residuals
};

/// Unweighted least squares via Householder QR.
/// Throws ValidationError naming the first linearly dependent column.
LinearFit linear_fit(const LeastSquaresProblem& p, const Tolerances& tol = default_tolerances());

}  // namespace condqpt::linalg
