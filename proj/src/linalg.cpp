// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "condqpt/linalg.hpp"

#include "condqpt/error.hpp"
#include "condqpt/logspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace condqpt::linalg {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.front().size() : 0;
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) throw ValidationError("from_rows: ragged row " + std::to_string(i));
        std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw ValidationError("matrix product: shape mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            auto bk = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ValidationError("max_abs_diff: shape mismatch");
    double m = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) m = std::max(m, std::abs(da[i] - db[i]));
    return m;
}

void SymTridiag::validate() const {
    if (diag.empty()) throw ValidationError("SymTridiag: empty diagonal");
    if (offdiag.size() + 1 != diag.size())
        throw ValidationError("SymTridiag: offdiag must have length N-1");
    for (double v : diag)
        if (!std::isfinite(v)) throw ValidationError("SymTridiag: non-finite diagonal entry");
    for (double v : offdiag)
        if (!std::isfinite(v)) throw ValidationError("SymTridiag: non-finite off-diagonal entry");
}

Matrix SymTridiag::to_dense() const {
    const std::size_t n = size();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = diag[i];
    for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = offdiag[i];
    return m;
}

namespace {

// Implicit QL on (d, e) where e[i] couples i-1 and i (e[0] unused).
// `w` holds eigenvectors as ROWS during the sweep so rotations touch
// contiguous memory; it is transposed by the caller.
void tql2(std::vector<double>& d, std::vector<double>& e, Matrix& w, const Tolerances& tol) {
    const std::size_t n = d.size();
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    const double eps = std::numeric_limits<double>::epsilon();
    double f = 0.0;
    double tst1 = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n - 1 && std::abs(e[m]) > eps * tst1) ++m;

        if (m > l) {
            int iter = 0;
            do {
                if (++iter > tol.ql_max_sweeps)
                    throw NumericalError("eig_symtridiag: QL iteration did not converge for eigenvalue " +
                                         std::to_string(l));
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t ii = m; ii-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[ii];
                    h = c * p;
                    r = std::hypot(p, e[ii]);
                    e[ii + 1] = s * r;
                    s = e[ii] / r;
                    c = p / r;
                    p = c * d[ii] - s * g;
                    d[ii + 1] = h + s * (c * g + s * d[ii]);
                    auto wi = w.row(ii);
                    auto wi1 = w.row(ii + 1);
                    for (std::size_t k = 0; k < wi.size(); ++k) {
                        const double t = wi1[k];
                        wi1[k] = s * wi[k] + c * t;
                        wi[k] = c * wi[k] - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

// Sort ascending, fix signs, return with eigenvectors as columns.
EigenSystem finish(std::vector<double> d, const Matrix& w_rows) {
    const std::size_t n = d.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    EigenSystem out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.values[j] = d[src];
        auto v = w_rows.row(src);
        std::size_t arg = 0;
        for (std::size_t k = 1; k < n; ++k)
            if (std::abs(v[k]) > std::abs(v[arg])) arg = k;
        const double sign = v[arg] < 0.0 ? -1.0 : 1.0;
        for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = sign * v[k];
    }
    return out;
}

}  // namespace

EigenSystem eig_symtridiag(const SymTridiag& m, const Tolerances& tol) {
    m.validate();
    const std::size_t n = m.size();
    std::vector<double> d = m.diag;
    std::vector<double> e(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) e[i] = m.offdiag[i - 1];
    Matrix w = Matrix::identity(n);
    tql2(d, e, w, tol);
    return finish(std::move(d), w);
}

EigenSystem eig_dense_sym(const Matrix& a, const Tolerances& tol) {
    if (!a.square()) throw ValidationError("eig_dense_sym: matrix is not square");
    const std::size_t n = a.rows();
    if (n == 0) throw ValidationError("eig_dense_sym: empty matrix");
    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) asym = std::max(asym, std::abs(a(i, j) - a(j, i)));
    if (asym > tol.symmetry)
        throw ValidationError("eig_dense_sym: matrix is not symmetric (max |A - A^T| = " +
                              std::to_string(asym) + ")");

    // tred2, 0-based (JAMA/EISPACK). V starts as A and is stored transposed
    // so the column sweeps below read contiguous memory.
    Matrix vt = a.transposed();
    auto v = [&vt](std::size_t r, std::size_t c) -> double& { return vt(c, r); };
    std::vector<double> d(n), e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

    for (std::size_t i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (std::size_t j = 0; j < i; ++j) {
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
                v(j, i) = 0.0;
            }
        } else {
            for (std::size_t k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                v(j, i) = f;
                g = e[j] + v(j, j) * f;
                for (std::size_t k = j + 1; k <= i - 1; ++k) {
                    g += v(k, j) * d[k];
                    e[k] += v(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (std::size_t k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    // Accumulate transformations.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        v(n - 1, i) = v(i, i);
        v(i, i) = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
            for (std::size_t j = 0; j <= i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
                for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
            }
        }
        for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        d[j] = v(n - 1, j);
        v(n - 1, j) = 0.0;
    }
    v(n - 1, n - 1) = 1.0;
    e[0] = 0.0;

    Matrix& w = vt;
    tql2(d, e, w, tol);
    return finish(std::move(d), w);
}

double det_abs2(const Matrix& a) {
    if (!a.square()) throw ValidationError("det_abs2: matrix is not square");
    const std::size_t n = a.rows();
    Matrix lu = a;
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
        const double p = lu(piv, k);
        if (p == 0.0) return 0.0;
        if (piv != k) std::swap_ranges(lu.row(k).begin(), lu.row(k).end(), lu.row(piv).begin());
        det *= p;
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu(i, k) / p;
            if (f == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
        }
    }
    return det * det;
}

double log_det_scaled_gram(const Matrix& a, std::span<const double> log_scales) {
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    if (log_scales.size() != m) throw ValidationError("log_det_scaled_gram: scale length mismatch");
    if (n > m) return kNegInf;
    if (n == 0) return 0.0;

    // Work on columns: col[j] holds column perm[j] of A (unscaled).
    std::vector<std::vector<double>> col(m, std::vector<double>(n));
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < n; ++i) col[j][i] = a(i, j);
    std::vector<double> s(log_scales.begin(), log_scales.end());

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t best = m;
        double best_key = kNegInf;
        for (std::size_t j = k; j < m; ++j) {
            double nrm = 0.0;
            for (std::size_t i = k; i < n; ++i) nrm += col[j][i] * col[j][i];
            if (nrm == 0.0) continue;
            const double key = 0.5 * std::log(nrm) + s[j];
            if (key > best_key) {
                best_key = key;
                best = j;
            }
        }
        if (best == m) return kNegInf;
        std::swap(col[k], col[best]);
        std::swap(s[k], s[best]);

        // Householder reflector zeroing col[k][k+1:].
        auto& x = col[k];
        double alpha = 0.0;
        for (std::size_t i = k; i < n; ++i) alpha += x[i] * x[i];
        alpha = std::sqrt(alpha);
        if (x[k] > 0) alpha = -alpha;
        std::vector<double> v(n, 0.0);
        v[k] = x[k] - alpha;
        for (std::size_t i = k + 1; i < n; ++i) v[i] = x[i];
        double vnorm2 = 0.0;
        for (std::size_t i = k; i < n; ++i) vnorm2 += v[i] * v[i];
        x[k] = alpha;
        for (std::size_t i = k + 1; i < n; ++i) x[i] = 0.0;
        if (vnorm2 == 0.0) continue;
        for (std::size_t j = k + 1; j < m; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < n; ++i) dot += v[i] * col[j][i];
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < n; ++i) col[j][i] -= f * v[i];
        }
    }

    // log det(R1 S1)^2.
    double logdet = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = std::abs(col[k][k]);
        if (r == 0.0) return kNegInf;
        logdet += 2.0 * (std::log(r) + s[k]);
    }
    if (m == n) return logdet;

    // C = (R1 S1)^{-1} (R2 S2) by back substitution. Scaled products are
    // formed as sign * exp(log|x| + ds) so no intermediate overflows.
    auto scaled = [](double x, double ds) {
        if (x == 0.0) return 0.0;
        return std::copysign(std::exp(std::log(std::abs(x)) + ds), x);
    };
    const std::size_t q = m - n;
    Matrix c(n, q);
    for (std::size_t j = 0; j < q; ++j) {
        const std::size_t cj = n + j;
        for (std::size_t kk = n; kk-- > 0;) {
            double acc = scaled(col[cj][kk], s[cj] - s[kk]);
            for (std::size_t i = kk + 1; i < n; ++i) acc -= scaled(col[i][kk], s[i] - s[kk]) * c(i, j);
            c(kk, j) = acc / col[kk][kk];
        }
    }

    // log det(I + C C^T) by Cholesky.
    Matrix g = Matrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double acc = 0.0;
            for (std::size_t t = 0; t < q; ++t) acc += c(i, t) * c(j, t);
            g(i, j) += acc;
            g(j, i) = g(i, j);
        }
    double logdet_g = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double diag = g(j, j);
        for (std::size_t t = 0; t < j; ++t) diag -= g(j, t) * g(j, t);
        if (!(diag > 0.0)) throw NumericalError("log_det_scaled_gram: Cholesky breakdown");
        const double ljj = std::sqrt(diag);
        g(j, j) = ljj;
        logdet_g += 2.0 * std::log(ljj);
        for (std::size_t i = j + 1; i < n; ++i) {
            double acc = g(i, j);
            for (std::size_t t = 0; t < j; ++t) acc -= g(i, t) * g(j, t);
            g(i, j) = acc / ljj;
        }
    }
    return logdet + logdet_g;
}

LinearFit linear_fit(const LeastSquaresProblem& p, const Tolerances& tol) {
    const std::size_t m = p.design.rows();
    const std::size_t n = p.design.cols();
    if (p.targets.size() != m) throw ValidationError("linear_fit: targets length differs from design rows");
    if (n == 0) throw ValidationError("linear_fit: no basis functions");
    if (m < n)
        throw ValidationError("linear_fit: " + std::to_string(m) + " points for " + std::to_string(n) +
                              " coefficients");

    Matrix r = p.design;
    std::vector<double> qty = p.targets;
    std::vector<double> col_norm(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) col_norm[j] += r(i, j) * r(i, j);
        col_norm[j] = std::sqrt(col_norm[j]);
    }

    for (std::size_t k = 0; k < n; ++k) {
        double alpha = 0.0;
        for (std::size_t i = k; i < m; ++i) alpha += r(i, k) * r(i, k);
        alpha = std::sqrt(alpha);
        if (alpha <= tol.rank_tolerance * std::max(col_norm[k], 1e-300))
            throw ValidationError("linear_fit: rank deficient, column " + std::to_string(k) +
                                  " depends on the preceding columns");
        if (r(k, k) > 0) alpha = -alpha;
        std::vector<double> v(m, 0.0);
        v[k] = r(k, k) - alpha;
        for (std::size_t i = k + 1; i < m; ++i) v[i] = r(i, k);
        double vnorm2 = 0.0;
        for (std::size_t i = k; i < m; ++i) vnorm2 += v[i] * v[i];
        r(k, k) = alpha;
        for (std::size_t i = k + 1; i < m; ++i) r(i, k) = 0.0;
        if (vnorm2 == 0.0) continue;
        for (std::size_t j = k + 1; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < m; ++i) dot += v[i] * r(i, j);
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < m; ++i) r(i, j) -= f * v[i];
        }
        double dot = 0.0;
        for (std::size_t i = k; i < m; ++i) dot += v[i] * qty[i];
        const double f = 2.0 * dot / vnorm2;
        for (std::size_t i = k; i < m; ++i) qty[i] -= f * v[i];
    }

    LinearFit fit;
    fit.coefficients.assign(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        double acc = qty[k];
        for (std::size_t j = k + 1; j < n; ++j) acc -= r(k, j) * fit.coefficients[j];
        fit.coefficients[k] = acc / r(k, k);
    }
    fit.residuals.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        double pred = 0.0;
        for (std::size_t j = 0; j < n; ++j) pred += p.design(i, j) * fit.coefficients[j];
        fit.residuals[i] = p.targets[i] - pred;
        fit.chi2 += fit.residuals[i] * fit.residuals[i];
    }
    return fit;
}

}  // namespace condqpt::linalg
