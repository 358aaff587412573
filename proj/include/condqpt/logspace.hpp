// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace condqpt {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(e^a + e^b) without overflow.
inline double log_add_exp(double a, double b) noexcept {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

/// log(sum_i e^{x_i}), anchored at the maximum term.
inline double log_sum_exp(std::span<const double> x) noexcept {
    if (x.empty()) return kNegInf;
    const double hi = *std::max_element(x.begin(), x.end());
    if (hi == kNegInf || !std::isfinite(hi)) return hi;
    double s = 0.0;
    for (double v : x) s += std::exp(v - hi);
    return hi + std::log(s);
}

/// log(sum_i w_i e^{x_i}) for nonnegative weights w.
inline double log_sum_exp(std::span<const double> x, std::span<const double> w) noexcept {
    double hi = kNegInf;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (w[i] > 0.0) hi = std::max(hi, x[i]);
    if (hi == kNegInf) return kNegInf;
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::exp(x[i] - hi);
    return hi + std::log(s);
}

/// 1 / (1 + e^{-x}); exact limits at +-inf.
inline double logistic(double x) noexcept {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

/// log(2 cosh x) = |x| + log1p(e^{-2|x|}).
inline double log_two_cosh(double x) noexcept {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a));
}

}  // namespace condqpt
