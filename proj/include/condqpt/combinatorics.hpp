// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file combinatorics.hpp
 * @brief Fixed-popcount bitmasks in increasing numeric (colex) order.
 *
 * rank/unrank use the combinatorial number system, so the rank of a mask
 * equals its position in the sequence produced by next_combination. That is
 * what lets a long enumeration be cut into contiguous, independently
 * startable ranges.
 */

#pragma once

#include <bit>
#include <cstdint>

namespace condqpt::comb {

using Mask = std::uint64_t;

inline constexpr int kMaxSites = 64;

/// C(n, k) exactly for 0 <= n <= 64; 0 when k > n.
std::uint64_t binomial(int n, int k);

/// Next larger integer with the same popcount (Gosper). Returns 0 past the
/// last k-subset of n bits.
inline Mask next_combination(Mask x, int n) noexcept {
    if (x == 0) return 0;
    const Mask c = x & (~x + 1);
    const Mask r = x + c;
    if (r == 0) return 0;
    const Mask next = (((r ^ x) >> 2) / c) | r;
    if (n < 64 && (next >> n) != 0) return 0;
    return next;
}

/// Lowest k-subset of n bits: bits 0..k-1.
inline constexpr Mask first_combination(int k) noexcept {
    return k >= 64 ? ~Mask{0} : ((Mask{1} << k) - 1);
}

/// Position of `mask` among all popcount(mask)-subsets in increasing order.
std::uint64_t rank(Mask mask);

/// Inverse of rank for k-subsets of n bits.
Mask unrank(std::uint64_t r, int n, int k);

inline int popcount(Mask m) noexcept { return std::popcount(m); }

}  // namespace condqpt::comb
