// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "condqpt/combinatorics.hpp"

#include "condqpt/error.hpp"

#include <array>
#include <string>

namespace condqpt::comb {

namespace {

using Table = std::array<std::array<std::uint64_t, kMaxSites + 1>, kMaxSites + 1>;

const Table& pascal() {
    static const Table t = [] {
        Table p{};
        for (int n = 0; n <= kMaxSites; ++n) {
            p[n][0] = 1;
            for (int k = 1; k <= n; ++k) p[n][k] = p[n - 1][k - 1] + (k <= n - 1 ? p[n - 1][k] : 0);
        }
        return p;
    }();
    return t;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
    if (n < 0 || n > kMaxSites) throw ValidationError("binomial: n out of range " + std::to_string(n));
    if (k < 0 || k > n) return 0;
    return pascal()[n][k];
}

std::uint64_t rank(Mask mask) {
    std::uint64_t r = 0;
    int i = 1;
    while (mask) {
        const int c = std::countr_zero(mask);
        r += binomial(c, i);
        mask &= mask - 1;
        ++i;
    }
    return r;
}

Mask unrank(std::uint64_t r, int n, int k) {
    if (r >= binomial(n, k))
        throw ValidationError("unrank: rank " + std::to_string(r) + " out of range for C(" + std::to_string(n) +
                              "," + std::to_string(k) + ")");
    Mask m = 0;
    int c = n - 1;
    for (int i = k; i >= 1; --i) {
        while (binomial(c, i) > r) --c;
        m |= Mask{1} << c;
        r -= binomial(c, i);
        --c;
    }
    return m;
}

}  // namespace condqpt::comb
