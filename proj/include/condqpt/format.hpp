// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdio>
#include <string>

namespace condqpt {

/// Shortest-safe text for a double: 17 significant digits, round-trips exactly.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace condqpt
