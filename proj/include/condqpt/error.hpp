// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace condqpt {

/// Bad input: violated precondition, malformed config, size over a cap.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical invariant failed (non-convergence, cross-check mismatch).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File or stream failure; the message carries the offending path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace condqpt
