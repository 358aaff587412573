// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>

namespace condqpt {

/// Every numerical threshold used by the library, in one place.
/// Defaults are the values the test and acceptance suites are pinned to;
/// RunConfig can override any of them.
struct Tolerances {
    // linalg
    double symmetry = 1e-12;          ///< max |A - A^T| accepted as symmetric
    double orthonormality = 1e-10;    ///< max |U^T U - I|
    double eigen_residual = 1e-9;     ///< relative |A U - U L|
    int ql_max_sweeps = 60;           ///< QL iterations allowed per eigenvalue
    double rank_tolerance = 1e-12;    ///< relative |R_kk| below which a column is dependent

    // partition
    std::size_t dense_cap = 20000;    ///< largest M for which H is built densely
    double bound_slack = 1e-9;        ///< relative slack on the free-energy bounds

    // fermion
    std::uint64_t enumeration_cap = 3'000'000;  ///< C(N, Np) above this needs long_run
    double partition_crosscheck = 1e-8;         ///< enumerated vs recursive Z
    double tail_cutoff = 46.0;                  ///< Boltzmann cutoff beta*(E - E0) when enabled
    double overlap_flush = 1e-300;              ///< overlaps below this are zero

    // criticality
    double crossing_rel = 1e-4;       ///< bisection width relative to the crossing
    double grover_crossing = 1e-6;    ///< absolute width in Gamma/J for Grover scans
    int coarse_points = 64;           ///< bracketing grid size
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

}  // namespace condqpt
