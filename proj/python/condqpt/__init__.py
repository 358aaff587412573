# Copyright 2026 The condqpt Authors
# SPDX-License-Identifier: Apache-2.0
"""Finite-temperature condensation in the Grover model and 1D free fermions."""

from ._core import (  # noqa: F401
    IoError,
    NumericalError,
    ValidationError,
    canonical_log_z,
    check_bounds_grover,
    check_bounds_random,
    extrapolate_critical,
    fermion_crossing,
    fermion_pcond,
    fermion_spectrum,
    fit_crossings,
    grover_critical_gamma,
    grover_critical_surface,
    grover_critical_temperature,
    grover_crossing,
    grover_free_energies,
    grover_pcond,
    grover_phase_diagram,
)

__version__ = "0.1.0"
