// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file grover.hpp
 * @brief The Grover model H = Gamma*K - J*N*|n1><n1| on N qubits.
 *
 * K = -sum_i sigma^x_i. The marked configuration n1 is gauge-fixed to the
 * configuration with index 0 (no flipped spins); K is invariant under the
 * spin-flip gauge so this loses nothing. Energies are in the same units as
 * Gamma and J, temperatures in units with k_B = 1.
 *
 * Finite-N thermal quantities use the permutation-symmetric Hamming-shell
 * sector around n1, an (N+1)-dimensional tridiagonal problem. Only that
 * sector overlaps n1; every other sector feels K alone, so its partition
 * function is known in closed form.
 */

#pragma once

#include "condqpt/linalg.hpp"
#include "condqpt/partition.hpp"
#include "condqpt/tolerances.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace condqpt::grover {

inline constexpr double kInfiniteBeta = std::numeric_limits<double>::infinity();

struct GroverParams {
    int N = 1;
    double gamma = 1.0;
    double J = 1.0;
    double beta = 1.0;   ///< may be kInfiniteBeta on T = 0 paths

    void validate() const;
};

/// F_norm = -N log(2 cosh(beta Gamma)) / beta.
double f_norm_exact(const GroverParams& p);

/// F_cond = V_1 = -J N.
double f_cond_exact(const GroverParams& p);

/// J_c(Gamma, T) = T log(2 cosh(Gamma / T)); T -> 0 gives Gamma.
double critical_surface(double gamma, double temperature);

/// Inverse of critical_surface in T at fixed (J, Gamma); none when J < Gamma.
std::optional<double> critical_temperature(double J, double gamma);

/// Gamma_c(J, T) = T acosh(e^{J/T} / 2); none when J < T log 2.
std::optional<double> critical_gamma(double J, double temperature);

struct GroundEnergy {
    double value = 0.0;
    bool degenerate = false;   ///< Gamma == J, the T = 0 critical point
};

/// -J N if Gamma < J, -Gamma N if Gamma > J.
GroundEnergy energy_t0(const GroverParams& p);

/// Effective Hamiltonian on normalized Hamming shells |j>, j flips from n1.
linalg::SymTridiag sector_hamiltonian(const GroverParams& p);

/// <n1|rho|n1> by sector reduction. Valid for N <= 24.
double pcond(const GroverParams& p, const Tolerances& tol = default_tolerances());

/// Log partition function Z_sector + (2 cosh bG)^N - sum_j e^{bG(N-2j)}.
double log_partition(const GroverParams& p, const Tolerances& tol = default_tolerances());

/// Full 2^N operator pair (K by single-bit flips, V = -N on n1) and the
/// single-configuration partition. Dense use only.
partition::OperatorPair operator_pair(int N, double gamma, double J);
partition::PartitionSpec marked_partition(int N);

/// <n1|rho|n1> from the dense 2^N Hamiltonian. N <= 13.
double pcond_dense_oracle(const GroverParams& p, const Tolerances& tol = default_tolerances());

/// Several temperatures at one (N, Gamma, J), sharing one diagonalization.
std::vector<double> pcond_dense_oracle(int N, double gamma, double J, const std::vector<double>& betas,
                                       const Tolerances& tol = default_tolerances());

/// Log partition function from the dense spectrum (oracle for log_partition).
double log_partition_dense(const GroverParams& p, const Tolerances& tol = default_tolerances());

inline constexpr int kMaxSectorQubits = 24;
inline constexpr int kMaxDenseQubits = 13;

}  // namespace condqpt::grover
