// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file partition.hpp
 * @brief Condensed/normal split of a finite configuration space.
 *
 * H = Gamma*K + J*diag(V) is written in the configuration basis (the
 * eigenbasis of V). A PartitionSpec selects the condensed configurations;
 * the normal subspace is the complement. Restricted Hamiltonians are the
 * configuration-basis submatrices P H P on the support of P.
 *
 * Everything here is dense and meant for validation-sized problems
 * (M <= Tolerances::dense_cap). Model modules provide the fast paths.
 */

#pragma once

#include "condqpt/linalg.hpp"
#include "condqpt/tolerances.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace condqpt::partition {

using linalg::Matrix;

enum class Subspace { cond, norm };

struct PartitionSpec {
    std::size_t M = 0;                    ///< total configuration count
    std::vector<std::size_t> condensed;   ///< condensed configuration indices

    void validate() const;
    std::size_t m_cond() const noexcept { return condensed.size(); }
    std::vector<bool> condensed_mask() const;
    std::vector<std::size_t> indices(Subspace which) const;
};

struct OperatorPair {
    Matrix K;                 ///< dimensionless hopping, symmetric M x M
    std::vector<double> V;    ///< dimensionless diagonal potential
    double gamma = 0.0;
    double J = 0.0;

    void validate(const Tolerances& tol = default_tolerances()) const;
    std::size_t size() const noexcept { return V.size(); }
    Matrix hamiltonian() const;
};

struct FreeEnergies {
    double F = 0.0;
    double F_cond = 0.0;
    double F_norm = 0.0;
    double beta = 0.0;
};

struct LinkCounts {
    std::size_t cond_out = 0;
    std::size_t norm_out = 0;
};

/// sup over X of sum_{n' in Y} |K_{n n'}|. Equal to LinkCounts when every
/// nonzero hopping has unit magnitude; this is the quantity the bounds use.
struct LinkWeights {
    double cond_out = 0.0;
    double norm_out = 0.0;
};

Matrix restricted_hamiltonian(const OperatorPair& ops, const PartitionSpec& part, Subspace which,
                              const Tolerances& tol = default_tolerances());

FreeEnergies free_energies(const OperatorPair& ops, const PartitionSpec& part, double beta,
                           const Tolerances& tol = default_tolerances());

LinkCounts link_counts(const OperatorPair& ops, const PartitionSpec& part);
LinkWeights link_weights(const OperatorPair& ops, const PartitionSpec& part);

/// One row of the diagonal-ratio check.
struct ConfigBound {
    std::size_t index = 0;
    Subspace subspace = Subspace::cond;
    double ratio = 0.0;   ///< <n|e^{-bH}|n> / <n|e^{-bH_X}|n>
    double upper = 0.0;   ///< e^{b Gamma min(A_cond, A_norm)}
    bool pass = false;
};

struct BoundReport {
    double beta = 0.0;
    double gamma = 0.0;
    LinkCounts counts;
    LinkWeights weights;
    FreeEnergies energies;
    std::vector<ConfigBound> configs;
    double upper_slack = 0.0;   ///< min(F_cond, F_norm) - F, must be >= 0
    double lower_slack = 0.0;   ///< F - (min(F_cond, F_norm) - Gamma*min A), must be >= 0
    bool ratios_pass = false;
    bool upper_pass = false;
    bool lower_pass = false;

    bool pass() const noexcept { return ratios_pass && upper_pass && lower_pass; }
    std::string to_json() const;
};

/// Evaluates the diagonal-ratio inequality for every configuration plus
/// the two free-energy inequalities. Violations are reported, not thrown.
BoundReport check_bounds(const OperatorPair& ops, const PartitionSpec& part, double beta,
                         const Tolerances& tol = default_tolerances());

/// sum over condensed n of <n|rho|n>, rho = e^{-bH}/tr e^{-bH}.
double pcond_direct(const OperatorPair& ops, const PartitionSpec& part, double beta,
                    const Tolerances& tol = default_tolerances());

/// Same, for several temperatures sharing one diagonalization.
std::vector<double> pcond_direct(const OperatorPair& ops, const PartitionSpec& part,
                                 const std::vector<double>& betas,
                                 const Tolerances& tol = default_tolerances());

/// 1 / (1 + e^{-beta (F_norm - F_cond)}).
double pcond_logistic(const FreeEnergies& f);

/// A seeded random test problem for the bound suite.
struct RandomInstance {
    OperatorPair ops;
    PartitionSpec part;
    double beta = 1.0;
};

/// M in [2, max_m]; K stoquastic (off-diagonal -w, w in (0, 1], edge
/// probability 0.3, zero diagonal); V, Gamma, J uniform; random nonempty
/// proper condensed subset; beta drawn from {0.1, 1, 10}.
RandomInstance random_instance(std::uint64_t seed, std::size_t max_m = 40);

/// log sum_s e^{-beta E_s} over a spectrum, anchored at its minimum.
double log_partition(const std::vector<double>& energies, double beta);

}  // namespace condqpt::partition
