// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fermion.hpp
 * @brief Spinless free fermions on an open 1D chain with attractive sites.
 *
 *   H = -eta sum_l (c+_l c_{l+1} + h.c.) - g sum_{l < Ni} n_l
 *
 * Sites are 0-based; bit l of a Mask is site l (configurations) or
 * single-particle orbital l in ascending energy order (eigenstates).
 *
 * The condensed subspace for Ni = Np holds the V ground configuration
 * (every particle on an attractive site) and the Np^2 one-hole/one-particle
 * excitations across the attractive block boundary: M_cond = 1 + Np^2.
 *
 * Two independent routes to p_cond are provided:
 *  - pcond_enumerated: Boltzmann sum over all C(N, Np) Slater eigenstates,
 *    each weighted by its squared overlaps with the condensed configurations.
 *  - pcond_minors: <n|e^{-bH}|n> for a site configuration n is the principal
 *    minor of the one-body Gibbs matrix U e^{-b eps} U^T on the occupied
 *    sites (Cauchy-Binet), so p_cond needs only M_cond small determinants.
 */

#pragma once

#include "condqpt/combinatorics.hpp"
#include "condqpt/linalg.hpp"
#include "condqpt/partition.hpp"
#include "condqpt/tolerances.hpp"

#include <cstdint>
#include <iterator>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace condqpt::fermion {

using comb::Mask;
using linalg::EigenSystem;
using linalg::Matrix;

struct FermionParams {
    int N = 8;
    int Np = 4;
    int Ni = 4;
    double eta = 1.0;
    double g = 0.0;
    double beta = 1.0;
    bool half_filling = true;   ///< require N = 2 Np and Ni = Np

    void validate() const;
    Mask attractive_mask() const noexcept { return comb::first_combination(Ni); }

    /// Np = Ni = N/2.
    static FermionParams half_filled(int Np, double g, double beta, double eta = 1.0);
};

struct ManyBodyState {
    Mask mask = 0;
    double energy = std::numeric_limits<double>::quiet_NaN();   ///< NaN for site configurations
};

linalg::SymTridiag one_body_matrix(const FermionParams& p);

EigenSystem single_particle_spectrum(const FermionParams& p, const Tolerances& tol = default_tolerances());

struct EnumerationOptions {
    bool long_run = false;                 ///< lift Tolerances::enumeration_cap
    std::optional<double> tail_cutoff;     ///< skip states with beta (E - E0) above this
    unsigned workers = 1;
    std::uint64_t chunk = 1u << 14;        ///< states per work unit; fixes the summation order
};

/// Np-orbital subsets in increasing mask order over a contiguous rank range.
class EigenstateRange {
public:
    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = ManyBodyState;
        using difference_type = std::ptrdiff_t;
        using pointer = const ManyBodyState*;
        using reference = const ManyBodyState&;

        iterator() = default;
        iterator(const EigenstateRange* owner, std::uint64_t pos, Mask mask);
        reference operator*() const noexcept { return state_; }
        pointer operator->() const noexcept { return &state_; }
        iterator& operator++();
        void operator++(int) { ++*this; }
        bool operator==(const iterator& o) const noexcept { return pos_ == o.pos_; }

    private:
        const EigenstateRange* owner_ = nullptr;
        std::uint64_t pos_ = 0;
        ManyBodyState state_;
    };

    EigenstateRange(std::span<const double> energies, int Np, std::uint64_t first, std::uint64_t last);

    iterator begin() const;
    iterator end() const;
    std::uint64_t size() const noexcept { return last_ - first_; }
    double energy_of(Mask m) const noexcept;

private:
    std::span<const double> energies_;
    int n_;
    int np_;
    std::uint64_t first_;
    std::uint64_t last_;
};

/// Every Np-particle eigenstate. Throws ValidationError naming --long-run
/// when C(N, Np) exceeds the enumeration cap.
EigenstateRange enumerate_eigenstates(const FermionParams& p, const EigenSystem& spec,
                                      const EnumerationOptions& opts = {},
                                      const Tolerances& tol = default_tolerances());

/// log of the canonical Np-particle partition function by the
/// elementary-symmetric-polynomial recursion, carried out in log space.
double canonical_log_z(std::span<const double> eps, int Np, double beta);

class CondensedSubspace {
public:
    /// Ground configuration first, then hole-major / particle-minor.
    static CondensedSubspace standard(const FermionParams& p);
    static CondensedSubspace from_configs(int N, int Np, std::vector<Mask> configs);

    const std::vector<Mask>& configs() const noexcept { return configs_; }
    std::size_t size() const noexcept { return configs_.size(); }
    int N() const noexcept { return n_; }
    int Np() const noexcept { return np_; }

private:
    CondensedSubspace(int n, int np, std::vector<Mask> c) : n_(n), np_(np), configs_(std::move(c)) {}
    int n_;
    int np_;
    std::vector<Mask> configs_;
};

/// Single-particle eigenvectors plus scratch for Np x Np minors.
class OverlapWorkspace {
public:
    OverlapWorkspace(const Matrix& U, int Np, const Tolerances& tol = default_tolerances());

    /// |<config|eigstate>|^2 = det(U[sites of config, orbitals of eigstate])^2.
    double overlap2(Mask config, Mask eigstate);

    /// sum over the subspace of overlap2(config, eigstate).
    double condensed_weight(const CondensedSubspace& sub, Mask eigstate);

    const Matrix& U() const noexcept { return u_; }

private:
    Matrix u_;
    int np_;
    double flush_;
    Matrix scratch_;
};

double slater_overlap2(OverlapWorkspace& ws, const ManyBodyState& config, const ManyBodyState& eigstate);

struct PcondResult {
    double p_cond = 0.0;
    double error_bar = 0.0;           ///< upper bound on the tail-cutoff omission
    double log_z = 0.0;               ///< from the symmetric-polynomial recursion
    double log_z_enumerated = 0.0;    ///< from the states actually summed
    std::uint64_t states = 0;
    std::uint64_t skipped = 0;
};

/// Boltzmann-weighted condensed weight over all eigenstates. The enumerated
/// denominator is cross-checked against canonical_log_z (NumericalError on
/// mismatch beyond Tolerances::partition_crosscheck).
PcondResult pcond_enumerated(const FermionParams& p, const CondensedSubspace& sub,
                             const EnumerationOptions& opts = {},
                             const Tolerances& tol = default_tolerances());
PcondResult pcond_enumerated(const FermionParams& p, const EnumerationOptions& opts = {},
                             const Tolerances& tol = default_tolerances());

/// Same quantity via principal minors of the one-body Gibbs matrix.
PcondResult pcond_minors(const FermionParams& p, const CondensedSubspace& sub,
                         const Tolerances& tol = default_tolerances());
PcondResult pcond_minors(const FermionParams& p, const Tolerances& tol = default_tolerances());

/// pcond_minors for several temperatures sharing one spectrum.
std::vector<double> pcond_minors(const FermionParams& p, const std::vector<double>& betas,
                                 const Tolerances& tol = default_tolerances());

/// Many-body H in the occupation basis (basis index = comb::rank of the
/// mask). K is the dimensionless hopping (Gamma = eta); V counts occupied
/// attractive sites with a minus sign (J = g).
partition::OperatorPair many_body_operator_pair(const FermionParams& p,
                                                const Tolerances& tol = default_tolerances());
partition::PartitionSpec many_body_partition(const FermionParams& p, const CondensedSubspace& sub);

/// F, F_cond, F_norm of the many-body Hamiltonian (dense; small systems).
partition::FreeEnergies restricted_free_energies(const FermionParams& p,
                                                 const Tolerances& tol = default_tolerances());
partition::FreeEnergies restricted_free_energies(const FermionParams& p, const CondensedSubspace& sub,
                                                 const Tolerances& tol = default_tolerances());

}  // namespace condqpt::fermion
