// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "condqpt/fermion.hpp"

#include "condqpt/error.hpp"
#include "condqpt/logspace.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <string>
#include <thread>

namespace condqpt::fermion {

void FermionParams::validate() const {
    if (N < 1 || N > comb::kMaxSites) throw ValidationError("fermion: N must be in [1, 64]");
    if (Np < 1 || Np > N) throw ValidationError("fermion: need 1 <= Np <= N");
    if (Ni < 0 || Ni > Np) throw ValidationError("fermion: need 0 <= Ni <= Np");
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("fermion: eta must be finite and > 0");
    if (!(g >= 0.0) || !std::isfinite(g)) throw ValidationError("fermion: g must be finite and >= 0");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("fermion: beta must be finite and > 0");
    if (half_filling && (N != 2 * Np || Ni != Np))
        throw ValidationError("fermion: half filling requires N = 2 Np and Ni = Np (set half_filling=false to relax)");
}

FermionParams FermionParams::half_filled(int Np, double g, double beta, double eta) {
    FermionParams p;
    p.N = 2 * Np;
    p.Np = Np;
    p.Ni = Np;
    p.eta = eta;
    p.g = g;
    p.beta = beta;
    return p;
}

linalg::SymTridiag one_body_matrix(const FermionParams& p) {
    p.validate();
    linalg::SymTridiag t;
    t.diag.assign(p.N, 0.0);
    for (int l = 0; l < p.Ni; ++l) t.diag[l] = -p.g;
    t.offdiag.assign(p.N - 1, -p.eta);
    return t;
}

EigenSystem single_particle_spectrum(const FermionParams& p, const Tolerances& tol) {
    return linalg::eig_symtridiag(one_body_matrix(p), tol);
}

// ---------------------------------------------------------------------------
// Enumeration

EigenstateRange::EigenstateRange(std::span<const double> energies, int Np, std::uint64_t first,
                                 std::uint64_t last)
    : energies_(energies), n_(static_cast<int>(energies.size())), np_(Np), first_(first), last_(last) {}

double EigenstateRange::energy_of(Mask m) const noexcept {
    double e = 0.0;
    while (m) {
        e += energies_[std::countr_zero(m)];
        m &= m - 1;
    }
    return e;
}

EigenstateRange::iterator::iterator(const EigenstateRange* owner, std::uint64_t pos, Mask mask)
    : owner_(owner), pos_(pos) {
    state_.mask = mask;
    state_.energy = owner_ && mask ? owner_->energy_of(mask) : 0.0;
}

EigenstateRange::iterator& EigenstateRange::iterator::operator++() {
    ++pos_;
    if (pos_ < owner_->last_) {
        state_.mask = comb::next_combination(state_.mask, owner_->n_);
        state_.energy = owner_->energy_of(state_.mask);
    }
    return *this;
}

EigenstateRange::iterator EigenstateRange::begin() const {
    if (first_ >= last_) return end();
    return iterator(this, first_, comb::unrank(first_, n_, np_));
}

EigenstateRange::iterator EigenstateRange::end() const { return iterator(this, last_, 0); }

namespace {

void check_enumeration_cap(const FermionParams& p, const EnumerationOptions& opts, const Tolerances& tol) {
    const auto m = comb::binomial(p.N, p.Np);
    if (m > tol.enumeration_cap && !opts.long_run)
        throw ValidationError("C(" + std::to_string(p.N) + "," + std::to_string(p.Np) + ") = " + std::to_string(m) +
                              " states exceeds the enumeration cap " + std::to_string(tol.enumeration_cap) +
                              "; pass --long-run to proceed");
}

double ground_energy(std::span<const double> eps, int Np) {
    double e = 0.0;
    for (int i = 0; i < Np; ++i) e += eps[i];
    return e;
}

}  // namespace

EigenstateRange enumerate_eigenstates(const FermionParams& p, const EigenSystem& spec,
                                      const EnumerationOptions& opts, const Tolerances& tol) {
    p.validate();
    check_enumeration_cap(p, opts, tol);
    if (spec.values.size() != static_cast<std::size_t>(p.N))
        throw ValidationError("enumerate_eigenstates: spectrum size differs from N");
    return EigenstateRange(spec.values, p.Np, 0, comb::binomial(p.N, p.Np));
}

double canonical_log_z(std::span<const double> eps, int Np, double beta) {
    if (Np < 0 || static_cast<std::size_t>(Np) > eps.size())
        throw ValidationError("canonical_log_z: need 0 <= Np <= number of levels");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ValidationError("canonical_log_z: beta must be finite and >= 0");
    std::vector<double> L(Np + 1, kNegInf);
    L[0] = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double lx = -beta * eps[i];
        const int top = std::min<int>(Np, static_cast<int>(i) + 1);
        for (int k = top; k >= 1; --k) L[k] = log_add_exp(L[k], lx + L[k - 1]);
    }
    return L[Np];
}

// ---------------------------------------------------------------------------
// Condensed subspace

CondensedSubspace CondensedSubspace::standard(const FermionParams& p) {
    p.validate();
    if (p.Ni != p.Np)
        throw ValidationError("the 1 + Np^2 condensed subspace is defined for Ni = Np; pass an explicit config list");
    const Mask ground = p.attractive_mask();
    std::vector<Mask> configs{ground};
    for (int h = 0; h < p.Ni; ++h)
        for (int s = p.Ni; s < p.N; ++s) configs.push_back((ground & ~(Mask{1} << h)) | (Mask{1} << s));
    return from_configs(p.N, p.Np, std::move(configs));
}

CondensedSubspace CondensedSubspace::from_configs(int N, int Np, std::vector<Mask> configs) {
    if (configs.empty()) throw ValidationError("condensed subspace is empty");
    std::set<Mask> seen;
    for (Mask m : configs) {
        if (comb::popcount(m) != Np)
            throw ValidationError("condensed config " + std::to_string(m) + " does not hold Np particles");
        if (N < 64 && (m >> N) != 0) throw ValidationError("condensed config " + std::to_string(m) + " exceeds N sites");
        if (!seen.insert(m).second) throw ValidationError("duplicate condensed config " + std::to_string(m));
    }
    if (configs.size() >= comb::binomial(N, Np)) throw ValidationError("condensed subspace must be smaller than M");
    return CondensedSubspace(N, Np, std::move(configs));
}

// ---------------------------------------------------------------------------
// Overlaps

OverlapWorkspace::OverlapWorkspace(const Matrix& U, int Np, const Tolerances& tol)
    : u_(U), np_(Np), flush_(tol.overlap_flush), scratch_(Np, Np) {
    if (!U.square() || Np < 1 || static_cast<std::size_t>(Np) > U.rows())
        throw ValidationError("OverlapWorkspace: bad shape");
}

double OverlapWorkspace::overlap2(Mask config, Mask eigstate) {
    int r = 0;
    for (Mask a = config; a; a &= a - 1, ++r) {
        const int site = std::countr_zero(a);
        int c = 0;
        for (Mask b = eigstate; b; b &= b - 1, ++c) scratch_(r, c) = u_(site, std::countr_zero(b));
    }
    const double v = linalg::det_abs2(scratch_);
    return v < flush_ ? 0.0 : v;
}

double OverlapWorkspace::condensed_weight(const CondensedSubspace& sub, Mask eigstate) {
    double w = 0.0;
    for (Mask c : sub.configs()) w += overlap2(c, eigstate);
    return w;
}

double slater_overlap2(OverlapWorkspace& ws, const ManyBodyState& config, const ManyBodyState& eigstate) {
    return ws.overlap2(config.mask, eigstate.mask);
}

// ---------------------------------------------------------------------------
// Order parameter

namespace {

struct ChunkSum {
    double num = 0.0;
    double den = 0.0;
    double skipped_den = 0.0;
    std::uint64_t skipped = 0;
};

void check_subspace(const FermionParams& p, const CondensedSubspace& sub) {
    if (sub.N() != p.N || sub.Np() != p.Np) throw ValidationError("condensed subspace does not match (N, Np)");
}

}  // namespace

PcondResult pcond_enumerated(const FermionParams& p, const CondensedSubspace& sub, const EnumerationOptions& opts,
                             const Tolerances& tol) {
    p.validate();
    check_subspace(p, sub);
    check_enumeration_cap(p, opts, tol);
    const auto spec = single_particle_spectrum(p, tol);
    const std::uint64_t total = comb::binomial(p.N, p.Np);
    const double e0 = ground_energy(spec.values, p.Np);
    const std::uint64_t chunk = std::max<std::uint64_t>(1, opts.chunk);
    const std::uint64_t n_chunks = (total + chunk - 1) / chunk;
    const double cutoff = opts.tail_cutoff.value_or(std::numeric_limits<double>::infinity());

    std::vector<ChunkSum> sums(n_chunks);
    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
        OverlapWorkspace ws(spec.vectors, p.Np, tol);
        for (std::uint64_t c = next++; c < n_chunks; c = next++) {
            ChunkSum s;
            const EigenstateRange range(spec.values, p.Np, c * chunk, std::min(total, (c + 1) * chunk));
            for (const auto& st : range) {
                const double x = p.beta * (st.energy - e0);
                const double w = std::exp(-x);
                s.den += w;
                if (x > cutoff) {
                    s.skipped_den += w;
                    ++s.skipped;
                    continue;
                }
                s.num += w * ws.condensed_weight(sub, st.mask);
            }
            sums[c] = s;
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(n_chunks)));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
    }

    ChunkSum all;
    for (const auto& s : sums) {
        all.num += s.num;
        all.den += s.den;
        all.skipped_den += s.skipped_den;
        all.skipped += s.skipped;
    }

    PcondResult r;
    r.states = total;
    r.skipped = all.skipped;
    r.log_z = canonical_log_z(spec.values, p.Np, p.beta);
    r.log_z_enumerated = std::log(all.den) - p.beta * e0;
    const double mismatch = std::abs(std::expm1(r.log_z_enumerated - r.log_z));
    if (!(mismatch <= tol.partition_crosscheck))
        throw NumericalError("fermion p_cond: enumerated partition function disagrees with the recursion (relative " +
                             std::to_string(mismatch) + ")");
    r.p_cond = std::clamp(all.num / all.den, 0.0, 1.0);
    r.error_bar = all.skipped_den / all.den;
    return r;
}

PcondResult pcond_enumerated(const FermionParams& p, const EnumerationOptions& opts, const Tolerances& tol) {
    return pcond_enumerated(p, CondensedSubspace::standard(p), opts, tol);
}

namespace {

double log_minor(const Matrix& U, Mask config, std::span<const double> log_scales) {
    const int np = comb::popcount(config);
    Matrix rows(np, U.cols());
    int r = 0;
    for (Mask a = config; a; a &= a - 1, ++r) {
        auto src = U.row(std::countr_zero(a));
        std::copy(src.begin(), src.end(), rows.row(r).begin());
    }
    return linalg::log_det_scaled_gram(rows, log_scales);
}

double pcond_from_spectrum(const EigenSystem& spec, const CondensedSubspace& sub, int Np, double beta) {
    std::vector<double> scales(spec.values.size());
    for (std::size_t i = 0; i < scales.size(); ++i) scales[i] = -0.5 * beta * spec.values[i];
    const double log_z = canonical_log_z(spec.values, Np, beta);
    double p = 0.0;
    for (Mask c : sub.configs()) p += std::exp(log_minor(spec.vectors, c, scales) - log_z);
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace

PcondResult pcond_minors(const FermionParams& p, const CondensedSubspace& sub, const Tolerances& tol) {
    p.validate();
    check_subspace(p, sub);
    const auto spec = single_particle_spectrum(p, tol);
    PcondResult r;
    r.log_z = canonical_log_z(spec.values, p.Np, p.beta);
    r.log_z_enumerated = r.log_z;
    r.p_cond = pcond_from_spectrum(spec, sub, p.Np, p.beta);
    return r;
}

PcondResult pcond_minors(const FermionParams& p, const Tolerances& tol) {
    return pcond_minors(p, CondensedSubspace::standard(p), tol);
}

std::vector<double> pcond_minors(const FermionParams& p, const std::vector<double>& betas, const Tolerances& tol) {
    p.validate();
    const auto sub = CondensedSubspace::standard(p);
    const auto spec = single_particle_spectrum(p, tol);
    std::vector<double> out;
    out.reserve(betas.size());
    for (double b : betas) {
        FermionParams q = p;
        q.beta = b;
        q.validate();
        out.push_back(pcond_from_spectrum(spec, sub, p.Np, b));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Many-body dense route

partition::OperatorPair many_body_operator_pair(const FermionParams& p, const Tolerances& tol) {
    p.validate();
    const auto m = comb::binomial(p.N, p.Np);
    if (m > tol.dense_cap)
        throw ValidationError("many-body Hamiltonian: C(N,Np) = " + std::to_string(m) + " exceeds the dense cap " +
                              std::to_string(tol.dense_cap));
    partition::OperatorPair ops;
    ops.K = Matrix(m, m);
    ops.V.assign(m, 0.0);
    ops.gamma = p.eta;
    ops.J = p.g;
    const Mask attractive = p.attractive_mask();
    Mask mask = comb::first_combination(p.Np);
    for (std::uint64_t i = 0; i < m; ++i, mask = comb::next_combination(mask, p.N)) {
        ops.V[i] = -double(comb::popcount(mask & attractive));
        for (int l = 0; l + 1 < p.N; ++l) {
            const Mask pair = (Mask{1} << l) | (Mask{1} << (l + 1));
            const Mask occ = mask & pair;
            if (occ == 0 || occ == pair) continue;
            // Adjacent hop: no Jordan-Wigner string between l and l+1.
            ops.K(i, comb::rank(mask ^ pair)) = -1.0;
        }
    }
    return ops;
}

partition::PartitionSpec many_body_partition(const FermionParams& p, const CondensedSubspace& sub) {
    check_subspace(p, sub);
    partition::PartitionSpec part;
    part.M = comb::binomial(p.N, p.Np);
    for (Mask c : sub.configs()) part.condensed.push_back(comb::rank(c));
    return part;
}

partition::FreeEnergies restricted_free_energies(const FermionParams& p, const CondensedSubspace& sub,
                                                 const Tolerances& tol) {
    return partition::free_energies(many_body_operator_pair(p, tol), many_body_partition(p, sub), p.beta, tol);
}

partition::FreeEnergies restricted_free_energies(const FermionParams& p, const Tolerances& tol) {
    return restricted_free_energies(p, CondensedSubspace::standard(p), tol);
}

}  // namespace condqpt::fermion
