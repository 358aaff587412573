// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "condqpt/partition.hpp"

#include "condqpt/error.hpp"
#include "condqpt/logspace.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace condqpt::partition {

void PartitionSpec::validate() const {
    if (condensed.empty()) throw ValidationError("PartitionSpec: condensed subspace is empty");
    if (condensed.size() >= M)
        throw ValidationError("PartitionSpec: need M_cond < M (M_cond=" + std::to_string(condensed.size()) +
                              ", M=" + std::to_string(M) + ")");
    std::vector<bool> seen(M, false);
    for (std::size_t i : condensed) {
        if (i >= M) throw ValidationError("PartitionSpec: index " + std::to_string(i) + " out of range");
        if (seen[i]) throw ValidationError("PartitionSpec: duplicate index " + std::to_string(i));
        seen[i] = true;
    }
}

std::vector<bool> PartitionSpec::condensed_mask() const {
    std::vector<bool> mask(M, false);
    for (std::size_t i : condensed) mask[i] = true;
    return mask;
}

std::vector<std::size_t> PartitionSpec::indices(Subspace which) const {
    if (which == Subspace::cond) return condensed;
    const auto mask = condensed_mask();
    std::vector<std::size_t> out;
    out.reserve(M - condensed.size());
    for (std::size_t i = 0; i < M; ++i)
        if (!mask[i]) out.push_back(i);
    return out;
}

void OperatorPair::validate(const Tolerances& tol) const {
    const std::size_t m = V.size();
    if (K.rows() != m || K.cols() != m)
        throw ValidationError("OperatorPair: K must be " + std::to_string(m) + "x" + std::to_string(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (std::abs(K(i, j) - K(j, i)) > tol.symmetry)
                throw ValidationError("OperatorPair: K is not symmetric");
}

Matrix OperatorPair::hamiltonian() const {
    const std::size_t m = size();
    Matrix h(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) h(i, j) = gamma * K(i, j);
        h(i, i) += J * V[i];
    }
    return h;
}

namespace {

void check_cap(const OperatorPair& ops, const Tolerances& tol) {
    if (ops.size() > tol.dense_cap)
        throw ValidationError("dense partition operations are capped at M=" + std::to_string(tol.dense_cap) +
                              " (got M=" + std::to_string(ops.size()) +
                              "); use the model-specific path (grover_pcond / fermion_pcond)");
}

void check_beta(double beta) {
    if (!(beta > 0.0) || std::isnan(beta)) throw ValidationError("beta must be > 0");
}

Matrix submatrix(const Matrix& h, const std::vector<std::size_t>& idx) {
    Matrix s(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b) s(a, b) = h(idx[a], idx[b]);
    return s;
}

// log <n|e^{-bH}|n> for every basis state n of an eigensystem.
std::vector<double> log_gibbs_diagonal(const linalg::EigenSystem& es, double beta) {
    const std::size_t n = es.values.size();
    std::vector<double> x(n), w(n), out(n);
    for (std::size_t s = 0; s < n; ++s) x[s] = -beta * es.values[s];
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t s = 0; s < n; ++s) w[s] = es.vectors(i, s) * es.vectors(i, s);
        out[i] = log_sum_exp(x, w);
    }
    return out;
}

double free_energy(const std::vector<double>& values, double beta) { return -log_partition(values, beta) / beta; }

const char* name(Subspace s) { return s == Subspace::cond ? "cond" : "norm"; }

}  // namespace

double log_partition(const std::vector<double>& energies, double beta) {
    std::vector<double> x(energies.size());
    for (std::size_t i = 0; i < energies.size(); ++i) x[i] = -beta * energies[i];
    return log_sum_exp(x);
}

Matrix restricted_hamiltonian(const OperatorPair& ops, const PartitionSpec& part, Subspace which,
                              const Tolerances& tol) {
    check_cap(ops, tol);
    ops.validate(tol);
    part.validate();
    if (part.M != ops.size()) throw ValidationError("partition size differs from operator size");
    return submatrix(ops.hamiltonian(), part.indices(which));
}

FreeEnergies free_energies(const OperatorPair& ops, const PartitionSpec& part, double beta,
                           const Tolerances& tol) {
    check_beta(beta);
    const auto hc = restricted_hamiltonian(ops, part, Subspace::cond, tol);
    const auto hn = restricted_hamiltonian(ops, part, Subspace::norm, tol);
    FreeEnergies f;
    f.beta = beta;
    f.F = free_energy(linalg::eig_dense_sym(ops.hamiltonian(), tol).values, beta);
    f.F_cond = free_energy(linalg::eig_dense_sym(hc, tol).values, beta);
    f.F_norm = free_energy(linalg::eig_dense_sym(hn, tol).values, beta);
    return f;
}

LinkCounts link_counts(const OperatorPair& ops, const PartitionSpec& part) {
    part.validate();
    const auto mask = part.condensed_mask();
    LinkCounts c;
    for (std::size_t i = 0; i < part.M; ++i) {
        std::size_t out = 0;
        for (std::size_t j = 0; j < part.M; ++j)
            if (mask[j] != mask[i] && ops.K(i, j) != 0.0) ++out;
        auto& slot = mask[i] ? c.cond_out : c.norm_out;
        slot = std::max(slot, out);
    }
    return c;
}

LinkWeights link_weights(const OperatorPair& ops, const PartitionSpec& part) {
    part.validate();
    const auto mask = part.condensed_mask();
    LinkWeights w;
    for (std::size_t i = 0; i < part.M; ++i) {
        double out = 0.0;
        for (std::size_t j = 0; j < part.M; ++j)
            if (mask[j] != mask[i]) out += std::abs(ops.K(i, j));
        auto& slot = mask[i] ? w.cond_out : w.norm_out;
        slot = std::max(slot, out);
    }
    return w;
}

BoundReport check_bounds(const OperatorPair& ops, const PartitionSpec& part, double beta,
                         const Tolerances& tol) {
    check_beta(beta);
    check_cap(ops, tol);
    ops.validate(tol);
    part.validate();

    BoundReport rep;
    rep.beta = beta;
    rep.gamma = ops.gamma;
    rep.counts = link_counts(ops, part);
    rep.weights = link_weights(ops, part);
    const double a_min = std::min(rep.weights.cond_out, rep.weights.norm_out);
    const double upper = std::exp(beta * std::abs(ops.gamma) * a_min);

    const Matrix h = ops.hamiltonian();
    const auto full = linalg::eig_dense_sym(h, tol);
    const auto log_full = log_gibbs_diagonal(full, beta);
    rep.energies.beta = beta;
    rep.energies.F = free_energy(full.values, beta);

    rep.ratios_pass = true;
    for (Subspace which : {Subspace::cond, Subspace::norm}) {
        const auto idx = part.indices(which);
        const auto es = linalg::eig_dense_sym(submatrix(h, idx), tol);
        (which == Subspace::cond ? rep.energies.F_cond : rep.energies.F_norm) = free_energy(es.values, beta);
        const auto log_x = log_gibbs_diagonal(es, beta);
        for (std::size_t a = 0; a < idx.size(); ++a) {
            ConfigBound cb;
            cb.index = idx[a];
            cb.subspace = which;
            cb.ratio = std::exp(log_full[idx[a]] - log_x[a]);
            cb.upper = upper;
            cb.pass = cb.ratio >= 1.0 - tol.bound_slack && cb.ratio <= upper * (1.0 + tol.bound_slack);
            rep.ratios_pass = rep.ratios_pass && cb.pass;
            rep.configs.push_back(cb);
        }
    }
    std::sort(rep.configs.begin(), rep.configs.end(),
              [](const ConfigBound& a, const ConfigBound& b) { return a.index < b.index; });

    const auto& e = rep.energies;
    const double fmin = std::min(e.F_cond, e.F_norm);
    const double scale = std::max({1.0, std::abs(e.F), std::abs(fmin)});
    rep.upper_slack = fmin - e.F;
    rep.lower_slack = e.F - (fmin - std::abs(ops.gamma) * a_min);
    rep.upper_pass = rep.upper_slack >= -tol.bound_slack * scale;
    rep.lower_pass = rep.lower_slack >= -tol.bound_slack * scale;
    return rep;
}

std::string BoundReport::to_json() const {
    nlohmann::json j;
    j["beta"] = beta;
    j["gamma"] = gamma;
    j["link_counts"] = {{"cond_out", counts.cond_out}, {"norm_out", counts.norm_out}};
    j["link_weights"] = {{"cond_out", weights.cond_out}, {"norm_out", weights.norm_out}};
    j["free_energies"] = {{"F", energies.F}, {"F_cond", energies.F_cond}, {"F_norm", energies.F_norm}};
    auto& rows = j["configurations"] = nlohmann::json::array();
    for (const auto& c : configs)
        rows.push_back({{"index", c.index},
                        {"subspace", name(c.subspace)},
                        {"ratio", c.ratio},
                        {"lower", 1.0},
                        {"upper", c.upper},
                        {"pass", c.pass}});
    j["upper_slack"] = upper_slack;
    j["lower_slack"] = lower_slack;
    j["ratios_pass"] = ratios_pass;
    j["upper_pass"] = upper_pass;
    j["lower_pass"] = lower_pass;
    j["pass"] = pass();
    return j.dump(2);
}

double pcond_direct(const OperatorPair& ops, const PartitionSpec& part, double beta, const Tolerances& tol) {
    return pcond_direct(ops, part, std::vector<double>{beta}, tol).front();
}

std::vector<double> pcond_direct(const OperatorPair& ops, const PartitionSpec& part,
                                 const std::vector<double>& betas, const Tolerances& tol) {
    for (double b : betas) check_beta(b);
    check_cap(ops, tol);
    ops.validate(tol);
    part.validate();
    if (part.M != ops.size()) throw ValidationError("partition size differs from operator size");

    const auto es = linalg::eig_dense_sym(ops.hamiltonian(), tol);
    const std::size_t m = es.values.size();
    // Condensed weight of every eigenstate.
    std::vector<double> weight(m, 0.0);
    for (std::size_t s = 0; s < m; ++s)
        for (std::size_t n : part.condensed) weight[s] += es.vectors(n, s) * es.vectors(n, s);

    std::vector<double> out;
    out.reserve(betas.size());
    const double e0 = es.values.front();
    for (double beta : betas) {
        double num = 0.0, den = 0.0;
        for (std::size_t s = 0; s < m; ++s) {
            const double w = std::exp(-beta * (es.values[s] - e0));
            num += w * weight[s];
            den += w;
        }
        out.push_back(std::clamp(num / den, 0.0, 1.0));
    }
    return out;
}

double pcond_logistic(const FreeEnergies& f) {
    const double diff = f.F_norm - f.F_cond;
    if (diff == 0.0) return 0.5;
    return logistic(f.beta * diff);
}

RandomInstance random_instance(std::uint64_t seed, std::size_t max_m) {
    if (max_m < 2) throw ValidationError("random_instance: max_m must be >= 2");
    // Distributions are spelled out by hand so the stream is identical on
    // every standard library.
    std::mt19937_64 rng(seed);
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    auto below = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

    RandomInstance r;
    const std::size_t m = 2 + below(max_m - 1);
    r.ops.K = Matrix(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (unit() < 0.3) r.ops.K(i, j) = r.ops.K(j, i) = -(1.0 - unit());
    r.ops.V.resize(m);
    for (auto& v : r.ops.V) v = 2.0 * unit() - 1.0;
    r.ops.gamma = 2.0 * (1.0 - unit());
    r.ops.J = 2.0 * (1.0 - unit());

    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = m - 1; i > 0; --i) std::swap(perm[i], perm[below(i + 1)]);
    const std::size_t m_cond = 1 + below(m - 1);
    r.part.M = m;
    r.part.condensed.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(m_cond));
    std::sort(r.part.condensed.begin(), r.part.condensed.end());

    constexpr double betas[] = {0.1, 1.0, 10.0};
    r.beta = betas[below(3)];
    return r;
}

}  // namespace condqpt::partition
