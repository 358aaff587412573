// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "condqpt/grover.hpp"

#include "condqpt/error.hpp"
#include "condqpt/logspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace condqpt::grover {

void GroverParams::validate() const {
    if (N < 1) throw ValidationError("Grover: N must be >= 1");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ValidationError("Grover: Gamma must be finite and >= 0");
    if (!(J >= 0.0) || !std::isfinite(J)) throw ValidationError("Grover: J must be finite and >= 0");
    if (!(beta > 0.0)) throw ValidationError("Grover: beta must be > 0");
}

double f_norm_exact(const GroverParams& p) {
    p.validate();
    if (std::isinf(p.beta)) return -p.N * p.gamma;
    return -p.N * log_two_cosh(p.beta * p.gamma) / p.beta;
}

double f_cond_exact(const GroverParams& p) {
    p.validate();
    return -p.J * p.N;
}

double critical_surface(double gamma, double temperature) {
    if (!(gamma >= 0.0)) throw ValidationError("critical_surface: Gamma must be >= 0");
    if (!(temperature >= 0.0)) throw ValidationError("critical_surface: T must be >= 0");
    if (temperature == 0.0) return gamma;
    // T log(2 cosh(G/T)) = G + T log1p(e^{-2G/T})
    return gamma + temperature * std::log1p(std::exp(-2.0 * gamma / temperature));
}

std::optional<double> critical_temperature(double J, double gamma) {
    if (!(gamma >= 0.0) || !(J >= 0.0)) throw ValidationError("critical_temperature: J, Gamma must be >= 0");
    if (J < gamma) return std::nullopt;
    if (J == gamma) return 0.0;
    double lo = 0.0;
    double hi = J / std::log(2.0);
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (critical_surface(gamma, mid) < J)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::optional<double> critical_gamma(double J, double temperature) {
    if (!(J >= 0.0)) throw ValidationError("critical_gamma: J must be >= 0");
    if (!(temperature > 0.0)) throw ValidationError("critical_gamma: T must be > 0");
    const double x = J / temperature;
    if (x < std::log(2.0)) return std::nullopt;
    // acosh(e^x / 2) = x - log 2 + log1p(sqrt(1 - 4 e^{-2x}))
    const double root = std::sqrt(std::max(0.0, 1.0 - 4.0 * std::exp(-2.0 * x)));
    return temperature * (x - std::log(2.0) + std::log1p(root));
}

GroundEnergy energy_t0(const GroverParams& p) {
    p.validate();
    if (p.gamma < p.J) return {-p.J * p.N, false};
    if (p.gamma > p.J) return {-p.gamma * p.N, false};
    return {-p.J * p.N, true};
}

linalg::SymTridiag sector_hamiltonian(const GroverParams& p) {
    p.validate();
    const int n = p.N;
    linalg::SymTridiag t;
    t.diag.assign(n + 1, 0.0);
    t.diag[0] = -p.J * n;
    t.offdiag.resize(n);
    for (int j = 0; j < n; ++j) t.offdiag[j] = -p.gamma * std::sqrt(double(j + 1) * double(n - j));
    return t;
}

namespace {

void check_sector_size(const GroverParams& p) {
    if (p.N > kMaxSectorQubits)
        throw ValidationError("Grover sector method supports N <= " + std::to_string(kMaxSectorQubits));
}

double binomial(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return std::round(c);
}

// log sum_j (C(N,j) - 1) e^{bG(N-2j)}: the non-symmetric sectors.
double log_outside_sector(const GroverParams& p) {
    double acc = kNegInf;
    for (int j = 0; j <= p.N; ++j) {
        const double mult = binomial(p.N, j) - 1.0;
        if (mult <= 0.0) continue;
        acc = log_add_exp(acc, std::log(mult) + p.beta * p.gamma * (p.N - 2 * j));
    }
    return acc;
}

}  // namespace

double log_partition(const GroverParams& p, const Tolerances& tol) {
    p.validate();
    check_sector_size(p);
    if (std::isinf(p.beta)) throw ValidationError("Grover log_partition: beta must be finite");
    const auto es = linalg::eig_symtridiag(sector_hamiltonian(p), tol);
    return log_add_exp(partition::log_partition(es.values, p.beta), log_outside_sector(p));
}

double pcond(const GroverParams& p, const Tolerances& tol) {
    p.validate();
    check_sector_size(p);
    const auto es = linalg::eig_symtridiag(sector_hamiltonian(p), tol);
    if (std::isinf(p.beta)) {
        const double u = es.vectors(0, 0);
        return u * u;
    }
    const std::size_t n = es.values.size();
    std::vector<double> x(n), w(n);
    for (std::size_t s = 0; s < n; ++s) {
        x[s] = -p.beta * es.values[s];
        w[s] = es.vectors(0, s) * es.vectors(0, s);
    }
    const double log_num = log_sum_exp(x, w);
    const double log_z = log_add_exp(log_sum_exp(x), log_outside_sector(p));
    return std::clamp(std::exp(log_num - log_z), 0.0, 1.0);
}

partition::OperatorPair operator_pair(int N, double gamma, double J) {
    if (N < 1 || N > 20) throw ValidationError("Grover operator_pair: N out of range");
    const std::size_t m = std::size_t{1} << N;
    partition::OperatorPair ops;
    ops.K = linalg::Matrix(m, m);
    ops.V.assign(m, 0.0);
    for (std::size_t s = 0; s < m; ++s)
        for (int i = 0; i < N; ++i) ops.K(s, s ^ (std::size_t{1} << i)) = -1.0;
    ops.V[0] = -double(N);
    ops.gamma = gamma;
    ops.J = J;
    return ops;
}

partition::PartitionSpec marked_partition(int N) { return {std::size_t{1} << N, {0}}; }

std::vector<double> pcond_dense_oracle(int N, double gamma, double J, const std::vector<double>& betas,
                                       const Tolerances& tol) {
    for (double b : betas) GroverParams{N, gamma, J, b}.validate();
    if (N > kMaxDenseQubits)
        throw ValidationError("Grover dense oracle supports N <= " + std::to_string(kMaxDenseQubits));
    for (double b : betas)
        if (std::isinf(b)) throw ValidationError("Grover dense oracle: beta must be finite");
    return partition::pcond_direct(operator_pair(N, gamma, J), marked_partition(N), betas, tol);
}

double pcond_dense_oracle(const GroverParams& p, const Tolerances& tol) {
    return pcond_dense_oracle(p.N, p.gamma, p.J, std::vector<double>{p.beta}, tol).front();
}

double log_partition_dense(const GroverParams& p, const Tolerances& tol) {
    p.validate();
    if (p.N > kMaxDenseQubits)
        throw ValidationError("Grover dense oracle supports N <= " + std::to_string(kMaxDenseQubits));
    const auto es = linalg::eig_dense_sym(operator_pair(p.N, p.gamma, p.J).hamiltonian(), tol);
    return partition::log_partition(es.values, p.beta);
}

}  // namespace condqpt::grover
