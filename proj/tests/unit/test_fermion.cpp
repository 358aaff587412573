// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "condqpt/error.hpp"
#include "condqpt/fermion.hpp"
#include "condqpt/logspace.hpp"

#include "../oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace condqpt;
using namespace condqpt::fermion;

namespace {

FermionParams relaxed(int n, int np, int ni, double g, double beta) {
    FermionParams p;
    p.N = n;
    p.Np = np;
    p.Ni = ni;
    p.g = g;
    p.beta = beta;
    p.half_filling = false;
    return p;
}

// <config| e^{-bH} |config> / Z straight from the many-body Hamiltonian.
double pcond_many_body_oracle(const FermionParams& p) {
    const auto ops = many_body_operator_pair(p);
    const auto part = many_body_partition(p, CondensedSubspace::standard(p));
    const auto e = oracle::expm_sym(ops.hamiltonian(), p.beta);
    double tr = 0.0, num = 0.0;
    for (std::size_t i = 0; i < e.rows(); ++i) tr += e(i, i);
    for (std::size_t i : part.condensed) num += e(i, i);
    return num / tr;
}

}  // namespace

TEST_SUITE("fermion") {

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(FermionParams::half_filled(4, 1.0, 1.0).validate());
    CHECK_THROWS_AS(relaxed(4, 5, 2, 0.0, 1.0).validate(), ValidationError);
    CHECK_THROWS_AS(relaxed(8, 2, 3, 0.0, 1.0).validate(), ValidationError);
    CHECK_THROWS_AS(relaxed(8, 3, 3, -1.0, 1.0).validate(), ValidationError);
    CHECK_THROWS_AS(relaxed(8, 3, 3, 1.0, 0.0).validate(), ValidationError);
    auto p = relaxed(10, 3, 3, 1.0, 1.0);
    p.half_filling = true;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("free open chain spectrum") {
    const auto es = single_particle_spectrum(relaxed(4, 2, 0, 0.0, 1.0));
    for (int k = 1; k <= 4; ++k)
        CHECK(es.values[k - 1] == doctest::Approx(-2.0 * std::cos(k * std::numbers::pi / 5.0)).epsilon(1e-13));
}

TEST_CASE("strong attraction detaches the attractive block") {
    const auto es = single_particle_spectrum(relaxed(4, 2, 2, 1e6, 1.0));
    CHECK(std::abs(es.values[0] + 1e6) < 2.0);
    CHECK(std::abs(es.values[1] + 1e6) < 2.0);
    CHECK(es.values[2] == doctest::Approx(-1.0).epsilon(1e-5));
    CHECK(es.values[3] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("single-particle spectrum matches the Jacobi oracle") {
    const auto p = FermionParams::half_filled(4, 2.0, 1.0);
    const auto es = single_particle_spectrum(p);
    const auto ref = oracle::jacobi(one_body_matrix(p).to_dense());
    for (int i = 0; i < 8; ++i) CHECK(es.values[i] == doctest::Approx(ref.values[i]).epsilon(1e-10));
}

TEST_CASE("eigenstate enumeration") {
    const auto p = relaxed(4, 2, 2, 0.5, 1.0);
    const auto spec = single_particle_spectrum(p);
    const auto range = enumerate_eigenstates(p, spec);
    CHECK(range.size() == 6);
    const auto ref = oracle::subsets(4, 2);
    std::size_t i = 0;
    for (const auto& s : range) {
        CHECK(s.mask == ref[i++]);
        double e = 0.0;
        for (int b = 0; b < 4; ++b)
            if (s.mask >> b & 1) e += spec.values[b];
        CHECK(s.energy == doctest::Approx(e).epsilon(1e-15));
    }
    CHECK((*range.begin()).energy == doctest::Approx(spec.values[0] + spec.values[1]));
}

TEST_CASE("enumeration cap names the long-run flag") {
    Tolerances tol;
    tol.enumeration_cap = 10;
    const auto p = FermionParams::half_filled(4, 1.0, 1.0);
    try {
        (void)enumerate_eigenstates(p, single_particle_spectrum(p), {}, tol);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("--long-run") != std::string::npos);
    }
    EnumerationOptions lr;
    lr.long_run = true;
    CHECK_NOTHROW(enumerate_eigenstates(p, single_particle_spectrum(p), lr, tol));
}

TEST_CASE("canonical partition function") {
    const std::vector<double> eps{-1.3, -0.4, 0.1, 0.2, 0.9, 1.7, 2.0, 2.5};
    CHECK(canonical_log_z(eps, 1, 0.7) == doctest::Approx(log_sum_exp(std::vector<double>{
        -0.7 * -1.3, -0.7 * -0.4, -0.7 * 0.1, -0.7 * 0.2, -0.7 * 0.9, -0.7 * 1.7, -0.7 * 2.0, -0.7 * 2.5})).epsilon(1e-14));
    double sum = 0.0;
    for (double e : eps) sum += e;
    CHECK(canonical_log_z(eps, 8, 0.7) == doctest::Approx(-0.7 * sum).epsilon(1e-14));
    double z = 0.0;
    for (auto m : oracle::subsets(8, 4)) {
        double e = 0.0;
        for (int b = 0; b < 8; ++b)
            if (m >> b & 1) e += eps[b];
        z += std::exp(-1.0 * e);
    }
    CHECK(canonical_log_z(eps, 4, 1.0) == doctest::Approx(std::log(z)).epsilon(1e-12));
    // No overflow at large beta.
    CHECK(std::isfinite(canonical_log_z(eps, 4, 1e4)));
}

TEST_CASE("condensed subspace layout") {
    const auto sub = CondensedSubspace::standard(FermionParams::half_filled(3, 1.0, 1.0));
    REQUIRE(sub.size() == 10);
    CHECK(sub.configs()[0] == 0b000111);
    CHECK(sub.configs()[1] == 0b001110);   // hole at site 0, particle at 3
    CHECK(sub.configs()[2] == 0b010110);
    CHECK(sub.configs()[4] == 0b001101);   // hole at site 1
    CHECK_THROWS_AS(CondensedSubspace::standard(relaxed(8, 3, 2, 1.0, 1.0)), ValidationError);
    CHECK_THROWS_AS(CondensedSubspace::from_configs(4, 2, {0b0011, 0b0011}), ValidationError);
    CHECK_THROWS_AS(CondensedSubspace::from_configs(4, 2, {0b0111}), ValidationError);
    CHECK_THROWS_AS(CondensedSubspace::from_configs(4, 2, {0b110000}), ValidationError);
    CHECK(CondensedSubspace::standard(relaxed(10, 3, 3, 1.0, 1.0)).size() == 1 + 3 * 7);
}

TEST_CASE("Slater overlaps") {
    const auto p = relaxed(6, 1, 1, 0.8, 1.0);
    const auto spec = single_particle_spectrum(p);
    OverlapWorkspace one(spec.vectors, 1);
    for (int l = 0; l < 6; ++l)
        for (int j = 0; j < 6; ++j)
            CHECK(one.overlap2(Mask{1} << l, Mask{1} << j) == doctest::Approx(spec.vectors(l, j) * spec.vectors(l, j)).epsilon(1e-14));

    // Resolution of identity in both directions at N = 8, Np = 3.
    const auto q = relaxed(8, 3, 3, 1.3, 1.0);
    const auto sq = single_particle_spectrum(q);
    OverlapWorkspace ws(sq.vectors, 3);
    const auto all = oracle::subsets(8, 3);
    for (Mask e : {all[0], all[17], all.back()}) {
        double s = 0.0;
        for (Mask c : all) s += slater_overlap2(ws, {c}, {e});
        CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
    }
    for (Mask c : {all[3], all[40]}) {
        double s = 0.0;
        for (Mask e : all) s += ws.overlap2(c, e);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
    }
    // Same overlap via Leibniz.
    const double d = oracle::det_leibniz(oracle::minor_of(sq.vectors, all[11], all[29]));
    CHECK(ws.overlap2(all[11], all[29]) == doctest::Approx(d * d).epsilon(1e-12));
}

TEST_CASE("strong attraction: the filled block is an eigenstate") {
    const auto p = relaxed(6, 2, 2, 1e6, 1.0);
    const auto spec = single_particle_spectrum(p);
    OverlapWorkspace ws(spec.vectors, 2);
    CHECK(ws.overlap2(0b000011, 0b000011) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("enumerated and minor routes agree with the many-body oracle") {
    for (double g : {0.0, 2.0, 5.0})
        for (double beta : {0.3, 2.0, 5.0}) {
            const auto p = FermionParams::half_filled(3, g, beta);
            const double ref = pcond_many_body_oracle(p);
            CHECK(pcond_enumerated(p).p_cond == doctest::Approx(ref).epsilon(1e-10));
            CHECK(pcond_minors(p).p_cond == doctest::Approx(ref).epsilon(1e-10));
        }
    const auto q = relaxed(8, 3, 3, 3.0, 1.5);
    CHECK(pcond_minors(q).p_cond == doctest::Approx(pcond_many_body_oracle(q)).epsilon(1e-10));
}

TEST_CASE("minors stay accurate where direct determinants cancel") {
    for (double beta : {20.0, 50.0}) {
        const auto p = FermionParams::half_filled(5, 4.0, beta);
        CHECK(pcond_minors(p).p_cond == doctest::Approx(pcond_enumerated(p).p_cond).epsilon(1e-9));
    }
}

TEST_CASE("p_cond limits and regression baselines") {
    for (int np : {2, 4}) {
        const auto p = FermionParams::half_filled(np, 3.0, 1e-13);
        const double expect = double(1 + np * np) / double(comb::binomial(2 * np, np));
        CHECK(pcond_enumerated(p).p_cond == doctest::Approx(expect).epsilon(1e-12));
        CHECK(pcond_minors(p).p_cond == doctest::Approx(expect).epsilon(1e-12));
    }
    const auto free = pcond_enumerated(FermionParams::half_filled(4, 0.0, 5.0));
    CHECK(free.p_cond < 0.1);
    CHECK(free.p_cond == doctest::Approx(0.08115922019904126).epsilon(1e-10));
}

TEST_CASE("reflection symmetry at g = 0") {
    const auto p = FermionParams::half_filled(4, 0.0, 2.0);
    const auto left = CondensedSubspace::standard(p);
    std::vector<Mask> mirrored;
    for (Mask m : left.configs()) {
        Mask r = 0;
        for (int b = 0; b < 8; ++b)
            if (m >> b & 1) r |= Mask{1} << (7 - b);
        mirrored.push_back(r);
    }
    const auto right = CondensedSubspace::from_configs(8, 4, mirrored);
    CHECK(pcond_enumerated(p, right).p_cond == doctest::Approx(pcond_enumerated(p, left).p_cond).epsilon(1e-10));
}

TEST_CASE("p_cond is nondecreasing in g") {
    double prev = 0.0;
    for (double g = 0.0; g <= 12.0; g += 0.5) {
        const double v = pcond_minors(FermionParams::half_filled(5, g, 1.0 / 0.2)).p_cond;
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("denominator cross-check and tail cutoff") {
    const auto p = FermionParams::half_filled(5, 3.0, 4.0);
    const auto full = pcond_enumerated(p);
    CHECK(std::abs(std::expm1(full.log_z_enumerated - full.log_z)) <= 1e-10);
    CHECK(full.skipped == 0);
    CHECK(full.error_bar == 0.0);
    EnumerationOptions cut;
    cut.tail_cutoff = 10.0;
    const auto part = pcond_enumerated(p, cut);
    CHECK(part.skipped > 0);
    CHECK(part.error_bar > 0.0);
    CHECK(std::abs(part.p_cond - full.p_cond) <= part.error_bar);
}

TEST_CASE("worker count and chunking do not change the result bits") {
    const auto p = FermionParams::half_filled(5, 2.5, 3.0);
    EnumerationOptions a, b;
    a.chunk = 17;
    a.workers = 1;
    b.chunk = 17;
    b.workers = 4;
    CHECK(pcond_enumerated(p, a).p_cond == pcond_enumerated(p, b).p_cond);
}

TEST_CASE("restricted free energies") {
    const auto p = relaxed(10, 3, 3, 0.0, 5.0);
    const auto f = restricted_free_energies(p);
    const auto ops = many_body_operator_pair(p);
    const auto part = many_body_partition(p, CondensedSubspace::standard(p));
    Matrix hc(part.m_cond(), part.m_cond());
    const auto h = ops.hamiltonian();
    for (std::size_t a = 0; a < part.m_cond(); ++a)
        for (std::size_t b = 0; b < part.m_cond(); ++b) hc(a, b) = h(part.condensed[a], part.condensed[b]);
    const auto ref = oracle::jacobi(hc);
    std::vector<double> x;
    for (double e : ref.values) x.push_back(-5.0 * e);
    CHECK(f.F_cond == doctest::Approx(-log_sum_exp(x) / 5.0).epsilon(1e-12));

    // Deep in the condensed phase the logistic form tracks the direct value;
    // at weak coupling only the side of 1/2 agrees at this size.
    for (double g : {4.0, 8.0}) {
        const auto q = relaxed(10, 3, 3, g, 5.0);
        CHECK(std::abs(pcond_minors(q).p_cond - partition::pcond_logistic(restricted_free_energies(q))) <= 1e-3);
    }
    const auto weak = relaxed(10, 3, 3, 0.5, 5.0);
    CHECK(pcond_minors(weak).p_cond < 0.5);
    CHECK(partition::pcond_logistic(restricted_free_energies(weak)) < 0.5);
}

TEST_CASE("many-body hopping against the single-particle spectrum") {
    // Free fermions: the many-body ground energy is the Pauli filling.
    const auto p = relaxed(8, 3, 3, 1.7, 1.0);
    const auto es = linalg::eig_dense_sym(many_body_operator_pair(p).hamiltonian());
    const auto sp = single_particle_spectrum(p);
    CHECK(es.values[0] == doctest::Approx(sp.values[0] + sp.values[1] + sp.values[2]).epsilon(1e-12));
    CHECK(canonical_log_z(sp.values, 3, 0.8) ==
          doctest::Approx(partition::log_partition(es.values, 0.8)).epsilon(1e-12));
}

}
