// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. `--only N` runs a single criterion.

#include "condqpt/criticality.hpp"
#include "condqpt/error.hpp"
#include "condqpt/fermion.hpp"
#include "condqpt/format.hpp"
#include "condqpt/grover.hpp"
#include "condqpt/io.hpp"
#include "condqpt/logspace.hpp"
#include "condqpt/partition.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

using namespace condqpt;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string f(const char* fmt, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, a);
    return buf;
}

bool within_rel(double got, double want, double rel) { return std::abs(got - want) <= rel * std::abs(want); }

std::vector<criticality::CrossingRecord> fermion_crossings(const std::vector<int>& sizes, double t) {
    criticality::FermionScan scan;
    scan.sizes = sizes;
    std::vector<criticality::CrossingRecord> out;
    for (int np : sizes) out.push_back(criticality::fermion_crossing(np, t, scan));
    return out;
}

// 1. Closed-form critical line, its residual on a 200-point grid, and both limits.
Outcome grover_surface() {
    std::vector<double> temps;
    for (int i = 0; i < 200; ++i) temps.push_back(0.01 + (2.0 - 0.01) * i / 199.0);
    const auto d = criticality::grover_phase_diagram(1.0, temps);
    double residual = 0.0;
    for (const auto& p : d.points) {
        const double direct = p.temperature * std::log(2.0 * std::cosh(1.0 / p.temperature));
        residual = std::max(residual, std::abs(p.critical - direct) / std::max(1.0, std::abs(direct)));
    }
    double lim0 = 0.0;
    for (double t : {0.01, 0.3, 1.0, 2.0})
        lim0 = std::max(lim0, std::abs(grover::critical_surface(0.0, t) - t * std::log(2.0)));
    const double limt = std::abs(grover::critical_surface(1.0, 1e-9) - 1.0);
    const bool ok = d.points.size() == 200 && residual <= 1e-12 && lim0 <= 1e-12 && limt <= 1e-6;
    return {ok, "residual=" + f("%.2e", residual) + " |Jc(G=0)-T log2|=" + f("%.2e", lim0) +
                    " |Jc(T=1e-9)-G|=" + f("%.2e", limt)};
}

// 2. Grover finite-size fits at kT/J = 0.5 and 1.2.
Outcome grover_fits() {
    bool ok = true;
    std::string detail;
    const std::pair<double, double> cases[] = {{0.5, 0.96}, {1.2, 0.67}};
    for (auto [t, want] : cases) {
        std::vector<criticality::CrossingRecord> recs;
        for (int n : {7, 9, 11, 13}) recs.push_back(criticality::grover_crossing(n, t));
        const auto fit = criticality::fit_crossings(recs, criticality::FitModel::inverse_poly);
        const double exact = grover::critical_gamma(1.0, t).value_or(NAN);
        ok = ok && std::abs(fit.a - want) <= 0.03;
        detail += "T=" + f("%g", t) + ": a=" + f("%.4f", fit.a) + " b=" + f("%.3f", fit.b) + " c=" + f("%.3f", fit.c) +
                  " (target " + f("%.2f", want) + "+-0.03, exact " + f("%.4f", exact) + ") ";
    }
    return {ok, detail};
}

// 3. Sector reduction against the dense 2^N oracle.
Outcome sector_oracle() {
    double worst = 0.0;
    int points = 0;
    for (int n = 1; n <= 10; ++n)
        for (double bg : {0.5, 1.0, 2.0})
            for (double jg : {0.5, 1.0, 2.0}) {
                const grover::GroverParams p{n, 1.0, jg, bg};
                worst = std::max(worst, std::abs(grover::pcond(p) - grover::pcond_dense_oracle(p)));
                ++points;
            }
    return {worst <= 1e-10, "max|dp|=" + f("%.2e", worst) + " over " + std::to_string(points) + " points"};
}

// 4. Fermion crossings at kT/eta = 0.02 and the inverse-poly fit.
Outcome fermion_curves() {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const auto fast = fermion_crossings({4, 6, 8, 10}, 0.02);
    const auto fast_fit = criticality::fit_crossings(fast, criticality::FitModel::inverse_poly);
    const double fast_s = std::chrono::duration<double>(clock::now() - t0).count();
    const bool gate = within_rel(fast_fit.a, 4.277, 0.05) && fast_s < 600.0;

    auto all = fast;
    all.push_back(fermion_crossings({12}, 0.02).front());
    const auto fit = criticality::extrapolate_critical(all).inverse_poly;
    const bool full = within_rel(fit.a, 4.277, 0.02) && within_rel(fit.b, -6.860, 0.05) && within_rel(fit.c, -26.841, 0.05);

    // The minors route must reproduce the literal eigenstate sum.
    const auto p = fermion::FermionParams::half_filled(8, all[2].control, 1.0 / 0.02);
    const double dp = std::abs(fermion::pcond_minors(p).p_cond - fermion::pcond_enumerated(p).p_cond);

    std::string xs;
    for (const auto& r : all) xs += f("%.4f", r.control) + " ";
    return {gate && full && dp <= 1e-9,
            "crossings=[" + xs + "] a=" + f("%.4f", fit.a) + " b=" + f("%.3f", fit.b) + " c=" + f("%.3f", fit.c) +
                " (target 4.277/-6.860/-26.841); Np<=10 gate a=" + f("%.4f", fast_fit.a) + " in " +
                f("%.1f", fast_s) + "s; minors-vs-enumeration |dp|=" + f("%.1e", dp)};
}

// 5. Extrapolated g_c(T) at five temperatures.
Outcome fermion_phase_diagram() {
    const std::pair<double, double> cases[] = {{0.02, 4.277}, {0.1, 4.303}, {0.3, 4.622}, {0.4, 4.922}, {0.5, 5.277}};
    bool ok = true;
    std::string detail;
    for (auto [t, want] : cases) {
        const auto ex = criticality::extrapolate_critical(fermion_crossings({4, 6, 8, 10, 12}, t));
        const bool hit = within_rel(ex.critical(), want, 0.02);
        ok = ok && hit;
        detail += "T=" + f("%g", t) + ":" + f("%.3f", ex.critical()) + "/" + f("%.3f", want) + (hit ? "" : "(off)") + " ";
    }
    return {ok, detail};
}

// 6. Diagonal-ratio and free-energy inequalities.
Outcome bounds() {
    int total = 0, ratio_fail = 0, upper_fail = 0, lower_fail = 0;
    auto tally = [&](const partition::BoundReport& r) {
        ++total;
        ratio_fail += !r.ratios_pass;
        upper_fail += !r.upper_pass;
        lower_fail += !r.lower_pass;
    };
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto r = partition::random_instance(seed, 40);
        tally(partition::check_bounds(r.ops, r.part, r.beta));
    }
    for (int n = 1; n <= 10; ++n)
        for (double gamma : {0.5, 1.0, 2.0})
            for (double beta : {0.1, 1.0, 10.0})
                tally(partition::check_bounds(grover::operator_pair(n, gamma, 1.0), grover::marked_partition(n), beta));
    for (double g : {1.0, 4.0, 10.0})
        for (double beta : {0.1, 1.0, 5.0, 10.0}) {
            fermion::FermionParams p;
            p.N = 10;
            p.Np = p.Ni = 3;
            p.g = g;
            p.beta = beta;
            p.half_filling = false;
            tally(partition::check_bounds(fermion::many_body_operator_pair(p),
                                          fermion::many_body_partition(p, fermion::CondensedSubspace::standard(p)),
                                          beta));
        }
    const bool ok = ratio_fail == 0 && upper_fail == 0 && lower_fail == 0;
    return {ok, std::to_string(total) + " instances; violations: ratio " + std::to_string(ratio_fail) + ", F<=min " +
                    std::to_string(upper_fail) + ", F>=min-G*A " + std::to_string(lower_fail)};
}

// 7. Properties that need no reference numbers.
Outcome properties() {
    std::vector<std::string> failed;
    auto expect = [&](bool c, const char* what) {
        if (!c) failed.push_back(what);
    };

    // Canonical Z: recursion vs summing all 2704156 states.
    {
        auto p = fermion::FermionParams::half_filled(12, 4.0, 1.0 / 0.3);
        const auto spec = fermion::single_particle_spectrum(p);
        const double e0 = [&] {
            double e = 0.0;
            for (int i = 0; i < 12; ++i) e += spec.values[i];
            return e;
        }();
        double z = 0.0;
        for (const auto& s : fermion::enumerate_eigenstates(p, spec)) z += std::exp(-p.beta * (s.energy - e0));
        const double lz = std::log(z) - p.beta * e0;
        expect(std::abs(std::expm1(lz - fermion::canonical_log_z(spec.values, 12, p.beta))) <= 1e-10, "canonical_Z");
    }
    // Resolution of identity for Slater overlaps.
    {
        auto p = fermion::FermionParams::half_filled(4, 2.5, 1.0);
        const auto spec = fermion::single_particle_spectrum(p);
        fermion::OverlapWorkspace ws(spec.vectors, 4);
        double worst = 0.0;
        for (comb::Mask e = comb::first_combination(4); e; e = comb::next_combination(e, 8)) {
            double s = 0.0;
            for (comb::Mask c = comb::first_combination(4); c; c = comb::next_combination(c, 8)) s += ws.overlap2(c, e);
            worst = std::max(worst, std::abs(s - 1.0));
        }
        expect(worst <= 1e-10, "slater_identity");
    }
    // High-temperature limits.
    {
        const double b = 1e-15;
        const auto p = fermion::FermionParams::half_filled(4, 3.0, b);
        const double want = 17.0 / 70.0;
        expect(std::abs(fermion::pcond_enumerated(p).p_cond - want) <= 1e-12, "beta0_fermion_enum");
        expect(std::abs(fermion::pcond_minors(p).p_cond - want) <= 1e-12, "beta0_fermion_minors");
        expect(std::abs(grover::pcond({9, 1.0, 1.0, b}) - 1.0 / 512) <= 1e-12, "beta0_grover");
        const auto ops = grover::operator_pair(5, 1.0, 1.0);
        expect(std::abs(partition::pcond_direct(ops, {32, {0, 3, 7}}, b) - 3.0 / 32) <= 1e-12, "beta0_direct");
    }
    // Logistic symmetry.
    {
        double worst = 0.0;
        for (double x = -60.0; x <= 60.0; x += 0.37)
            worst = std::max(worst, std::abs(partition::pcond_logistic({0, 0, x, 1}) + partition::pcond_logistic({0, 0, -x, 1}) - 1.0));
        expect(worst <= 1e-12, "logistic_symmetry");
    }
    // Fit recovery.
    {
        std::vector<criticality::CrossingRecord> recs;
        for (double x : {4.0, 6.0, 8.0, 10.0, 12.0}) {
            criticality::CrossingRecord r;
            r.size = x;
            r.control = 4.277 - 6.860 / x - 26.841 / (x * x);
            recs.push_back(r);
        }
        const auto fit = criticality::fit_crossings(recs, criticality::FitModel::inverse_poly);
        expect(std::abs(fit.a - 4.277) <= 1e-10 && std::abs(fit.b + 6.860) <= 1e-10 && std::abs(fit.c + 26.841) <= 1e-10,
               "fit_recovery");
    }
    // Bit-identical reruns.
    {
        auto run = [] {
            io::RunConfig cfg;
            cfg.controls = {1.0, 3.0, 5.0};
            cfg.temperatures = {0.2};
            cfg.sizes = {5};
            std::vector<io::ThermalPoint> pts;
            fermion::EnumerationOptions eo;
            eo.workers = 3;
            eo.chunk = 41;
            for (double g : cfg.controls) {
                const auto p = fermion::FermionParams::half_filled(5, g, 5.0);
                io::ThermalPoint t;
                t.model = "fermion";
                t.N = 10;
                t.Np = t.Ni = 5;
                t.control = g;
                t.temperature = 0.2;
                t.p_cond = fermion::pcond_enumerated(p, eo).p_cond;
                pts.push_back(t);
            }
            return io::points_csv(pts, cfg.hash()) + io::points_json(pts, cfg);
        };
        expect(run() == run(), "bit_identical_rerun");
    }

    std::string detail = failed.empty() ? "all 6 property groups hold" : "failed:";
    for (const auto& s : failed) detail += " " + s;
    return {failed.empty(), detail};
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
            return 2;
        }
    }

    const Criterion criteria[] = {
        {1, "grover critical surface", 1.0, grover_surface},
        {2, "grover finite-N fits", 60.0, grover_fits},
        {3, "sector vs dense oracle", 120.0, sector_oracle},
        {4, "fermion curves at kT/eta=0.02", 0.0, fermion_curves},
        {5, "fermion phase diagram", 0.0, fermion_phase_diagram},
        {6, "bound suite", 300.0, bounds},
        {7, "property suite", 0.0, properties},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (only && c.id != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0.0 && secs > c.budget_s) {
            o.pass = false;
            o.detail += " (over time budget " + fmt17(c.budget_s) + "s)";
        }
        std::printf("%s criterion %d %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures ? 1 : 0;
}
