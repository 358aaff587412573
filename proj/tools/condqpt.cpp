// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

// condqpt: command-line driver for the Grover and free-fermion models.
//
// Without --out every subcommand prints CSV (or JSON for check-bounds and
// fit) on stdout. With --out DIR it writes <stem>.csv and <stem>.json there.
//
// Exit codes: 0 ok, 1 I/O failure, 2 bad input, 3 numerical invariant
// violated (including a failed bound check).

#include "condqpt/criticality.hpp"
#include "condqpt/error.hpp"
#include "condqpt/fermion.hpp"
#include "condqpt/grover.hpp"
#include "condqpt/io.hpp"
#include "condqpt/parallel.hpp"
#include "condqpt/partition.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifndef CONDQPT_VERSION
#define CONDQPT_VERSION "0.0.0"
#endif
#ifndef CONDQPT_GIT_REV
#define CONDQPT_GIT_REV "unknown"
#endif
#ifndef CONDQPT_BUILD_TYPE
#define CONDQPT_BUILD_TYPE "unknown"
#endif

namespace {

using namespace condqpt;
namespace fs = std::filesystem;

struct Global {
    std::string config;
    std::string out;
    unsigned workers = 1;
    bool long_run = false;
    std::uint64_t seed = 0;
    CLI::Option* workers_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
};

std::vector<double> linspace(double lo, double hi, int steps) {
    if (steps < 1) throw ValidationError("--steps must be >= 1");
    if (steps == 1) return {lo};
    if (!(hi > lo)) throw ValidationError("grid upper end must exceed its lower end");
    std::vector<double> v(steps);
    for (int i = 0; i < steps; ++i) v[i] = lo + (hi - lo) * i / (steps - 1);
    return v;
}

// Base RunConfig: the --config file if given, with global flags on top.
io::RunConfig base_config(const Global& g) {
    io::RunConfig c;
    if (!g.config.empty()) c = io::RunConfig::load(g.config);
    if (g.workers_opt->count() || g.config.empty()) c.workers = g.workers;
    if (g.seed_opt->count()) c.seed = g.seed;
    c.long_run = c.long_run || g.long_run;
    if (!g.out.empty()) c.output_dir = g.out;
    return c;
}

template <class T>
void take(const CLI::Option* opt, const T& flag, T& field) {
    if (opt->count() || field == T{}) field = flag;
}

void emit(const Global& g, const std::string& stem, const std::string& csv, const std::string& json) {
    if (g.out.empty()) {
        std::cout << csv;
        return;
    }
    io::write_text(fs::path(g.out) / (stem + ".csv"), csv);
    io::write_text(fs::path(g.out) / (stem + ".json"), json);
    std::fprintf(stderr, "wrote %s/%s.{csv,json}\n", g.out.c_str(), stem.c_str());
}

std::string with_config(const std::string& body, const io::RunConfig& cfg) {
    nlohmann::json j = nlohmann::json::parse(body);
    j["schema_version"] = io::kSchemaVersion;
    j["config"] = nlohmann::json::parse(cfg.to_json());
    j["config"].erase("output_dir");
    j["config"].erase("cache_dir");
    j["config_hash"] = cfg.hash();
    return j.dump(2);
}

// ---------------------------------------------------------------------------

struct SurfaceArgs {
    double gamma = 1.0, tmin = 0.01, tmax = 2.0;
    int steps = 200;
};

int run_grover_surface(const Global& g, const SurfaceArgs& a) {
    auto cfg = base_config(g);
    cfg.model = "grover";
    cfg.controls = {a.gamma};
    cfg.temperatures = linspace(a.tmin, a.tmax, a.steps);
    cfg.sizes = {1};
    cfg.validate();
    const auto d = criticality::grover_phase_diagram(a.gamma, cfg.temperatures);
    emit(g, "grover_surface", d.to_csv(), with_config(d.to_json(), cfg));
    return 0;
}

// ---------------------------------------------------------------------------

struct GroverArgs {
    std::vector<int> sizes{7, 9, 11, 13};
    std::vector<double> temps{0.5};
    double gmin = 0.0, gmax = 2.0;
    int steps = 81;
    std::string method = "sector";
    CLI::Option *sizes_opt = nullptr, *temps_opt = nullptr;
};

int run_grover_pcond(const Global& g, const GroverArgs& a) {
    auto cfg = base_config(g);
    cfg.model = "grover";
    take(a.sizes_opt, a.sizes, cfg.sizes);
    take(a.temps_opt, a.temps, cfg.temperatures);
    cfg.controls = linspace(a.gmin, a.gmax, a.steps);
    cfg.validate();
    if (a.method != "sector" && a.method != "dense") throw ValidationError("--method must be sector or dense");
    const std::size_t nc = cfg.controls.size(), nt = cfg.temperatures.size(), ns = cfg.sizes.size();

    std::vector<io::ThermalPoint> pts(ns * nt * nc);
    parallel_for(pts.size(), cfg.workers, [&](std::size_t k) {
        const int n = cfg.sizes[k / (nt * nc)];
        const double t = cfg.temperatures[k / nc % nt];
        const double gamma = cfg.controls[k % nc];
        const grover::GroverParams p{n, gamma, 1.0, 1.0 / t};
        auto& pt = pts[k];
        pt.model = "grover";
        pt.N = n;
        pt.control = gamma;
        pt.temperature = t;
        pt.p_cond = a.method == "sector" ? grover::pcond(p, cfg.tolerances) : grover::pcond_dense_oracle(p, cfg.tolerances);
        pt.F_cond = grover::f_cond_exact(p);
        pt.F_norm = grover::f_norm_exact(p);
    });
    emit(g, "grover_pcond", io::points_csv(pts, cfg.hash()), io::points_json(pts, cfg));

    if (!g.out.empty() && ns >= 3) {
        std::vector<criticality::CrossingRecord> recs;
        for (double t : cfg.temperatures)
            for (int n : cfg.sizes)
                recs.push_back(criticality::grover_crossing(n, t, std::max(a.gmin, 1e-3), a.gmax, cfg.tolerances));
        io::write_text(fs::path(g.out) / "grover_crossings.csv", io::crossings_csv(recs));
        nlohmann::json fits = nlohmann::json::array();
        for (std::size_t t = 0; t < nt; ++t) {
            std::vector<criticality::CrossingRecord> sub(recs.begin() + t * ns, recs.begin() + (t + 1) * ns);
            auto f = nlohmann::json::parse(io::fit_json(criticality::fit_crossings(sub, criticality::FitModel::inverse_poly, cfg.tolerances)));
            f["temperature"] = cfg.temperatures[t];
            fits.push_back(f);
        }
        io::write_text(fs::path(g.out) / "grover_fit.json", with_config(nlohmann::json{{"fits", fits}}.dump(), cfg));
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct FermionArgs {
    std::vector<int> sizes{4};
    std::vector<double> temps{0.2};
    double gmin = 0.0, gmax = 20.0;
    int steps = 80;
    std::string method = "minors";
    std::optional<double> tail_cutoff;
    bool free_energies = false;
    CLI::Option *sizes_opt = nullptr, *temps_opt = nullptr, *method_opt = nullptr;
};

fermion::EnumerationOptions enumeration_options(const io::RunConfig& cfg) {
    fermion::EnumerationOptions e;
    e.long_run = cfg.long_run;
    e.tail_cutoff = cfg.tail_cutoff;
    e.workers = cfg.workers;
    return e;
}

int run_fermion_pcond(const Global& g, const FermionArgs& a) {
    auto cfg = base_config(g);
    cfg.model = "fermion";
    take(a.sizes_opt, a.sizes, cfg.sizes);
    take(a.temps_opt, a.temps, cfg.temperatures);
    if (a.method_opt->count() || g.config.empty()) cfg.method = a.method;
    if (a.tail_cutoff) cfg.tail_cutoff = a.tail_cutoff;
    cfg.controls = linspace(a.gmin, a.gmax, a.steps);
    cfg.validate();
    const std::size_t nc = cfg.controls.size(), nt = cfg.temperatures.size(), ns = cfg.sizes.size();
    const bool enumerate = cfg.method == "enumeration";
    auto eopts = enumeration_options(cfg);
    // Enumeration parallelizes inside each point; minors across points.
    const unsigned outer = enumerate ? 1 : cfg.workers;

    std::vector<io::ThermalPoint> pts(ns * nt * nc);
    parallel_for(pts.size(), outer, [&](std::size_t k) {
        const int np = cfg.sizes[k / (nt * nc)];
        const double t = cfg.temperatures[k / nc % nt];
        const double gg = cfg.controls[k % nc];
        const auto p = fermion::FermionParams::half_filled(np, gg, 1.0 / t);
        const auto r = enumerate ? fermion::pcond_enumerated(p, eopts, cfg.tolerances) : fermion::pcond_minors(p, cfg.tolerances);
        auto& pt = pts[k];
        pt.model = "fermion";
        pt.N = p.N;
        pt.Np = p.Np;
        pt.Ni = p.Ni;
        pt.control = gg;
        pt.temperature = t;
        pt.p_cond = r.p_cond;
        pt.error_bar = r.error_bar;
        if (a.free_energies) {
            const auto f = fermion::restricted_free_energies(p, cfg.tolerances);
            pt.F_cond = f.F_cond;
            pt.F_norm = f.F_norm;
        }
    });
    emit(g, "fermion_pcond", io::points_csv(pts, cfg.hash()), io::points_json(pts, cfg));

    if (!g.out.empty() && ns >= 3) {
        criticality::FermionScan scan;
        scan.sizes = cfg.sizes;
        scan.g_lo = a.gmin;
        scan.g_hi = a.gmax;
        scan.method = enumerate ? criticality::FermionMethod::enumeration : criticality::FermionMethod::minors;
        scan.enumeration = eopts;
        std::vector<criticality::CrossingRecord> recs;
        nlohmann::json fits = nlohmann::json::array();
        for (double t : cfg.temperatures) {
            std::vector<criticality::CrossingRecord> sub;
            for (int np : cfg.sizes) sub.push_back(criticality::fermion_crossing(np, t, scan, cfg.tolerances));
            recs.insert(recs.end(), sub.begin(), sub.end());
            for (auto m : {criticality::FitModel::inverse_poly, criticality::FitModel::log_loglog}) {
                criticality::FitResult f;
                if (sub.size() >= 4) {
                    const auto ex = criticality::extrapolate_critical(sub, cfg.tolerances);
                    f = m == criticality::FitModel::inverse_poly ? ex.inverse_poly : ex.log_loglog;
                } else {
                    f = criticality::fit_crossings(sub, m, cfg.tolerances);
                }
                auto j = nlohmann::json::parse(io::fit_json(f));
                j["temperature"] = t;
                fits.push_back(j);
            }
        }
        io::write_text(fs::path(g.out) / "fermion_crossings.csv", io::crossings_csv(recs));
        io::write_text(fs::path(g.out) / "fermion_fit.json", with_config(nlohmann::json{{"fits", fits}}.dump(), cfg));
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct PhaseArgs {
    std::string model = "fermion";
    std::vector<double> temps{0.02, 0.1, 0.2, 0.3, 0.4, 0.5, 0.7, 1.0, 1.3};
    std::vector<int> sizes{4, 6, 8, 10, 12};
    double gamma = 1.0;
    double gmin = 0.0, gmax = 20.0;
    std::string method = "minors";
    CLI::Option *sizes_opt = nullptr, *temps_opt = nullptr, *method_opt = nullptr;
};

int run_phase_diagram(const Global& g, const PhaseArgs& a) {
    auto cfg = base_config(g);
    if (a.model != "grover" && a.model != "fermion") throw ValidationError("--model must be grover or fermion");
    cfg.model = a.model;
    take(a.temps_opt, a.temps, cfg.temperatures);
    if (a.model == "grover") {
        cfg.controls = {a.gamma};
        cfg.sizes = {1};
        cfg.validate();
        const auto d = criticality::grover_phase_diagram(a.gamma, cfg.temperatures);
        emit(g, "phase_diagram_grover", d.to_csv(), with_config(d.to_json(), cfg));
        return 0;
    }
    take(a.sizes_opt, a.sizes, cfg.sizes);
    if (a.method_opt->count() || g.config.empty()) cfg.method = a.method;
    cfg.controls = {a.gmin, a.gmax};
    cfg.validate();
    criticality::FermionScan scan;
    scan.sizes = cfg.sizes;
    scan.g_lo = a.gmin;
    scan.g_hi = a.gmax;
    scan.method = cfg.method == "enumeration" ? criticality::FermionMethod::enumeration : criticality::FermionMethod::minors;
    scan.enumeration = enumeration_options(cfg);
    scan.workers = scan.method == criticality::FermionMethod::minors ? cfg.workers : 1;
    const auto d = criticality::fermion_phase_diagram(cfg.temperatures, scan, cfg.tolerances);
    emit(g, "phase_diagram_fermion", d.to_csv(), with_config(d.to_json(), cfg));
    return 0;
}

// ---------------------------------------------------------------------------

struct BoundsArgs {
    std::string model = "grover";
    int n = 8, np = 3, ni = 3;
    double gamma = 1.0, j = 1.0, g = 4.0, beta = 1.0;
    int instances = 100;
    int max_m = 40;
};

int run_check_bounds(const Global& gl, const BoundsArgs& a) {
    auto cfg = base_config(gl);
    if (!(a.beta > 0.0)) throw ValidationError("--beta must be > 0");
    nlohmann::json reports = nlohmann::json::array();
    bool ok = true;
    auto add = [&](const partition::BoundReport& r, nlohmann::json extra) {
        auto j = nlohmann::json::parse(r.to_json());
        j.update(extra);
        ok = ok && r.pass();
        reports.push_back(std::move(j));
    };

    if (a.model == "grover") {
        if (a.n < 1 || a.n > grover::kMaxDenseQubits) throw ValidationError("--n must be in [1, 13] for grover");
        add(partition::check_bounds(grover::operator_pair(a.n, a.gamma, a.j), grover::marked_partition(a.n), a.beta,
                                    cfg.tolerances),
            {{"model", "grover"}, {"N", a.n}});
    } else if (a.model == "fermion") {
        fermion::FermionParams p;
        p.N = a.n;
        p.Np = a.np;
        p.Ni = a.ni;
        p.g = a.g;
        p.beta = a.beta;
        p.half_filling = false;
        p.validate();
        const auto sub = fermion::CondensedSubspace::standard(p);
        add(partition::check_bounds(fermion::many_body_operator_pair(p, cfg.tolerances),
                                    fermion::many_body_partition(p, sub), a.beta, cfg.tolerances),
            {{"model", "fermion"}, {"N", a.n}, {"Np", a.np}, {"Ni", a.ni}});
    } else if (a.model == "random") {
        if (a.instances < 1) throw ValidationError("--instances must be >= 1");
        if (a.max_m < 2) throw ValidationError("--max-m must be >= 2");
        std::vector<partition::BoundReport> reps(a.instances);
        std::vector<partition::RandomInstance> inst(a.instances);
        parallel_for(reps.size(), cfg.workers, [&](std::size_t i) {
            inst[i] = partition::random_instance(cfg.seed + i, a.max_m);
            reps[i] = partition::check_bounds(inst[i].ops, inst[i].part, inst[i].beta, cfg.tolerances);
        });
        for (std::size_t i = 0; i < reps.size(); ++i)
            add(reps[i], {{"model", "random"}, {"seed", cfg.seed + i}, {"M", inst[i].ops.size()}});
    } else {
        throw ValidationError("check-bounds model must be grover, fermion or random");
    }

    nlohmann::json out{{"pass", ok}, {"reports", reports}};
    if (gl.out.empty()) {
        std::cout << out.dump(2) << '\n';
    } else {
        io::write_text(fs::path(gl.out) / "bounds.json", out.dump(2));
        std::fprintf(stderr, "wrote %s/bounds.json\n", gl.out.c_str());
    }
    if (!ok) {
        std::fprintf(stderr, "bound check failed\n");
        return 3;
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct FitArgs {
    std::string model = "inverse-poly";
    std::string input;
};

int run_fit(const Global& g, const FitArgs& a) {
    auto cfg = base_config(g);
    const auto recs = io::parse_crossings_csv(io::read_text(a.input));
    std::string text;
    if (a.model == "both") {
        const auto ex = criticality::extrapolate_critical(recs, cfg.tolerances);
        nlohmann::json j{{"fits", {nlohmann::json::parse(io::fit_json(ex.inverse_poly)),
                                   nlohmann::json::parse(io::fit_json(ex.log_loglog))}},
                         {"critical_value", ex.critical()}};
        text = j.dump(2);
    } else {
        text = io::fit_json(criticality::fit_crossings(recs, criticality::parse_fit_model(a.model), cfg.tolerances));
    }
    if (g.out.empty()) {
        std::cout << text << '\n';
    } else {
        io::write_text(fs::path(g.out) / "fit.json", text + "\n");
        std::fprintf(stderr, "wrote %s/fit.json\n", g.out.c_str());
    }
    return 0;
}

std::string version_string() {
    return std::string("condqpt ") + CONDQPT_VERSION + " (git " + CONDQPT_GIT_REV + ", " + CONDQPT_BUILD_TYPE +
           ", " + __VERSION__ + ")";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-temperature condensation transitions: Grover model and 1D free fermions"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);
    app.fallthrough();

    Global g;
    app.add_option("--config", g.config, "RunConfig JSON")->check(CLI::ExistingFile);
    app.add_option("--out", g.out, "Output directory (default: CSV on stdout)");
    g.workers_opt = app.add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--long-run", g.long_run, "Lift the enumeration cap");
    g.seed_opt = app.add_option("--seed", g.seed, "Seed for random bound instances");

    SurfaceArgs sa;
    auto* surf = app.add_subcommand("grover-surface", "Grover critical line J_c(T) at fixed Gamma");
    surf->add_option("--gamma", sa.gamma, "Gamma");
    surf->add_option("--tmin", sa.tmin, "Lowest k_B T");
    surf->add_option("--tmax", sa.tmax, "Highest k_B T");
    surf->add_option("--steps", sa.steps, "Temperature points");

    GroverArgs ga;
    auto* gp = app.add_subcommand("grover-pcond", "Grover p_cond versus Gamma/J");
    ga.sizes_opt = gp->add_option("--n", ga.sizes, "Qubit counts")->delimiter(',');
    ga.temps_opt = gp->add_option("--t", ga.temps, "k_B T / J values")->delimiter(',');
    gp->add_option("--gmin", ga.gmin, "Lowest Gamma/J");
    gp->add_option("--gmax", ga.gmax, "Highest Gamma/J");
    gp->add_option("--steps", ga.steps, "Gamma/J points");
    gp->add_option("--method", ga.method, "sector or dense");

    FermionArgs fa;
    auto* fp = app.add_subcommand("fermion-pcond", "Fermion p_cond versus g/eta at Np = Ni = N/2");
    fa.sizes_opt = fp->add_option("--np", fa.sizes, "Particle counts")->delimiter(',');
    fa.temps_opt = fp->add_option("--t", fa.temps, "k_B T / eta values")->delimiter(',');
    fp->add_option("--gmin", fa.gmin, "Lowest g/eta");
    fp->add_option("--gmax", fa.gmax, "Highest g/eta");
    fp->add_option("--steps", fa.steps, "g/eta points");
    fa.method_opt = fp->add_option("--method", fa.method, "minors or enumeration");
    fp->add_option("--tail-cutoff", fa.tail_cutoff, "Skip eigenstates with beta (E - E0) above this");
    fp->add_flag("--free-energies", fa.free_energies, "Also report F_cond, F_norm (dense, small Np only)");

    PhaseArgs pa;
    auto* ph = app.add_subcommand("phase-diagram", "Critical line versus temperature");
    ph->add_option("--model", pa.model, "grover or fermion");
    pa.temps_opt = ph->add_option("--t", pa.temps, "Temperatures")->delimiter(',');
    pa.sizes_opt = ph->add_option("--np", pa.sizes, "Fermion particle counts")->delimiter(',');
    ph->add_option("--gamma", pa.gamma, "Gamma (grover)");
    ph->add_option("--gmin", pa.gmin, "Lowest g/eta scanned");
    ph->add_option("--gmax", pa.gmax, "Highest g/eta scanned");
    pa.method_opt = ph->add_option("--method", pa.method, "minors or enumeration");

    BoundsArgs ba;
    auto* cb = app.add_subcommand("check-bounds", "Diagonal-ratio and free-energy bounds");
    cb->add_option("model", ba.model, "grover, fermion or random");
    cb->add_option("--n", ba.n, "Qubits (grover) or sites (fermion)");
    cb->add_option("--np", ba.np, "Particles (fermion)");
    cb->add_option("--ni", ba.ni, "Attractive sites (fermion)");
    cb->add_option("--gamma", ba.gamma, "Gamma (grover)");
    cb->add_option("--j", ba.j, "J (grover)");
    cb->add_option("--g", ba.g, "g/eta (fermion)");
    cb->add_option("--beta", ba.beta, "Inverse temperature");
    cb->add_option("--instances", ba.instances, "Random instances");
    cb->add_option("--max-m", ba.max_m, "Largest random configuration count");

    FitArgs fi;
    auto* ft = app.add_subcommand("fit", "Fit crossing records");
    ft->add_option("--model", fi.model, "inverse-poly, log-loglog or both");
    ft->add_option("--input", fi.input, "Crossings CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return 2;
    }

    try {
        if (*surf) return run_grover_surface(g, sa);
        if (*gp) return run_grover_pcond(g, ga);
        if (*fp) return run_fermion_pcond(g, fa);
        if (*ph) return run_phase_diagram(g, pa);
        if (*cb) return run_check_bounds(g, ba);
        if (*ft) return run_fit(g, fi);
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 1;
    }
    return 2;
}
