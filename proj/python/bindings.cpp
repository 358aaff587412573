// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "condqpt/criticality.hpp"
#include "condqpt/error.hpp"
#include "condqpt/fermion.hpp"
#include "condqpt/grover.hpp"
#include "condqpt/partition.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace condqpt;

namespace {

criticality::FermionMethod fermion_method(const std::string& m) {
    if (m == "minors") return criticality::FermionMethod::minors;
    if (m == "enumeration") return criticality::FermionMethod::enumeration;
    throw ValidationError("method must be 'minors' or 'enumeration', got '" + m + "'");
}

fermion::FermionParams fermion_params(int N, int Np, std::optional<int> Ni, double g, double temperature,
                                      double eta) {
    if (!(temperature > 0.0)) throw ValidationError("temperature must be > 0");
    fermion::FermionParams p;
    p.N = N;
    p.Np = Np;
    p.Ni = Ni.value_or(Np);
    p.g = g;
    p.eta = eta;
    p.beta = eta / temperature;
    p.half_filling = N == 2 * Np && p.Ni == Np;
    return p;
}

py::dict fit_dict(const criticality::FitResult& f) {
    py::dict d;
    d["model"] = criticality::to_string(f.model);
    d["a"] = f.a;
    d["b"] = f.b;
    d["c"] = f.c;
    d["chi2"] = f.chi2;
    d["verdict"] = criticality::to_string(f.verdict);
    d["reason"] = f.reason;
    return d;
}

py::dict crossing_dict(const criticality::CrossingRecord& r) {
    py::dict d;
    d["size"] = r.size;
    d["control"] = r.control;
    d["temperature"] = r.temperature;
    d["lo"] = r.lo;
    d["hi"] = r.hi;
    d["tolerance"] = r.tolerance;
    d["monotone"] = r.monotone;
    return d;
}

std::vector<criticality::CrossingRecord> records(const std::vector<double>& sizes,
                                                 const std::vector<double>& controls) {
    if (sizes.size() != controls.size()) throw ValidationError("sizes and controls differ in length");
    std::vector<criticality::CrossingRecord> out(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        out[i].size = sizes[i];
        out[i].control = controls[i];
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Finite-temperature condensation in the Grover model and 1D free fermions";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def("grover_critical_surface", &grover::critical_surface, py::arg("gamma"), py::arg("temperature"),
          "J_c(Gamma, T) = T log(2 cosh(Gamma / T)).");
    m.def("grover_critical_gamma", &grover::critical_gamma, py::arg("J"), py::arg("temperature"));
    m.def("grover_critical_temperature", &grover::critical_temperature, py::arg("J"), py::arg("gamma"));
    m.def(
        "grover_pcond",
        [](int N, double gamma, double J, double temperature, const std::string& method) {
            if (!(temperature >= 0.0)) throw ValidationError("temperature must be >= 0");
            const double beta = temperature == 0.0 ? grover::kInfiniteBeta : 1.0 / temperature;
            const grover::GroverParams p{N, gamma, J, beta};
            if (method == "sector") return grover::pcond(p);
            if (method == "dense") return grover::pcond_dense_oracle(p);
            throw ValidationError("method must be 'sector' or 'dense', got '" + method + "'");
        },
        py::arg("N"), py::arg("gamma"), py::arg("J") = 1.0, py::arg("temperature"), py::arg("method") = "sector");
    m.def(
        "grover_free_energies",
        [](int N, double gamma, double J, double temperature) {
            const grover::GroverParams p{N, gamma, J, 1.0 / temperature};
            return std::make_pair(grover::f_cond_exact(p), grover::f_norm_exact(p));
        },
        py::arg("N"), py::arg("gamma"), py::arg("J") = 1.0, py::arg("temperature"),
        "(F_cond, F_norm) in closed form.");
    m.def(
        "grover_phase_diagram",
        [](double gamma, const std::vector<double>& temperatures) {
            return criticality::grover_phase_diagram(gamma, temperatures).to_json();
        },
        py::arg("gamma"), py::arg("temperatures"), "Phase diagram as a JSON string.");
    m.def(
        "grover_crossing", [](int N, double temperature) { return crossing_dict(criticality::grover_crossing(N, temperature)); },
        py::arg("N"), py::arg("temperature"));

    m.def(
        "fermion_spectrum",
        [](int N, int Np, std::optional<int> Ni, double g, double eta) {
            return fermion::single_particle_spectrum(fermion_params(N, Np, Ni, g, 1.0, eta)).values;
        },
        py::arg("N"), py::arg("Np"), py::arg("Ni") = py::none(), py::arg("g"), py::arg("eta") = 1.0);
    m.def(
        "fermion_pcond",
        [](int N, int Np, std::optional<int> Ni, double g, double temperature, double eta, const std::string& method,
           bool long_run, unsigned workers) {
            const auto p = fermion_params(N, Np, Ni, g, temperature, eta);
            if (fermion_method(method) == criticality::FermionMethod::minors) return fermion::pcond_minors(p).p_cond;
            fermion::EnumerationOptions o;
            o.long_run = long_run;
            o.workers = workers;
            return fermion::pcond_enumerated(p, o).p_cond;
        },
        py::arg("N"), py::arg("Np"), py::arg("Ni") = py::none(), py::arg("g"), py::arg("temperature"),
        py::arg("eta") = 1.0, py::arg("method") = "minors", py::arg("long_run") = false, py::arg("workers") = 1u);
    m.def("canonical_log_z", [](const std::vector<double>& eps, int Np, double beta) {
        return fermion::canonical_log_z(eps, Np, beta);
    }, py::arg("eps"), py::arg("Np"), py::arg("beta"));
    m.def(
        "fermion_crossing",
        [](int Np, double temperature, const std::string& method, double g_lo, double g_hi) {
            criticality::FermionScan s;
            s.method = fermion_method(method);
            s.g_lo = g_lo;
            s.g_hi = g_hi;
            return crossing_dict(criticality::fermion_crossing(Np, temperature, s));
        },
        py::arg("Np"), py::arg("temperature"), py::arg("method") = "minors", py::arg("g_lo") = 0.0,
        py::arg("g_hi") = 20.0);

    m.def(
        "fit_crossings",
        [](const std::vector<double>& sizes, const std::vector<double>& controls, const std::string& model) {
            return fit_dict(criticality::fit_crossings(records(sizes, controls), criticality::parse_fit_model(model)));
        },
        py::arg("sizes"), py::arg("controls"), py::arg("model") = "inverse-poly");
    m.def(
        "extrapolate_critical",
        [](const std::vector<double>& sizes, const std::vector<double>& controls) {
            const auto ex = criticality::extrapolate_critical(records(sizes, controls));
            py::dict d;
            d["critical"] = ex.critical();
            d["inverse_poly"] = fit_dict(ex.inverse_poly);
            d["log_loglog"] = fit_dict(ex.log_loglog);
            return d;
        },
        py::arg("sizes"), py::arg("controls"));

    m.def(
        "check_bounds_random",
        [](std::uint64_t seed, std::size_t max_m) {
            const auto r = partition::random_instance(seed, max_m);
            return partition::check_bounds(r.ops, r.part, r.beta).to_json();
        },
        py::arg("seed"), py::arg("max_m") = 40, "Bound report for a seeded random instance, as a JSON string.");
    m.def(
        "check_bounds_grover",
        [](int N, double gamma, double J, double beta) {
            return partition::check_bounds(grover::operator_pair(N, gamma, J), grover::marked_partition(N), beta)
                .to_json();
        },
        py::arg("N"), py::arg("gamma"), py::arg("J") = 1.0, py::arg("beta"));
}
