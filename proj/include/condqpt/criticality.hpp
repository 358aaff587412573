// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file criticality.hpp
 * @brief Half-crossings of p_cond, finite-size extrapolation, phase diagrams.
 */

#pragma once

#include "condqpt/fermion.hpp"
#include "condqpt/tolerances.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace condqpt::criticality {

struct CrossingRecord {
    double size = 0.0;          ///< N (Grover) or Np (fermion)
    double control = 0.0;       ///< Gamma/J or g/eta where p_cond = 1/2
    double temperature = 0.0;
    double lo = 0.0;            ///< final bracket
    double hi = 0.0;
    double tolerance = 0.0;     ///< achieved bracket width
    bool monotone = true;       ///< coarse grid was monotone
};

struct CrossingOptions {
    double lo = 0.0;
    double hi = 1.0;
    int coarse_points = 64;
    double rel_tol = 1e-4;      ///< stop when hi - lo <= rel_tol * |crossing|
    double abs_tol = 0.0;       ///< or when hi - lo <= abs_tol
    double size = 0.0;
    double temperature = 0.0;
};

/// Scans the coarse grid for the first sign change of p - 1/2 and bisects it.
/// Throws NumericalError carrying the scanned interval and extremal p when
/// no crossing exists.
CrossingRecord find_half_crossing(const std::function<double(double)>& curve, const CrossingOptions& opts);

enum class FitModel { inverse_poly, log_loglog };
enum class Verdict { accepted, rejected, ambiguous };

std::string to_string(FitModel m);
std::string to_string(Verdict v);
FitModel parse_fit_model(const std::string& s);

struct FitResult {
    FitModel model = FitModel::inverse_poly;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double chi2 = 0.0;
    Verdict verdict = Verdict::accepted;
    std::string reason;   ///< machine-readable code when not accepted

    /// a + b f1(x) + c f2(x) for this model's basis.
    double evaluate(double size) const;
};

/// Unweighted fit of one model to the crossing records.
FitResult fit_crossings(const std::vector<CrossingRecord>& records, FitModel model,
                        const Tolerances& tol = default_tolerances());

struct Extrapolation {
    FitResult inverse_poly;   ///< critical value = a
    FitResult log_loglog;
    double critical() const noexcept { return inverse_poly.a; }
};

/// Fits both models. log-loglog with b < 0 is rejected ("negative_log_slope")
/// and inverse-poly accepted; otherwise both are flagged ambiguous.
Extrapolation extrapolate_critical(const std::vector<CrossingRecord>& records,
                                   const Tolerances& tol = default_tolerances());

struct PhasePoint {
    double temperature = 0.0;
    double critical = 0.0;
    std::string source;                  ///< "closed-form" or "fit"
    std::optional<Extrapolation> fit;
    std::vector<CrossingRecord> crossings;
};

struct PhaseDiagram {
    std::string model;                   ///< "grover" or "fermion"
    std::string control;                 ///< "J/Gamma" or "g/eta"
    std::string condensed_side;          ///< where the condensed phase lies
    std::vector<PhasePoint> points;
    double high_t_slope = 0.0;           ///< dT/d(control) at the hottest pair
    double low_t_slope = 0.0;            ///< dT/d(control) at the coldest pair

    void validate() const;
    std::string to_csv() const;
    std::string to_json() const;
};

/// Grover J_c(T) at fixed Gamma from the closed form.
PhaseDiagram grover_phase_diagram(double gamma, const std::vector<double>& temperatures);

enum class FermionMethod { minors, enumeration };

struct FermionScan {
    std::vector<int> sizes{4, 6, 8, 10, 12};   ///< Np = Ni = N/2
    double eta = 1.0;
    double g_lo = 0.0;
    double g_hi = 20.0;
    FermionMethod method = FermionMethod::minors;
    fermion::EnumerationOptions enumeration;
    unsigned workers = 1;
};

/// Half-crossing of p_cond(g) for one (Np, T).
CrossingRecord fermion_crossing(int Np, double temperature, const FermionScan& scan,
                                const Tolerances& tol = default_tolerances());

/// Grover half-crossing in Gamma/J at fixed k_B T / J (J = 1).
CrossingRecord grover_crossing(int N, double temperature, double gamma_lo = 1e-3, double gamma_hi = 4.0,
                               const Tolerances& tol = default_tolerances());

/// Crossings per size, fit, and extrapolated g_c per temperature.
PhaseDiagram fermion_phase_diagram(const std::vector<double>& temperatures, const FermionScan& scan,
                                   const Tolerances& tol = default_tolerances());

}  // namespace condqpt::criticality
