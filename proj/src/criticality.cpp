// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "condqpt/criticality.hpp"

#include "condqpt/error.hpp"
#include "condqpt/format.hpp"
#include "condqpt/grover.hpp"
#include "condqpt/linalg.hpp"
#include "condqpt/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace condqpt::criticality {

CrossingRecord find_half_crossing(const std::function<double(double)>& curve, const CrossingOptions& opts) {
    if (!(opts.hi > opts.lo)) throw ValidationError("find_half_crossing: empty scan interval");
    if (opts.coarse_points < 2) throw ValidationError("find_half_crossing: need at least 2 coarse points");
    if (!(opts.rel_tol > 0.0) && !(opts.abs_tol > 0.0))
        throw ValidationError("find_half_crossing: a positive tolerance is required");

    const int n = opts.coarse_points;
    std::vector<double> xs(n), ps(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = opts.lo + (opts.hi - opts.lo) * i / (n - 1);
        ps[i] = curve(xs[i]);
    }
    bool up = true, down = true;
    for (int i = 0; i + 1 < n; ++i) {
        up = up && ps[i + 1] >= ps[i];
        down = down && ps[i + 1] <= ps[i];
    }

    int bracket = -1;
    for (int i = 0; i + 1 < n; ++i) {
        const double a = ps[i] - 0.5, b = ps[i + 1] - 0.5;
        if (a == 0.0 || (a < 0.0) != (b < 0.0)) {
            bracket = i;
            break;
        }
    }
    if (bracket < 0) {
        const auto [mn, mx] = std::minmax_element(ps.begin(), ps.end());
        throw NumericalError("no p_cond = 1/2 crossing in [" + fmt17(opts.lo) + ", " + fmt17(opts.hi) +
                             "]; p_cond ranges over [" + fmt17(*mn) + ", " + fmt17(*mx) + "]");
    }

    CrossingRecord rec;
    rec.size = opts.size;
    rec.temperature = opts.temperature;
    rec.monotone = up || down;
    double lo = xs[bracket], hi = xs[bracket + 1];
    double f_lo = ps[bracket] - 0.5;
    if (f_lo == 0.0) {
        hi = lo;
    } else {
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double width = hi - lo;
            if ((opts.abs_tol > 0.0 && width <= opts.abs_tol) ||
                (opts.rel_tol > 0.0 && width <= opts.rel_tol * std::abs(mid)) || mid == lo || mid == hi)
                break;
            const double f_mid = curve(mid) - 0.5;
            if (f_mid == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((f_mid < 0.0) == (f_lo < 0.0)) {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
    }
    rec.lo = lo;
    rec.hi = hi;
    rec.control = 0.5 * (lo + hi);
    rec.tolerance = hi - lo;
    return rec;
}

std::string to_string(FitModel m) { return m == FitModel::inverse_poly ? "inverse-poly" : "log-loglog"; }

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::accepted: return "accepted";
        case Verdict::rejected: return "rejected";
        case Verdict::ambiguous: return "ambiguous";
    }
    return "unknown";
}

FitModel parse_fit_model(const std::string& s) {
    if (s == "inverse-poly") return FitModel::inverse_poly;
    if (s == "log-loglog") return FitModel::log_loglog;
    throw ValidationError("unknown fit model '" + s + "' (expected inverse-poly or log-loglog)");
}

namespace {

std::array<double, 3> basis(FitModel m, double x) {
    if (m == FitModel::inverse_poly) return {1.0, 1.0 / x, 1.0 / (x * x)};
    return {1.0, std::log(x), std::log(std::log(x))};
}

}  // namespace

double FitResult::evaluate(double size) const {
    const auto f = basis(model, size);
    return a * f[0] + b * f[1] + c * f[2];
}

FitResult fit_crossings(const std::vector<CrossingRecord>& records, FitModel model, const Tolerances& tol) {
    if (records.size() < 3) throw ValidationError("fit needs at least 3 crossing records");
    linalg::LeastSquaresProblem lsq;
    lsq.design = linalg::Matrix(records.size(), 3);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double x = records[i].size;
        if (!(x > 0.0)) throw ValidationError("fit: sizes must be positive");
        if (model == FitModel::log_loglog && !(x > 1.0))
            throw ValidationError("fit: log-loglog model needs sizes > 1");
        const auto f = basis(model, x);
        for (int j = 0; j < 3; ++j) lsq.design(i, j) = f[j];
        lsq.targets.push_back(records[i].control);
    }
    const auto fit = linalg::linear_fit(lsq, tol);
    FitResult r;
    r.model = model;
    r.a = fit.coefficients[0];
    r.b = fit.coefficients[1];
    r.c = fit.coefficients[2];
    r.chi2 = fit.chi2;
    return r;
}

Extrapolation extrapolate_critical(const std::vector<CrossingRecord>& records, const Tolerances& tol) {
    if (records.size() < 4)
        throw ValidationError("extrapolation needs at least 4 crossing records (got " + std::to_string(records.size()) +
                              ")");
    Extrapolation ex;
    ex.inverse_poly = fit_crossings(records, FitModel::inverse_poly, tol);
    ex.log_loglog = fit_crossings(records, FitModel::log_loglog, tol);
    if (ex.log_loglog.b < 0.0) {
        ex.inverse_poly.verdict = Verdict::accepted;
        ex.log_loglog.verdict = Verdict::rejected;
        ex.log_loglog.reason = "negative_log_slope";
    } else {
        ex.inverse_poly.verdict = Verdict::ambiguous;
        ex.inverse_poly.reason = "competing_model_admissible";
        ex.log_loglog.verdict = Verdict::ambiguous;
        ex.log_loglog.reason = "diverging_critical_value";
    }
    return ex;
}

// ---------------------------------------------------------------------------

void PhaseDiagram::validate() const {
    for (std::size_t i = 1; i < points.size(); ++i)
        if (!(points[i].temperature > points[i - 1].temperature))
            throw ValidationError("phase diagram temperatures must be strictly increasing");
    for (const auto& p : points)
        if (p.source == "fit" && !p.fit) throw ValidationError("phase diagram point lacks its fit");
}

std::string PhaseDiagram::to_csv() const {
    std::ostringstream os;
    os << "T,critical_value,fit_a,fit_b,fit_c,chi2,verdict\n";
    for (const auto& p : points) {
        os << fmt17(p.temperature) << ',' << fmt17(p.critical) << ',';
        if (p.fit) {
            const auto& f = p.fit->inverse_poly;
            os << fmt17(f.a) << ',' << fmt17(f.b) << ',' << fmt17(f.c) << ',' << fmt17(f.chi2) << ','
               << to_string(f.verdict) << '\n';
        } else {
            os << ",,,," << p.source << '\n';
        }
    }
    return os.str();
}

namespace {

nlohmann::json fit_json(const FitResult& f) {
    return {{"model", to_string(f.model)}, {"a", f.a},       {"b", f.b},
            {"c", f.c},                    {"chi2", f.chi2}, {"verdict", to_string(f.verdict)},
            {"reason", f.reason}};
}

}  // namespace

std::string PhaseDiagram::to_json() const {
    nlohmann::json j;
    j["model"] = model;
    j["control"] = control;
    j["condensed_side"] = condensed_side;
    j["high_t_slope"] = high_t_slope;
    j["low_t_slope"] = low_t_slope;
    auto& pts = j["points"] = nlohmann::json::array();
    for (const auto& p : points) {
        nlohmann::json e{{"T", p.temperature}, {"critical_value", p.critical}, {"source", p.source}};
        if (p.fit) e["fits"] = {fit_json(p.fit->inverse_poly), fit_json(p.fit->log_loglog)};
        auto& cr = e["crossings"] = nlohmann::json::array();
        for (const auto& c : p.crossings)
            cr.push_back({{"size", c.size},
                          {"control", c.control},
                          {"lo", c.lo},
                          {"hi", c.hi},
                          {"tolerance", c.tolerance},
                          {"monotone", c.monotone}});
        pts.push_back(std::move(e));
    }
    return j.dump(2);
}

namespace {

void slopes(PhaseDiagram& d) {
    const auto& p = d.points;
    if (p.size() < 2) return;
    auto slope = [](const PhasePoint& a, const PhasePoint& b) {
        return (b.temperature - a.temperature) / (b.critical - a.critical);
    };
    d.low_t_slope = slope(p[0], p[1]);
    d.high_t_slope = slope(p[p.size() - 2], p[p.size() - 1]);
}

}  // namespace

PhaseDiagram grover_phase_diagram(double gamma, const std::vector<double>& temperatures) {
    PhaseDiagram d;
    d.model = "grover";
    d.control = "J/Gamma";
    d.condensed_side = "J > J_c";
    for (double t : temperatures) {
        PhasePoint p;
        p.temperature = t;
        p.critical = grover::critical_surface(gamma, t);
        p.source = "closed-form";
        d.points.push_back(std::move(p));
    }
    d.validate();
    slopes(d);
    return d;
}

CrossingRecord fermion_crossing(int Np, double temperature, const FermionScan& scan, const Tolerances& tol) {
    if (!(temperature > 0.0)) throw ValidationError("fermion crossing: temperature must be > 0");
    const double beta = 1.0 / (temperature * scan.eta);
    auto curve = [&](double g_over_eta) {
        auto p = fermion::FermionParams::half_filled(Np, g_over_eta * scan.eta, beta, scan.eta);
        if (scan.method == FermionMethod::minors) return fermion::pcond_minors(p, tol).p_cond;
        return fermion::pcond_enumerated(p, scan.enumeration, tol).p_cond;
    };
    CrossingOptions o;
    o.lo = scan.g_lo;
    o.hi = scan.g_hi;
    o.coarse_points = tol.coarse_points;
    o.rel_tol = tol.crossing_rel;
    o.size = Np;
    o.temperature = temperature;
    return find_half_crossing(curve, o);
}

CrossingRecord grover_crossing(int N, double temperature, double gamma_lo, double gamma_hi, const Tolerances& tol) {
    if (!(temperature > 0.0)) throw ValidationError("grover crossing: temperature must be > 0");
    auto curve = [&](double gamma) { return grover::pcond({N, gamma, 1.0, 1.0 / temperature}, tol); };
    CrossingOptions o;
    o.lo = gamma_lo;
    o.hi = gamma_hi;
    o.coarse_points = tol.coarse_points;
    o.rel_tol = 0.0;
    o.abs_tol = tol.grover_crossing;
    o.size = N;
    o.temperature = temperature;
    return find_half_crossing(curve, o);
}

PhaseDiagram fermion_phase_diagram(const std::vector<double>& temperatures, const FermionScan& scan,
                                   const Tolerances& tol) {
    PhaseDiagram d;
    d.model = "fermion";
    d.control = "g/eta";
    d.condensed_side = "g > g_c";
    const std::size_t nt = temperatures.size(), ns = scan.sizes.size();
    std::vector<CrossingRecord> all(nt * ns);
    parallel_for(nt * ns, scan.workers, [&](std::size_t k) {
        all[k] = fermion_crossing(scan.sizes[k % ns], temperatures[k / ns], scan, tol);
    });
    for (std::size_t t = 0; t < nt; ++t) {
        PhasePoint p;
        p.temperature = temperatures[t];
        p.crossings.assign(all.begin() + t * ns, all.begin() + (t + 1) * ns);
        p.fit = extrapolate_critical(p.crossings, tol);
        p.critical = p.fit->critical();
        p.source = "fit";
        d.points.push_back(std::move(p));
    }
    d.validate();
    slopes(d);
    return d;
}

}  // namespace condqpt::criticality
