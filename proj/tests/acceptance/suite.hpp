#pragma once

// Acceptance criteria. Each criterion returns PASS/FAIL with a one-line
// detail; the runner prints one line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "freqloc/bound_evaluators.hpp"
#include "freqloc/core_spectral.hpp"
#include "freqloc/goursat_kg.hpp"
#include "freqloc/harness.hpp"
#include "freqloc/special_functions.hpp"
#include "freqloc/spherical_modes.hpp"
#include "freqloc/taylor_legendre.hpp"
#include "support/oracles.hpp"

namespace freqloc::acceptance {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;  // 0 means no runtime limit
    std::function<Outcome()> run;
};

struct Result {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
};

inline std::string sci(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", v);
    return b;
}

// ---------- shared suite data ----------

inline std::vector<BumpSpec> random_bumps(int count = 20, unsigned seed = 20240611u) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> center(-1.0, 1.0), width(0.3, 1.0), zeta(0.0, 40.0), amp(0.5, 2.0);
    std::vector<BumpSpec> out;
    for (int i = 0; i < count; ++i) {
        BumpSpec b;
        b.center = center(rng);
        b.width = width(rng);
        b.zeta = zeta(rng);
        b.amplitude = amp(rng);
        out.push_back(b);
    }
    return out;
}

// Split on a k grid with spacing 0.2, widened until the tail check passes.
inline SpectrumSplit suite_split(const CauchyData& d, double zeta) {
    double k_max = zeta + 160.0;
    for (int attempt = 0; attempt < 6; ++attempt) {
        std::size_t count = std::max<std::size_t>(257, std::size_t(std::ceil(2.0 * k_max / 0.2)) | 1u);
        try {
            return transform_spectrum(d, k_max, count);
        } catch (const TruncationError& e) {
            k_max = e.suggested_k_max;
        }
    }
    throw TruncationError("suite split not resolved", k_max);
}

struct SuiteDatum {
    std::string label;
    CauchyData data;
    double zeta = 0.0;
};

// Random bumps followed by the shift-scenario data. The moment tables need
// n = 16384: at 4096 the narrowest modulated bumps miss the 1e-12 Richardson
// check already at low orders.
inline std::vector<SuiteDatum> suite_data(std::size_t n = 4096) {
    std::vector<SuiteDatum> out;
    int i = 0;
    for (const auto& b : random_bumps()) out.push_back({"bump" + std::to_string(i++), build_cauchy_data(b, GridSpec{4.0, n}), b.zeta});
    for (double z : {8.0, 16.0, 32.0, 48.0, 64.0}) {
        BumpSpec b;
        b.zeta = z;
        out.push_back({"shift" + std::to_string(int(z)), build_cauchy_data(b, GridSpec{4.0, n}), z});
    }
    return out;
}

inline AngularMode shell_scenario_mode(int l, bool outgoing = true) {
    ShellSpec s;
    s.zeta = 16.0;
    s.outgoing = outgoing;
    return radial_spectrum(shell_mode(l, 0, s), 100.0, 2001);
}

// ---------- criteria ----------

inline Outcome energy_consistency() {
    double worst_plancherel = 0, worst_parity = 0, worst_eps = 0;
    for (const auto& b : random_bumps()) {
        CauchyData d = build_cauchy_data(b, GridSpec{});
        SpectrumSplit s = suite_split(d, b.zeta);
        SpectrumSplit se = suite_split(project_parity(d, Parity::Even), b.zeta);
        SpectrumSplit so = suite_split(project_parity(d, Parity::Odd), b.zeta);
        double E = s.energy_total;
        worst_plancherel = std::max(worst_plancherel, std::abs(E - s.energy_plus - s.energy_minus) / E);
        worst_parity = std::max({worst_parity, std::abs(s.energy_plus - se.energy_plus - so.energy_plus) / E,
                                 std::abs(s.energy_minus - se.energy_minus - so.energy_minus) / E,
                                 std::abs(E - se.energy_total - so.energy_total) / E});
        worst_eps = std::max(worst_eps, std::abs(s.epsilon * s.epsilon * E - s.energy_minus) / E);
    }
    bool ok = worst_plancherel <= 1e-8 && worst_parity <= 1e-8 && worst_eps <= 1e-8;
    return {ok, "plancherel " + sci(worst_plancherel) + ", parity " + sci(worst_parity) + ", eps^2 E " +
                    sci(worst_eps) + " (limit 1e-8)"};
}

inline std::vector<double> goursat_a_grid() { return linspace(-2.0, 0.5, 20); }
inline std::vector<double> goursat_b_grid() { return linspace(0.2, 8.0, 20); }

inline Outcome goursat_three_routes() {
    double series_bessel = 0, contour = 0, resid = 0, gmax = 0;
    const double h = 1e-3;
    auto g = [](double a, double b) { return goursat_eval(a, b, GoursatMethod::Series, G0Variant::Full); };
    for (double a : goursat_a_grid())
        for (double b : goursat_b_grid()) {
            double s = g(a, b);
            double q = goursat_eval(a, b, GoursatMethod::BesselIntegral, G0Variant::Full);
            series_bessel = std::max(series_bessel, std::abs(s - q) / std::abs(q));
            for (G0Variant v : {G0Variant::One, G0Variant::Two}) {
                double qb = goursat_eval(a, b, GoursatMethod::BesselIntegral, v);
                double qc = goursat_eval(a, b, GoursatMethod::Contour, v);
                contour = std::max(contour, std::abs(qc - qb) / std::abs(qb));
            }
            double gab = (g(a + h, b + h) - g(a + h, b - h) - g(a - h, b + h) + g(a - h, b - h)) / (4.0 * h * h);
            resid = std::max(resid, std::abs(gab + s));
            gmax = std::max(gmax, std::abs(s));
        }
    bool ok = series_bessel <= 1e-6 && contour <= 1e-4 && resid <= 1e-4 * gmax;
    return {ok, "series/bessel " + sci(series_bessel) + " (1e-6), contour/bessel " + sci(contour) +
                    " (1e-4), PDE residual " + sci(resid / gmax) + " of max|g| (1e-4)"};
}

inline Outcome convolution_identity() {
    double worst = 0;
    for (double a : goursat_a_grid())
        for (double b : goursat_b_grid())
            for (G0Variant v : {G0Variant::One, G0Variant::Two}) {
                double s = goursat_eval(a, b, GoursatMethod::Series, v);
                double q = goursat_eval(a, b, GoursatMethod::BesselIntegral, v);
                worst = std::max(worst, std::abs(s - q) / std::abs(q));
            }
    return {worst <= 1e-6, "coefficients 1/n! and 1/(n!(2n+1)): max relative gap " + sci(worst) + " (1e-6)"};
}

inline Outcome legendre_machinery() {
    std::mt19937_64 rng(777u);
    std::uniform_int_distribution<int> deg(0, 10);
    std::uniform_real_distribution<double> coef(-1.0, 1.0), w1d(0.5, 3.0);
    double worst = 0;
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        int N = deg(rng);
        double w1 = w1d(rng);
        std::vector<double> b(N + 1);
        double bmax = 0;
        for (auto& x : b) {
            x = coef(rng);
            bmax = std::max(bmax, std::abs(x));
        }
        // P(w) = sum_j b_j (w / w1)^j on 2^m + 1 samples
        int m = std::max(N, 4);
        UniformSamples s;
        s.x0 = 0.0;
        s.x1 = w1;
        s.values.resize((std::size_t(1) << m) + 1);
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            double u = s.x(i) / w1, p = 0;
            for (int j = N; j >= 0; --j) p = p * u + b[j];
            s.values[i] = p;
        }
        double aN = b[N] / std::pow(w1, N);
        LegendreExtraction ex = legendre_extract_highest(s, N);
        worst = std::max(worst, std::abs(ex.coefficient - aN) * std::pow(w1, N) / bmax);
        // exact L2 norm from the coefficients
        double n2 = 0;
        for (int i = 0; i <= N; ++i)
            for (int j = 0; j <= N; ++j) n2 += b[i] * b[j] / (i + j + 1.0);
        double bound = std::pow(w1, -0.5) * std::pow(4.0 / w1, N) * std::sqrt(w1 * n2);
        // N = 0 is the equality case, so allow rounding in the comparison
        if (std::abs(aN) > bound * (1.0 + 1e-12)) ++violations;
        if (std::abs(ex.coefficient) > ex.bound + 1e-9) ++violations;
    }
    bool ok = worst <= 1e-9 && violations == 0;
    return {ok, "max scaled recovery error " + sci(worst) + " (1e-9), inequality violations " +
                    std::to_string(violations)};
}

inline RunReport shift_report(double c) {
    ScenarioConfig cfg;
    cfg.zeta_list = {8.0, 16.0, 32.0, 64.0};
    cfg.c_refined = c;
    return run_scenario(cfg);
}

inline Outcome bound_certification() {
    RunReport rep = shift_report(kDefaultRefinedC);
    double c = calibrate_c({rep});
    ScenarioConfig held;
    held.zeta_list = {48.0};
    held.c_refined = kDefaultRefinedC;
    RunReport hr = run_scenario(held);
    std::size_t rows = rep.rows.size() + hr.rows.size();
    std::size_t viol[4] = {0, 0, 0, 0};
    for (const auto* r : {&rep, &hr})
        for (const auto& row : r->rows)
            for (int t = 0; t < 4; ++t)
                if (row.violation_flags[t] == '1') ++viol[t];
    bool pinned = std::abs(c - kDefaultRefinedC) <= 1e-12 * c;
    bool ok = viol[0] + viol[1] + viol[2] + viol[3] == 0 && rep.summary.epsilon_monotone && pinned;
    std::string eps;
    for (double e : rep.epsilon) eps += sci(e) + " ";
    return {ok, "calibrated c " + sci(c) + (pinned ? " (matches pinned)" : " (DIFFERS from pinned " + sci(kDefaultRefinedC) + ")") +
                    ", violations const/simple/improved/refined " + std::to_string(viol[0]) + "/" +
                    std::to_string(viol[1]) + "/" + std::to_string(viol[2]) + "/" + std::to_string(viol[3]) +
                    " over " + std::to_string(rows) + " rows, held-out refined ratio " +
                    sci(hr.summary.max_ratio_refined) + ", eps(zeta) " + eps};
}

inline Outcome coefficient_bounds() {
    int checks = 0, violations = 0;
    double worst_simple = 0, worst_refined = 0, worst_rem = 0;
    for (const auto& sd : suite_data(16384)) {
        for (Parity par : {Parity::Even, Parity::Odd}) {
            CauchyData p = project_parity(sd.data, par);
            SpectrumSplit sp = suite_split(p, sd.zeta);
            const double eps = sp.epsilon, E = sp.energy_total;
            for (Sign sg : {Sign::Plus, Sign::Minus}) {
                CoeffTable t = to_unit_support(moment_coefficients(sd.data, 40, par, sg));
                for (int n = 0; n <= 10; ++n) {
                    CoeffBound cb = coeff_bounds(n, eps, E);
                    double an = std::abs(t.a[n]);
                    ++checks;
                    worst_simple = std::max(worst_simple, an / cb.simple);
                    if (an > cb.simple) ++violations;
                    if (sg == Sign::Minus) {
                        worst_refined = std::max(worst_refined, an / cb.refined);
                        if (an > cb.refined) ++violations;
                    }
                    double rem = remainder_norm(t, n, cb.omega1);
                    worst_rem = std::max(worst_rem, rem / (4.0 * eps * std::sqrt(E)));
                    if (rem > 4.0 * eps * std::sqrt(E)) ++violations;
                }
            }
        }
    }
    return {violations == 0, std::to_string(checks) + " coefficient checks, violations " + std::to_string(violations) +
                                 "; max ratios simple " + sci(worst_simple) + ", refined " + sci(worst_refined) +
                                 ", remainder " + sci(worst_rem)};
}

inline Outcome saddle_analytics() {
    std::mt19937_64 rng(4242u);
    std::uniform_real_distribution<double> L(0.0, 20.0), K(0.0, 30.0);
    int v_dk = 0, v_dl = 0, v_conv = 0, v_tan = 0, v_case = 0, v_lam = 0, v_int = 0;
    double worst_dk = 0, worst_dl = 0;
    const double step = 1e-4;
    for (int i = 0; i < 200; ++i) {
        double lam = L(rng), k = 0.5 + K(rng);
        SaddleState s = h_eval(lam, k);
        double dk = (h_eval(lam, k + step).h - h_eval(lam, k - step).h) / (2.0 * step);
        double ek = std::abs(dk - s.im_y0);
        worst_dk = std::max(worst_dk, ek);
        if (ek > 1e-6 * std::max(1.0, s.im_y0)) ++v_dk;
        double ls = std::max(lam, 1.0) * step;
        double lo = std::max(0.0, lam - ls), hi = lam + ls;
        double dl = (h_eval(hi, k).h - h_eval(lo, k).h) / (hi - lo);
        double expect = -std::exp(s.im_y0 * s.im_y0);
        double el = std::abs(dl - expect) / std::max(1.0, std::abs(expect));
        worst_dl = std::max(worst_dl, el);
        if (el > 1e-6) ++v_dl;
        double c2 = h_eval(lam + 0.1, k).h - 2.0 * h_eval(lam + 0.05, k).h + s.h;
        if (!(c2 > 0.0)) ++v_conv;
        CaseTag c = classify_case(lam, s.im_y0);
        if (c != CaseTag::B2 || k * k / (8.0 * lam * lam) >= std::exp(2.0) / 2.0) {
            if (s.im_y0 < case_lower_bound(c, lam, k) * (1.0 - 1e-12)) ++v_case;
        }
        if (c == CaseTag::B2) {
            double x = k * k / (8.0 * lam * lam);
            if (s.im_y0 * s.im_y0 < 0.5 * lambert_w0(x) * (1.0 - 1e-12)) ++v_case;
        }
    }
    for (int i = 0; i < 50; ++i) {
        double lam = L(rng);
        for (int j = 0; j < 50; ++j) {
            double k1 = K(rng), k2 = K(rng);
            if (k1 < k2) std::swap(k1, k2);
            if (k1 == k2) continue;
            SaddleState a = h_eval(lam, k1), b = h_eval(lam, k2);
            if (a.h < b.h + b.im_y0 * (k1 - k2) - 1e-10 * std::max(1.0, std::abs(a.h))) ++v_tan;
        }
    }
    for (double x = std::exp(2.0) / 2.0; x < 1e12; x *= 1.3) {
        double w = lambert_w0(x), lx = std::log(x);
        if (w < lx - std::log(lx) - 1e-12 * lx || w > lx + 1e-12 * lx) ++v_lam;
    }
    for (int C = 0; C <= 50; ++C)
        if (intest_lhs_scaled(C) > intest_rhs_scaled(C)) ++v_int;
    int total = v_dk + v_dl + v_conv + v_tan + v_case + v_lam + v_int;
    return {total == 0, "violations dh/dk " + std::to_string(v_dk) + ", dh/dlambda " + std::to_string(v_dl) +
                            ", convexity " + std::to_string(v_conv) + ", tangent " + std::to_string(v_tan) +
                            ", case bounds " + std::to_string(v_case) + ", Lambert bracket " + std::to_string(v_lam) +
                            ", integral estimate " + std::to_string(v_int) + "; max FD errors " + sci(worst_dk) + ", " +
                            sci(worst_dl)};
}

inline Outcome special_functions_vs_oracles() {
    double z = bisect([](double x) { return bessel_j0(x); }, 2.0, 3.0, 1e-15);
    double ez = std::abs(z - 2.404825557695773);
    double werfi = 0;
    for (double nu = 0.0; nu <= 30.0; nu += 0.25)
        werfi = std::max(werfi, std::abs(erfi_scaled(nu) - oracle::erfi_scaled_quad(nu)));
    double wl = 0;
    for (double x = -1.0 / std::exp(1.0); x < 1e6; x = x < 0 ? x + 0.01 : (x < 1 ? x + 0.05 : x * 1.2)) {
        double w = lambert_w0(x);
        wl = std::max(wl, std::abs(w * std::exp(w) - x) / std::max(1.0, std::abs(x)));
    }
    double wo = 0;
    for (int n = 0; n <= 12; ++n)
        for (int m = 0; m <= 12; ++m) {
            double v = oracle::romberg([&](double x) { return legendre_p(n, x) * legendre_p(m, x); }, -1.0, 1.0, 12);
            double expect = n == m ? 2.0 / (2.0 * n + 1.0) : 0.0;
            wo = std::max(wo, std::abs(v - expect));
        }
    bool ok = ez <= 1e-9 && werfi <= 1e-8 && wl <= 1e-12 && wo <= 1e-8;
    return {ok, "J0 zero error " + sci(ez) + " (1e-9), erfi_scaled " + sci(werfi) + " (1e-8), Lambert residual " +
                    sci(wl) + " (1e-12), Legendre orthogonality " + sci(wo) + " (1e-8)"};
}

// sigma -> infinity limit of the tapered transform from sigma = 50, 100, 200.
inline double j0_sign_extrapolated(double p) {
    double I1 = j0_sign_fourier_tapered(p, 50.0).imag();
    double I2 = j0_sign_fourier_tapered(p, 100.0).imag();
    double I3 = j0_sign_fourier_tapered(p, 200.0).imag();
    double R1 = (4.0 * I2 - I1) / 3.0, R2 = (4.0 * I3 - I2) / 3.0;
    return (16.0 * R2 - R1) / 15.0;
}

inline Outcome j0_sign_identity() {
    double worst = 0;
    for (double p : {1.5, 2.0, 3.0, 5.0}) {
        double num = j0_sign_extrapolated(p);
        worst = std::max(worst, std::abs(num - j0_sign_fourier(p).imag()));
    }
    return {worst <= 1e-3, "max |numerical - closed form| " + sci(worst) + " at p in {1.5, 2, 3, 5} (1e-3)"};
}

inline Outcome three_plus_one() {
    double wd = 0;
    for (int l = 0; l <= 100; ++l) wd = std::max(wd, std::abs(d_l_const(l) - oracle::d_l_log(l)) / oracle::d_l_log(l));
    AggregateConstant C = aggregate_constant();
    bool cauchy = C.tail_bound < 1e-10;
    {
        double prev = 0, s = 0;
        for (int l = 0; l <= C.terms; ++l) {
            s += (2.0 * l + 1.0) * std::pow(d_l_const(l), (4.0 * l + 6.0) / (2.0 * l + 5.0));
            if (!(s > prev)) cauchy = false;
            prev = s;
        }
        if (std::abs(s - C.value) > 1e-12 * s) cauchy = false;
    }
    AngularMode md = shell_scenario_mode(0);
    ModeTaylor t = mode_taylor(md, 4, Sign::Minus);
    int coeff_viol = 0;
    for (int n = 0; n <= 8; ++n)
        if (std::abs(t.a[n]) > coeff_bound_3d(0, n, md.epsilon, md.energy)) ++coeff_viol;
    const double r = md.support_radius;
    double ratio = 0;
    for (std::size_t j = 0; j < md.omega.size(); ++j) {
        double lhs = std::abs(md.h_plus[j] + md.h_minus[j]) + std::abs(md.h_plus[j] - md.h_minus[j]);
        double bound = mode_bound(r * md.omega[j], md.epsilon, 0, r * r * r * md.energy).value;
        ratio = std::max(ratio, lhs / bound);
    }
    double worst_slope = 0;
    for (int l = 0; l <= 2; ++l) {
        AngularMode m = shell_mode(l, 0, ShellSpec{0.5, 0.15, 0.35, 16.0, 1.0, true});
        std::vector<double> w{0.01, 0.02, 0.04}, y;
        for (double x : w) y.push_back(std::abs(mode_split_at(m, x).first));
        worst_slope = std::max(worst_slope, std::abs(oracle::loglog_slope(w, y) - l));
    }
    bool ok = wd <= 1e-10 && cauchy && coeff_viol == 0 && ratio <= 1.0 && worst_slope <= 0.05;
    return {ok, "d_l rel error " + sci(wd) + " (1e-10); C = " + sci(C.value) + " with tail " + sci(C.tail_bound) +
                    (cauchy ? "" : " NOT certified") + "; shell l=0 coefficient violations " +
                    std::to_string(coeff_viol) + "; mode-bound ratio with calibrated c " + sci(ratio) +
                    " (<= 1 required); slope error " + sci(worst_slope) + " (0.05)"};
}

inline Outcome hegerfeldt_sanity() {
    double worst = INFINITY;
    int data = 0, bad = 0, bands = 0, band_viol = 0;
    for (const auto& sd : suite_data()) {
        for (Parity par : {Parity::None, Parity::Even, Parity::Odd}) {
            SpectrumSplit s = suite_split(project_parity(sd.data, par), sd.zeta);
            if (!(s.energy_total > 0.0)) continue;
            ++data;
            double f = s.energy_minus / s.energy_total;
            worst = std::min(worst, f);
            if (f < 1e-12) ++bad;
            if (par != Parity::None) continue;
            for (double w1 : {0.01, 0.05, 0.1, 0.2, 0.25}) {
                for (double w0 : {0.0, 0.5 * w1}) {
                    BandCap bc = band_energy_cap(s, w0, w1);
                    if (!bc.available) continue;
                    ++bands;
                    if (bc.band_energy > bc.cap) ++band_viol;
                }
            }
        }
    }
    for (int l = 0; l <= 2; ++l) {
        AngularMode md = shell_scenario_mode(l);
        ++data;
        double f = md.energy_minus / md.energy;
        worst = std::min(worst, f);
        if (f < 1e-12) ++bad;
    }
    bool ok = bad == 0 && band_viol == 0 && bands > 0;
    return {ok, std::to_string(data) + " data, min E-/E " + sci(worst) + " (>= 1e-12), " + std::to_string(bands) +
                    " admissible bands, cap violations " + std::to_string(band_viol)};
}

inline const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list = {
        {1, "energy consistency", 5.0, energy_consistency},
        {2, "Goursat three-route agreement", 60.0, goursat_three_routes},
        {3, "convolution identity with modified coefficients", 0.0, convolution_identity},
        {4, "Legendre machinery", 10.0, legendre_machinery},
        {5, "bound certification", 120.0, bound_certification},
        {6, "coefficient bounds", 0.0, coefficient_bounds},
        {7, "saddle analytics", 0.0, saddle_analytics},
        {8, "special functions vs oracles", 0.0, special_functions_vs_oracles},
        {9, "J0-sign Fourier identity", 0.0, j0_sign_identity},
        {10, "3+1D modes", 0.0, three_plus_one},
        {11, "quantitative Hegerfeldt sanity", 0.0, hegerfeldt_sanity},
    };
    return list;
}

inline Result run_criterion(const Criterion& c) {
    Result r;
    r.id = c.id;
    r.name = c.name;
    auto t0 = std::chrono::steady_clock::now();
    try {
        Outcome o = c.run();
        r.pass = o.pass;
        r.detail = o.detail;
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_seconds > 0.0 && r.seconds > c.budget_seconds) {
        r.pass = false;
        r.detail += "; runtime over the " + sci(c.budget_seconds) + " s budget";
    }
    return r;
}

inline void print_result(std::ostream& os, const Result& r) {
    char t[32];
    std::snprintf(t, sizeof t, "%.2f", r.seconds);
    os << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << " (" << r.name << ", " << t << " s): " << r.detail
       << "\n";
}

// Runs the selected criteria (all when ids is empty); true if all pass.
inline bool run_all(std::ostream& os, const std::vector<int>& ids = {}) {
    bool all = true;
    for (const auto& c : criteria()) {
        if (!ids.empty() && std::find(ids.begin(), ids.end(), c.id) == ids.end()) continue;
        Result r = run_criterion(c);
        print_result(os, r);
        os.flush();
        all = all && r.pass;
    }
    return all;
}

}  // namespace freqloc::acceptance
