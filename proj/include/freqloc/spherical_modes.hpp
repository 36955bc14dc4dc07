#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "freqloc/bound_evaluators.hpp"
#include "freqloc/core_spectral.hpp"
#include "freqloc/error.hpp"
#include "freqloc/numerics.hpp"
#include "freqloc/special_functions.hpp"
#include "freqloc/taylor_legendre.hpp"

namespace freqloc {

// One (l, m) component with orthonormal spherical harmonics. Radial samples
// live on r_i = i * r_max / (n - 1).
struct AngularMode {
    int l = 0;
    int m = 0;
    double r_max = 1.0;
    std::vector<cplx> radial0;
    std::vector<cplx> radial0_dr;
    std::vector<cplx> radial1;
    double support_radius = 1.0;

    std::vector<double> omega;
    std::vector<cplx> h_plus;
    std::vector<cplx> h_minus;
    double energy = 0.0;
    double energy_plus = 0.0;
    double energy_minus = 0.0;
    double epsilon = 0.0;

    double spacing() const { return r_max / double(radial0.size() - 1); }
    double r(std::size_t i) const { return spacing() * double(i); }
};

// 4 pi / sqrt(6 (2l+1)) * l! / (2l-1)!!, by the ratio recurrence
// d_l / d_{l-1} = l / sqrt((2l-1)(2l+1)).
inline double d_l_const(int l) {
    if (l < 0 || l > 500) throw ValidationError("d_l needs 0 <= l <= 500");
    double d = 4.0 * kPi / std::sqrt(6.0);
    for (int j = 1; j <= l; ++j) d *= j / std::sqrt((2.0 * j - 1.0) * (2.0 * j + 1.0));
    return d;
}

inline double d_l_prefactor(int l) {
    double d = d_l_const(l);
    return std::max(d, std::pow(d, (2.0 * l + 3.0) / (2.0 * l + 5.0)));
}

struct ShellSpec {
    double r0 = 0.5;
    double sigma = 0.15;
    double width = 0.35;
    double zeta = 0.0;
    double amplitude = 1.0;
    bool outgoing = false;  // phi1 = -(1/r) d/dr (r phi0) instead of 0
};

// Gaussian-tapered shell profile in a single mode.
inline AngularMode shell_mode(int l, int m, const ShellSpec& s, double r_max = 1.0, std::size_t n = 2049) {
    if (l < 0 || std::abs(m) > l) throw ValidationError("mode needs l >= 0 and |m| <= l");
    if (!(s.width > 0.0) || !(s.sigma > 0.0)) throw ValidationError("shell needs positive width and sigma");
    if (s.r0 - s.width <= 0.0 || s.r0 + s.width >= r_max) throw DomainError("shell support leaves (0, r_max)");
    if (n < 16) throw ValidationError("radial grid needs at least 16 samples");
    AngularMode md;
    md.l = l;
    md.m = m;
    md.r_max = r_max;
    md.radial0.assign(n, cplx{});
    md.radial0_dr.assign(n, cplx{});
    md.radial1.assign(n, cplx{});
    md.support_radius = s.r0 + s.width;
    const cplx I(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        double r = md.r(i);
        double u = (r - s.r0) / s.width;
        if (std::abs(u) >= 1.0) continue;
        double q = u * u - 1.0;
        double bump = std::exp(1.0 / q);
        double dbump = bump * (-1.0 / (q * q)) * (2.0 * u / s.width);
        double g = std::exp(-(r - s.r0) * (r - s.r0) / (2.0 * s.sigma * s.sigma));
        double dg = -g * (r - s.r0) / (s.sigma * s.sigma);
        cplx ph = std::exp(I * (s.zeta * r));
        cplx f = s.amplitude * g * bump * ph;
        cplx df = s.amplitude * ((dg * bump + g * dbump) + I * s.zeta * g * bump) * ph;
        md.radial0[i] = f;
        md.radial0_dr[i] = df;
        if (s.outgoing) md.radial1[i] = -(df + f / r);
    }
    return md;
}

// Orthonormal spherical harmonic with the Condon-Shortley phase.
inline cplx spherical_harmonic(int l, int m, double theta, double phi) {
    if (l < 0 || std::abs(m) > l) throw ValidationError("harmonic needs |m| <= l");
    int am = std::abs(m);
    double x = std::cos(theta);
    double sx = std::sqrt(std::max(0.0, 1.0 - x * x));
    double pmm = 1.0;
    for (int i = 1; i <= am; ++i) pmm *= -(2.0 * i - 1.0) * sx;
    double plm = pmm;
    if (l > am) {
        double p1 = x * (2.0 * am + 1.0) * pmm;
        double p0 = pmm;
        plm = p1;
        for (int ll = am + 2; ll <= l; ++ll) {
            double p2 = ((2.0 * ll - 1.0) * x * p1 - (ll + am - 1.0) * p0) / (ll - am);
            p0 = p1;
            p1 = p2;
            plm = p2;
        }
    }
    double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) *
                            std::exp(std::lgamma(l - am + 1.0) - std::lgamma(l + am + 1.0)));
    cplx y = norm * plm * std::exp(cplx(0.0, am * phi));
    if (m < 0) y = ((am % 2) ? -1.0 : 1.0) * std::conj(y);
    return y;
}

using ScalarField3 = std::function<cplx(double r, double theta, double phi)>;

// Radial coefficient functions <Y_lm, f(r, .)> on the sphere of radius r.
inline AngularMode project_mode(const ScalarField3& f0, const ScalarField3& f0_dr, const ScalarField3& f1, int l, int m,
                                double r_max, std::size_t n, double support_radius, int n_theta = 48,
                                int n_phi = 64) {
    if (l < 0 || std::abs(m) > l) throw ValidationError("mode needs l >= 0 and |m| <= l");
    AngularMode md;
    md.l = l;
    md.m = m;
    md.r_max = r_max;
    md.support_radius = support_radius;
    md.radial0.assign(n, cplx{});
    md.radial0_dr.assign(n, cplx{});
    md.radial1.assign(n, cplx{});
    const GaussRule& g = gauss_legendre(n_theta);
    std::vector<double> th(n_theta);
    for (int i = 0; i < n_theta; ++i) th[i] = std::acos(g.nodes[i]);
    std::vector<cplx> ybar(std::size_t(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i)
        for (int j = 0; j < n_phi; ++j)
            ybar[i * n_phi + j] = std::conj(spherical_harmonic(l, m, th[i], 2.0 * kPi * j / n_phi)) * g.weights[i] *
                                  (2.0 * kPi / n_phi);
    for (std::size_t k = 0; k < n; ++k) {
        double r = md.r(k);
        if (r >= support_radius) continue;
        CompensatedSum<cplx> a0, a0r, a1;
        for (int i = 0; i < n_theta; ++i)
            for (int j = 0; j < n_phi; ++j) {
                double ph = 2.0 * kPi * j / n_phi;
                cplx w = ybar[i * n_phi + j];
                a0.add(w * f0(r, th[i], ph));
                a0r.add(w * f0_dr(r, th[i], ph));
                a1.add(w * f1(r, th[i], ph));
            }
        md.radial0[k] = a0.value();
        md.radial0_dr[k] = a0r.value();
        md.radial1[k] = a1.value();
    }
    return md;
}

// 1/2 int (|phi1|^2 + |phi0'|^2 + l(l+1) |phi0|^2 / r^2) r^2 dr
inline double mode_physical_energy(const AngularMode& md) {
    std::vector<double> f(md.radial0.size());
    double ll = md.l * (md.l + 1.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        double r = md.r(i);
        f[i] = 0.5 * ((std::norm(md.radial1[i]) + std::norm(md.radial0_dr[i])) * r * r + ll * std::norm(md.radial0[i]));
    }
    return simpson(f, md.spacing());
}

// phi_hat^{lm}_a(omega) = 4 pi (-i)^l int j_l(omega r) phi_a(r) r^2 dr, a = 0, 1
inline std::pair<cplx, cplx> mode_transform_at(const AngularMode& md, double omega) {
    std::vector<double> w = simpson_weights(md.radial0.size(), md.spacing());
    CompensatedSum<cplx> s0, s1;
    for (std::size_t i = 0; i < md.radial0.size(); ++i) {
        if (md.radial0[i] == cplx{} && md.radial1[i] == cplx{}) continue;
        double r = md.r(i);
        double j = spherical_bessel_j(md.l, omega * r) * r * r * w[i];
        s0.add(j * md.radial0[i]);
        s1.add(j * md.radial1[i]);
    }
    cplx ph = std::pow(cplx(0.0, -1.0), md.l) * (4.0 * kPi);
    return {ph * s0.value(), ph * s1.value()};
}

inline std::pair<cplx, cplx> mode_split_at(const AngularMode& md, double omega) {
    auto [f0, f1] = mode_transform_at(md, omega);
    const cplx I(0.0, 1.0);
    return {0.5 * (omega * f0 + I * f1), 0.5 * (omega * f0 - I * f1)};
}

// Spectrum and energies on a uniform grid omega_j = j * omega_max / (count-1).
inline AngularMode radial_spectrum(const AngularMode& in, double omega_max, std::size_t count) {
    AngularMode md = in;
    if (md.radial0.size() < 16 || md.radial1.size() != md.radial0.size() || md.radial0_dr.size() != md.radial0.size())
        throw ValidationError("radial data must share one grid of at least 16 samples");
    if (md.radial0.back() != cplx{} || md.radial1.back() != cplx{})
        throw ValidationError("radial data must vanish at r_max");
    if (count < 64 || !(omega_max > 0.0)) throw ValidationError("omega grid needs >= 64 points and omega_max > 0");
    double dw = omega_max / double(count - 1);
    if (dw >= kPi / std::max(md.support_radius, 1e-300)) throw ResolutionError("omega grid does not resolve the support");
    if (omega_max * md.spacing() > 0.5) throw ResolutionError("radial grid does not resolve omega_max");
    md.omega = linspace(0.0, omega_max, count);
    md.h_plus.assign(count, cplx{});
    md.h_minus.assign(count, cplx{});
    std::vector<double> dp(count), dm(count);
    for (std::size_t j = 0; j < count; ++j) {
        auto [hp, hm] = mode_split_at(md, md.omega[j]);
        md.h_plus[j] = hp;
        md.h_minus[j] = hm;
        double w2 = md.omega[j] * md.omega[j];
        dp[j] = std::norm(hp) * w2;
        dm[j] = std::norm(hm) * w2;
    }
    const double norm = 1.0 / (8.0 * kPi * kPi * kPi);
    md.energy_plus = simpson(dp, dw) * norm;
    md.energy_minus = simpson(dm, dw) * norm;
    md.energy = mode_physical_energy(md);
    md.epsilon = md.energy > 0.0 ? std::sqrt(std::clamp(md.energy_minus / md.energy, 0.0, 1.0)) : 0.0;
    return md;
}

// Taylor data of the mode transform: phi_hat_a(omega) = sum_p c_{a,p} omega^{l+2p}.
struct ModeTaylor {
    std::vector<cplx> c0;
    std::vector<cplx> c1;
    std::vector<cplx> a;  // a[n] for n = 0..l+2 p_max+1, zero below l
};

inline ModeTaylor mode_taylor(const AngularMode& md, int p_max, Sign sign) {
    if (p_max < 0 || p_max > 40) throw ValidationError("p_max must lie in [0, 40]");
    const int l = md.l;
    std::vector<double> w = simpson_weights(md.radial0.size(), md.spacing());
    ModeTaylor t;
    t.c0.assign(p_max + 1, cplx{});
    t.c1.assign(p_max + 1, cplx{});
    cplx ph = std::pow(cplx(0.0, -1.0), l) * (4.0 * kPi);
    for (int p = 0; p <= p_max; ++p) {
        // (-1)^p / (2^p p! (2l+2p+1)!!)
        double lc = -(p * std::log(2.0) + std::lgamma(p + 1.0) + log_double_factorial(2 * l + 2 * p + 1));
        double c = ((p % 2) ? -1.0 : 1.0) * std::exp(lc);
        CompensatedSum<cplx> s0, s1;
        for (std::size_t i = 0; i < md.radial0.size(); ++i) {
            double r = md.r(i);
            double rp = std::pow(r, l + 2 * p + 2) * w[i];
            s0.add(rp * md.radial0[i]);
            s1.add(rp * md.radial1[i]);
        }
        t.c0[p] = ph * c * s0.value();
        t.c1[p] = ph * c * s1.value();
    }
    t.a.assign(l + 2 * p_max + 2, cplx{});
    const cplx half_i(0.0, 0.5 * sign_value(sign));
    for (int p = 0; p <= p_max; ++p) {
        t.a[l + 2 * p] = half_i * t.c1[p];
        t.a[l + 2 * p + 1] = 0.5 * t.c0[p];
    }
    return t;
}

// Right-hand sides of the two moment bounds for c_p in a mode.
inline std::pair<double, double> mode_moment_bounds(int l, int p, double l2_norm, double grad_norm) {
    double base = std::sqrt(4.0 * kPi / (2.0 * l + 1.0)) *
                  std::exp(std::lgamma(l + 1.0) - log_double_factorial(2 * l - 1)) * std::sqrt(4.0 * kPi / 3.0);
    return {base / std::exp(std::lgamma(l + 2.0 * p + 1.0)) * l2_norm,
            base / std::exp(std::lgamma(l + 2.0 * p + 2.0)) * grad_norm};
}

inline double mode_l2_norm(const std::vector<cplx>& f, const AngularMode& md) {
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = std::norm(f[i]) * md.r(i) * md.r(i);
    return std::sqrt(std::max(0.0, simpson(v, md.spacing())));
}

inline double mode_grad_norm(const AngularMode& md) {
    std::vector<double> v(md.radial0.size());
    double ll = md.l * (md.l + 1.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        double r = md.r(i);
        v[i] = std::norm(md.radial0_dr[i]) * r * r + ll * std::norm(md.radial0[i]);
    }
    return std::sqrt(std::max(0.0, simpson(v, md.spacing())));
}

inline double coeff_bound_3d(int l, int n, double eps, double energy) {
    if (l < 0) throw ValidationError("l must be non-negative");
    if (n < l) throw UsageError("coefficient order below the angular momentum");
    if (!(eps > 0.0 && eps <= 1.0)) throw ValidationError("epsilon must lie in (0, 1]");
    if (!(energy >= 0.0)) throw ValidationError("energy must be non-negative");
    double lf = std::lgamma(n + 1.0);
    return 25.0 * d_l_prefactor(l) * std::exp(n * std::log(4.0) - lf) / std::sqrt(2.0 * n + 1.0) *
           std::pow(eps, 2.0 / (2.0 * n + 5.0)) * std::sqrt(energy);
}

// omega_1 for the weighted remainder estimate of a mode.
inline double mode_omega1(int l, int N, double eps) {
    if (!(eps > 0.0)) return 0.0;
    double d = d_l_const(l);
    double lw = (2.0 * std::log(eps) - 2.0 * std::log(d) + 2.0 * std::lgamma(N + 2.0) + std::log(2.0 * N + 5.0)) /
                (2.0 * N + 5.0);
    return std::exp(lw);
}

// L2([0, omega1], omega^2 d omega) norm of sum_{n > N} a_n omega^n, with
// orders beyond the table bounded by d_l sqrt(E) / n!.
inline double mode_remainder_norm(const ModeTaylor& t, int l, int N, double omega1, double energy,
                                  int nodes = 2049) {
    const int nmax = int(t.a.size()) - 1;
    std::vector<double> f(nodes);
    double h = omega1 / double(nodes - 1);
    for (int i = 0; i < nodes; ++i) {
        double w = h * i;
        cplx s{};
        for (int n = N + 1; n <= nmax; ++n) s += t.a[n] * std::pow(w, n);
        f[i] = std::norm(s) * w * w;
    }
    double body = std::sqrt(std::max(0.0, simpson(f, h)));
    CompensatedSum<double> tail;
    for (int n = std::max(nmax + 1, N + 1); n < nmax + 400; ++n) {
        double v = std::exp(n * std::log(std::max(omega1, 1e-300)) - std::lgamma(n + 1.0));
        tail.add(v);
        if (v < 1e-30 * (tail.value() + 1e-300) && n > omega1) break;
    }
    double wnorm = std::sqrt(omega1 * omega1 * omega1 / 3.0);
    return body + d_l_const(l) * std::sqrt(energy) * wnorm * tail.value();
}

enum class GlMode { Exact, UpperViaG };

inline double g_l_series(double omega, double eps, int l, GlMode mode) {
    if (l < 0) throw ValidationError("l must be non-negative");
    if (mode == GlMode::UpperViaG) return g_series(omega, std::pow(eps, (2.0 * l + 3.0) / (2.0 * l + 5.0)));
    if (!(omega >= 0.0 && omega <= 50.0)) throw ValidationError("g_l needs 0 <= omega <= 50");
    if (!(eps > 0.0 && eps <= 1.0)) throw ValidationError("g_l needs 0 < eps <= 1");
    if (omega == 0.0) return 0.0;
    double le = std::log(eps), l4w = std::log(4.0 * omega);
    CompensatedSum<double> s;
    for (int n = l; n < l + 5000; ++n) {
        double lt = (n + 1.5) * l4w + 2.0 / (2.0 * n + 5.0) * le - std::lgamma(n + 1.0) - 0.5 * std::log(2.0 * n + 1.0);
        double t = std::exp(lt);
        s.add(t);
        if (n > 4.0 * omega && t < 1e-16 * s.value()) break;
    }
    return s.value();
}

// (4 omega)^{-3/2} g_0(omega, eps), finite at omega = 0.
inline double g0_mode_scaled(double omega, double eps) {
    double le = std::log(eps);
    double l4w = omega > 0.0 ? std::log(4.0 * omega) : 0.0;
    CompensatedSum<double> s;
    for (int n = 0; n < 5000; ++n) {
        double lt = (n > 0 ? n * l4w : 0.0) + 2.0 / (2.0 * n + 5.0) * le - std::lgamma(n + 1.0) -
                    0.5 * std::log(2.0 * n + 1.0);
        double t = std::exp(lt);
        s.add(t);
        if (omega == 0.0) break;
        if (n > 4.0 * omega && t < 1e-16 * s.value()) break;
    }
    return s.value();
}

inline BoundValue mode_bound(double omega, double eps, int l, double energy, const BoundConfig& cfg = {}) {
    if (!(omega >= 0.0 && omega <= 100.0)) throw ValidationError("omega must lie in [0, 100]");
    if (!(eps > 0.0)) throw ValidationError("epsilon must be positive");
    if (eps >= 1.0) throw DegenerateBoundError("mode bound is undefined at eps = 1");
    if (l < 0) throw ValidationError("l must be non-negative");
    if (!(energy >= 0.0)) throw ValidationError("energy must be non-negative");
    BoundValue b;
    b.omega = omega;
    b.eps = eps;
    b.tier = Tier::Refined;
    double rescale = (2.0 * l + 3.0) / (2.0 * l + 5.0);
    double k = 2.0 * std::sqrt(rescale * std::abs(std::log(eps)));
    double lambda = 4.0 * omega;
    double y = detail::saddle_root(lambda, k, std::max(1.0, k / 3.0));
    b.im_y0 = y;
    b.nu = lambda * std::exp(y * y);
    b.case_tag = classify_case(lambda, y);
    b.value = cfg.c_refined * d_l_prefactor(l) * std::exp(-detail::h_value(lambda, y)) *
              std::sqrt(erfi_scaled(b.nu)) * std::sqrt(energy);
    if (!std::isfinite(b.value)) throw RangeError("mode bound overflows");
    return b;
}

struct AggregateConstant {
    double value = 0.0;       // partial sum
    int terms = 0;            // last l included
    double tail_bound = 0.0;  // certified bound on the omitted terms
};

// C = sum_l (2l+1) d_l^{(4l+6)/(2l+5)}. Tail certificate from
// d_l <= (4 pi^{3/2} / sqrt 12) 2^{-l}, a consequence of the lower bound
// (2l)!/(l!)^2 >= 4^l / sqrt(pi (l + 1/2)).
inline AggregateConstant aggregate_constant() {
    AggregateConstant c;
    CompensatedSum<double> s;
    int l = 0;
    for (;; ++l) {
        double d = d_l_const(l);
        double t = (2.0 * l + 1.0) * std::pow(d, (4.0 * l + 6.0) / (2.0 * l + 5.0));
        s.add(t);
        if (l >= 4 && t < 1e-10) break;
    }
    c.value = s.value();
    c.terms = l;
    const int L = l;
    const double B = 4.0 * std::pow(kPi, 1.5) / std::sqrt(12.0);
    const double pL = (4.0 * L + 6.0) / (2.0 * L + 5.0);
    // for l > L: d_l < 1 and p_l >= p_L, so d_l^{p_l} <= (B 2^{-l})^{p_L}
    const double x = std::pow(2.0, -pL);
    const double tsum = std::pow(x, L + 1) * ((2.0 * L + 3.0) - (2.0 * L + 1.0) * x) / ((1.0 - x) * (1.0 - x));
    c.tail_bound = std::pow(B, pL) * tsum;
    return c;
}

// Sphere-integrated bound 625 d_0^{10/3} C E (4 omega)^{-3} g_0(omega, eps)^2.
inline double aggregate_bound(double omega, double eps, double energy) {
    if (!(omega >= 0.0 && omega <= 50.0)) throw ValidationError("omega must lie in [0, 50]");
    if (!(eps > 0.0 && eps <= 1.0)) throw ValidationError("epsilon must lie in (0, 1]");
    if (!(energy >= 0.0)) throw ValidationError("energy must be non-negative");
    static const AggregateConstant C = aggregate_constant();
    double g = g0_mode_scaled(omega, eps);
    return 625.0 * std::pow(d_l_const(0), 10.0 / 3.0) * (C.value + C.tail_bound) * energy * g * g;
}

}  // namespace freqloc
