#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "freqloc/core_spectral.hpp"
#include "freqloc/error.hpp"
#include "freqloc/numerics.hpp"
#include "freqloc/special_functions.hpp"

namespace freqloc {

enum class Sign { Plus, Minus };

inline double sign_value(Sign s) { return s == Sign::Plus ? 1.0 : -1.0; }

// Taylor coefficients at omega = 0 of the selected component of one parity
// class, valid on omega > 0: h(omega) = sum a_n omega^n.
struct CoeffTable {
    Parity parity = Parity::Even;
    Sign sign = Sign::Plus;
    std::vector<cplx> a;
    std::vector<cplx> c0;  // c0[n] = (1/n!) d^n/dk^n phi0_hat(0)
    std::vector<cplx> c1;
    double energy = 0.0;
    double support_radius = 1.0;
};

struct CoeffBound {
    double simple = 0.0;
    double refined = 0.0;
    double omega1 = 0.0;
};

struct UniformSamples {
    double x0 = 0.0;
    double x1 = 1.0;
    std::vector<double> values;
    double spacing() const { return (x1 - x0) / double(values.size() - 1); }
    double x(std::size_t i) const { return x0 + spacing() * double(i); }
};

struct LegendreExtraction {
    double coefficient = 0.0;
    double bound = 0.0;
    double normaliser = 0.0;
};

namespace detail {

// Moments m_n = (1/n!) int (-i x)^n f(x) dx for n = 0..nmax, together with a
// Richardson error estimate against the 2h subgrid and the scale
// (1/n!) int |x|^n |f| dx.
struct Moments {
    std::vector<cplx> m;
    std::vector<double> err;
    std::vector<double> scale;
};

inline Moments moments(const SampledField& f, int nmax) {
    const std::size_t n = f.size();
    std::vector<double> w = simpson_weights(n, f.spacing);
    std::size_t n2 = (n - 1) / 2 + 1;  // every other node; the dropped end is zero
    std::vector<double> w2 = simpson_weights(n2, 2.0 * f.spacing);
    Moments out;
    out.m.assign(nmax + 1, cplx{});
    out.err.assign(nmax + 1, 0.0);
    out.scale.assign(nmax + 1, 0.0);
    std::vector<CompensatedSum<cplx>> s(nmax + 1), s2(nmax + 1);
    std::vector<CompensatedSum<double>> sc(nmax + 1);
    const cplx mi(0.0, -1.0);
    for (std::size_t i = 0; i < n; ++i) {
        cplx v = f.values[i];
        if (v == cplx{}) continue;
        double x = f.x(i);
        cplx p = v;
        double pa = std::abs(v);
        bool coarse = (i % 2 == 0) && (i / 2 < n2);
        for (int k = 0; k <= nmax; ++k) {
            s[k].add(w[i] * p);
            if (coarse) s2[k].add(w2[i / 2] * p);
            sc[k].add(w[i] * pa);
            p *= mi * x / double(k + 1);
            pa *= std::abs(x) / double(k + 1);
        }
    }
    for (int k = 0; k <= nmax; ++k) {
        out.m[k] = s[k].value();
        out.err[k] = std::abs(s[k].value() - s2[k].value()) / 15.0;
        out.scale[k] = sc[k].value();
    }
    return out;
}

}  // namespace detail

// Taylor table of the parity-projected data. Bounded by sqrt(E)/n! per order.
inline CoeffTable moment_coefficients(const CauchyData& data, int n_max, Parity parity, Sign sign) {
    if (n_max < 0 || n_max > 40) throw ValidationError("n_max must lie in [0, 40]");
    if (parity == Parity::None) throw UsageError("moment coefficients need an even or odd parity class");
    validate(data);
    CauchyData p = project_parity(data, parity);
    CoeffTable t;
    t.parity = parity;
    t.sign = sign;
    t.energy = physical_energy(p);
    auto m0 = detail::moments(p.phi0, n_max);
    auto m1 = detail::moments(p.phi1, n_max);
    auto f0 = detail::moments(data.phi0, n_max);
    auto f1 = detail::moments(data.phi1, n_max);
    for (int k = 0; k <= n_max; ++k) {
        // scale of the unprojected data: a parity class that vanishes up to
        // rounding must not be judged against its own noise
        double sc = std::max(f0.scale[k] + f1.scale[k], 1e-300);
        if (m0.err[k] > 1e-12 * sc || m1.err[k] > 1e-12 * sc) {
            throw ResolutionError("grid does not resolve the moment of order " + std::to_string(k));
        }
    }
    int want = (parity == Parity::Even) ? 0 : 1;
    t.c0.assign(n_max + 1, cplx{});
    t.c1.assign(n_max + 1, cplx{});
    for (int k = 0; k <= n_max; ++k) {
        if (k % 2 != want) continue;
        t.c0[k] = m0.m[k];
        t.c1[k] = m1.m[k];
    }
    const cplx half_i(0.0, 0.5 * sign_value(sign));
    t.a.assign(n_max + 1, cplx{});
    for (int n = 0; n <= n_max; ++n) {
        cplx v = half_i * t.c1[n];
        if (n >= 1) v += 0.5 * t.c0[n - 1];
        t.a[n] = v;
    }
    if (parity == Parity::Odd) t.a[0] = cplx{};
    t.support_radius = data.support_radius;
    // sqrt(E)/n! holds for support in the unit ball; radius r rescales it to
    // r^(n+1/2) sqrt(E)/n!.
    double se = std::sqrt(t.energy), lr = std::log(t.support_radius);
    for (int n = 0; n <= n_max; ++n) {
        double cap = se * std::exp((n + 0.5) * lr - std::lgamma(n + 1.0)) + 1e-10;
        if (std::abs(t.a[n]) > cap)
            throw ResolutionError("Taylor coefficient of order " + std::to_string(n) + " exceeds r^(n+1/2) sqrt(E)/n!");
    }
    return t;
}

// The same table for the data rescaled to unit support radius, x -> x / r,
// with the energy and epsilon unchanged: a_n -> a_n / r^(n+1/2).
inline CoeffTable to_unit_support(const CoeffTable& t) {
    CoeffTable u = t;
    const double r = t.support_radius;
    for (std::size_t n = 0; n < t.a.size(); ++n) {
        double s = std::pow(r, -(double(n) + 0.5));
        u.a[n] *= s;
        u.c1[n] *= s;
        u.c0[n] *= std::pow(r, -(double(n) + 1.5));
    }
    u.support_radius = 1.0;
    return u;
}

inline CoeffBound coeff_bounds(int n, double eps, double energy) {
    if (n < 0) throw ValidationError("order must be non-negative");
    if (!(eps > 0.0)) throw DomainError("epsilon must be positive");
    if (!(eps <= 1.0)) throw ValidationError("epsilon must not exceed 1");
    if (!(energy >= 0.0)) throw ValidationError("energy must be non-negative");
    CoeffBound b;
    double lf = std::lgamma(n + 1.0);
    double se = std::sqrt(energy);
    b.simple = se * std::exp(-lf);
    double p = 2.0 / (2.0 * n + 3.0);
    double epow = eps > 0.0 ? std::pow(eps, p) : 0.0;
    b.refined = 6.0 / std::sqrt(2.0 * n + 1.0) * std::exp(n * std::log(4.0) - lf) * epow * se;
    if (eps > 0.0) {
        double lw = (2.0 * std::log(eps) + 2.0 * std::lgamma(n + 2.0) + std::log(2.0 * n + 3.0)) / (2.0 * n + 3.0);
        b.omega1 = std::exp(lw);
    }
    return b;
}

// Highest coefficient of a degree-<=N polynomial from its samples on
// [0, omega1] by projection onto the shifted P_N. Romberg quadrature on the
// 2^m + 1 samples is exact for degree 2N when m >= N.
inline LegendreExtraction legendre_extract_highest(const UniformSamples& s, int N) {
    if (N < 0 || N > 30) throw ValidationError("degree must lie in [0, 30]");
    if (!(s.x0 == 0.0) || !(s.x1 > 0.0)) throw ValidationError("samples must cover [0, omega1] with omega1 > 0");
    const std::size_t n = s.values.size();
    std::size_t intervals = n - 1;
    int m = 0;
    while ((std::size_t(1) << m) < intervals) ++m;
    if (n < 3 || (std::size_t(1) << m) != intervals) throw ValidationError("need 2^m + 1 samples");
    if (m < N) throw ResolutionError("need at least 2^N + 1 samples for an exact projection");
    // Extended precision: c_N ~ w1^(N+1) (N!)^2 / (2N+1)! is small, so both
    // integrals cancel heavily and double precision loses ~1e-9 at N = 10.
    using ld = long double;
    const ld w1l = s.x1, hl = ld(s.x1) / ld(intervals);
    const double w1 = s.x1;
    std::vector<ld> fp(n), fc(n), f2(n);
    for (std::size_t i = 0; i < n; ++i) {
        ld w = hl * ld(i);
        ld t = std::clamp(ld(2) * w / w1l - ld(1), ld(-1), ld(1));
        ld pn = detail::legendre_recurrence<ld>(N, t);
        fp[i] = ld(s.values[i]) * pn;
        fc[i] = std::pow(w, N) * pn;
        f2[i] = ld(s.values[i]) * ld(s.values[i]);
    }
    LegendreExtraction out;
    ld cn = romberg_samples(fc, hl);
    out.normaliser = double(cn);
    if (std::abs(out.normaliser) < 1e-300) throw DegenerateBoundError("Legendre normaliser vanishes");
    out.coefficient = double(romberg_samples(fp, hl) / cn);
    double l2 = std::sqrt(std::max(0.0, double(romberg_samples(f2, hl))));
    out.bound = std::pow(w1, -0.5) * std::pow(4.0 / w1, N) * l2;
    if (std::abs(out.coefficient) > out.bound * (1.0 + 1e-9) + 1e-300)
        throw AccuracyError("extracted coefficient exceeds its L2 bound");
    return out;
}

// L2([0, omega1]) norm of sum_{n > N} a_n omega^n, with the orders beyond the
// table bounded by sqrt(E)/n!.
inline double remainder_norm(const CoeffTable& t, int N, double omega1, int nodes = 2049) {
    const int nmax = int(t.a.size()) - 1;
    std::vector<double> f(nodes);
    double h = omega1 / double(nodes - 1);
    for (int i = 0; i < nodes; ++i) {
        double w = h * i;
        cplx s{};
        double p = std::pow(w, N + 1);
        for (int n = N + 1; n <= nmax; ++n) {
            s += t.a[n] * p;
            p *= w;
        }
        f[i] = std::norm(s);
    }
    double body = std::sqrt(std::max(0.0, simpson(f, h)));
    CompensatedSum<double> tail;
    for (int n = std::max(nmax + 1, N + 1); n < nmax + 400; ++n) {
        double v = std::exp(n * std::log(std::max(omega1, 1e-300)) - std::lgamma(n + 1.0));
        tail.add(v);
        if (v < 1e-30 * (tail.value() + 1e-300) && n > omega1) break;
    }
    return body + std::sqrt(t.energy) * std::sqrt(omega1) * tail.value();
}

}  // namespace freqloc
