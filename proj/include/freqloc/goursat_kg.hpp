#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "freqloc/bound_evaluators.hpp"
#include "freqloc/error.hpp"
#include "freqloc/numerics.hpp"
#include "freqloc/special_functions.hpp"

namespace freqloc {

// Characteristic data variants: full uses 1/(n! sqrt(2n+1)), one 1/n!,
// two 1/(n! (2n+1)).
enum class G0Variant { Full, One, Two };
enum class GoursatMethod { Series, BesselIntegral, Contour };
enum class KernelKind { Retarded, Advanced, Causal };

inline const char* to_string(G0Variant v) {
    switch (v) {
        case G0Variant::Full: return "full";
        case G0Variant::One: return "one";
        case G0Variant::Two: return "two";
    }
    return "?";
}

inline G0Variant parse_variant(const std::string& s) {
    if (s == "full") return G0Variant::Full;
    if (s == "one") return G0Variant::One;
    if (s == "two") return G0Variant::Two;
    throw ValidationError("unknown variant '" + s + "'");
}

inline const char* to_string(GoursatMethod m) {
    switch (m) {
        case GoursatMethod::Series: return "series";
        case GoursatMethod::BesselIntegral: return "bessel_integral";
        case GoursatMethod::Contour: return "contour";
    }
    return "?";
}

inline GoursatMethod parse_method(const std::string& s) {
    if (s == "series") return GoursatMethod::Series;
    if (s == "bessel_integral" || s == "bessel") return GoursatMethod::BesselIntegral;
    if (s == "contour") return GoursatMethod::Contour;
    throw ValidationError("unknown method '" + s + "'");
}

namespace detail {

inline double log_coeff(G0Variant v, int n) {
    double lf = std::lgamma(n + 1.0);
    switch (v) {
        case G0Variant::Full: return -lf - 0.5 * std::log(2.0 * n + 1.0);
        case G0Variant::One: return -lf;
        case G0Variant::Two: return -lf - std::log(2.0 * n + 1.0);
    }
    return 0.0;
}

// int_0^1 f(s) ds with the 32-node Gauss rule.
template <class F>
double gauss32_unit(F&& f) {
    return gauss_integrate(f, 0.0, 1.0, 32, 1);
}

// sum_n c_n (2n+3)^p exp((2n+3) a - b/(2n+3)), p in {0, 1}
inline double goursat_series_sum(double a, double b, G0Variant v, int p) {
    CompensatedSum<double> s;
    double lam = std::exp(2.0 * a);
    for (int n = 0; n < 2000; ++n) {
        double m = 2.0 * n + 3.0;
        double lt = log_coeff(v, n) + m * a - b / m + (p ? std::log(m) : 0.0);
        double t = std::exp(lt);
        s.add(t);
        if (n > lam + 5.0 && t < 1e-17 * s.value()) break;
    }
    return s.value();
}

}  // namespace detail

inline double g0_eval(double a, G0Variant v) {
    if (!std::isfinite(a)) throw ValidationError("g0 needs finite a");
    if (!(a <= 3.0)) throw RangeError("g0 overflow guard: a must not exceed 3");
    switch (v) {
        case G0Variant::Full: return detail::goursat_series_sum(a, 0.0, v, 0);
        case G0Variant::One: return std::exp(3.0 * a + std::exp(2.0 * a));
        case G0Variant::Two: {
            double lam = std::exp(2.0 * a);
            return std::exp(3.0 * a) * detail::gauss32_unit([&](double s) { return std::exp(s * s * lam); });
        }
    }
    return 0.0;
}

// d/da g0(a).
inline double g0_derivative(double a, G0Variant v) {
    if (!std::isfinite(a)) throw ValidationError("g0 needs finite a");
    if (!(a <= 3.0)) throw RangeError("g0 overflow guard: a must not exceed 3");
    switch (v) {
        case G0Variant::Full: return detail::goursat_series_sum(a, 0.0, v, 1);
        case G0Variant::One: {
            double lam = std::exp(2.0 * a);
            return std::exp(3.0 * a + lam) * (3.0 + 2.0 * lam);
        }
        case G0Variant::Two: {
            double lam = std::exp(2.0 * a);
            return std::exp(3.0 * a) *
                   detail::gauss32_unit([&](double s) { return (3.0 + 2.0 * s * s * lam) * std::exp(s * s * lam); });
        }
    }
    return 0.0;
}

namespace detail {

// int_0^60 J0(2 sqrt(u b)) g0'(a - u) du, with panels cut at the zeros of the
// Bessel factor and adaptive Simpson inside each panel.
inline double goursat_bessel(double a, double b, G0Variant v) {
    std::vector<double> edges{0.0};
    const double umax = 60.0;
    if (b > 0.0) {
        for (int m = 1;; ++m) {
            double j = kPi * (m - 0.25);
            double u = j * j / (4.0 * b);
            if (u >= umax) break;
            while (u - edges.back() > 0.5) edges.push_back(edges.back() + 0.5);
            edges.push_back(u);
        }
    }
    while (umax - edges.back() > 0.5) edges.push_back(edges.back() + 0.5);
    edges.push_back(umax);
    double scale = std::abs(g0_derivative(a, v));
    auto f = [&](double u) { return bessel_j0(2.0 * std::sqrt(u * b)) * g0_derivative(a - u, v); };
    CompensatedSum<double> s;
    double tol = 1e-15 * scale;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double lo = edges[i], hi = edges[i + 1];
        // below this the panel cannot matter at double precision
        if (std::exp(3.0 * (a - lo)) * 10.0 < 1e-22 * scale && lo > 1.0) break;
        s.add(adaptive_simpson(f, lo, hi, tol, 30));
    }
    return s.value();
}

struct ContourGrid {
    std::vector<double> y;   // nodes on [0, 8]
    std::vector<double> wy;  // trapezoid weights on [-8, 8] folded to y >= 0
};

inline const ContourGrid& contour_grid() {
    static const ContourGrid g = [] {
        ContourGrid c;
        const int n = 200;  // intervals on [-8, 8]
        double h = 16.0 / n;
        for (int i = n / 2; i <= n; ++i) {
            c.y.push_back(-8.0 + h * i);
            // y = 0 and y = 8 keep weight h; interior nodes count twice
            c.wy.push_back((i == n / 2 || i == n) ? h : 2.0 * h);
        }
        return c;
    }();
    return g;
}

// ghat(a, k; lambda) = e^{3a} int exp(-1.5 y^2 + lambda e^{-y^2}) cos(k y) dy
inline double ghat_with(double a, double k, double lambda) {
    const ContourGrid& g = contour_grid();
    CompensatedSum<double> s;
    for (std::size_t j = 0; j < g.y.size(); ++j) {
        double y = g.y[j];
        s.add(g.wy[j] * std::exp(-1.5 * y * y + lambda * std::exp(-y * y)) * std::cos(k * y));
    }
    return std::exp(3.0 * a) * s.value();
}

inline double goursat_contour(double a, double b, G0Variant v) {
    const ContourGrid& g = contour_grid();
    const double lam1 = std::exp(2.0 * a);
    // cut-off where the saddle estimate for s = 1 drops below 1e-14 of the
    // lower bound e^{3a + lambda - b/3}
    double zmax = 0.5;
    for (; zmax < 60.0; zmax += 0.5) {
        double k = std::sqrt(zmax * zmax + 2.0 * b);
        SaddleState st = h_eval(lam1, k);
        if (std::log(4.0) - st.h < std::log(1e-14) + lam1 - b / 3.0) break;
    }
    const int panels = int(std::ceil(zmax / 0.5));
    const GaussRule& gr = gauss_legendre(16);
    std::vector<double> zw;
    std::vector<std::vector<double>> cosk;
    for (int p = 0; p < panels; ++p) {
        double lo = 0.5 * p, half = 0.25, mid = lo + half;
        for (int i = 0; i < 16; ++i) {
            double z = mid + half * gr.nodes[i];
            double k = std::sqrt(z * z + 2.0 * b);
            zw.push_back(gr.weights[i] * half);
            std::vector<double> c(g.y.size());
            for (std::size_t j = 0; j < g.y.size(); ++j) c[j] = std::cos(k * g.y[j]);
            cosk.push_back(std::move(c));
        }
    }
    auto for_lambda = [&](double lambda) {
        std::vector<double> prof(g.y.size());
        for (std::size_t j = 0; j < g.y.size(); ++j)
            prof[j] = g.wy[j] * std::exp(-1.5 * g.y[j] * g.y[j] + lambda * std::exp(-g.y[j] * g.y[j]));
        CompensatedSum<double> tot;
        for (std::size_t q = 0; q < zw.size(); ++q) {
            double acc = 0.0;
            for (std::size_t j = 0; j < prof.size(); ++j) acc += prof[j] * cosk[q][j];
            tot.add(zw[q] * acc);
        }
        return std::exp(3.0 * a) * tot.value() / kPi;
    };
    if (v == G0Variant::One) return for_lambda(lam1);
    return gauss32_unit([&](double s) { return for_lambda(s * s * lam1); });
}

}  // namespace detail

// Solution of (d_a d_b + 1) g = 0 with g(a, 0) = g0(a) and decay as a -> -inf.
inline double goursat_eval(double a, double b, GoursatMethod method, G0Variant v) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(b >= 0.0)) throw ValidationError("goursat needs finite a and b >= 0");
    if (a > 1.5) throw ValidationError("goursat needs a <= 1.5");
    if (method != GoursatMethod::Series && b > 20.0)
        throw ValidationError("quadrature routes need b <= 20");
    switch (method) {
        case GoursatMethod::Series: return detail::goursat_series_sum(a, b, v, 0);
        case GoursatMethod::BesselIntegral: return detail::goursat_bessel(a, b, v);
        case GoursatMethod::Contour:
            if (v == G0Variant::Full) throw UsageError("contour route needs variant one or two");
            return detail::goursat_contour(a, b, v);
    }
    return 0.0;
}

// sqrt(g1 g2), which dominates the full-variant solution.
inline double schwarz_envelope(double a, double b, GoursatMethod method = GoursatMethod::Series) {
    return std::sqrt(goursat_eval(a, b, method, G0Variant::One) * goursat_eval(a, b, method, G0Variant::Two));
}

// Mode transform of the characteristic data at wave number k for
// lambda = s^2 e^{2a}.
inline double ghat_contour(double a, double k, double s = 1.0) {
    return detail::ghat_with(a, k, s * s * std::exp(2.0 * a));
}

// Saddle-point bound on |ghat(a, k)|.
inline double saddle_upper(double a, double k, double s = 1.0, double c = 4.0) {
    double lambda = s * s * std::exp(2.0 * a);
    SaddleState st = h_eval(lambda, k);
    return c * std::exp(3.0 * a - st.h) / std::sqrt(1.0 + lambda * std::exp(st.im_y0 * st.im_y0));
}

// int_0^inf exp(C e^{-t^2}) e^{-1.5 t^2} dt, returned scaled by e^{-C}.
inline double intest_lhs_scaled(double C) {
    if (!(C >= 0.0)) throw ValidationError("intest needs C >= 0");
    return gauss_integrate([&](double t) { return std::exp(C * (std::exp(-t * t) - 1.0) - 1.5 * t * t); }, 0.0, 8.0,
                           16, 64);
}

inline double intest_rhs_scaled(double C) { return 2.0 / std::sqrt(1.0 + C); }

inline cplx kg_kernel(double t, double x, double m, KernelKind kind) {
    if (!std::isfinite(t) || !std::isfinite(x) || !(m >= 0.0)) throw ValidationError("kernel needs finite t, x and m >= 0");
    auto theta = [](double v) { return v > 0 ? 1.0 : (v < 0 ? 0.0 : 0.5); };
    double s2 = t * t - x * x;
    double cone = theta(s2);
    if (cone == 0.0) return {};
    double j = bessel_j0(m * std::sqrt(std::max(0.0, s2)));
    switch (kind) {
        case KernelKind::Retarded: return {-0.5 * theta(t) * cone * j, 0.0};
        case KernelKind::Advanced: return {-0.5 * theta(-t) * cone * j, 0.0};
        case KernelKind::Causal: {
            double sg = t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0);
            return {0.0, -sg * cone * j / (4.0 * kPi)};
        }
    }
    return {};
}

// int J0(q) sgn(q) e^{i p q} dq = 2i sgn(p) / sqrt(p^2 - 1) for |p| > 1, else 0.
inline cplx j0_sign_fourier(double p) {
    if (!std::isfinite(p)) throw ValidationError("p must be finite");
    if (std::abs(p) == 1.0) throw DomainError("transform is singular at |p| = 1");
    if (std::abs(p) < 1.0) return {};
    double sg = p > 0 ? 1.0 : -1.0;
    return {0.0, 2.0 * sg / std::sqrt(p * p - 1.0)};
}

// Same transform with the Gaussian taper exp(-q^2 / sigma^2).
inline cplx j0_sign_fourier_tapered(double p, double sigma) {
    double qmax = 6.0 * sigma;
    int panels = int(std::ceil(qmax / 0.5));
    double v = gauss_integrate(
        [&](double q) { return bessel_j0(q) * std::sin(p * q) * std::exp(-(q / sigma) * (q / sigma)); }, 0.0, qmax, 10,
        panels);
    return {0.0, 2.0 * v};
}

}  // namespace freqloc
