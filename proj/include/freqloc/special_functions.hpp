#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "freqloc/error.hpp"
#include "freqloc/numerics.hpp"

namespace freqloc {

namespace detail {

inline double j0_series(double z) {
    // sum (-1)^l (z/2)^{2l} / (l!)^2
    double q = 0.25 * z * z;
    CompensatedSum<double> s;
    double t = 1.0;
    s.add(t);
    for (int l = 1; l < 200; ++l) {
        t *= -q / (double(l) * double(l));
        s.add(t);
        if (std::abs(t) < 1e-18) break;
    }
    return s.value();
}

// Miller backward recurrence normalised by J0 + 2 sum J_{2k} = 1.
inline double j0_miller(double z) {
    int n = 2 * (int(z + 12.0 * std::cbrt(z) + 30.0) / 2);
    double jp1 = 0.0, j = 1e-300;
    CompensatedSum<double> norm;
    double j0 = 0.0;
    for (int k = n; k >= 1; --k) {
        double jm1 = 2.0 * k / z * j - jp1;
        jp1 = j;
        j = jm1;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm.add(2.0 * j);
        if (k - 1 == 0) j0 = j;
    }
    norm.add(j0);
    return j0 / norm.value();
}

inline double j0_asymptotic(double z) {
    // Hankel expansion: J0 = sqrt(2/(pi z)) (P cos chi - Q sin chi), chi = z - pi/4
    double p = 0.0, q = 0.0;
    double term = 1.0;
    double inv8z = 1.0 / (8.0 * z);
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200; ++k) {
        // term_k = prod_{j=1..k} (2j-1)^2 / (j 8z)
        if (k > 0) term *= (2.0 * k - 1.0) * (2.0 * k - 1.0) * inv8z / k;
        if (std::abs(term) > prev) break;
        prev = std::abs(term);
        int r = k % 4;
        if (r == 0) p += term;
        else if (r == 1) q -= term;
        else if (r == 2) p -= term;
        else q += term;
        if (std::abs(term) < 1e-17) break;
    }
    double c = std::cos(z), s = std::sin(z);
    double cchi = (c + s) / std::sqrt(2.0);
    double schi = (s - c) / std::sqrt(2.0);
    return std::sqrt(2.0 / (kPi * z)) * (p * cchi - q * schi);
}

}  // namespace detail

// Bessel function of the first kind, order zero, real argument.
inline double bessel_j0(double z) {
    if (!std::isfinite(z) || std::abs(z) > 1e6) throw RangeError("bessel_j0 argument out of range");
    double a = std::abs(z);
    if (a <= 12.0) return detail::j0_series(a);
    if (a <= 50.0) return detail::j0_miller(a);
    return detail::j0_asymptotic(a);
}

// Spherical Bessel function j_l(x) for x >= 0.
inline double spherical_bessel_j(int l, double x) {
    if (l < 0) throw DomainError("spherical_bessel_j needs l >= 0");
    if (x < 0) throw DomainError("spherical_bessel_j needs x >= 0");
    if (x <= double(l) + 1.0) {
        double lead = 1.0;
        for (int k = 1; k <= l; ++k) lead *= x / (2.0 * k + 1.0);
        double q = -0.5 * x * x;
        double t = 1.0;
        CompensatedSum<double> s;
        s.add(t);
        for (int k = 1; k < 300; ++k) {
            t *= q / (k * (2.0 * l + 2.0 * k + 1.0));
            s.add(t);
            if (std::abs(t) < 1e-18 * std::abs(s.value())) break;
        }
        return lead * s.value();
    }
    double j0 = std::sin(x) / x;
    if (l == 0) return j0;
    double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
    for (int n = 1; n < l; ++n) {
        double j2 = (2.0 * n + 1.0) / x * j1 - j0;
        j0 = j1;
        j1 = j2;
    }
    return j1;
}

// (2/sqrt(pi)) int_0^1 exp(nu (s^2 - 1)) ds  =  exp(-nu) Erfi(sqrt nu) / sqrt nu.
inline double erfi_scaled(double nu) {
    if (!(nu >= 0.0)) throw DomainError("erfi_scaled needs nu >= 0");
    const double c = 2.0 / std::sqrt(kPi);
    if (nu == 0.0) return c;
    if (nu <= 50.0) {
        // exp(-nu) sum nu^n / (n! (2n+1)), all terms positive
        CompensatedSum<double> s;
        double t = 1.0;
        s.add(1.0);
        for (int n = 1; n < 1000; ++n) {
            t *= nu / n;
            double v = t / (2.0 * n + 1.0);
            s.add(v);
            if (n > nu && v < 1e-18 * s.value()) break;
        }
        return c * std::exp(-nu) * s.value();
    }
    // asymptotic: (1/(sqrt(pi) nu)) sum (2k-1)!! / (2 nu)^k
    CompensatedSum<double> s;
    double t = 1.0;
    s.add(t);
    for (int k = 1; k < 200; ++k) {
        double nt = t * (2.0 * k - 1.0) / (2.0 * nu);
        if (nt > t) break;
        t = nt;
        s.add(t);
        if (t < 1e-18) break;
    }
    return s.value() / (std::sqrt(kPi) * nu);
}

// Principal branch of the Lambert W function.
inline double lambert_w0(double x) {
    const double branch = -1.0 / kE;
    if (!(x >= branch - 1e-16) || !std::isfinite(x)) throw DomainError("lambert_w0 needs x >= -1/e");
    if (x <= branch) return -1.0;
    if (x == 0.0) return 0.0;
    double w;
    if (x < -0.3) {
        double p = std::sqrt(2.0 * (kE * x + 1.0));
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    } else if (x < 3.0) {
        w = std::log1p(x);
        if (x > 0.5) w *= 0.85;
    } else {
        double l1 = std::log(x), l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }
    for (int it = 0; it < 100; ++it) {
        double ew = std::exp(w);
        double f = w * ew - x;
        double wp1 = w + 1.0;
        if (wp1 <= 0.0) break;
        double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        double dw = f / denom;
        w -= dw;
        if (w < -1.0) w = -1.0 + 1e-16;
        if (std::abs(dw) <= 1e-16 * (1.0 + std::abs(w))) break;
    }
    // polish with Newton on the residual form w e^w - x
    for (int it = 0; it < 3; ++it) {
        double ew = std::exp(w);
        double f = w * ew - x;
        double d = ew * (w + 1.0);
        if (d == 0.0) break;
        double nw = w - f / d;
        if (!std::isfinite(nw)) break;
        if (std::abs(nw * std::exp(nw) - x) >= std::abs(f)) break;
        w = nw;
    }
    return w;
}

// Legendre polynomial P_n(x) by the three-term recurrence.
namespace detail {

// Bonnet recurrence in the working precision T.
template <class T>
T legendre_recurrence(int n, T x) {
    if (n == 0) return T(1);
    T p0 = 1, p1 = x;
    for (int k = 1; k < n; ++k) {
        T p2 = ((T(2) * k + 1) * x * p1 - T(k) * p0) / T(k + 1);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

}  // namespace detail

inline double legendre_p(int n, double x) {
    if (n < 0 || n > 200) throw DomainError("legendre_p needs 0 <= n <= 200");
    if (!(std::abs(x) <= 1.0)) throw DomainError("legendre_p needs |x| <= 1");
    return detail::legendre_recurrence<double>(n, x);
}

// log(n!!) for n >= -1.
inline double log_double_factorial(int n) {
    if (n < -1) throw DomainError("double_factorial needs n >= -1");
    if (n <= 0) return 0.0;
    if (n % 2 == 0) {
        int m = n / 2;
        return m * std::log(2.0) + std::lgamma(m + 1.0);
    }
    int m = (n - 1) / 2;  // n = 2m+1: (2m+1)! / (2^m m!)
    return std::lgamma(2.0 * m + 2.0) - m * std::log(2.0) - std::lgamma(m + 1.0);
}

// n!! in extended precision; above n = 170 it goes through the log domain.
inline long double double_factorial(int n) {
    if (n < -1) throw DomainError("double_factorial needs n >= -1");
    if (n <= 0) return 1.0L;
    if (n <= 170) {
        long double p = 1.0L;
        for (int k = n; k > 1; k -= 2) p *= k;
        return p;
    }
    long double lg;
    if (n % 2 == 0) {
        int m = n / 2;
        lg = m * std::log(2.0L) + std::lgammal(m + 1.0L);
    } else {
        int m = (n - 1) / 2;
        lg = std::lgammal(2.0L * m + 2.0L) - m * std::log(2.0L) - std::lgammal(m + 1.0L);
    }
    return std::exp(lg);
}

}  // namespace freqloc
