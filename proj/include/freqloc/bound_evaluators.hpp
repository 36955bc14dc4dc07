#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "freqloc/core_spectral.hpp"
#include "freqloc/error.hpp"
#include "freqloc/numerics.hpp"
#include "freqloc/special_functions.hpp"

namespace freqloc {

enum class Tier { Series, Simple, Improved, Refined };
enum class CaseTag { A, B1, B2, NA };

inline const char* to_string(Tier t) {
    switch (t) {
        case Tier::Series: return "series";
        case Tier::Simple: return "simple";
        case Tier::Improved: return "improved";
        case Tier::Refined: return "refined";
    }
    return "?";
}

inline Tier parse_tier(const std::string& s) {
    if (s == "series") return Tier::Series;
    if (s == "simple") return Tier::Simple;
    if (s == "improved") return Tier::Improved;
    if (s == "refined") return Tier::Refined;
    throw ValidationError("unknown tier '" + s + "'");
}

inline const char* to_string(CaseTag c) {
    switch (c) {
        case CaseTag::A: return "A";
        case CaseTag::B1: return "B1";
        case CaseTag::B2: return "B2";
        case CaseTag::NA: return "n/a";
    }
    return "n/a";
}

// Refined-tier prefactor from `freqloc calibrate` on config/default.cfg.
inline constexpr double kDefaultRefinedC = 0.039949032086639719;

struct BoundConfig {
    double c_refined = kDefaultRefinedC;
};

struct BoundValue {
    double omega = 0.0;
    double eps = 0.0;
    Tier tier = Tier::Simple;
    double value = 0.0;
    CaseTag case_tag = CaseTag::NA;
    double im_y0 = 0.0;
    double nu = 0.0;
};

struct SaddleState {
    double lambda = 0.0;
    double k = 0.0;
    double im_y0 = 0.0;
    double h = 0.0;
};

namespace detail {

// Root of k = 3y + 2 lambda y exp(y^2) on [0, hi]: bisection to width 1e-8,
// then Newton polishing (at least two steps).
inline double saddle_root(double lambda, double k, double hi) {
    if (k == 0.0) return 0.0;
    if (lambda == 0.0) return k / 3.0;
    auto F = [&](double y) { return 3.0 * y + 2.0 * lambda * y * std::exp(y * y) - k; };
    double lo = 0.0;
    while (hi - lo > 1e-8) {
        double mid = 0.5 * (lo + hi);
        if (F(mid) > 0.0) hi = mid;
        else lo = mid;
    }
    double y = 0.5 * (lo + hi);
    for (int it = 0; it < 8; ++it) {
        double e = std::exp(y * y);
        double f = 3.0 * y + 2.0 * lambda * y * e - k;
        double d = 3.0 + 2.0 * lambda * e * (1.0 + 2.0 * y * y);
        double ny = std::clamp(y - f / d, lo, hi);
        bool done = std::abs(ny - y) <= 2e-16 * std::max(1.0, y);
        y = ny;
        if (it >= 1 && done) break;
    }
    return y;
}

inline double h_value(double lambda, double y) {
    return 1.5 * y * y - lambda * std::exp(y * y) * (1.0 - 2.0 * y * y);
}

}  // namespace detail

// Saddle exponent h(lambda, k) at the saddle ordinate y(lambda, k).
inline SaddleState h_eval(double lambda, double k) {
    if (!(lambda >= 0.0) || !(k >= 0.0) || !std::isfinite(lambda) || !std::isfinite(k))
        throw ValidationError("h_eval needs finite lambda >= 0 and k >= 0");
    SaddleState s;
    s.lambda = lambda;
    s.k = k;
    s.im_y0 = detail::saddle_root(lambda, k, std::max(k / 3.0, 1e-300));
    double y = s.im_y0;
    double res = 3.0 * y + 2.0 * lambda * y * std::exp(y * y) - k;
    if (std::abs(res) > 1e-10 * std::max(1.0, k)) throw AccuracyError("saddle equation residual too large");
    s.h = detail::h_value(lambda, y);
    if (y > 1e-4) {
        double alt = -1.5 * y * y - k * (0.5 / y - y) + 1.5;
        double scale = std::max({1.0, std::abs(s.h), k / y});
        if (std::abs(alt - s.h) > 1e-9 * scale) throw AccuracyError("saddle exponent forms disagree");
    }
    return s;
}

// Case split of the saddle ordinate.
inline CaseTag classify_case(double lambda, double y) {
    if (y < 1.0) return CaseTag::A;
    if (lambda * std::exp(y * y) < 1.5) return CaseTag::B1;
    return CaseTag::B2;
}

// Same split from the k thresholds k0 = 3 + 2 e lambda and k1.
inline CaseTag classify_case_k(double lambda, double k) {
    double k0 = 3.0 + 2.0 * kE * lambda;
    if (k < k0) return CaseTag::A;
    if (lambda < 1.5 / kE) {
        double k1 = lambda > 0.0 ? 6.0 * std::sqrt(-std::log(2.0 * lambda / 3.0))
                                 : std::numeric_limits<double>::infinity();
        if (k < k1) return CaseTag::B1;
    }
    return CaseTag::B2;
}

// Lower bound on the saddle ordinate valid in the given case.
inline double case_lower_bound(CaseTag c, double lambda, double k) {
    switch (c) {
        case CaseTag::A: return k / (3.0 + 2.0 * kE * lambda);
        case CaseTag::B1: return k / 6.0;
        case CaseTag::B2: {
            double x = k * k / (8.0 * lambda * lambda);
            double lx = std::log(x);
            return std::sqrt(std::max(0.0, lx - std::log(lx))) / std::sqrt(2.0);
        }
        case CaseTag::NA: break;
    }
    return 0.0;
}

namespace detail {

// sum_n (4w)^n eps^{2/(2n+3)} / (n! sqrt(2n+1)), i.e. g / (4w)^{3/2}.
inline double g_scaled(double omega, double eps) {
    double le = std::log(eps);
    double l4w = omega > 0.0 ? std::log(4.0 * omega) : -std::numeric_limits<double>::infinity();
    CompensatedSum<double> s;
    for (int n = 0; n < 5000; ++n) {
        double lt = (n > 0 ? n * l4w : 0.0) + 2.0 / (2.0 * n + 3.0) * le - std::lgamma(n + 1.0) -
                    0.5 * std::log(2.0 * n + 1.0);
        double t = std::exp(lt);
        s.add(t);
        if (n > 4.0 * omega && t < 1e-16 * s.value()) break;
        if (omega == 0.0) break;
    }
    return s.value();
}

}  // namespace detail

// g(omega, eps) = sum_n (4 omega)^{n+3/2} eps^{2/(2n+3)} / (n! sqrt(2n+1)).
inline double g_series(double omega, double eps) {
    if (!(omega >= 0.0 && omega <= 50.0)) throw ValidationError("g_series needs 0 <= omega <= 50");
    if (!(eps > 0.0)) throw DomainError("g_series needs eps > 0");
    if (!(eps <= 1.0)) throw ValidationError("g_series needs eps <= 1");
    if (omega == 0.0) return 0.0;
    return std::pow(4.0 * omega, 1.5) * detail::g_scaled(omega, eps);
}

// Largest omega at which the simple tier stays below the trivial bound.
inline double omega_max_freq(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("omega_max_freq needs 0 < eps < 1");
    double v = 0.25 * std::log(std::sqrt(2.0 * kE * std::abs(std::log(eps))) / std::pow(6.0, 1.5));
    return std::max(0.0, v);
}

inline BoundValue bound_eval(double omega, double eps, Tier tier, double energy = 1.0,
                             const BoundConfig& cfg = {}) {
    if (!(omega >= 0.0 && omega <= 100.0)) throw ValidationError("omega must lie in [0, 100]");
    if (!(eps > 0.0) || std::isnan(eps)) throw ValidationError("epsilon must be positive");
    if (!(energy >= 0.0)) throw ValidationError("energy must be non-negative");
    if (eps > 1.0) throw ValidationError("epsilon must not exceed 1");
    BoundValue b;
    b.omega = omega;
    b.eps = eps;
    b.tier = tier;
    const double se = std::sqrt(energy);
    const double le = std::abs(std::log(eps));
    switch (tier) {
        case Tier::Series: {
            if (omega > 50.0) throw ValidationError("series tier needs omega <= 50");
            b.value = 12.0 * se * detail::g_scaled(omega, eps);
            break;
        }
        case Tier::Simple: {
            if (eps >= 1.0) throw DegenerateBoundError("simple tier is undefined at eps = 1");
            b.value = std::pow(6.0, 1.5) / std::sqrt(2.0 * kE * le) * std::exp(4.0 * omega) * se;
            break;
        }
        case Tier::Improved: {
            double first = omega > 0.0 ? std::exp(-le / (14.0 * std::sqrt(omega))) : 0.0;
            double second = kE * std::exp(-std::sqrt(le));
            b.value = 12.0 * std::exp(4.0 * omega) * se * std::max(first, second);
            break;
        }
        case Tier::Refined: {
            if (eps >= 1.0) throw DegenerateBoundError("refined tier is undefined at eps = 1");
            double k = 2.0 * std::sqrt(le);
            double lambda = 4.0 * omega;
            double y = detail::saddle_root(lambda, k, std::max(1.0, k / 3.0));
            b.im_y0 = y;
            b.nu = lambda * std::exp(y * y);
            double h = detail::h_value(lambda, y);
            b.value = cfg.c_refined * std::exp(-h) * std::sqrt(erfi_scaled(b.nu)) * se;
            b.case_tag = classify_case(lambda, y);
            break;
        }
    }
    if (!std::isfinite(b.value)) throw RangeError("bound value overflows");
    return b;
}

struct BandCap {
    bool available = false;
    double band_energy = 0.0;
    double cap = 0.0;
    double log10_one_minus_c = 0.0;  // C = 1 - 10^{this}
};

// Energy cap for a frequency band from omega_max. C is represented through
// 1 - C = 10^{-j/1000}; the largest admissible 1 - C (smallest C) is taken.
inline BandCap band_energy_cap(const SpectrumSplit& s, double w0, double w1) {
    BandCap out;
    out.band_energy = band_energy(s, w0, w1);
    if (!std::isfinite(w1)) return out;
    // omega1 < omega_max(sqrt(delta))  <=>  ln delta < -216 exp(8 omega1 - 1)
    double thresh_ln = -std::pow(6.0, 3.0) * std::exp(8.0 * w1 - 1.0);
    double thresh_l10 = thresh_ln / std::log(10.0);
    if (!(thresh_l10 > -300.0)) return out;
    long j = long(std::floor(-thresh_l10 * 1000.0)) + 1;
    if (j < 1) j = 1;
    double l10 = -double(j) / 1000.0;
    while (l10 * std::log(10.0) >= thresh_ln) l10 -= 1e-3;
    if (l10 < -300.0) return out;
    out.available = true;
    out.log10_one_minus_c = l10;
    out.cap = s.energy_total * (1.0 - std::pow(10.0, l10));
    return out;
}

}  // namespace freqloc
