#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include "freqloc/error.hpp"

namespace freqloc {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kE = std::numbers::e;

// Neumaier variant of compensated summation; works for real and complex T.
template <class T>
class CompensatedSum {
public:
    void add(T v) {
        if constexpr (std::is_same_v<T, cplx>) {
            re_.add(v.real());
            im_.add(v.imag());
        } else {
            T t = sum_ + v;
            if (std::abs(sum_) >= std::abs(v))
                comp_ += (sum_ - t) + v;
            else
                comp_ += (v - t) + sum_;
            sum_ = t;
        }
    }
    T value() const {
        if constexpr (std::is_same_v<T, cplx>)
            return {re_.value(), im_.value()};
        else
            return sum_ + comp_;
    }

private:
    struct Empty {};
    T sum_{};
    T comp_{};
    std::conditional_t<std::is_same_v<T, cplx>, CompensatedSum<double>, Empty> re_{}, im_{};
};

// Composite Simpson on uniformly spaced samples. An odd interval count is
// closed with Simpson's 3/8 rule on the last three intervals.
template <class T>
T simpson(const std::vector<T>& f, double h) {
    const std::size_t n = f.size();
    if (n < 2) return T{};
    if (n == 2) return T(0.5 * h) * (f[0] + f[1]);
    std::size_t intervals = n - 1;
    std::size_t even_end = (intervals % 2 == 0) ? intervals : intervals - 3;
    CompensatedSum<T> s;
    if (even_end >= 2) {
        s.add(f[0]);
        s.add(f[even_end]);
        for (std::size_t i = 1; i < even_end; ++i) s.add(T(i % 2 ? 4.0 : 2.0) * f[i]);
    }
    T total = s.value() * T(h / 3.0);
    if (even_end != intervals) {
        std::size_t j = even_end;
        total += T(3.0 * h / 8.0) * (f[j] + T(3.0) * f[j + 1] + T(3.0) * f[j + 2] + f[j + 3]);
    }
    return total;
}

template <class T>
T trapezoid(const std::vector<T>& f, double h) {
    if (f.size() < 2) return T{};
    CompensatedSum<T> s;
    s.add(T(0.5) * f.front());
    s.add(T(0.5) * f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s.add(f[i]);
    return s.value() * T(h);
}

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
inline const GaussRule& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n < 1) throw UsageError("gauss rule needs n >= 1");
    GaussRule r;
    r.nodes.assign(n, 0.0);
    r.weights.assign(n, 0.0);
    if (n == 1) {
        r.weights[0] = 2.0;
        return cache.emplace(n, std::move(r)).first->second;
    }
    auto eval = [n](double x, double& p, double& dp) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        p = p1;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
    };
    for (int i = 0; i < n / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double p, dp;
        for (int iter = 0; iter < 100; ++iter) {
            eval(x, p, dp);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        eval(x, p, dp);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        double p, dp;
        eval(0.0, p, dp);
        r.weights[n / 2] = 2.0 / (dp * dp);
    }
    return cache.emplace(n, std::move(r)).first->second;
}

// Composite Gauss-Legendre over `panels` equal pieces of [a, b].
template <class F>
auto gauss_integrate(F&& f, double a, double b, int n = 16, int panels = 1) {
    const GaussRule& g = gauss_legendre(n);
    using R = decltype(f(a));
    CompensatedSum<R> s;
    double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * w;
        double half = 0.5 * w, mid = lo + half;
        for (int i = 0; i < n; ++i) s.add(R(g.weights[i] * half) * f(mid + half * g.nodes[i]));
    }
    return s.value();
}

namespace detail {
template <class F>
double adaptive_simpson_rec(F& f, double a, double b, double fa, double fm, double fb, double whole,
                            double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

// Adaptive Simpson with Richardson correction; `tol` is absolute.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 40) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Romberg extrapolation over the nested trapezoid rules available on 2^m + 1
// uniform samples. Exact for polynomials of degree <= 2m + 1.
template <class T>
T romberg_samples(const std::vector<T>& f, T h, int* levels_out = nullptr) {
    std::size_t n = f.size();
    if (n < 3) throw ResolutionError("romberg needs at least 3 samples");
    std::size_t intervals = n - 1;
    int m = 0;
    while ((std::size_t(1) << m) < intervals) ++m;
    if ((std::size_t(1) << m) != intervals)
        throw UsageError("romberg needs 2^m + 1 samples");
    std::vector<T> row(m + 1);
    for (int lev = 0; lev <= m; ++lev) {
        std::size_t stride = intervals >> lev;
        CompensatedSum<T> s;
        s.add(T(0.5) * f.front());
        s.add(T(0.5) * f.back());
        for (std::size_t i = stride; i < intervals; i += stride) s.add(f[i]);
        row[lev] = s.value() * h * T(stride);
    }
    // Neville-style tableau in place.
    for (int j = 1; j <= m; ++j) {
        T fac = std::pow(T(4), j);
        for (int lev = m; lev >= j; --lev) row[lev] = (fac * row[lev] - row[lev - 1]) / (fac - 1.0);
    }
    if (levels_out) *levels_out = m;
    return row[m];
}

template <class F>
double bisect(F&& f, double lo, double hi, double width) {
    double flo = f(lo);
    while (hi - lo > width) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = a;
        return v;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * double(i) / double(n - 1);
    return v;
}

}  // namespace freqloc
