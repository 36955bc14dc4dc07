#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "freqloc/error.hpp"
#include "freqloc/numerics.hpp"

namespace freqloc {

enum class Parity { None, Even, Odd };

inline const char* to_string(Parity p) {
    switch (p) {
        case Parity::None: return "none";
        case Parity::Even: return "even";
        case Parity::Odd: return "odd";
    }
    return "none";
}

// Complex samples on the symmetric uniform grid x_i = -L + i h, i = 0..n-1.
struct SampledField {
    std::vector<cplx> values;
    double half_width = 0.0;
    double spacing = 0.0;

    std::size_t size() const { return values.size(); }
    double x(std::size_t i) const { return -half_width + spacing * double(i); }

    static SampledField zeros(double half_width, std::size_t n) {
        SampledField f;
        f.values.assign(n, cplx{});
        f.half_width = half_width;
        f.spacing = 2.0 * half_width / double(n - 1);
        return f;
    }

    void validate() const {
        if (values.size() < 16) throw ValidationError("sampled field needs at least 16 samples");
        if (!(half_width > 0.0) || !(spacing > 0.0)) throw ValidationError("sampled field needs positive extent");
        double span = spacing * double(values.size() - 1);
        if (std::abs(span - 2.0 * half_width) > 1e-12 * 2.0 * half_width)
            throw ValidationError("spacing does not match the grid extent");
        if (values.front() != cplx{} || values.back() != cplx{})
            throw ValidationError("sampled field must vanish at both endpoints");
    }
};

struct CauchyData {
    SampledField phi0;
    SampledField phi1;
    // spatial derivative of phi0 on the same grid; used for the physical energy
    SampledField phi0_dx;
    double support_radius = 0.0;
};

struct BumpSpec {
    double center = 0.0;
    double width = 0.5;
    double zeta = 0.0;
    double amplitude = 1.0;
};

struct GridSpec {
    double half_width = 4.0;
    std::size_t n = 4096;
};

struct SpectrumSplit {
    std::vector<double> k_grid;
    std::vector<cplx> h_plus;
    std::vector<cplx> h_minus;
    double energy_total = 0.0;
    double energy_plus = 0.0;
    double energy_minus = 0.0;
    double epsilon = 0.0;
    double support_radius = 0.0;
};

namespace detail {

inline SampledField reflect_part(const SampledField& f, double sign) {
    SampledField g = f;
    const std::size_t n = f.size();
    for (std::size_t i = 0; i < n; ++i) g.values[i] = 0.5 * (f.values[i] + sign * f.values[n - 1 - i]);
    return g;
}

inline bool is_power_of_two(std::size_t n) { return n && !(n & (n - 1)); }

}  // namespace detail

// Even or odd projection of both Cauchy fields; the derivative picks up the
// opposite reflection sign.
inline CauchyData project_parity(const CauchyData& d, Parity p) {
    if (p == Parity::None) return d;
    double s = (p == Parity::Even) ? 1.0 : -1.0;
    CauchyData out;
    out.phi0 = detail::reflect_part(d.phi0, s);
    out.phi1 = detail::reflect_part(d.phi1, s);
    out.phi0_dx = detail::reflect_part(d.phi0_dx, -s);
    out.support_radius = d.support_radius;
    return out;
}

// Modulated smooth bump. phi1 = -d/dx phi0, so the unmodulated profile moves
// towards positive x and exp(i zeta x) shifts spectral weight into h_plus.
inline CauchyData build_cauchy_data(const BumpSpec& b, const GridSpec& g, Parity parity = Parity::None) {
    if (g.n < 64 || !detail::is_power_of_two(g.n)) throw ValidationError("grid size must be a power of two >= 64");
    if (!(g.half_width > 0.0)) throw ValidationError("grid half width must be positive");
    if (!(b.width > 0.0)) throw ValidationError("bump width must be positive");
    if (!std::isfinite(b.center) || !std::isfinite(b.zeta) || !std::isfinite(b.amplitude))
        throw ValidationError("bump parameters must be finite");
    const double L = g.half_width;
    if (b.center - b.width <= -L || b.center + b.width >= L)
        throw DomainError("bump support leaves the grid");
    const double h = 2.0 * L / double(g.n - 1);
    if (2.0 * b.width / h < 8.0) throw ResolutionError("fewer than 8 samples across the bump width");

    CauchyData d;
    d.phi0 = SampledField::zeros(L, g.n);
    d.phi1 = SampledField::zeros(L, g.n);
    d.phi0_dx = SampledField::zeros(L, g.n);
    d.support_radius = std::max(std::abs(b.center - b.width), std::abs(b.center + b.width));
    const cplx I(0.0, 1.0);
    for (std::size_t i = 0; i < g.n; ++i) {
        double x = d.phi0.x(i);
        double u = (x - b.center) / b.width;
        if (std::abs(u) >= 1.0) continue;
        double s = u * u - 1.0;
        double bump = std::exp(1.0 / s);
        double dbump = bump * (-1.0 / (s * s)) * (2.0 * u / b.width);
        cplx phase = std::exp(I * (b.zeta * x));
        cplx f0 = b.amplitude * bump * phase;
        cplx df0 = b.amplitude * (dbump + I * b.zeta * bump) * phase;
        d.phi0.values[i] = f0;
        d.phi0_dx.values[i] = df0;
        d.phi1.values[i] = -df0;
    }
    return project_parity(d, parity);
}

// Cauchy data from raw samples; d/dx phi0 by eighth-order central differences
// (samples beyond the grid are zero by compact support).
inline CauchyData make_cauchy_data(const SampledField& phi0, const SampledField& phi1, double support_radius) {
    phi0.validate();
    phi1.validate();
    if (phi0.size() != phi1.size() || phi0.half_width != phi1.half_width)
        throw ValidationError("Cauchy fields must share one grid");
    if (!(support_radius > 0.0)) throw ValidationError("support radius must be positive");
    const double tol = 1e-12 * phi0.spacing;
    for (std::size_t i = 0; i < phi0.size(); ++i)
        if (std::abs(phi0.x(i)) > support_radius + tol && (phi0.values[i] != cplx{} || phi1.values[i] != cplx{}))
            throw ValidationError("data does not vanish outside the support radius");
    static constexpr double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
    CauchyData d;
    d.phi0 = phi0;
    d.phi1 = phi1;
    d.phi0_dx = SampledField::zeros(phi0.half_width, phi0.size());
    d.support_radius = support_radius;
    const long n = long(phi0.size());
    auto at = [&](long i) { return (i < 0 || i >= n) ? cplx{} : phi0.values[std::size_t(i)]; };
    for (long i = 1; i + 1 < n; ++i) {
        cplx s{};
        for (int j = 0; j < 4; ++j) s += c[j] * (at(i + j + 1) - at(i - j - 1));
        d.phi0_dx.values[std::size_t(i)] = s / phi0.spacing;
    }
    return d;
}

// Simpson weights of the full grid, so partial sums over the support give the
// same linear functional for every field.
inline std::vector<double> simpson_weights(std::size_t n, double h) {
    std::vector<double> w(n, 0.0);
    std::size_t intervals = n - 1;
    std::size_t even_end = (intervals % 2 == 0) ? intervals : intervals - 3;
    if (even_end >= 2) {
        w[0] += h / 3.0;
        w[even_end] += h / 3.0;
        for (std::size_t i = 1; i < even_end; ++i) w[i] += (i % 2 ? 4.0 : 2.0) * h / 3.0;
    }
    if (even_end != intervals) {
        std::size_t j = even_end;
        w[j] += 3.0 * h / 8.0;
        w[j + 1] += 9.0 * h / 8.0;
        w[j + 2] += 9.0 * h / 8.0;
        w[j + 3] += 3.0 * h / 8.0;
    }
    return w;
}

// Precomputed Simpson functional restricted to the support of a field set.
class FourierEvaluator {
public:
    explicit FourierEvaluator(const std::vector<const SampledField*>& fields) {
        const SampledField& f0 = *fields.front();
        h_ = f0.spacing;
        std::vector<double> w = simpson_weights(f0.size(), f0.spacing);
        for (std::size_t i = 0; i < f0.size(); ++i) {
            bool nz = false;
            for (auto* f : fields) nz = nz || f->values[i] != cplx{};
            if (!nz) continue;
            idx_.push_back(i);
            x_.push_back(f0.x(i));
        }
        for (auto* f : fields) {
            std::vector<double> re, im;
            re.reserve(idx_.size());
            im.reserve(idx_.size());
            for (auto i : idx_) {
                re.push_back(f->values[i].real() * w[i]);
                im.push_back(f->values[i].imag() * w[i]);
            }
            re_.push_back(std::move(re));
            im_.push_back(std::move(im));
        }
    }

    // Transforms int f(x) exp(-i k x) dx of every registered field. The phase
    // advances by one complex multiply across adjacent nodes and is reset
    // exactly every 32 nodes, which keeps the drift near 1e-15.
    std::vector<cplx> at(double k) const {
        // Phases first, then one fixed-order dot product per field.
        thread_local std::vector<double> ec, es;
        const std::size_t n = idx_.size();
        ec.resize(n);
        es.resize(n);
        const double sc = std::cos(k * h_), ss = -std::sin(k * h_);
        double er = 1.0, ei = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j % 32 == 0 || idx_[j] != idx_[j - 1] + 1) {
                double a = -k * x_[j];
                er = std::cos(a);
                ei = std::sin(a);
            } else {
                double t = er * sc - ei * ss;
                ei = er * ss + ei * sc;
                er = t;
            }
            ec[j] = er;
            es[j] = ei;
        }
        std::vector<cplx> out;
        out.reserve(re_.size());
        for (std::size_t f = 0; f < re_.size(); ++f) {
            const double* wr = re_[f].data();
            const double* wi = im_[f].data();
            double sr = 0.0, si = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                sr += wr[j] * ec[j] - wi[j] * es[j];
                si += wr[j] * es[j] + wi[j] * ec[j];
            }
            out.emplace_back(sr, si);
        }
        return out;
    }

private:
    double h_ = 0.0;
    std::vector<std::size_t> idx_;
    std::vector<double> x_;
    std::vector<std::vector<double>> re_, im_;
};

inline cplx fourier_at(const SampledField& f, double k) { return FourierEvaluator({&f}).at(k)[0]; }

// Both frequency components (h_plus, h_minus) at one wave number.
inline std::pair<cplx, cplx> split_at(const FourierEvaluator& ev, double k) {
    auto t = ev.at(k);
    const cplx I(0.0, 1.0);
    double om = std::abs(k);
    return {0.5 * (om * t[0] + I * t[1]), 0.5 * (om * t[0] - I * t[1])};
}

inline std::pair<cplx, cplx> split_at(const CauchyData& d, double k) {
    return split_at(FourierEvaluator({&d.phi0, &d.phi1}), k);
}

inline double physical_energy(const CauchyData& d) {
    std::vector<double> dens(d.phi0.size());
    for (std::size_t i = 0; i < dens.size(); ++i)
        dens[i] = 0.5 * (std::norm(d.phi1.values[i]) + std::norm(d.phi0_dx.values[i]));
    return simpson(dens, d.phi0.spacing);
}

inline bool is_zero(const CauchyData& d) {
    auto z = [](const SampledField& f) {
        return std::all_of(f.values.begin(), f.values.end(), [](cplx v) { return v == cplx{}; });
    };
    return z(d.phi0) && z(d.phi1);
}

inline void validate(const CauchyData& d) {
    d.phi0.validate();
    d.phi1.validate();
    d.phi0_dx.validate();
    if (d.phi0.size() != d.phi1.size() || d.phi0.size() != d.phi0_dx.size() ||
        d.phi0.half_width != d.phi1.half_width)
        throw ValidationError("Cauchy fields must share one grid");
}

// Frequency split on a symmetric k grid with trapezoid energies. An odd
// k_count puts k = 0 on the grid.
inline SpectrumSplit transform_spectrum(const CauchyData& d, double k_max, std::size_t k_count) {
    validate(d);
    if (k_count < 256) throw ValidationError("k_count must be at least 256");
    if (!(k_max > 0.0) || !std::isfinite(k_max)) throw ValidationError("k_max must be positive");
    SpectrumSplit s;
    s.support_radius = d.support_radius;
    s.k_grid = linspace(-k_max, k_max, k_count);
    s.h_plus.assign(k_count, cplx{});
    s.h_minus.assign(k_count, cplx{});
    if (is_zero(d)) return s;
    const double dk = s.k_grid[1] - s.k_grid[0];
    const double r = std::max(d.support_radius, 1e-300);
    if (dk >= kPi / r) throw ResolutionError("k grid spacing does not resolve the support diameter");

    FourierEvaluator ev({&d.phi0, &d.phi1});
    std::vector<double> dp(k_count), dm(k_count), dens(k_count);
    for (std::size_t j = 0; j < k_count; ++j) {
        auto [hp, hm] = split_at(ev, s.k_grid[j]);
        s.h_plus[j] = hp;
        s.h_minus[j] = hm;
        dp[j] = std::norm(hp);
        dm[j] = std::norm(hm);
        dens[j] = dp[j] + dm[j];
    }
    s.energy_total = physical_energy(d);
    s.energy_plus = trapezoid(dp, dk) / (2.0 * kPi);
    s.energy_minus = trapezoid(dm, dk) / (2.0 * kPi);

    // energy in the outer 10% of the band, a proxy for what lies beyond k_max
    CompensatedSum<double> tail;
    for (std::size_t j = 0; j < k_count; ++j)
        if (std::abs(s.k_grid[j]) >= 0.9 * k_max) tail.add(dens[j] * dk);
    double tail_energy = tail.value() / (2.0 * kPi);
    if (tail_energy > 1e-10 * s.energy_total)
        throw TruncationError("spectral energy near k_max exceeds 1e-10 of the total", 2.0 * k_max);

    s.epsilon = s.energy_total > 0.0 ? std::sqrt(std::clamp(s.energy_minus / s.energy_total, 0.0, 1.0)) : 0.0;
    return s;
}

// Largest |h_+-| on the grid relative to sqrt(2 E max(1, r)).
inline double pointwise_ceiling(const SpectrumSplit& s) {
    if (!(s.energy_total > 0.0)) throw DomainError("pointwise ceiling needs positive energy");
    double m = 0.0;
    for (std::size_t j = 0; j < s.k_grid.size(); ++j)
        m = std::max({m, std::abs(s.h_plus[j]), std::abs(s.h_minus[j])});
    return m / std::sqrt(2.0 * s.energy_total * std::max(1.0, s.support_radius));
}

// (1/2pi) int_{w0 <= |k| <= w1} (|h+|^2 + |h-|^2) dk from the sampled split,
// with linear interpolation of the density on partial cells.
inline double band_energy(const SpectrumSplit& s, double w0, double w1) {
    if (!(w0 >= 0.0) || !(w1 > w0)) throw ValidationError("band needs 0 <= w0 < w1");
    const auto& k = s.k_grid;
    if (k.size() < 2) return 0.0;
    CompensatedSum<double> acc;
    for (std::size_t j = 0; j + 1 < k.size(); ++j) {
        double a = k[j], b = k[j + 1];
        double fa = std::norm(s.h_plus[j]) + std::norm(s.h_minus[j]);
        double fb = std::norm(s.h_plus[j + 1]) + std::norm(s.h_minus[j + 1]);
        auto clip = [&](double lo, double hi) {
            double l = std::max(a, lo), h = std::min(b, hi);
            if (h <= l) return;
            auto f = [&](double x) { return fa + (fb - fa) * (x - a) / (b - a); };
            acc.add(0.5 * (f(l) + f(h)) * (h - l));
        };
        clip(w0, w1);
        clip(-w1, -w0);
    }
    return acc.value() / (2.0 * kPi);
}

}  // namespace freqloc
