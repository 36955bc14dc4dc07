#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "freqloc/bound_evaluators.hpp"
#include "freqloc/core_spectral.hpp"
#include "freqloc/error.hpp"

namespace freqloc {

struct ScenarioConfig {
    std::vector<double> zeta_list{8.0, 16.0, 32.0, 64.0};
    BumpSpec bump{};
    GridSpec grid{};
    std::vector<double> k_probe = linspace(-8.0, 8.0, 64);
    std::vector<Tier> tiers{Tier::Simple, Tier::Improved, Tier::Refined};
    double c_refined = kDefaultRefinedC;
    std::string output_dir = ".";

    void validate() const {
        if (zeta_list.empty()) throw ValidationError("zeta_list must not be empty");
        for (std::size_t i = 0; i < zeta_list.size(); ++i) {
            if (!(zeta_list[i] >= 0.0) || !std::isfinite(zeta_list[i]))
                throw ValidationError("zeta values must be finite and non-negative");
            if (i > 0 && !(zeta_list[i] > zeta_list[i - 1]))
                throw ValidationError("zeta_list must be strictly increasing");
        }
        if (k_probe.empty()) throw ValidationError("k_probe must not be empty");
        for (double k : k_probe)
            if (!std::isfinite(k)) throw ValidationError("k_probe values must be finite");
        for (Tier t : tiers)
            if (t == Tier::Series) throw ValidationError("scenario tiers are simple, improved and refined");
        if (!(c_refined > 0.0) || !std::isfinite(c_refined)) throw ValidationError("c_refined must be positive");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    double d = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') throw ValidationError("'" + key + "' expects a number, got '" + v + "'");
    return d;
}

inline std::vector<double> parse_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (auto& s : split_list(v)) out.push_back(parse_double(key, s));
    return out;
}

}  // namespace detail

// Plain "key = value" lines; '#' starts a comment.
inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) + " has no '='");
        std::string k = detail::trim(line.substr(0, eq));
        if (k.empty()) throw ValidationError("config line " + std::to_string(lineno) + " has an empty key");
        kv[k] = detail::trim(line.substr(eq + 1));
    }
    return kv;
}

inline ScenarioConfig config_from_map(const std::map<std::string, std::string>& kv) {
    ScenarioConfig c;
    for (const auto& [k, v] : kv) {
        if (k == "zeta_list") c.zeta_list = detail::parse_doubles(k, v);
        else if (k == "bump.center") c.bump.center = detail::parse_double(k, v);
        else if (k == "bump.width") c.bump.width = detail::parse_double(k, v);
        else if (k == "bump.amplitude") c.bump.amplitude = detail::parse_double(k, v);
        else if (k == "grid.L") c.grid.half_width = detail::parse_double(k, v);
        else if (k == "grid.N") {
            double n = detail::parse_double(k, v);
            if (!(n >= 1.0) || n != std::floor(n)) throw ValidationError("grid.N must be a positive integer");
            c.grid.n = std::size_t(n);
        } else if (k == "k_probe") c.k_probe = detail::parse_doubles(k, v);
        else if (k == "k_probe_range") {
            auto r = detail::parse_doubles(k, v);
            if (r.size() != 3 || r[2] < 1.0 || r[2] != std::floor(r[2]))
                throw ValidationError("k_probe_range expects 'min, max, count'");
            c.k_probe = r[2] == 1.0 ? std::vector<double>{r[0]} : linspace(r[0], r[1], std::size_t(r[2]));
        } else if (k == "tiers") {
            c.tiers.clear();
            for (auto& t : detail::split_list(v)) c.tiers.push_back(parse_tier(t));
        } else if (k == "c_refined") c.c_refined = detail::parse_double(k, v);
        else if (k == "output_dir") c.output_dir = v;
        else throw ValidationError("unknown config key '" + k + "'");
    }
    c.validate();
    return c;
}

// Reads a config file. An empty path falls back to $FREQLOC_CONFIG, then to
// the built-in defaults.
inline ScenarioConfig load_config(const std::string& path) {
    std::string p = path;
    if (p.empty()) {
        const char* env = std::getenv("FREQLOC_CONFIG");
        if (env && *env) p = env;
    }
    if (p.empty()) {
        ScenarioConfig c;
        c.validate();
        return c;
    }
    std::ifstream in(p);
    if (!in) throw ValidationError("cannot open config file '" + p + "'");
    return config_from_map(parse_key_values(in));
}

struct RunRow {
    double zeta = 0.0;
    Parity parity = Parity::Even;
    double epsilon = 0.0;         // whole datum
    double epsilon_parity = 0.0;  // parity component
    double energy_parity = 0.0;
    double k = 0.0;
    double omega = 0.0;  // r |k|
    double measured_h_plus_abs = 0.0;
    double measured_h_minus_abs = 0.0;
    double measured_lhs = 0.0;  // |k phi0_hat| + |phi1_hat|, the quantity the tiers bound
    double ceiling = 0.0;
    double bound_simple = std::nan("");
    double bound_improved = std::nan("");
    double bound_refined = std::nan("");
    // refined shape with c = 1, used for calibration
    double refined_shape = std::nan("");
    std::string violation_flags = "0000";  // constant, simple, improved, refined

    bool violated() const { return violation_flags.find('1') != std::string::npos; }
};

struct RunSummary {
    double max_ratio_constant = 0.0;
    double max_ratio_simple = 0.0;
    double max_ratio_improved = 0.0;
    double max_ratio_refined = 0.0;
    bool epsilon_monotone = true;
    std::size_t violations = 0;
};

struct RunReport {
    std::vector<RunRow> rows;
    std::vector<double> zeta;
    std::vector<double> epsilon;
    RunSummary summary;
};

namespace detail {

// Spectrum of one datum, widening k_max until the truncation check passes.
inline SpectrumSplit resolved_spectrum(const CauchyData& d, double k_max) {
    for (int attempt = 0; attempt < 6; ++attempt) {
        std::size_t count = std::size_t(std::ceil(2.0 * k_max / 0.05)) | 1u;
        try {
            return transform_spectrum(d, k_max, std::max<std::size_t>(count, 257));
        } catch (const TruncationError& e) {
            k_max = e.suggested_k_max;
        }
    }
    throw TruncationError("spectrum not resolved after widening k_max", k_max);
}

struct ZetaResult {
    double epsilon = 0.0;
    std::vector<RunRow> rows;
};

inline ZetaResult run_one_zeta(const ScenarioConfig& cfg, double zeta) {
    BumpSpec b = cfg.bump;
    b.zeta = zeta;
    CauchyData full = build_cauchy_data(b, cfg.grid);
    const double r = full.support_radius;
    const double k_max = std::max(64.0, zeta + 128.0);
    double kp = 0.0;
    for (double k : cfg.k_probe) kp = std::max(kp, std::abs(k));
    if (kp >= k_max) throw ValidationError("k_probe exceeds the transform k_max");
    ZetaResult out;
    out.epsilon = resolved_spectrum(full, k_max).epsilon;
    const BoundConfig bc{cfg.c_refined};
    auto want = [&](Tier t) { return std::find(cfg.tiers.begin(), cfg.tiers.end(), t) != cfg.tiers.end(); };
    for (Parity par : {Parity::Even, Parity::Odd}) {
        CauchyData d = project_parity(full, par);
        SpectrumSplit s = resolved_spectrum(d, k_max);
        const double E = s.energy_total;
        const double eps = s.epsilon;
        FourierEvaluator ev({&d.phi0, &d.phi1});
        for (double k : cfg.k_probe) {
            RunRow row;
            row.zeta = zeta;
            row.parity = par;
            row.epsilon = out.epsilon;
            row.epsilon_parity = eps;
            row.energy_parity = E;
            row.k = k;
            row.omega = r * std::abs(k);
            auto [hp, hm] = split_at(ev, k);
            row.measured_h_plus_abs = std::abs(hp);
            row.measured_h_minus_abs = std::abs(hm);
            row.measured_lhs = std::abs(hp + hm) + std::abs(hp - hm);
            row.ceiling = std::sqrt(2.0 * E * std::max(1.0, r));
            const double scale = std::sqrt(r * E);
            if (std::max(row.measured_h_plus_abs, row.measured_h_minus_abs) > row.ceiling)
                row.violation_flags[0] = '1';
            const double m = row.measured_lhs;
            if (eps > 0.0 && eps < 1.0) {
                if (want(Tier::Simple)) {
                    row.bound_simple = bound_eval(row.omega, eps, Tier::Simple).value * scale;
                    if (row.bound_simple < row.ceiling && m > row.bound_simple) row.violation_flags[1] = '1';
                }
                if (want(Tier::Improved)) {
                    row.bound_improved = bound_eval(row.omega, eps, Tier::Improved).value * scale;
                    if (row.bound_improved < row.ceiling && m > row.bound_improved) row.violation_flags[2] = '1';
                }
                row.refined_shape = bound_eval(row.omega, eps, Tier::Refined, 1.0, BoundConfig{1.0}).value * scale;
                if (want(Tier::Refined)) {
                    row.bound_refined = bound_eval(row.omega, eps, Tier::Refined, 1.0, bc).value * scale;
                    if (m > row.bound_refined) row.violation_flags[3] = '1';
                }
            }
            out.rows.push_back(std::move(row));
        }
    }
    return out;
}

}  // namespace detail

// Frequency-shift experiment: modulated right-moving bumps, one run per zeta.
inline RunReport run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    std::vector<std::future<detail::ZetaResult>> jobs;
    for (double z : cfg.zeta_list)
        jobs.push_back(std::async(std::launch::async, [&cfg, z] { return detail::run_one_zeta(cfg, z); }));
    RunReport rep;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        detail::ZetaResult zr = jobs[i].get();
        rep.zeta.push_back(cfg.zeta_list[i]);
        rep.epsilon.push_back(zr.epsilon);
        for (auto& r : zr.rows) rep.rows.push_back(std::move(r));
    }
    RunSummary& s = rep.summary;
    for (std::size_t i = 1; i < rep.epsilon.size(); ++i)
        if (!(rep.epsilon[i] < rep.epsilon[i - 1])) s.epsilon_monotone = false;
    for (const auto& r : rep.rows) {
        s.max_ratio_constant =
            std::max(s.max_ratio_constant, std::max(r.measured_h_plus_abs, r.measured_h_minus_abs) / r.ceiling);
        const double m = r.measured_lhs;
        if (std::isfinite(r.bound_simple)) s.max_ratio_simple = std::max(s.max_ratio_simple, m / r.bound_simple);
        if (std::isfinite(r.bound_improved))
            s.max_ratio_improved = std::max(s.max_ratio_improved, m / r.bound_improved);
        if (std::isfinite(r.bound_refined)) s.max_ratio_refined = std::max(s.max_ratio_refined, m / r.bound_refined);
        if (r.violated()) ++s.violations;
    }
    return rep;
}

// Smallest c = 1.05^j with c * shape >= 1.1 * measured on every row.
inline double calibrate_c(const std::vector<RunReport>& reports) {
    std::vector<double> zetas;
    std::size_t probes = 0;
    double worst = 0.0;
    for (const auto& rep : reports) {
        for (double z : rep.zeta)
            if (std::find(zetas.begin(), zetas.end(), z) == zetas.end()) zetas.push_back(z);
        for (const auto& r : rep.rows) {
            if (!std::isfinite(r.refined_shape)) continue;
            ++probes;
            const double m = r.measured_lhs;
            if (r.refined_shape > 0.0) worst = std::max(worst, m / r.refined_shape);
            else if (m > 0.0) throw CalibrationError("refined shape vanishes at a nonzero measurement");
        }
    }
    if (zetas.size() < 3 || probes < 20) throw CalibrationError("calibration needs >= 3 zeta values and >= 20 probes");
    const double need = 1.1 * worst;
    if (!(need > 0.0)) throw CalibrationError("no positive measurement to calibrate against");
    long j = long(std::ceil(std::log(need) / std::log(1.05)));
    double c = std::pow(1.05, double(j));
    while (c < need) c = std::pow(1.05, double(++j));
    while (std::pow(1.05, double(j - 1)) >= need) c = std::pow(1.05, double(--j));
    if (!(c < 1e6)) throw CalibrationError("no constant below 1e6 dominates the measurements");
    return c;
}

// CSV with 17 significant digits, so values re-parse bit-identically.
inline std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline const char* kScenarioHeader =
    "zeta,parity,epsilon,epsilon_parity,energy_parity,k,omega,measured_h_plus_abs,measured_h_minus_abs,measured_lhs,ceiling,"
    "bound_simple,bound_improved,bound_refined,refined_shape,violation_flags";

inline void write_scenario_csv(std::ostream& os, const RunReport& rep) {
    os << kScenarioHeader << "\n";
    for (const auto& r : rep.rows) {
        os << fmt17(r.zeta) << ',' << to_string(r.parity) << ',' << fmt17(r.epsilon) << ',' << fmt17(r.epsilon_parity)
           << ',' << fmt17(r.energy_parity) << ',' << fmt17(r.k) << ',' << fmt17(r.omega) << ','
           << fmt17(r.measured_h_plus_abs) << ',' << fmt17(r.measured_h_minus_abs) << ',' << fmt17(r.measured_lhs) << ',' << fmt17(r.ceiling) << ','
           << fmt17(r.bound_simple) << ',' << fmt17(r.bound_improved) << ',' << fmt17(r.bound_refined) << ','
           << fmt17(r.refined_shape) << ',' << r.violation_flags << "\n";
    }
}

inline std::vector<RunRow> read_scenario_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kScenarioHeader) throw ValidationError("unexpected scenario CSV header");
    std::vector<RunRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 16) throw ValidationError("scenario CSV row has " + std::to_string(f.size()) + " fields");
        auto num = [&](int i) { return detail::parse_double("csv", f[i]); };
        RunRow r;
        r.zeta = num(0);
        if (f[1] == "even") r.parity = Parity::Even;
        else if (f[1] == "odd") r.parity = Parity::Odd;
        else if (f[1] == "none") r.parity = Parity::None;
        else throw ValidationError("unknown parity '" + f[1] + "'");
        r.epsilon = num(2);
        r.epsilon_parity = num(3);
        r.energy_parity = num(4);
        r.k = num(5);
        r.omega = num(6);
        r.measured_h_plus_abs = num(7);
        r.measured_h_minus_abs = num(8);
        r.measured_lhs = num(9);
        r.ceiling = num(10);
        r.bound_simple = num(11);
        r.bound_improved = num(12);
        r.bound_refined = num(13);
        r.refined_shape = num(14);
        r.violation_flags = f[15];
        rows.push_back(std::move(r));
    }
    return rows;
}

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Static line plot (polylines and a framed axis box).
inline void write_svg(std::ostream& os, const std::string& title, const std::string& xlabel,
                      const std::string& ylabel, const std::vector<PlotSeries>& series) {
    const double W = 640, H = 420, ml = 70, mr = 150, mt = 40, mb = 50;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    if (!(x1 > x0)) { x0 -= 1; x1 += 1; }
    if (!(y1 > y0)) { y0 -= 1; y1 += 1; }
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\"" << H - mt - mb
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n";
    os << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">" << xlabel
       << "</text>\n";
    os << "<text x=\"15\" y=\"" << H / 2 << "\" transform=\"rotate(-90 15 " << H / 2
       << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
    os << "<text x=\"" << ml << "\" y=\"" << H - mb + 15 << "\" font-size=\"10\">" << fmt17(x0) << "</text>\n";
    os << "<text x=\"" << W - mr << "\" y=\"" << H - mb + 15 << "\" font-size=\"10\" text-anchor=\"end\">"
       << fmt17(x1) << "</text>\n";
    os << "<text x=\"" << ml - 5 << "\" y=\"" << H - mb << "\" font-size=\"10\" text-anchor=\"end\">" << fmt17(y0)
       << "</text>\n";
    os << "<text x=\"" << ml - 5 << "\" y=\"" << mt + 10 << "\" font-size=\"10\" text-anchor=\"end\">" << fmt17(y1)
       << "</text>\n";
    for (std::size_t j = 0; j < series.size(); ++j) {
        const auto& s = series[j];
        const char* col = colors[j % 6];
        os << "<polyline fill=\"none\" stroke=\"" << col << "\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        }
        os << "\"/>\n";
        os << "<text x=\"" << W - mr + 10 << "\" y=\"" << mt + 15 * (j + 1) << "\" fill=\"" << col
           << "\" font-size=\"11\">" << s.label << "</text>\n";
    }
    os << "</svg>\n";
}

// log10 of measured |h_+| (even part) against k, one line per zeta.
inline std::vector<PlotSeries> scenario_plot_series(const RunReport& rep) {
    std::vector<PlotSeries> out;
    for (double z : rep.zeta) {
        PlotSeries s;
        s.label = "zeta=" + fmt17(z);
        for (const auto& r : rep.rows)
            if (r.zeta == z && r.parity == Parity::Even) {
                s.x.push_back(r.k);
                s.y.push_back(std::log10(std::max(r.measured_h_plus_abs, 1e-300)));
            }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace freqloc
