#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "acceptance/suite.hpp"
#include "freqloc/bound_evaluators.hpp"
#include "freqloc/core_spectral.hpp"
#include "freqloc/goursat_kg.hpp"
#include "freqloc/harness.hpp"
#include "freqloc/spherical_modes.hpp"

using namespace freqloc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitViolation = 3;

// "-" selects stdout.
class Output {
public:
    explicit Output(const std::string& path) {
        if (path == "-" || path.empty()) return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw ValidationError("cannot open output file '" + path + "'");
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<double> omega_grid(double omega_max, int count) {
    if (!(omega_max >= 0.0)) throw ValidationError("--omega-max must be non-negative");
    if (omega_max == 0.0) return {0.0};
    if (count < 2) throw ValidationError("--omega-count must be at least 2");
    return linspace(0.0, omega_max, std::size_t(count));
}

Parity parse_parity(const std::string& s) {
    if (s == "none") return Parity::None;
    if (s == "even") return Parity::Even;
    if (s == "odd") return Parity::Odd;
    throw ValidationError("unknown parity '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frequency localization bounds for compactly supported waves"};
    app.require_subcommand(1);

    std::string out = "-";
    std::string config;

    // split
    auto* split = app.add_subcommand("split", "Cauchy data to frequency-split spectrum CSV");
    BumpSpec bump;
    GridSpec grid;
    double k_max = 256.0;
    int k_count = 10241;
    std::string parity = "none";
    split->add_option("--zeta", bump.zeta, "modulation frequency");
    split->add_option("--center", bump.center, "bump center");
    split->add_option("--width", bump.width, "bump half width");
    split->add_option("--amplitude", bump.amplitude, "bump amplitude");
    split->add_option("--half-width", grid.half_width, "grid half width L");
    split->add_option("--samples", grid.n, "grid samples N (power of two)");
    split->add_option("--k-max", k_max, "largest wave number");
    split->add_option("--k-count", k_count, "wave number samples");
    split->add_option("--parity", parity, "none, even or odd");
    split->add_option("--out", out, "output path, '-' for stdout");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "Bound tiers on an omega sweep (CSV)");
    double epsilon = 1e-3, omega_max = 2.0, energy = 1.0;
    int omega_count = 101;
    std::string tier = "all";
    double c_refined = kDefaultRefinedC;
    bounds->add_option("--epsilon", epsilon, "negative-frequency fraction")->required();
    bounds->add_option("--omega-max", omega_max, "largest omega; 0 gives a single row");
    bounds->add_option("--omega-count", omega_count, "omega samples");
    bounds->add_option("--tier", tier, "series, simple, improved, refined or all");
    bounds->add_option("--energy", energy, "total energy");
    bounds->add_option("--c-refined", c_refined, "refined-tier constant");
    bounds->add_option("--out", out, "output path, '-' for stdout");

    // goursat
    auto* goursat = app.add_subcommand("goursat", "Three-route Goursat comparison (CSV)");
    double a_min = -2.0, a_max = 0.5, b_min = 0.2, b_max = 8.0;
    int grid_count = 5;
    goursat->add_option("--a-min", a_min);
    goursat->add_option("--a-max", a_max);
    goursat->add_option("--b-min", b_min);
    goursat->add_option("--b-max", b_max);
    goursat->add_option("--count", grid_count, "samples per axis");
    goursat->add_option("--out", out, "output path, '-' for stdout");

    // scenario
    auto* scenario = app.add_subcommand("scenario", "Frequency-shift scenario report (CSV, optional SVG)");
    std::string svg;
    scenario->add_option("--config", config, "key = value config file (default: $FREQLOC_CONFIG)");
    scenario->add_option("--out", out, "output path, '-' for stdout");
    scenario->add_option("--svg", svg, "optional SVG plot path");

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate", "Calibrate the refined-tier constant on the scenario");
    calibrate->add_option("--config", config, "key = value config file (default: $FREQLOC_CONFIG)");

    // sphere
    auto* sphere = app.add_subcommand("sphere", "Angular-mode table of the shell scenario (CSV)");
    int l_max = 2;
    ShellSpec shell;
    shell.zeta = 16.0;
    shell.outgoing = true;
    double sphere_omega_max = 100.0;
    int sphere_omega_count = 2001;
    sphere->add_option("--l-max", l_max, "largest angular momentum");
    sphere->add_option("--zeta", shell.zeta, "radial modulation frequency");
    sphere->add_option("--outgoing", shell.outgoing, "outgoing velocity field (true/false)");
    sphere->add_option("--omega-max", sphere_omega_max, "largest omega of the radial spectrum");
    sphere->add_option("--omega-count", sphere_omega_count, "omega samples");
    sphere->add_option("--out", out, "output path, '-' for stdout");

    // selftest
    auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
    std::vector<int> only;
    selftest->add_option("--criterion", only, "restrict to these criteria");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*split) {
            CauchyData d = build_cauchy_data(bump, grid, parse_parity(parity));
            if (k_count < 0) throw ValidationError("--k-count must be positive");
            SpectrumSplit s = transform_spectrum(d, k_max, std::size_t(k_count));
            Output o(out);
            auto& os = o.stream();
            os << "k,re_h_plus,im_h_plus,re_h_minus,im_h_minus\n";
            for (std::size_t j = 0; j < s.k_grid.size(); ++j)
                os << fmt17(s.k_grid[j]) << ',' << fmt17(s.h_plus[j].real()) << ',' << fmt17(s.h_plus[j].imag()) << ','
                   << fmt17(s.h_minus[j].real()) << ',' << fmt17(s.h_minus[j].imag()) << '\n';
            std::cerr << "E " << fmt17(s.energy_total) << " E+ " << fmt17(s.energy_plus) << " E- "
                      << fmt17(s.energy_minus) << " epsilon " << fmt17(s.epsilon) << "\n";
            return kExitOk;
        }
        if (*bounds) {
            std::vector<Tier> tiers;
            if (tier == "all") tiers = {Tier::Series, Tier::Simple, Tier::Improved, Tier::Refined};
            else tiers = {parse_tier(tier)};
            Output o(out);
            auto& os = o.stream();
            os << "omega,epsilon,tier,value,case_tag\n";
            for (double w : omega_grid(omega_max, omega_count))
                for (Tier t : tiers) {
                    BoundValue b = bound_eval(w, epsilon, t, energy, BoundConfig{c_refined});
                    os << fmt17(b.omega) << ',' << fmt17(b.eps) << ',' << to_string(b.tier) << ',' << fmt17(b.value)
                       << ',' << to_string(b.case_tag) << '\n';
                }
            return kExitOk;
        }
        if (*goursat) {
            if (grid_count < 2) throw ValidationError("--count must be at least 2");
            Output o(out);
            auto& os = o.stream();
            os << "a,b,variant,series,bessel_integral,contour,rel_series_bessel,rel_contour_bessel\n";
            for (double a : linspace(a_min, a_max, std::size_t(grid_count)))
                for (double b : linspace(b_min, b_max, std::size_t(grid_count)))
                    for (G0Variant v : {G0Variant::Full, G0Variant::One, G0Variant::Two}) {
                        double s = goursat_eval(a, b, GoursatMethod::Series, v);
                        double q = goursat_eval(a, b, GoursatMethod::BesselIntegral, v);
                        double c = v == G0Variant::Full ? std::nan("")
                                                        : goursat_eval(a, b, GoursatMethod::Contour, v);
                        os << fmt17(a) << ',' << fmt17(b) << ',' << to_string(v) << ',' << fmt17(s) << ','
                           << fmt17(q) << ',' << fmt17(c) << ',' << fmt17(std::abs(s - q) / q) << ','
                           << fmt17(std::abs(c - q) / q) << '\n';
                    }
            return kExitOk;
        }
        if (*scenario) {
            ScenarioConfig cfg = load_config(config);
            RunReport rep = run_scenario(cfg);
            {
                Output o(out);
                write_scenario_csv(o.stream(), rep);
            }
            if (!svg.empty()) {
                std::ofstream f(svg);
                if (!f) throw ValidationError("cannot open SVG path '" + svg + "'");
                write_svg(f, "measured |h+| (even part)", "k", "log10 |h+|", scenario_plot_series(rep));
            }
            std::cerr << "violations " << rep.summary.violations << ", epsilon monotone "
                      << (rep.summary.epsilon_monotone ? "yes" : "no") << ", max refined ratio "
                      << fmt17(rep.summary.max_ratio_refined) << "\n";
            return rep.summary.violations == 0 ? kExitOk : kExitViolation;
        }
        if (*calibrate) {
            ScenarioConfig cfg = load_config(config);
            RunReport rep = run_scenario(cfg);
            std::cout << "c_refined = " << fmt17(calibrate_c({rep})) << "\n";
            return kExitOk;
        }
        if (*sphere) {
            if (l_max < 0) throw ValidationError("--l-max must be non-negative");
            Output o(out);
            auto& os = o.stream();
            os << "l,m,energy,energy_plus,energy_minus,epsilon,d_l,max_mode_ratio\n";
            for (int l = 0; l <= l_max; ++l) {
                AngularMode md =
                    radial_spectrum(shell_mode(l, 0, shell), sphere_omega_max, std::size_t(sphere_omega_count));
                double ratio = std::nan("");
                if (md.epsilon > 0.0 && md.epsilon < 1.0) {
                    const double r = md.support_radius;
                    ratio = 0.0;
                    for (std::size_t j = 0; j < md.omega.size(); ++j) {
                        if (r * md.omega[j] > 100.0) break;
                        double lhs = std::abs(md.h_plus[j] + md.h_minus[j]) + std::abs(md.h_plus[j] - md.h_minus[j]);
                        ratio = std::max(ratio, lhs / mode_bound(r * md.omega[j], md.epsilon, l, r * r * r * md.energy).value);
                    }
                }
                os << l << ',' << md.m << ',' << fmt17(md.energy) << ',' << fmt17(md.energy_plus) << ','
                   << fmt17(md.energy_minus) << ',' << fmt17(md.epsilon) << ',' << fmt17(d_l_const(l)) << ','
                   << fmt17(ratio) << '\n';
            }
            return kExitOk;
        }
        if (*selftest) return acceptance::run_all(std::cout, only) ? kExitOk : kExitViolation;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::Validation:
            case ErrorKind::Usage:
            case ErrorKind::Domain: return kExitValidation;
            default: return kExitFailure;
        }
    }
    return kExitFailure;
}
