// magedge: semiclassical edge-state spectra of the 2D magnetic Robin
// Laplacian, computed through the effective boundary model and validated
// against exact disk spectra.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "magedge/io.hpp"

namespace fs = std::filesystem;
using namespace magedge;
using degennes::RobinParameter;
using io::fmt;
using io::json;

namespace {

struct GeometryOpts {
    double disk_R = 0.0;
    std::string ellipse;  // "a:b"
    std::string rcos;     // "j:amp[,j:amp...]"
    std::string rsin;
    int M = 1024;

    bool is_disk() const { return disk_R > 0; }

    geometry::DomainGeometry build() const {
        const int n = (disk_R > 0) + !ellipse.empty() +
                      (!rcos.empty() || !rsin.empty());
        if (n != 1)
            throw CLI::ValidationError(
                "geometry", "give exactly one of --disk, --ellipse, --rcos/--rsin");
        if (disk_R > 0) return geometry::disk(disk_R, M);
        if (!ellipse.empty()) {
            const auto colon = ellipse.find(':');
            if (colon == std::string::npos)
                throw CLI::ValidationError("--ellipse", "expected a:b");
            return geometry::ellipse(std::stod(ellipse.substr(0, colon)),
                                     std::stod(ellipse.substr(colon + 1)), M);
        }
        geometry::RadialFourier rf;
        auto parse_terms = [](const std::string& spec, std::vector<double>& amp) {
            std::size_t pos = 0;
            while (pos < spec.size()) {
                const auto comma = spec.find(',', pos);
                const std::string term = spec.substr(pos, comma - pos);
                const auto colon = term.find(':');
                if (colon == std::string::npos)
                    throw CLI::ValidationError("--rcos/--rsin", "expected j:amp");
                const int j = std::stoi(term.substr(0, colon));
                const double a = std::stod(term.substr(colon + 1));
                if (j < 1) throw CLI::ValidationError("--rcos/--rsin", "j >= 1");
                if (static_cast<int>(amp.size()) < j) amp.resize(j, 0.0);
                amp[j - 1] = a;
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
        };
        if (!rcos.empty()) parse_terms(rcos, rf.cos_amp);
        if (!rsin.empty()) parse_terms(rsin, rf.sin_amp);
        return geometry::custom_from_radius(rf, M);
    }

    std::string describe() const {
        if (disk_R > 0) return "disk:" + fmt(disk_R);
        if (!ellipse.empty()) return "ellipse:" + ellipse;
        return "radial cos[" + rcos + "] sin[" + rsin + "]";
    }
};

void add_geometry_flags(CLI::App* cmd, GeometryOpts& g) {
    cmd->add_option("--disk", g.disk_R, "disk of this radius");
    cmd->add_option("--ellipse", g.ellipse, "ellipse semi-axes a:b");
    cmd->add_option("--rcos", g.rcos,
                    "radial curve r = 1 + sum amp cos(j phi), terms j:amp");
    cmd->add_option("--rsin", g.rsin, "sine terms j:amp of the radial curve");
    cmd->add_option("--grid-M", g.M, "boundary samples (power of two)");
}

RobinParameter parse_gamma(const std::string& s) {
    if (s == "dirichlet" || s == "inf" || s == "+inf")
        return RobinParameter::dirichlet();
    return RobinParameter(std::stod(s));
}

std::pair<double, double> parse_window(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--window", "expected a:b");
    const std::string lo = s.substr(0, colon);
    const double a = (lo == "-inf")
                         ? -std::numeric_limits<double>::infinity()
                         : std::stod(lo);
    return {a, std::stod(s.substr(colon + 1))};
}

std::vector<int> parse_index_list(const std::string& s) {
    // "1..4" or "1,2,3"
    std::vector<int> out;
    const auto dots = s.find("..");
    if (dots != std::string::npos) {
        const int lo = std::stoi(s.substr(0, dots));
        const int hi = std::stoi(s.substr(dots + 2));
        for (int k = lo; k <= hi; ++k) out.push_back(k);
        return out;
    }
    std::size_t pos = 0;
    while (pos < s.size()) {
        const auto comma = s.find(',', pos);
        out.push_back(std::stoi(s.substr(pos, comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

fs::path ensure_outdir(const std::string& out) {
    fs::path dir = out;
    fs::create_directories(dir);
    return dir;
}

std::string default_outdir() {
    if (const char* env = std::getenv("MAGEDGE_OUTDIR")) return env;
    return ".";
}

void echo_config(io::Manifest& man, const std::string& config_path) {
    if (config_path.empty()) return;
    std::ifstream in(config_path);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) man.note("config: " + line);
}

int run_dispersion(const std::string& gamma_s, const std::string& n_spec,
                   const std::string& sigma_spec, int samples,
                   const std::string& out, const std::string& config) {
    const RobinParameter gamma = parse_gamma(gamma_s);
    const auto [lo, hi] = parse_window(sigma_spec);
    const auto ns = parse_index_list(n_spec);
    const fs::path dir = ensure_outdir(out);

    io::Manifest man("dispersion", dir);
    man.arg("gamma", gamma.str());
    man.arg("n", n_spec);
    man.arg("sigma", sigma_spec);
    man.arg("samples", static_cast<double>(samples));
    echo_config(man, config);

    json extrema = json::array();
    std::vector<std::string> failures;
    for (int n : ns) {
        try {
            degennes::DispersionBranch br =
                degennes::dispersion_branch(gamma, n, lo, hi, samples);
            const fs::path file =
                dir / ("dispersion_gamma" + gamma.str() + "_n" +
                       std::to_string(n) + ".csv");
            io::CsvWriter csv(file);
            csv.meta("gamma", gamma.str());
            csv.meta("n", std::to_string(n));
            if (!br.warning.empty()) csv.meta("warning", br.warning);
            csv.header({"sigma", "mu"});
            for (int i = 0; i < br.sigmas.size(); ++i)
                csv.row({br.sigmas(i), br.mus(i)});
            csv.close();
            man.output(file);
            if (!gamma.is_dirichlet()) {
                degennes::BranchExtremum ext = degennes::find_minimum(gamma, n);
                extrema.push_back(io::to_json(ext));
            }
        } catch (const std::exception& e) {
            failures.push_back("n=" + std::to_string(n) + ": " + e.what());
        }
    }
    if (!gamma.is_dirichlet()) {
        const fs::path file = dir / ("extrema_gamma" + gamma.str() + ".json");
        io::write_json(file, extrema);
        man.output(file);
    }
    for (const auto& f : failures) {
        std::cerr << "dispersion failed for " << f << "\n";
        man.note("FAILED " + f);
    }
    man.write();
    return failures.empty() ? 0 : 1;
}

int run_minima(const std::string& gamma_s, const std::string& n_spec,
               bool with_checks, const std::string& out,
               const std::string& config) {
    const RobinParameter gamma = parse_gamma(gamma_s);
    const fs::path dir = ensure_outdir(out);
    io::Manifest man("minima", dir);
    man.arg("gamma", gamma.str());
    man.arg("n", n_spec);
    echo_config(man, config);

    json arr = json::array();
    for (int n : parse_index_list(n_spec)) {
        degennes::BranchExtremum ext = degennes::find_minimum(gamma, n);
        json j = io::to_json(ext);
        j["theta_minus_xi2_plus_gamma2"] =
            ext.theta - (ext.xi * ext.xi - ext.gamma * ext.gamma);
        if (with_checks) {
            j["dauge_helffer_residual"] =
                degennes::dauge_helffer_residual(gamma, n, ext);
            const degennes::MomentCheck mc = degennes::moment_check(gamma, n, ext);
            j["moment_m1"] = mc.m1;
            j["moment_m3_residual"] = mc.m3_residual;
        }
        arr.push_back(j);
    }
    const fs::path file = dir / ("minima_gamma" + gamma.str() + ".json");
    io::write_json(file, arr);
    man.output(file);
    man.write();
    return 0;
}

int run_ck(const std::string& gamma_s, int k, const std::string& sigma_spec,
           int samples, const std::string& out, const std::string& config) {
    const RobinParameter gamma = parse_gamma(gamma_s);
    const auto [lo, hi] = parse_window(sigma_spec);
    const fs::path dir = ensure_outdir(out);
    io::Manifest man("ck", dir);
    man.arg("gamma", gamma.str());
    man.arg("k", static_cast<double>(k));
    man.arg("sigma", sigma_spec);
    echo_config(man, config);

    const fs::path file =
        dir / ("ck_gamma" + gamma.str() + "_k" + std::to_string(k) + ".csv");
    io::CsvWriter csv(file);
    csv.meta("gamma", gamma.str());
    csv.meta("k", std::to_string(k));
    csv.header({"sigma", "C"});
    const degennes::HalfLineGrid grid = degennes::HalfLineGrid::for_sigma(
        std::max(std::abs(lo), std::abs(hi)), 2.5e-3);
    for (int i = 0; i < samples; ++i) {
        const double s = lo + (hi - lo) * i / (samples - 1.0);
        csv.row({s, degennes::compute_C(gamma, s, k, grid,
                                        degennes::SolvePolicy::raw)});
    }
    csv.close();
    man.output(file);
    man.write();
    return 0;
}

int run_gamma0(int k, const std::string& out, const std::string& config) {
    const fs::path dir = ensure_outdir(out);
    io::Manifest man("gamma0", dir);
    man.arg("k", static_cast<double>(k));
    echo_config(man, config);
    const double g0 = degennes::find_gamma0(k);
    const degennes::BranchExtremum ext =
        degennes::find_minimum(RobinParameter(g0), k);
    const double c_at = degennes::compute_C(RobinParameter(g0), ext.xi, k);
    json j{{"k", k}, {"gamma0", g0}, {"C_at_threshold", c_at}};
    const fs::path file = dir / ("gamma0_k" + std::to_string(k) + ".json");
    io::write_json(file, j);
    man.output(file);
    man.write();
    return 0;
}

int run_spectrum(const GeometryOpts& gopts, const std::string& gamma_s,
                 double h, const std::string& window_spec,
                 const std::string& method, double pad, const std::string& out,
                 const std::string& config) {
    const RobinParameter gamma = parse_gamma(gamma_s);
    const auto [a, b] = parse_window(window_spec);
    const fs::path dir = ensure_outdir(out);
    io::Manifest man("spectrum", dir);
    man.arg("geometry", gopts.describe());
    man.arg("gamma", gamma.str());
    man.arg("h", h);
    man.arg("window", window_spec);
    man.arg("method", method);
    man.arg("pad", pad);
    echo_config(man, config);

    const geometry::DomainGeometry geom = gopts.build();
    std::map<std::string, std::string> meta{{"gamma", gamma.str()},
                                            {"h", fmt(h)},
                                            {"window", window_spec},
                                            {"method", method}};

    if (method == "disk") {
        if (!gopts.is_disk())
            throw CLI::ValidationError("--method",
                                       "disk method requires --disk geometry");
        diskmode::RadialSpectrum rs = diskmode::window_spectrum(
            gopts.disk_R, h, gamma, a - pad, b + pad);
        const fs::path csv = dir / "spectrum_disk.csv";
        io::write_radial_csv(csv, rs, h, meta);
        const fs::path js = dir / "spectrum_disk.json";
        io::write_json(js, io::to_json(rs));
        man.output(csv);
        man.output(js);
        man.write();
        return 0;
    }

    degennes::WindowOptions wopts;
    wopts.allow_critical = true;
    effective::EffectiveModel model(gamma, geom, a, b, std::max(h, 0.01), wopts);
    effective::EffectiveSpectrum sp =
        method == "matrix" ? effective::matrix_spectrum(model, h, 0.0, pad)
                           : effective::leading_spectrum(model, h, 0.0, pad);
    const fs::path csv = dir / ("spectrum_" + method + ".csv");
    io::write_spectrum_csv(csv, sp, meta);
    const fs::path js = dir / ("spectrum_" + method + ".json");
    json j = io::to_json(sp);
    j["window_decomposition"] = io::to_json(model.window());
    j["geometry"] = io::geometry_summary(geom);
    io::write_json(js, j);
    man.output(csv);
    man.output(js);
    man.write();
    return 0;
}

int run_compare(const std::string& file_a, const std::string& file_b,
                const std::string& pad_a, const std::string& pad_b,
                const std::string& out, const std::string& config) {
    const fs::path dir = ensure_outdir(out);
    io::Manifest man("compare", dir);
    man.arg("a", file_a);
    man.arg("b", file_b);
    echo_config(man, config);

    auto load = [](const std::string& f) {
        std::vector<double> v = io::read_csv_column(f, "lambda");
        return Eigen::Map<Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()))
            .eval();
    };
    const Eigen::VectorXd a = load(file_a);
    const Eigen::VectorXd b = load(file_b);
    const Eigen::VectorXd ap = pad_a.empty() ? a : load(pad_a);
    const Eigen::VectorXd bp = pad_b.empty() ? b : load(pad_b);
    effective::SpectraDistance d = effective::compare_spectra(a, ap, b, bp);
    const fs::path file = dir / "compare.json";
    io::write_json(file, io::to_json(d));
    man.output(file);
    man.write();
    std::cout << "hausdorff=" << fmt(d.hausdorff)
              << " padded=" << fmt(d.padded_hausdorff)
              << " counts=" << d.count_a << "/" << d.count_b << "\n";
    return 0;
}

int run_weyl(const GeometryOpts& gopts, const std::string& gamma_s, double h,
             const std::string& window_spec, const std::string& out,
             const std::string& config) {
    const RobinParameter gamma = parse_gamma(gamma_s);
    const auto [a, b] = parse_window(window_spec);
    const fs::path dir = ensure_outdir(out);
    io::Manifest man("weyl", dir);
    man.arg("geometry", gopts.describe());
    man.arg("gamma", gamma.str());
    man.arg("h", h);
    man.arg("window", window_spec);
    echo_config(man, config);

    effective::EffectiveModel model(gamma, gopts.build(), a, b,
                                    std::max(h, 0.01));
    effective::WeylCount wc = effective::weyl_count(model, h);
    const fs::path file = dir / "weyl.json";
    io::write_json(file, io::to_json(wc));
    man.output(file);
    man.write();
    std::cout << "count=" << wc.count << " first_term=" << fmt(wc.first_term)
              << " second_term=" << fmt(wc.second_term) << "\n";
    return 0;
}

int run_oscillate(const GeometryOpts& gopts, const std::string& gamma_s,
                  const std::string& h_range, const std::string& window_spec,
                  int samples, const std::string& out,
                  const std::string& config) {
    const RobinParameter gamma = parse_gamma(gamma_s);
    const auto [h_lo, h_hi] = parse_window(h_range);
    const auto [a, b] = parse_window(window_spec);
    const fs::path dir = ensure_outdir(out);
    io::Manifest man("oscillate", dir);
    man.arg("geometry", gopts.describe());
    man.arg("gamma", gamma.str());
    man.arg("h_range", h_range);
    man.arg("window", window_spec);
    echo_config(man, config);

    effective::EffectiveModel model(gamma, gopts.build(), a, b, h_hi);
    effective::BranchDiagram bd =
        effective::trace_branches(model, h_lo, h_hi, samples);

    const fs::path csv = dir / "branches.csv";
    io::CsvWriter w(csv);
    w.meta("gamma", gamma.str());
    w.meta("window", window_spec);
    w.header({"q", "ell", "h", "lambda", "lambda_over_h"});
    for (const auto& c : bd.curves)
        for (std::size_t i = 0; i < c.hs.size(); ++i)
            w.row_mixed({std::to_string(c.q), std::to_string(c.ell),
                         fmt(c.hs[i]), fmt(c.values[i]),
                         fmt(c.values[i] / c.hs[i])});
    w.close();
    const fs::path js = dir / "branch_diagram.json";
    io::write_json(js, io::to_json(bd));
    man.output(csv);
    man.output(js);
    man.write();
    std::cout << "curves=" << bd.curves.size()
              << " crossings=" << bd.crossings.size() << "\n";
    return 0;
}

int run_lowlying(const GeometryOpts& gopts, const std::string& gamma_s,
                 double h, int j_max, bool crosscheck, double gamma0_in,
                 const std::string& out, const std::string& config) {
    const RobinParameter gamma = parse_gamma(gamma_s);
    const fs::path dir = ensure_outdir(out);
    io::Manifest man("lowlying", dir);
    man.arg("geometry", gopts.describe());
    man.arg("gamma", gamma.str());
    man.arg("h", h);
    man.arg("jmax", static_cast<double>(j_max));
    echo_config(man, config);

    std::optional<double> g0;
    if (gamma0_in > 0) g0 = gamma0_in;
    const geometry::DomainGeometry geom = gopts.build();
    json j;
    if (crosscheck) {
        effective::HarmonicCrosscheck hc =
            effective::harmonic_crosscheck(gamma, geom, h, j_max, g0);
        j = io::to_json(hc);
    } else {
        effective::LowLyingLadder ll =
            effective::lowlying_spectrum(gamma, geom, h, j_max, g0);
        j = io::to_json(ll);
    }
    const fs::path file = dir / "lowlying.json";
    io::write_json(file, j);
    man.output(file);
    man.write();
    return 0;
}

int run_disk_validate(double R, const std::string& gamma_s, double h,
                      const std::string& window_spec, const std::string& out,
                      const std::string& config) {
    const RobinParameter gamma = parse_gamma(gamma_s);
    const auto [a, b] = parse_window(window_spec);
    const fs::path dir = ensure_outdir(out);
    io::Manifest man("disk-validate", dir);
    man.arg("R", R);
    man.arg("gamma", gamma.str());
    man.arg("h", h);
    man.arg("window", window_spec);
    man.tolerance("pad_units_of_h2", 25.0);
    echo_config(man, config);

    degennes::WindowOptions wopts;
    wopts.allow_critical = true;
    effective::EffectiveModel model(gamma, geometry::disk(R), a, b,
                                    std::max(h, 0.01), wopts);
    const double pad = 25.0 * h;  // symbol-unit pad = 25 h^2 in lambda
    effective::EffectiveSpectrum lead = effective::leading_spectrum(model, h);
    effective::EffectiveSpectrum lead_pad =
        effective::leading_spectrum(model, h, 0.0, pad);

    double hull_lo = std::numeric_limits<double>::infinity(), hull_hi = -hull_lo;
    for (const auto& c : model.window().components) {
        hull_lo = std::min(hull_lo, c.sigma_lo);
        hull_hi = std::max(hull_hi, c.sigma_hi);
    }
    diskmode::RadialSpectrum exact =
        diskmode::window_spectrum(R, h, gamma, a, b, hull_lo, hull_hi);
    diskmode::RadialSpectrum exact_pad = diskmode::window_spectrum(
        R, h, gamma, a - pad, b + pad, hull_lo - 0.3, hull_hi + 0.3);

    effective::SpectraDistance d = effective::compare_spectra(
        exact.lambdas(), exact_pad.lambdas(), lead.lambdas(), lead_pad.lambdas());

    json j{{"distance", io::to_json(d)},
           {"exact", io::to_json(exact)},
           {"leading", io::to_json(lead)},
           {"hausdorff_over_h2", d.padded_hausdorff / (h * h)}};
    if (model.window().regular) {
        effective::WeylCount wc = effective::weyl_count(model, h);
        j["weyl"] = io::to_json(wc);
    }
    const fs::path file = dir / "disk_validate.json";
    io::write_json(file, j);
    const fs::path csv_e = dir / "disk_exact.csv";
    io::write_radial_csv(csv_e, exact, h,
                         {{"gamma", gamma.str()}, {"h", fmt(h)}});
    const fs::path csv_l = dir / "disk_leading.csv";
    io::write_spectrum_csv(csv_l, lead,
                           {{"gamma", gamma.str()}, {"h", fmt(h)}});
    man.output(file);
    man.output(csv_e);
    man.output(csv_l);
    man.write();
    std::cout << "exact=" << d.count_a << " leading=" << d.count_b
              << " padded_hausdorff_over_h2=" << fmt(d.padded_hausdorff / (h * h))
              << "\n";
    return 0;
}

int run_agmon(double R, const std::string& gamma_s, double h,
              const std::string& window_spec, const std::string& out,
              const std::string& config) {
    const RobinParameter gamma = parse_gamma(gamma_s);
    const auto [a, b] = parse_window(window_spec);
    const fs::path dir = ensure_outdir(out);
    io::Manifest man("agmon", dir);
    man.arg("R", R);
    man.arg("gamma", gamma.str());
    man.arg("h", h);
    man.arg("window", window_spec);
    echo_config(man, config);

    diskmode::RadialSpectrum rs = diskmode::window_spectrum(R, h, gamma, a, b);
    json stats = json::array();
    const fs::path csv_path = dir / "agmon_profiles.csv";
    io::CsvWriter csv(csv_path);
    csv.meta("gamma", gamma.str());
    csv.meta("h", fmt(h));
    csv.header({"m", "j", "depth", "mass"});
    for (const auto& e : rs.entries) {
        diskmode::RadialProblem p{R, h, gamma, e.m, 3000};
        diskmode::RadialModes modes =
            diskmode::radial_eigs(p, h * a, h * b, true);
        for (int j = 0; j < modes.lambdas.size(); ++j) {
            if (j + 1 != e.j) continue;
            diskmode::LocalizationProfile prof =
                diskmode::localization_profile(p, modes.g.col(j));
            for (int k = 0; k < prof.depths.size(); ++k)
                csv.row_mixed({std::to_string(e.m), std::to_string(e.j),
                               fmt(prof.depths(k)), fmt(prof.mass(k))});
            double mass10 = 1.0;
            for (int k = 0; k < prof.depths.size(); ++k)
                if (prof.depths(k) <= 10.0 * std::sqrt(h) + 1e-12)
                    mass10 = prof.mass(k);
            stats.push_back(json{{"m", e.m},
                                 {"j", e.j},
                                 {"lambda", e.lambda},
                                 {"alpha_hat", prof.alpha_hat},
                                 {"mass_within_10_sqrt_h", mass10}});
        }
    }
    csv.close();
    const fs::path js = dir / "agmon.json";
    io::write_json(js, stats);
    man.output(csv_path);
    man.output(js);
    man.write();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "magedge: edge-state spectra of the 2D magnetic Robin Laplacian via "
        "the one-dimensional boundary model, with exact disk validation"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");
    std::string out = default_outdir();
    std::string config;
    app.add_option("--out", out, "output directory (default $MAGEDGE_OUTDIR or .)")
        ->capture_default_str();
    app.set_config("--config", "",
                   "flat key=value configuration file, echoed into the manifest");

    // dispersion
    auto* disp = app.add_subcommand("dispersion", "sample dispersion curves");
    disp->set_help_flag("--help", "print help");
    std::string d_gamma = "0", d_n = "1", d_sigma = "-2:6";
    int d_samples = 400;
    disp->add_option("--gamma", d_gamma, "Robin parameter or 'dirichlet'");
    disp->add_option("--n", d_n, "branch indices, e.g. 1..4 or 1,3");
    disp->add_option("--sigma", d_sigma, "sigma range lo:hi");
    disp->add_option("--samples", d_samples, "sample count");

    // minima
    auto* mini = app.add_subcommand("minima", "branch minima xi, Theta, mu''");
    mini->set_help_flag("--help", "print help");
    std::string m_gamma = "0", m_n = "1";
    bool m_checks = false;
    mini->add_option("--gamma", m_gamma, "Robin parameter");
    mini->add_option("--n", m_n, "branch indices");
    mini->add_flag("--checks", m_checks,
                   "include Dauge-Helffer and moment residuals");

    // ck
    auto* ck = app.add_subcommand("ck", "curvature-coupling coefficient C_k");
    ck->set_help_flag("--help", "print help");
    std::string c_gamma = "0", c_sigma = "-1:3";
    int c_k = 1, c_samples = 200;
    ck->add_option("--gamma", c_gamma, "Robin parameter or 'dirichlet'");
    ck->add_option("--k", c_k, "curve index");
    ck->add_option("--sigma", c_sigma, "sigma range lo:hi");
    ck->add_option("--samples", c_samples, "sample count");

    // gamma0
    auto* g0 = app.add_subcommand("gamma0", "Robin threshold gamma_0^{[k-1]}");
    g0->set_help_flag("--help", "print help");
    int g_k = 1;
    g0->add_option("--k", g_k, "curve index");

    // spectrum
    auto* spec = app.add_subcommand("spectrum", "window spectrum");
    spec->set_help_flag("--help", "print help");
    GeometryOpts s_geom;
    add_geometry_flags(spec, s_geom);
    std::string s_gamma = "0", s_window = "0.7:0.9", s_method = "leading";
    double s_h = 0.05, s_pad = 0.0;
    spec->add_option("--gamma", s_gamma, "Robin parameter or 'dirichlet'");
    spec->add_option("--h", s_h, "semiclassical parameter");
    spec->add_option("--window", s_window, "window a:b in units of h");
    spec->add_option("--method", s_method, "leading | matrix | disk");
    spec->add_option("--pad", s_pad, "window dilation in units of h");

    // compare
    auto* cmp = app.add_subcommand("compare", "Hausdorff report of two spectra");
    cmp->set_help_flag("--help", "print help");
    std::string a_file, b_file, a_pad, b_pad;
    cmp->add_option("--a", a_file, "first spectrum CSV")->required();
    cmp->add_option("--b", b_file, "second spectrum CSV")->required();
    cmp->add_option("--a-pad", a_pad, "dilated-window CSV partner of --a");
    cmp->add_option("--b-pad", b_pad, "dilated-window CSV partner of --b");

    // weyl
    auto* weyl = app.add_subcommand("weyl", "two-term eigenvalue count");
    weyl->set_help_flag("--help", "print help");
    GeometryOpts w_geom;
    add_geometry_flags(weyl, w_geom);
    std::string w_gamma = "0", w_window = "0.7:0.9";
    double w_h = 0.05;
    weyl->add_option("--gamma", w_gamma, "Robin parameter or 'dirichlet'");
    weyl->add_option("--h", w_h, "semiclassical parameter");
    weyl->add_option("--window", w_window, "window a:b");

    // oscillate
    auto* osc = app.add_subcommand("oscillate", "semiclassical branch diagram");
    osc->set_help_flag("--help", "print help");
    GeometryOpts o_geom;
    add_geometry_flags(osc, o_geom);
    std::string o_gamma = "-1", o_hrange = "0.02:0.03", o_window = "";
    int o_samples = 600;
    osc->add_option("--gamma", o_gamma, "Robin parameter (real)");
    osc->add_option("--h-range", o_hrange, "h interval lo:hi");
    osc->add_option("--window", o_window, "window a:b below the first Landau level")
        ->required();
    osc->add_option("--samples", o_samples, "h samples");

    // lowlying
    auto* low = app.add_subcommand("lowlying", "three-term low-lying ladder");
    low->set_help_flag("--help", "print help");
    GeometryOpts l_geom;
    add_geometry_flags(low, l_geom);
    std::string l_gamma = "0";
    double l_h = 0.01, l_gamma0 = 0.0;
    int l_jmax = 3;
    bool l_cross = false;
    low->add_option("--gamma", l_gamma, "Robin parameter (real)");
    low->add_option("--h", l_h, "semiclassical parameter");
    low->add_option("--jmax", l_jmax, "ladder depth");
    low->add_flag("--crosscheck", l_cross, "diagonalize the matrix model too");
    low->add_option("--gamma0", l_gamma0,
                    "precomputed threshold gamma_0 (skips its computation)");

    // disk-validate
    auto* dv = app.add_subcommand("disk-validate",
                                  "exact disk spectrum against the model");
    dv->set_help_flag("--help", "print help");
    double v_R = 1.0, v_h = 0.05;
    std::string v_gamma = "0", v_window = "0.7:0.9";
    dv->add_option("--R", v_R, "disk radius");
    dv->add_option("--gamma", v_gamma, "Robin parameter or 'dirichlet'");
    dv->add_option("--h", v_h, "semiclassical parameter");
    dv->add_option("--window", v_window, "window a:b");

    // agmon
    auto* ag = app.add_subcommand("agmon", "boundary localization profiles");
    ag->set_help_flag("--help", "print help");
    double ag_R = 1.0, ag_h = 0.05;
    std::string ag_gamma = "0", ag_window = "0.7:0.9";
    ag->add_option("--R", ag_R, "disk radius");
    ag->add_option("--gamma", ag_gamma, "Robin parameter or 'dirichlet'");
    ag->add_option("--h", ag_h, "semiclassical parameter");
    ag->add_option("--window", ag_window, "window a:b");

    CLI11_PARSE(app, argc, argv);
    if (app.get_config_ptr() && app.get_config_ptr()->count() > 0)
        config = app.get_config_ptr()->as<std::string>();

    try {
        if (disp->parsed())
            return run_dispersion(d_gamma, d_n, d_sigma, d_samples, out, config);
        if (mini->parsed()) return run_minima(m_gamma, m_n, m_checks, out, config);
        if (ck->parsed())
            return run_ck(c_gamma, c_k, c_sigma, c_samples, out, config);
        if (g0->parsed()) return run_gamma0(g_k, out, config);
        if (spec->parsed())
            return run_spectrum(s_geom, s_gamma, s_h, s_window, s_method, s_pad,
                                out, config);
        if (cmp->parsed())
            return run_compare(a_file, b_file, a_pad, b_pad, out, config);
        if (weyl->parsed())
            return run_weyl(w_geom, w_gamma, w_h, w_window, out, config);
        if (osc->parsed())
            return run_oscillate(o_geom, o_gamma, o_hrange, o_window, o_samples,
                                 out, config);
        if (low->parsed())
            return run_lowlying(l_geom, l_gamma, l_h, l_jmax, l_cross, l_gamma0,
                                out, config);
        if (dv->parsed())
            return run_disk_validate(v_R, v_gamma, v_h, v_window, out, config);
        if (ag->parsed())
            return run_agmon(ag_R, ag_gamma, ag_h, ag_window, out, config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
