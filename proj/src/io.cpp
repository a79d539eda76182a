#include "magedge/io.hpp"

#include <cstdio>
#include <fstream>

namespace magedge::io {

namespace {
constexpr const char* kFormatVersion = "1";
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::filesystem::path path) : path_(std::move(path)) {}

void CsvWriter::meta(const std::string& key, const std::string& value) {
    meta_ += "# " + key + "=" + value + "\n";
}

void CsvWriter::header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
        body_ += cols[i];
        body_ += (i + 1 < cols.size()) ? "," : "\n";
    }
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        body_ += fmt(values[i]);
        body_ += (i + 1 < values.size()) ? "," : "\n";
    }
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        body_ += values[i];
        body_ += (i + 1 < values.size()) ? "," : "\n";
    }
}

void CsvWriter::close() {
    if (closed_) return;
    std::ofstream out(path_, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path_.string());
    out << meta_ << body_;
    closed_ = true;
}

CsvWriter::~CsvWriter() {
    try {
        close();
    } catch (...) {
    }
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

Manifest::Manifest(std::string command, std::filesystem::path outdir)
    : command_(std::move(command)), outdir_(std::move(outdir)) {
    j_["command"] = command_;
    j_["format_version"] = kFormatVersion;
    j_["args"] = json::object();
    j_["tolerances"] = json::object();
    j_["outputs"] = json::array();
    j_["notes"] = json::array();
}

void Manifest::arg(const std::string& key, const std::string& value) {
    j_["args"][key] = value;
}
void Manifest::arg(const std::string& key, double value) {
    j_["args"][key] = value;
}
void Manifest::tolerance(const std::string& key, double value) {
    j_["tolerances"][key] = value;
}
void Manifest::output(const std::filesystem::path& file) {
    j_["outputs"].push_back(file.filename().string());
}
void Manifest::note(const std::string& text) { j_["notes"].push_back(text); }

void Manifest::write() const {
    write_json(outdir_ / (command_ + "_manifest.json"), j_);
}

json to_json(const degennes::BranchExtremum& e) {
    return json{{"n", e.n},
                {"gamma", e.gamma},
                {"xi", e.xi},
                {"theta", e.theta},
                {"mu2", e.mu2}};
}

json to_json(const degennes::WindowDecomposition& wd) {
    json comps = json::array();
    for (const auto& c : wd.components) {
        comps.push_back(json{{"k", c.k},
                             {"q", c.q},
                             {"sigma_lo", c.sigma_lo},
                             {"sigma_hi", c.sigma_hi},
                             {"increasing", c.increasing},
                             {"monotone", c.monotone},
                             {"alpha", c.alpha},
                             {"beta", c.beta}});
    }
    json exts = json::array();
    for (const auto& e : wd.extrema) exts.push_back(to_json(e));
    return json{{"a", wd.a},
                {"b", wd.b},
                {"gamma", wd.gamma.str()},
                {"n_target", wd.n_target},
                {"n_curves", wd.n_curves},
                {"regular", wd.regular},
                {"components", comps},
                {"extrema", exts}};
}

json to_json(const effective::EffectiveSpectrum& sp) {
    json entries = json::array();
    for (const auto& e : sp.entries) {
        entries.push_back(
            json{{"k", e.k},
                 {"q", e.q},
                 {"ell", e.ell},
                 {"sigma", e.sigma},
                 {"lambda", e.lambda},
                 {"order", e.order == effective::EntryOrder::leading2
                               ? "leading2"
                               : "matrix"}});
    }
    return json{{"window_lo", sp.window_lo},
                {"window_hi", sp.window_hi},
                {"count", sp.entries.size()},
                {"entries", entries}};
}

json to_json(const effective::WeylCount& wc) {
    return json{{"count", wc.count},
                {"first_term", wc.first_term},
                {"second_term", wc.second_term}};
}

json to_json(const effective::BranchDiagram& bd) {
    json crossings = json::array();
    for (const auto& c : bd.crossings) {
        crossings.push_back(json{{"h", c.h},
                                 {"ell_rising", c.ell_rising},
                                 {"ell_falling", c.ell_falling},
                                 {"lambda", c.lambda},
                                 {"gap_rate", c.gap_rate}});
    }
    return json{{"n_curves", bd.curves.size()},
                {"crossings", crossings},
                {"c_hat", bd.c_hat},
                {"min_separation_ratio", bd.min_separation_ratio},
                {"q1_increasing_in_h", bd.q1_increasing_in_h}};
}

json to_json(const effective::LowLyingLadder& ll) {
    json lambdas = json::array();
    for (int j = 0; j < ll.lambdas.size(); ++j) lambdas.push_back(ll.lambdas(j));
    return json{{"gamma0", ll.gamma0},
                {"epsilon", ll.epsilon},
                {"theta0", ll.theta0},
                {"xi0", ll.xi0},
                {"c1", ll.c1},
                {"mu2", ll.mu2},
                {"s_max", ll.s_max},
                {"kappa_at_smax", ll.kappa_at_smax},
                {"k2", ll.k2},
                {"well_multiplicity", ll.well_multiplicity},
                {"lambdas", lambdas}};
}

json to_json(const effective::HarmonicCrosscheck& hc) {
    json pdo = json::array(), res = json::array();
    for (int i = 0; i < hc.pdo_lambdas.size(); ++i) pdo.push_back(hc.pdo_lambdas(i));
    for (int i = 0; i < hc.residuals.size(); ++i) res.push_back(hc.residuals(i));
    return json{{"ladder", to_json(hc.ladder)},
                {"pdo_lambdas", pdo},
                {"residuals", res},
                {"max_residual_over_h74", hc.max_residual_over_h74}};
}

json to_json(const effective::SpectraDistance& d) {
    return json{{"hausdorff", d.hausdorff},
                {"padded_hausdorff", d.padded_hausdorff},
                {"count_a", d.count_a},
                {"count_b", d.count_b}};
}

json to_json(const diskmode::RadialSpectrum& rs) {
    json entries = json::array();
    for (const auto& e : rs.entries) {
        entries.push_back(json{{"m", e.m},
                               {"j", e.j},
                               {"lambda", e.lambda},
                               {"sigma", e.sigma}});
    }
    return json{{"m_lo", rs.m_lo},
                {"m_hi", rs.m_hi},
                {"count", rs.entries.size()},
                {"entries", entries}};
}

json geometry_summary(const geometry::DomainGeometry& g) {
    const char* kind = g.kind == geometry::DomainKind::disk      ? "disk"
                       : g.kind == geometry::DomainKind::ellipse ? "ellipse"
                                                                 : "custom";
    return json{{"kind", kind},
                {"L", g.L},
                {"area", g.area},
                {"mean_kappa", g.mean_curvature()},
                {"kappa_min", g.kappa.minCoeff()},
                {"kappa_max", g.kappa.maxCoeff()},
                {"gauss_bonnet_residual", g.gauss_bonnet_residual()}};
}

void write_spectrum_csv(const std::filesystem::path& path,
                        const effective::EffectiveSpectrum& sp,
                        const std::map<std::string, std::string>& meta) {
    CsvWriter csv(path);
    for (const auto& [k, v] : meta) csv.meta(k, v);
    csv.header({"k", "q", "ell", "sigma", "lambda", "lambda_over_h"});
    double h = 0.0;
    if (auto it = meta.find("h"); it != meta.end()) h = std::stod(it->second);
    for (const auto& e : sp.entries) {
        csv.row_mixed({std::to_string(e.k), std::to_string(e.q),
                       std::to_string(e.ell), fmt(e.sigma), fmt(e.lambda),
                       fmt(h > 0 ? e.lambda / h : 0.0)});
    }
    csv.close();
}

void write_radial_csv(const std::filesystem::path& path,
                      const diskmode::RadialSpectrum& rs, double h,
                      const std::map<std::string, std::string>& meta) {
    CsvWriter csv(path);
    for (const auto& [k, v] : meta) csv.meta(k, v);
    csv.header({"m", "j", "lambda", "lambda_over_h", "sigma"});
    for (const auto& e : rs.entries) {
        csv.row_mixed({std::to_string(e.m), std::to_string(e.j), fmt(e.lambda),
                       fmt(e.lambda / h), fmt(e.sigma)});
    }
    csv.close();
}

std::vector<double> read_csv_column(const std::filesystem::path& path,
                                    const std::string& column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::string line;
    std::vector<std::string> cols;
    std::vector<double> out;
    int target = -1;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = line.find(',', pos);
            fields.push_back(line.substr(pos, comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (target < 0) {
            for (std::size_t i = 0; i < fields.size(); ++i)
                if (fields[i] == column) target = static_cast<int>(i);
            if (target < 0)
                throw std::runtime_error("column '" + column + "' not in " +
                                         path.string());
            continue;
        }
        if (static_cast<std::size_t>(target) < fields.size())
            out.push_back(std::stod(fields[target]));
    }
    return out;
}

}  // namespace magedge::io
