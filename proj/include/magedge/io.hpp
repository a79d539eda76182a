#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "magedge/degennes.hpp"
#include "magedge/diskmode.hpp"
#include "magedge/effective.hpp"
#include "magedge/geometry.hpp"

// vendored single-header nlohmann/json
#include <json.hpp>

namespace magedge::io {

using json = nlohmann::json;

/// Fixed shortest-roundtrip formatting so identical runs give identical bytes.
std::string fmt(double v);

/// CSV with '#'-prefixed metadata lines, then a header, then rows.
class CsvWriter {
  public:
    explicit CsvWriter(std::filesystem::path path);
    void meta(const std::string& key, const std::string& value);
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<double>& values);
    void row_mixed(const std::vector<std::string>& values);
    void close();
    ~CsvWriter();

  private:
    std::filesystem::path path_;
    std::string meta_;
    std::string body_;
    bool closed_ = false;
};

void write_json(const std::filesystem::path& path, const json& j);

/// Run manifest: inputs, tolerance table, output files, format version.
class Manifest {
  public:
    Manifest(std::string command, std::filesystem::path outdir);
    void arg(const std::string& key, const std::string& value);
    void arg(const std::string& key, double value);
    void tolerance(const std::string& key, double value);
    void output(const std::filesystem::path& file);
    void note(const std::string& text);
    void write() const;

  private:
    std::string command_;
    std::filesystem::path outdir_;
    json j_;
};

json to_json(const degennes::BranchExtremum& e);
json to_json(const degennes::WindowDecomposition& wd);
json to_json(const effective::EffectiveSpectrum& sp);
json to_json(const effective::WeylCount& wc);
json to_json(const effective::BranchDiagram& bd);
json to_json(const effective::LowLyingLadder& ll);
json to_json(const effective::HarmonicCrosscheck& hc);
json to_json(const effective::SpectraDistance& d);
json to_json(const diskmode::RadialSpectrum& rs);
json geometry_summary(const geometry::DomainGeometry& g);

void write_spectrum_csv(const std::filesystem::path& path,
                        const effective::EffectiveSpectrum& sp,
                        const std::map<std::string, std::string>& meta);
void write_radial_csv(const std::filesystem::path& path,
                      const diskmode::RadialSpectrum& rs, double h,
                      const std::map<std::string, std::string>& meta);

/// Read one named numeric column of a CSV written by this tool.
std::vector<double> read_csv_column(const std::filesystem::path& path,
                                    const std::string& column);

}  // namespace magedge::io
