#pragma once

// Deterministic text serialization: CSV tables and sphere-field snapshots.
//
// All numbers are written with 17 significant digits, which round-trips every
// IEEE double exactly, and no volatile data (timestamps, hostnames, ...) is
// ever emitted, so rerunning a writer reproduces files byte for byte.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cmclab/sphere.hpp"

namespace cmclab {

// Shortest representation with 17 significant digits.
std::string format_g17(double x);

enum class SnapshotKind { Spectral, Grid };

// Field snapshot files start with a header line identifying the
// representation and the grid, followed by a column-name line and data rows:
//   # cmclab-field spectral l_max=8 n_lat=14 n_lon=28      l,m,re,im
//   # cmclab-field grid l_max=8 n_lat=14 n_lon=28          i_lat,i_lon,value
// Spectral rows carry modes with m >= 0 only; re is the cosine-harmonic
// coefficient and im the negated sine-harmonic coefficient (zero for m = 0),
// mirroring the usual complex-basis conjugate symmetry of real fields.
void save_field(const std::filesystem::path& path, const SphericalField& f,
                SnapshotKind kind = SnapshotKind::Spectral);
SphericalField load_field(const std::filesystem::path& path);

// Line-oriented CSV writer.  Rows are flushed immediately; numeric cells use
// format_g17.  Throws ConfigError when the file cannot be opened.
class CsvWriter {
  public:
    explicit CsvWriter(const std::filesystem::path& path);
    void comment(const std::string& text);
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<double>& vals);
    void row(const std::vector<std::string>& vals);
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
    std::ofstream out_;
};

}  // namespace cmclab
