#include "cmclab/io.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <sstream>
#include <string>

#include "cmclab/errors.hpp"

namespace cmclab {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& tok, const std::string& where) {
    const char* s = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
        throw ConfigError("snapshot: bad number '" + tok + "' in " + where);
    return v;
}

long parse_long(const std::string& tok, const std::string& where) {
    const char* s = tok.c_str();
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end == s || *end != '\0')
        throw ConfigError("snapshot: bad integer '" + tok + "' in " + where);
    return v;
}

}  // namespace

std::string format_g17(double x) { return fmt::format("{:.17g}", x); }

void save_field(const std::filesystem::path& path, const SphericalField& f,
                SnapshotKind kind) {
    if (!f.grid()) throw DomainError("snapshot: field has no grid");
    std::ofstream out(path);
    if (!out)
        throw ConfigError("snapshot: cannot open '" + path.string() +
                          "' for writing");
    const auto& g = *f.grid();
    out << "# cmclab-field "
        << (kind == SnapshotKind::Spectral ? "spectral" : "grid")
        << " l_max=" << g.l_max() << " n_lat=" << g.n_lat()
        << " n_lon=" << g.n_lon() << "\n";
    if (kind == SnapshotKind::Spectral) {
        out << "l,m,re,im\n";
        const Spectrum spec = analyze(f);
        for (int l = 0; l <= g.l_max(); ++l) {
            for (int m = 0; m <= l; ++m) {
                const double re = spec.coeff(l, m);
                const double im = m > 0 ? -spec.coeff(l, -m) : 0.0;
                out << l << ',' << m << ',' << format_g17(re) << ','
                    << format_g17(im) << "\n";
            }
        }
    } else {
        out << "i_lat,i_lon,value\n";
        for (int i = 0; i < g.n_lat(); ++i)
            for (int j = 0; j < g.n_lon(); ++j)
                out << i << ',' << j << ',' << format_g17(f(i, j)) << "\n";
    }
    if (!out)
        throw ConfigError("snapshot: write to '" + path.string() +
                          "' failed");
}

SphericalField load_field(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("snapshot: cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("snapshot: '" + path.string() + "' is empty");
    std::istringstream hdr(line);
    std::string hash, tag, kind_tok;
    hdr >> hash >> tag >> kind_tok;
    if (hash != "#" || tag != "cmclab-field" ||
        (kind_tok != "spectral" && kind_tok != "grid"))
        throw ConfigError("snapshot: '" + path.string() +
                          "' has no cmclab-field header");
    int l_max = -1, n_lat = -1, n_lon = -1;
    std::string kv;
    while (hdr >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("snapshot: bad header token '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        const long val = parse_long(kv.substr(eq + 1), "header");
        if (key == "l_max")
            l_max = int(val);
        else if (key == "n_lat")
            n_lat = int(val);
        else if (key == "n_lon")
            n_lon = int(val);
        else
            throw ConfigError("snapshot: unknown header key '" + key + "'");
    }
    if (l_max < 0 || n_lat <= 0 || n_lon <= 0)
        throw ConfigError("snapshot: header must give l_max, n_lat, n_lon");
    GridPtr grid = make_grid(l_max, n_lat, n_lon);

    if (!std::getline(in, line))
        throw ConfigError("snapshot: missing column header");
    const bool spectral = kind_tok == "spectral";
    const std::string want = spectral ? "l,m,re,im" : "i_lat,i_lon,value";
    if (line != want)
        throw ConfigError("snapshot: expected column header '" + want +
                          "', got '" + line + "'");

    if (spectral) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(grid->n_modes());
        std::size_t lineno = 2;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            const auto toks = split_csv(line);
            const std::string where = "line " + std::to_string(lineno);
            if (toks.size() != 4)
                throw ConfigError("snapshot: expected 4 columns in " + where);
            const long l = parse_long(toks[0], where);
            const long m = parse_long(toks[1], where);
            if (l < 0 || l > l_max || m < 0 || m > l)
                throw ConfigError("snapshot: mode out of range in " + where);
            const double re = parse_double(toks[2], where);
            const double im = parse_double(toks[3], where);
            c(SphericalGrid::mode_index(int(l), int(m))) = re;
            if (m > 0)
                c(SphericalGrid::mode_index(int(l), int(-m))) = -im;
            else if (im != 0.0)
                throw ConfigError("snapshot: m = 0 rows need im = 0 in " +
                                  where);
        }
        return synthesize(Spectrum(grid, std::move(c)));
    }

    SphericalField f(grid);
    std::size_t lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto toks = split_csv(line);
        const std::string where = "line " + std::to_string(lineno);
        if (toks.size() != 3)
            throw ConfigError("snapshot: expected 3 columns in " + where);
        const long i = parse_long(toks[0], where);
        const long j = parse_long(toks[1], where);
        if (i < 0 || i >= n_lat || j < 0 || j >= n_lon)
            throw ConfigError("snapshot: node out of range in " + where);
        f.at(int(i), int(j)) = parse_double(toks[2], where);
    }
    return f;
}

CsvWriter::CsvWriter(const std::filesystem::path& path)
    : path_(path), out_(path) {
    if (!out_)
        throw ConfigError("csv: cannot open '" + path.string() +
                          "' for writing");
}

void CsvWriter::comment(const std::string& text) {
    out_ << "# " << text << "\n";
}

void CsvWriter::header(const std::vector<std::string>& cols) { row(cols); }

void CsvWriter::row(const std::vector<double>& vals) {
    std::vector<std::string> cells;
    cells.reserve(vals.size());
    for (double v : vals) cells.push_back(format_g17(v));
    row(cells);
}

void CsvWriter::row(const std::vector<std::string>& vals) {
    for (std::size_t k = 0; k < vals.size(); ++k) {
        if (k) out_ << ',';
        out_ << vals[k];
    }
    out_ << "\n";
    out_.flush();
}

}  // namespace cmclab
