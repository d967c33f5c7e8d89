#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cmclab/config.hpp"
#include "cmclab/errors.hpp"
#include "cmclab/io.hpp"
#include "cmclab/sphere.hpp"

using namespace cmclab;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("io_cli") {

TEST_CASE("config parsing: sections, comments, fallbacks") {
    std::istringstream in(
        "top = 1\n"
        "# a comment\n"
        "\n"
        "[run]\n"
        "  steps = 12\n"
        "tol = 1e-8   \n"
        "name = fast run\n"
        "steps = 13\n");  // duplicate: last one wins
    const Config c = parse_config(in);
    CHECK(c.has("", "top"));
    CHECK(c.get_int("", "top") == 1);
    CHECK(c.get_int("run", "steps") == 13);
    CHECK(c.get_num("run", "tol") == doctest::Approx(1e-8));
    CHECK(c.get_str("run", "name") == "fast run");
    CHECK(c.get_num("run", "missing", 2.5) == 2.5);
    CHECK(c.get_str("run", "missing", "dflt") == "dflt");
    CHECK_FALSE(c.has("run", "missing"));
    CHECK_THROWS_AS(c.get_num("run", "missing"), ConfigError);
    CHECK_THROWS_AS(c.get_num("run", "name"), ConfigError);   // not a number
    CHECK_THROWS_AS(c.get_int("run", "tol"), ConfigError);    // not an int
}

TEST_CASE("config parsing: malformed input carries the line number") {
    {
        std::istringstream in("[run\nsteps = 1\n");
        CHECK_THROWS_WITH_AS(static_cast<void>(parse_config(in)),
                             doctest::Contains("line 1"), ConfigError);
    }
    {
        std::istringstream in("[run]\nnonsense line\n");
        CHECK_THROWS_WITH_AS(static_cast<void>(parse_config(in)),
                             doctest::Contains("line 2"), ConfigError);
    }
    {
        std::istringstream in("[run]\n= 3\n");
        CHECK_THROWS_AS(static_cast<void>(parse_config(in)), ConfigError);
    }
    {
        std::istringstream in("[]\na = 1\n");
        CHECK_THROWS_AS(static_cast<void>(parse_config(in)), ConfigError);
    }
    CHECK_THROWS_AS(static_cast<void>(parse_config_file(
                        temp_file("definitely_missing.ini"))),
                    ConfigError);
}

TEST_CASE("17-digit formatting round-trips doubles") {
    CHECK(format_g17(0.1) == "0.10000000000000001");
    CHECK(format_g17(1.0) == "1");
    for (double v : {3.141592653589793, -2.2250738585072014e-308, 1e300}) {
        CHECK(std::stod(format_g17(v)) == v);
    }
}

TEST_CASE("field snapshots round-trip in both formats") {
    const GridPtr g = make_grid(6);
    const SphericalField f = synthesize(random_spectrum(g, 6, 77, true));
    for (SnapshotKind kind : {SnapshotKind::Spectral, SnapshotKind::Grid}) {
        const fs::path p = temp_file("cmclab_test_snapshot.csv");
        save_field(p, f, kind);
        SphericalField back = load_field(p);
        CHECK(back.grid()->l_max() == g->l_max());
        back -= f;
        CHECK(back.sup_norm() < 1e-12);
        fs::remove(p);
    }
}

TEST_CASE("snapshot loading rejects malformed files") {
    const fs::path p = temp_file("cmclab_bad_snapshot.csv");
    const auto write = [&](const std::string& body) {
        std::ofstream out(p);
        out << body;
    };
    const auto expect_reject = [&](const std::string& body) {
        write(body);
        CHECK_THROWS_AS(static_cast<void>(load_field(p)), ConfigError);
    };

    expect_reject("");  // no header
    expect_reject("# wrong-magic spectral l_max=2 n_lat=4 n_lon=8\nl,m,re,im\n");
    expect_reject("# cmclab-field spectral l_max=2\nl,m,re,im\n");
    // out-of-range mode
    expect_reject(
        "# cmclab-field spectral l_max=2 n_lat=4 n_lon=8\nl,m,re,im\n"
        "5,0,1.0,0\n");
    // imaginary part on an m = 0 mode
    expect_reject(
        "# cmclab-field spectral l_max=2 n_lat=4 n_lon=8\nl,m,re,im\n"
        "1,0,1.0,0.5\n");
    // unparsable numbers
    expect_reject(
        "# cmclab-field spectral l_max=2 n_lat=4 n_lon=8\nl,m,re,im\n"
        "1,zero,1.0,0\n");
    // grid row out of bounds
    expect_reject(
        "# cmclab-field grid l_max=2 n_lat=4 n_lon=8\ni_lat,i_lon,value\n"
        "4,0,1.0\n");
    CHECK_THROWS_AS(static_cast<void>(load_field(temp_file("missing.csv"))),
                    ConfigError);
    fs::remove(p);
}

TEST_CASE("CSV tables are byte-identical across reruns") {
    const fs::path p1 = temp_file("cmclab_csv_a.csv");
    const fs::path p2 = temp_file("cmclab_csv_b.csv");
    for (const fs::path& p : {p1, p2}) {
        CsvWriter w(p);
        w.comment("determinism check");
        w.header({"x", "y"});
        w.row({0.1, 2.0 / 3.0});
        w.row({1e-17, -4.25});
    }
    const std::string a = slurp(p1), b = slurp(p2);
    CHECK(a == b);
    CHECK(a.find("0.10000000000000001") != std::string::npos);
    CHECK(a.substr(0, 2) == "# ");
    fs::remove(p1);
    fs::remove(p2);
}

TEST_CASE("command-line driver exit codes") {
    if (!fs::exists("cmc_lab")) {
        MESSAGE("cmc_lab binary not in the working directory; skipping");
        return;
    }
    const auto run = [](const std::string& cmd) {
        const int st = std::system((cmd + " > /dev/null 2>&1").c_str());
        return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    };
    CHECK(run("./cmc_lab sscmc-jets") == 0);
    CHECK(run("./cmc_lab no-such-experiment") != 0);
    CHECK(run("./cmc_lab") != 0);  // a subcommand is required

    const fs::path dir = temp_file("cmclab_cli_case");
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path ini = dir / "case.ini";

    {  // malformed config: exit 2, no artifacts
        std::ofstream out(ini);
        out << "[custom\nmode = jets\n";
    }
    const fs::path outdir = dir / "out";
    CHECK(run("./cmc_lab custom --config " + ini.string() + " --out " +
              outdir.string()) == 2);
    CHECK_FALSE(fs::exists(outdir / "summary.csv"));

    {  // missing mode key: exit 2
        std::ofstream out(ini);
        out << "[custom]\nm = 1\n";
    }
    CHECK(run("./cmc_lab custom --config " + ini.string() + " --out " +
              outdir.string()) == 2);

    {  // well-formed run writes its artifacts
        std::ofstream out(ini);
        out << "[custom]\nmode = jets\ncoeff_1_0 = 0.5\ncoeff_2_1 = 0.25\n"
               "grid = 4\n";
    }
    CHECK(run("./cmc_lab custom --config " + ini.string() + " --out " +
              outdir.string()) == 0);
    CHECK(fs::exists(outdir / "f1.csv"));
    CHECK(fs::exists(outdir / "residual.csv"));
    CHECK(fs::exists(outdir / "summary.csv"));
    CHECK_NOTHROW(static_cast<void>(load_field(outdir / "f1.csv")));
    fs::remove_all(dir);
}

}  // TEST_SUITE
