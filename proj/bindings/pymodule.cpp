// Python bindings exposing a thin verification surface of the library:
// enough to drive the experiments and spot-check the core operations from
// python without re-wrapping the full C++ API.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>

#include "cmclab/config.hpp"
#include "cmclab/expansion.hpp"
#include "cmclab/experiments.hpp"
#include "cmclab/geometry.hpp"
#include "cmclab/graph.hpp"
#include "cmclab/sphere.hpp"
#include "cmclab/sscmc.hpp"

namespace py = pybind11;
using namespace cmclab;

namespace {

double roundtrip_error(int l_max, std::uint64_t seed) {
    const GridPtr g = make_grid(l_max);
    const Spectrum s = random_spectrum(g, l_max, seed, true);
    const Spectrum back = analyze(synthesize(s));
    return (back.coeffs() - s.coeffs()).cwiseAbs().maxCoeff();
}

py::dict sscmc_jets(double m, double H, double c) {
    const SSCMCParams p{m, H, c};
    const ExpansionJets j = sscmc_expansion_jets(p);
    py::dict d;
    d["f1"] = j.f1;
    d["f2"] = j.f2;
    d["f3"] = j.f3;
    d["f4"] = j.f4;
    d["check_f1"] = j.check_f1;
    d["check_f2"] = j.check_f2;
    d["check_f3"] = j.check_f3;
    d["check_f4"] = j.check_f4;
    return d;
}

py::dict hyperboloid_deviation(std::array<double, 3> a, double s) {
    const GridPtr g = make_grid(16);
    const Eigen::Vector3d av(a[0], a[1], a[2]);
    const GraphFunctionP graph = hyperboloid_graph(g, av);
    const SurfaceGeometry geo(graph, s);
    SphericalField H = geo.H_field();
    H.values() -= 1.0;
    SphericalField S = geo.S_field();
    S.values() += 6.0;
    py::dict d;
    d["H_dev"] = H.sup_norm();
    d["A_ring_sup"] = geo.A_ring_field().sup_norm();
    d["S_dev"] = S.sup_norm();
    return d;
}

double compat_sup(double a_len) {
    const GridPtr g = make_grid(8);
    const SphericalField f = SphericalField::from_cartesian(
        g, [&](const Eigen::Vector3d& y) { return a_len * y.x(); });
    return compatibility_residual(boundary_data(f, 1.0, 1.0)).sup_norm();
}

py::dict run_experiment_py(const std::string& name, int grid) {
    Config cfg;
    RunOptions opt;
    opt.grid_l_max = grid;
    const ExperimentResult res = run_experiment(name, cfg, opt);
    py::list checks;
    for (const auto& row : res.checks) {
        py::dict r;
        r["criterion"] = row.criterion;
        r["label"] = row.label;
        r["pass"] = row.pass;
        r["value"] = row.value;
        r["threshold"] = row.threshold;
        r["detail"] = row.detail;
        checks.append(r);
    }
    py::dict d;
    d["name"] = res.name;
    d["pass"] = res.pass();
    d["elapsed_seconds"] = res.elapsed_seconds;
    d["checks"] = checks;
    return d;
}

}  // namespace

PYBIND11_MODULE(cmclab, mod) {
    mod.doc() =
        "Numerical laboratory for spacelike constant-mean-curvature graphs "
        "near the conformal boundary of the Schwarzschild exterior.";

    mod.def("roundtrip_error", &roundtrip_error, py::arg("l_max"),
            py::arg("seed") = 1,
            "Sup error of an analyze/synthesize round-trip of a random "
            "band-limited field.");
    mod.def("sscmc_jets", &sscmc_jets, py::arg("m"), py::arg("H"),
            py::arg("c"),
            "Boundary Taylor coefficients of the symmetric slice, closed "
            "forms and numeric cross-checks.");
    mod.def("hyperboloid_deviation", &hyperboloid_deviation, py::arg("a"),
            py::arg("s"),
            "Deviation of a shifted-hyperboloid graph from H = 1, "
            "trace-free curvature 0, scalar curvature -6 at height s.");
    mod.def("compat_sup", &compat_sup, py::arg("a_len"),
            "Sup of the third-order compatibility residual for linear "
            "boundary data of the given amplitude.");
    mod.def("experiment_names",
            []() { return experiment_names(); },
            "Names of the built-in experiments.");
    mod.def("run_experiment", &run_experiment_py, py::arg("name"),
            py::arg("grid") = 0,
            "Run a named experiment and return its check rows.");
}
