#include "cmclab/experiments.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>

#include "cmclab/errors.hpp"
#include "cmclab/expansion.hpp"
#include "cmclab/fitting.hpp"
#include "cmclab/geometry.hpp"
#include "cmclab/graph.hpp"
#include "cmclab/horizon.hpp"
#include "cmclab/io.hpp"
#include "cmclab/schwarzschild.hpp"
#include "cmclab/sphere.hpp"
#include "cmclab/sscmc.hpp"

namespace cmclab {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> dyadic_window(double top, int count) {
    std::vector<double> s(std::size_t(count), 0.0);
    double v = top;
    for (int k = 0; k < count; ++k, v *= 0.5) s[std::size_t(k)] = v;
    return s;
}

// Random band-limited data with unit Sobolev H^2 norm (spectral weights
// 1 + (l(l+1))^2).  This is the norm that controls the linear drift of the
// Lorentz norm, hence the spacelike window of a barrier built from the
// data: plain unit-L2 band-8 data has sup|lap f| ~ 50 and its barrier stops
// being spacelike near s ~ 0.01, well short of the fit window.
SphericalField h2_normalized_random(const GridPtr& g, int band,
                                    std::uint64_t seed) {
    const Spectrum spec = random_spectrum(g, band, seed, false);
    double n2 = 0.0;
    for (int l = 0; l <= band; ++l) {
        const double ev = l * (l + 1.0);
        n2 += (1.0 + ev * ev) * spec.degree_energy(l);
    }
    SphericalField f = synthesize(spec);
    f *= 1.0 / std::sqrt(n2);
    return f;
}

std::vector<double> log_spaced(double a, double b, int n) {
    std::vector<double> out(std::size_t(n), 0.0);
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i)
        out[std::size_t(i)] = std::exp(la + (lb - la) * i / double(n - 1));
    return out;
}

SphericalField constant_field(const GridPtr& g, double v) {
    SphericalField f(g);
    f.values().setConstant(v);
    return f;
}

SphericalField linear_field(const GridPtr& g, const Eigen::Vector3d& a) {
    return SphericalField::from_cartesian(
        g, [&](const Eigen::Vector3d& y) { return a.dot(y); });
}

struct Ctx {
    const Config& cfg;
    RunOptions opt;
    ExperimentResult* res;

    int base_l(int dflt) const {
        return opt.grid_l_max > 0 ? opt.grid_l_max : dflt;
    }

    void check(int criterion, std::string label, bool pass, double value,
               double threshold, std::string detail = "") {
        res->checks.push_back({criterion, std::move(label), pass, value,
                               threshold, std::move(detail)});
    }
    void check_le(int criterion, std::string label, double value,
                  double threshold, std::string detail = "") {
        check(criterion, std::move(label), value <= threshold, value,
              threshold, std::move(detail));
    }
    void check_ge(int criterion, std::string label, double value,
                  double threshold, std::string detail = "") {
        check(criterion, std::move(label), value >= threshold, value,
              threshold, std::move(detail));
    }
    void runtime(int criterion, double seconds, double budget) {
        check(criterion, fmt::format("runtime of criterion {} block",
                                     criterion),
              seconds <= budget, seconds, budget, "seconds");
    }
    void info(std::string label, double value) {
        check(0, std::move(label), true, value, 0.0, "informational");
    }

    std::optional<CsvWriter> csv(const std::string& name) {
        if (!opt.write_csv || opt.out_dir.empty()) return std::nullopt;
        std::filesystem::create_directories(opt.out_dir);
        const auto p = opt.out_dir / name;
        res->artifacts.push_back(p);
        return CsvWriter(p);
    }
};

// ---------------------------------------------------------------------------
// sscmc-jets (criterion 1): boundary Taylor coefficients of the symmetric
// slices, closed forms against an independent numeric differentiation.
void run_sscmc_jets(Ctx& c) {
    const auto t0 = Clock::now();
    const std::vector<SSCMCParams> cases = {
        {1.0, 1.0, 0.0}, {1.0, 1.0, 2.0}, {0.0, 1.0, 0.0}, {1.0, 2.0, 1.0}};
    auto csv = c.csv("sscmc_jets.csv");
    if (csv) {
        csv->comment("boundary expansion coefficients of symmetric slices");
        csv->header({"m", "H", "c", "f1", "f2", "f3", "f4", "check_f1",
                     "check_f2", "check_f3", "check_f4"});
    }
    for (const auto& p : cases) {
        const ExpansionJets j = sscmc_expansion_jets(p);
        const double H2 = p.H * p.H, H4 = H2 * H2;
        const double e1 = -0.5 / H2;
        const double e2 = 0.0;
        const double e3 = 0.75 / H4;
        const double e4 = (6.0 * p.c * p.H - 4.5 * p.m) / H4;
        const double closed =
            std::max({std::abs(j.f1 - e1), std::abs(j.f2 - e2),
                      std::abs(j.f3 - e3), std::abs(j.f4 - e4)});
        const double cross =
            std::max({std::abs(j.check_f1 - j.f1), std::abs(j.check_f2 - j.f2),
                      std::abs(j.check_f3 - j.f3),
                      std::abs(j.check_f4 - j.f4)});
        const std::string tag =
            fmt::format("(m={}, H={}, c={})", p.m, p.H, p.c);
        c.check_le(1, "closed-form jets " + tag, closed, 1e-12);
        c.check_le(1, "numeric jet cross-check " + tag, cross, 1e-5);
        if (csv)
            csv->row({p.m, p.H, p.c, j.f1, j.f2, j.f3, j.f4, j.check_f1,
                      j.check_f2, j.check_f3, j.check_f4});
    }
    c.runtime(1, elapsed_s(t0), 1.0);
}

// ---------------------------------------------------------------------------
// sscmc-scalar (criterion 2): scalar curvature of the induced metric against
// the closed form -6 + 6 c^2 r^{-6}, plus the one-sided bound S >= -6.
void run_sscmc_scalar(Ctx& c) {
    const auto t0 = Clock::now();
    const SSCMCParams p{1.0, 1.0, 2.0};
    const auto r_list = log_spaced(5.0, 50.0, 40);
    auto csv = c.csv("sscmc_scalar.csv");
    if (csv) {
        csv->comment("scalar curvature along the slice (m=1, H=1, c=2)");
        csv->header({"r", "S", "S_closed"});
    }
    double max_rel = 0.0;
    double min_gap = std::numeric_limits<double>::infinity();
    for (double r : r_list) {
        const double S = sscmc_scalar_curvature(p, r);
        const double Sc = sscmc_scalar_curvature_closed(p, r);
        max_rel = std::max(max_rel, std::abs(S - Sc) / std::abs(Sc));
        min_gap = std::min(min_gap, S + 6.0);
        if (csv) csv->row({r, S, Sc});
    }
    c.check_le(2, "scalar curvature matches -6 + 6 c^2 r^-6 (rel)", max_rel,
               1e-4);
    c.check_ge(2, "one-sided bound S >= -6 (min of S + 6)", min_gap, -1e-10);

    const SSCMCParams p0{1.0, 1.0, 0.0};
    double max_abs0 = 0.0;
    for (double r : log_spaced(5.0, 50.0, 10))
        max_abs0 = std::max(max_abs0,
                            std::abs(sscmc_scalar_curvature(p0, r) + 6.0));
    c.check_le(0, "c = 0 slice has S identically -6", max_abs0, 1e-8);
    c.runtime(2, elapsed_s(t0), 10.0);
}

// ---------------------------------------------------------------------------
// ah-profile (criterion 3): intrinsic boundary profile w^2 - 1 and its tau^3
// coefficient against -(2/3)(c - m).
void run_ah_profile(Ctx& c) {
    const auto t0 = Clock::now();
    const std::vector<SSCMCParams> cases = {
        {1.0, 1.0, 0.0}, {1.0, 1.0, 1.0}, {1.0, 1.0, 3.0}};
    auto csv = c.csv("ah_profile.csv");
    if (csv) {
        csv->comment("normalized boundary profile of symmetric slices");
        csv->header({"m", "c", "s", "tau", "w2_minus_1"});
    }
    for (const auto& p : cases) {
        const AHProfile prof = sscmc_ah_profile(p, 0.05, 10);
        const double err = std::abs(prof.tau3_fit - prof.tau3_expected) /
                           std::max(std::abs(prof.tau3_expected), 1.0);
        c.check_le(3,
                   fmt::format("tau^3 profile coefficient vs -(2/3)(c-m) "
                               "(m={}, c={})",
                               p.m, p.c),
                   err, 1e-3,
                   fmt::format("fit {:.6g}, expected {:.6g}", prof.tau3_fit,
                               prof.tau3_expected));
        if (csv)
            for (const auto& row : prof.rows)
                csv->row({p.m, p.c, row.s, row.tau, row.w2_minus_1});
    }
    c.runtime(3, elapsed_s(t0), 5.0);
}

// ---------------------------------------------------------------------------
// ah-check (criteria 4 and 8): exact hyperboloids pass through the full
// geometry engine, and the deviation of a generic l <= 1 barrier from its
// reference hyperboloid decays at the cubic rate.
void run_ah_check(Ctx& c) {
    const auto tA = Clock::now();
    const GridPtr grid = make_grid(c.base_l(24));
    const std::vector<Eigen::Vector3d> shifts = {
        Eigen::Vector3d::Zero(), 0.5 * Eigen::Vector3d(0.6, 0.0, 0.8)};
    const std::vector<double> s_values = {0.01, 0.05, 0.1, 0.3};
    for (const auto& a : shifts) {
        const GraphFunctionP g = hyperboloid_graph(grid, a);
        double dev_H = 0.0, dev_A = 0.0, dev_S = 0.0;
        for (double s : s_values) {
            const SurfaceGeometry geo(g, s);
            SphericalField H = geo.H_field();
            SphericalField Hf = geo.H_formula_field();
            H.values() -= 1.0;
            Hf.values() -= 1.0;
            dev_H = std::max({dev_H, H.sup_norm(), Hf.sup_norm()});
            dev_A = std::max(dev_A, geo.A_ring_field().sup_norm());
            SphericalField S = geo.S_field();
            S.values() += 6.0;
            dev_S = std::max(dev_S, S.sup_norm());
        }
        const std::string tag = fmt::format("|a| = {}", a.norm());
        c.check_le(4, "hyperboloid mean curvature is 1 (" + tag + ")", dev_H,
                   1e-9, "max over s in {0.01, 0.05, 0.1, 0.3}");
        c.check_le(4, "hyperboloid trace-free curvature vanishes (" + tag +
                   ")", dev_A, 1e-10);
        c.check_le(4, "hyperboloid scalar curvature is -6 (" + tag + ")",
                   dev_S, 1e-8);
    }
    c.runtime(4, elapsed_s(tA), 5.0);

    // Same configuration as the l <= 1 decay-ladder case: m = 1 and the
    // mass-free matched fourth coefficient.  The deviation from the
    // reference hyperboloid still decays at the cubic rate (the mass sources
    // the s^3 term).
    const auto tB = Clock::now();
    const GridPtr gridB = make_grid(c.base_l(8));
    const Eigen::Vector3d aB = 0.7 * Eigen::Vector3d(0.0, 0.6, 0.8);
    const SphericalField fB = linear_field(gridB, aB);
    const GraphFunctionP barrier =
        build_barrier(boundary_data(fB, 1.0, 1.0),
                      hyperboloid_jet_fields(gridB, aB).f4, 0.12);
    const AHDeviation dev = ah_deviation(barrier, dyadic_window(0.1, 7));
    c.check_ge(8, "boundary-frame metric deviation decay exponent",
               dev.theta_fit.exponent, 2.9,
               fmt::format("stderr {:.3g}", dev.theta_fit.stderr_));
    c.check_ge(8, "slowest frame-component decay rate in boundary distance",
               dev.frame_rate_min, 2.9);
    auto csv = c.csv("ah_check_deviation.csv");
    if (csv) {
        csv->comment("deviation of an l <= 1 barrier from its hyperboloid");
        csv->header({"s", "rho", "theta_sup"});
        for (std::size_t k = 0; k < dev.s.size(); ++k)
            csv->row({dev.s[k], dev.rho[k], dev.theta_sup[k]});
    }
    c.runtime(8, elapsed_s(tB), 30.0);
}

// ---------------------------------------------------------------------------
// barrier (criterion 5): the cubic-jet barrier of random band-limited
// boundary data holds its mean curvature to O(s^3).
void run_barrier(Ctx& c) {
    const auto t0 = Clock::now();
    const GridPtr grid = make_grid(c.base_l(8));
    const std::uint64_t seed = 12345;
    const SphericalField f = h2_normalized_random(grid, 8, seed);
    const GraphFunctionP g =
        build_barrier(boundary_data(f, 1.0, 1.0), {}, 0.12);
    c.check_ge(5, "validated spacelike domain reaches the fit window",
               g.s_max(), 0.1, fmt::format("seed {}", seed));

    const auto s_list = dyadic_window(0.1, 7);
    std::vector<double> sups;
    sups.reserve(s_list.size());
    auto csv = c.csv("barrier_drift.csv");
    if (csv) {
        csv->comment("mean-curvature drift of a random cubic-jet barrier");
        csv->header({"s", "sup_H_minus_H0"});
    }
    for (double s : s_list) {
        SphericalField H = SurfaceGeometry(g, s).H_field();
        H.values() -= 1.0;
        sups.push_back(H.sup_norm());
        if (csv) csv->row({s, sups.back()});
    }
    const DecayFit fit = decay_fit(s_list, sups);
    c.check_ge(5, "sup|H - H0| decay exponent", fit.exponent, 2.9);
    c.check_le(5, "decay-fit slope standard error", fit.stderr_, 0.1);

    SphericalField bv = g.boundary_value();
    bv -= synthesize_on(analyze(f), g.grid());
    c.check_le(0, "barrier boundary value reproduces f", bv.sup_norm(), 1e-12);
    c.runtime(5, elapsed_s(t0), 30.0);
}

// ---------------------------------------------------------------------------
// compat (criterion 6): the third-order compatibility residual vanishes for
// l <= 1 boundary data, and the jet coefficients close the defining
// relations of the Lorentz-norm derivatives.
void run_compat(Ctx& c) {
    const auto t0 = Clock::now();
    const GridPtr grid = make_grid(c.base_l(8));
    struct Case {
        std::string tag;
        SphericalField f;
    };
    const std::vector<Case> cases = {
        {"f = 0.4", constant_field(grid, 0.4)},
        {"f = a.y, |a| = 0.7",
         linear_field(grid, 0.7 * Eigen::Vector3d(0.36, 0.48, 0.8))}};
    for (const auto& k : cases) {
        const BoundaryData bd = boundary_data(k.f, 1.0, 1.0);
        const SphericalField rest = compatibility_residual(bd);
        c.check_le(6, "compatibility residual sup (" + k.tag + ")",
                   rest.sup_norm(), 1e-8);

        const JetFields j = jet_coefficients(bd);
        const VectorField gF = gradient(analyze(j.f));
        const VectorField gF1 = gradient(analyze(j.f1));
        const VectorField gF2 = gradient(analyze(j.f2));
        SphericalField ls_rec = -2.0 * j.f2 - 2.0 * vdot(gF1, gF);
        ls_rec -= j.Ls;
        c.check_le(6, "first-derivative closure of the Lorentz norm (" +
                   k.tag + ")", ls_rec.sup_norm(), 1e-10);
        SphericalField lss_rec = -2.0 * j.f3 - 2.0 * (j.f1 * j.f1) -
                                 2.0 * vdot(gF2, gF) - 2.0 * vdot(gF1, gF1);
        lss_rec -= j.Lss;
        c.check_le(6, "second-derivative closure of the Lorentz norm (" +
                   k.tag + ")", lss_rec.sup_norm(), 1e-10);

        SphericalField l0 = j.L0;
        l0.values() -= 1.0;  // H0 = 1
        c.check_le(0, "boundary Lorentz norm equals H0^-2 (" + k.tag + ")",
                   l0.sup_norm(), 1e-14);
        const EigenspaceCheck eig = eigenspace_membership(k.f);
        c.check(0, "boundary data lies in the l <= 1 eigenspace (" + k.tag +
                ")", eig.inside, eig.defect, 1e-10);
    }
    c.runtime(6, elapsed_s(t0), 5.0);
}

// ---------------------------------------------------------------------------
// adecay (criterion 7): decay rate of the trace-free curvature for generic
// data, for l <= 1 data with the mass-free matched fourth coefficient (cubic
// rate persists when m > 0), for the exactly matched symmetric truncation
// (quartic), and for the massless counterpart (quartic).
void run_adecay(Ctx& c) {
    const auto t0 = Clock::now();
    const GridPtr grid = make_grid(c.base_l(8));
    const Eigen::Vector3d a = 0.7 * Eigen::Vector3d(0.0, 0.6, 0.8);
    const SphericalField f_lin = linear_field(grid, a);
    const HyperboloidJets hyp = hyperboloid_jet_fields(grid, a);

    // Same boundary data as the barrier-drift criterion.
    const SphericalField f_gen = h2_normalized_random(grid, 8, 12345);

    struct Case {
        std::string tag;
        double m;
        SphericalField f;
        std::optional<SphericalField> f4;
        double bound;
        std::vector<double> s_list;
    };
    const std::vector<Case> cases = {
        {"generic band-8 data (as in the drift criterion), m = 1", 1.0,
         f_gen, {}, 0.9, dyadic_window(0.1, 7)},
        {"l <= 1 data with mass-free matched f4, m = 1", 1.0, f_lin, hyp.f4,
         2.9, dyadic_window(0.1, 7)},
        // The quartic case needs a lower window: at s = 0.1 the next order
        // of the expansion still biases the measured slope.
        {"symmetric quartic truncation f = 0, f4 = -9m/2, m = 1", 1.0,
         constant_field(grid, 0.0), constant_field(grid, -4.5), 3.9,
         dyadic_window(0.05, 6)},
        {"l <= 1 data with matched f4, m = 0", 0.0, f_lin, hyp.f4, 3.9,
         dyadic_window(0.1, 7)}};

    auto csv = c.csv("adecay.csv");
    if (csv) {
        csv->comment("sup of the trace-free curvature along s");
        csv->header({"case", "s", "sup_A_ring"});
    }
    int case_no = 0;
    for (const auto& k : cases) {
        ++case_no;
        const GraphFunctionP g =
            build_barrier(boundary_data(k.f, 1.0, k.m), k.f4, 0.12);
        std::vector<double> sups;
        sups.reserve(k.s_list.size());
        for (double s : k.s_list) {
            sups.push_back(SurfaceGeometry(g, s).A_ring_field().sup_norm());
            if (csv) csv->row({double(case_no), s, sups.back()});
        }
        const DecayFit fit = decay_fit(k.s_list, sups);
        c.check_ge(7, "trace-free curvature decay exponent: " + k.tag,
                   fit.exponent, k.bound,
                   fmt::format("stderr {:.3g}", fit.stderr_));
    }
    c.runtime(7, elapsed_s(t0), 60.0);
}

// ---------------------------------------------------------------------------
// horizon-slope (criterion 9): extrapolated boundary slope of the
// horizon-crossing symmetric slice, and agreement of its height function
// between the radial and the eta chart.
void run_horizon_slope(Ctx& c) {
    const auto t0 = Clock::now();
    const SSCMCParams p{1.0, 1.0, -8.0};
    const GridPtr grid = make_grid(4);
    const HorizonGraph g = HorizonGraph::from_sscmc(grid, p);

    const HorizonSlope slope = horizon_boundary_slope(g, 0.4, 8);
    const double target = 24.0 * p.m * p.m * p.H;
    const double err =
        (slope.estimate.values() - target).abs().maxCoeff();
    c.check_le(9, "extrapolated boundary slope vs 24 m^2 H", err, 1e-3,
               fmt::format("tableau error estimate {:.3g}", slope.err_est));

    const auto r_list = log_spaced(5.0, 20.0, 12);
    const double r_anchor = r_list.front();
    const double u_anchor =
        g.u_field(eta_of_r(p.m, r_anchor))(0, 0);
    double max_diff = 0.0;
    auto csv = c.csv("horizon_heights.csv");
    if (csv) {
        csv->comment("slice height through two charts (m=1, H=1, c=-8)");
        csv->header({"r", "t_r_chart", "t_eta_chart"});
    }
    for (double r : r_list) {
        const double dt_r = sscmc_height(p, r_anchor, r);
        const double dt_eta = g.u_field(eta_of_r(p.m, r))(0, 0) - u_anchor;
        max_diff = std::max(max_diff, std::abs(dt_r - dt_eta));
        if (csv) csv->row({r, dt_r, dt_eta});
    }
    c.check_le(9, "height agrees between radial and eta chart", max_diff,
               1e-6);
    c.runtime(9, elapsed_s(t0), 10.0);
}

// ---------------------------------------------------------------------------
// boundary-geodesic (criterion 10): connection pairings of the sphere frame
// decay like h^{3/2} toward the horizon, and the Killing-time pairings
// vanish for the symmetric slice.
void run_boundary_geodesic(Ctx& c) {
    const auto t0 = Clock::now();
    const SSCMCParams p{1.0, 1.0, -8.0};
    const GridPtr grid = make_grid(c.base_l(8));
    const HorizonGraph g = HorizonGraph::from_sscmc(grid, p);

    std::vector<double> h_list = dyadic_window(0.05, 7);
    std::vector<double> r_list;
    r_list.reserve(h_list.size());
    for (double h : h_list) r_list.push_back(2.0 * p.m / (1.0 - h));
    const auto rows = boundary_geodesic_pairings(g, r_list);

    auto csv = c.csv("boundary_geodesic.csv");
    if (csv) {
        csv->comment("sup of the frame pairings on r = const sections");
        csv->header({"r", "h", "p22", "p23", "p33", "t22", "t23", "t33"});
        for (const auto& row : rows)
            csv->row({row.r, row.h, row.p22, row.p23, row.p33, row.t22,
                      row.t23, row.t33});
    }

    std::vector<double> p22s, p33s;
    double max_p23 = 0.0, max_t = 0.0;
    for (const auto& row : rows) {
        p22s.push_back(row.p22);
        p33s.push_back(row.p33);
        max_p23 = std::max(max_p23, row.p23);
        max_t = std::max({max_t, row.t22, row.t23, row.t33});
    }
    const DecayFit f22 = decay_fit(h_list, p22s);
    const DecayFit f33 = decay_fit(h_list, p33s);
    c.check(10, "radial pairing p22 decays like h^1.5",
            std::abs(f22.exponent - 1.5) <= 0.05, f22.exponent, 1.5,
            "tolerance 0.05");
    c.check(10, "radial pairing p33 decays like h^1.5",
            std::abs(f33.exponent - 1.5) <= 0.05, f33.exponent, 1.5,
            "tolerance 0.05");
    c.check_le(10, "mixed pairing p23 vanishes for the symmetric slice",
               max_p23, 1e-12);
    c.check_le(10, "Killing-time pairings vanish for the symmetric slice",
               max_t, 1e-12);

    const auto aux = boundary_geodesic_pairings(g, {4.0 * p.m});
    c.check_le(0, "p22 at r = 4m equals sqrt(2) m",
               std::abs(aux[0].p22 - std::sqrt(2.0) * p.m), 1e-10);
    c.runtime(10, elapsed_s(t0), 5.0);
}

// ---------------------------------------------------------------------------
// horizon-residual (criterion 11): identity suite.  Series rearrangement of
// the horizon curvature, trace-free traces, rotation equivariance, and chart
// round-trips.
void run_horizon_residual(Ctx& c) {
    const auto t0 = Clock::now();

    // (a) eta-series residual on random polynomial horizon graphs.
    {
        const GridPtr grid = make_grid(8);
        double worst02 = 0.0, worst04 = 0.0;
        for (int t = 0; t < 20; ++t) {
            std::vector<SphericalField> coeffs;
            for (int k = 0; k < 4; ++k) {
                SphericalField ck = synthesize(random_spectrum(
                    grid, 3, 1000 + 17 * std::uint64_t(t) + std::uint64_t(k),
                    true));
                ck *= 0.2;
                coeffs.push_back(ck);
            }
            for (int tries = 0;; ++tries) {
                try {
                    const HorizonGraph g =
                        HorizonGraph::polynomial(grid, 1.0, coeffs);
                    worst02 = std::max(
                        worst02, horizon_series_residual(g, 0.2).sup_norm());
                    worst04 = std::max(
                        worst04, horizon_series_residual(g, 0.4).sup_norm());
                    break;
                } catch (const DomainError&) {
                    if (tries > 40) throw;
                    for (auto& ck : coeffs) ck *= 0.5;
                }
            }
        }
        c.check_le(11, "eta-series residual, 20 random graphs at eta = 0.2",
                   worst02, 1e-9);
        c.check_le(11, "eta-series residual, 20 random graphs at eta = 0.4",
                   worst04, 1e-9);
    }

    // (b) trace of the trace-free curvature part on random barriers.
    {
        const GridPtr grid = make_grid(8);
        double worst_trace = 0.0, worst_cross = 0.0;
        for (int t = 0; t < 20; ++t) {
            SphericalField f = synthesize(
                random_spectrum(grid, 4, 2000 + std::uint64_t(t), true));
            f *= 0.3;
            const double m = (t % 2) ? 1.0 : 0.0;
            const GraphFunctionP g =
                build_barrier(boundary_data(f, 1.0, m), {}, 0.1);
            const double s_eval = std::min(0.05, 0.9 * g.s_max());
            const SurfaceGeometry geo(g, s_eval);
            const auto& gr = *g.grid();
            for (int i = 0; i < gr.n_lat(); ++i) {
                for (int j = 0; j < gr.n_lon(); ++j) {
                    const NodeGeometry& n = geo.node(i, j);
                    const Eigen::Matrix3d ginv = n.gbar.inverse();
                    const double tr = (ginv * n.D).trace();
                    const Eigen::Matrix3d N = n.D - (tr / 3.0) * n.gbar;
                    worst_trace = std::max(worst_trace,
                                           std::abs((ginv * N).trace()));
                }
            }
            SphericalField cross = geo.H_field();
            cross -= geo.H_formula_field();
            worst_cross = std::max(worst_cross, cross.sup_norm());
        }
        c.check_le(11, "trace of the trace-free curvature part", worst_trace,
                   1e-10, "20 random barriers");
        c.check_le(0, "mean curvature: matrix route vs scalar route",
                   worst_cross, 1e-10, "20 random barriers");
    }

    // (c) rotation equivariance.
    {
        const Eigen::Matrix3d R = random_rotation(55);

        const GridPtr grid12 = make_grid(12);
        const SphericalField f6 =
            synthesize(random_spectrum(grid12, 6, 321, true));
        const SphericalField f6R = rotate(analyze(f6), R, grid12);
        SphericalField lap_diff = laplacian(analyze(f6R));
        lap_diff -= rotate(analyze(laplacian(analyze(f6))), R, grid12);
        c.check_le(11, "Laplacian commutes with rotation",
                   lap_diff.sup_norm(), 1e-8);

        const GridPtr grid2 = make_grid(2);
        SphericalField f2 = synthesize(random_spectrum(grid2, 2, 9, true));
        f2 *= 0.5;
        const SphericalField f2R = rotate(analyze(f2), R, grid2);
        const JetFields jA = jet_coefficients(boundary_data(f2, 1.0, 0.0));
        const JetFields jB = jet_coefficients(boundary_data(f2R, 1.0, 0.0));
        SphericalField f3_diff = jB.f3;
        f3_diff -= rotate(analyze(jA.f3), R, jA.grid);
        c.check_le(11, "third jet coefficient commutes with rotation",
                   f3_diff.sup_norm(), 1e-8);

        const GraphFunctionP gA =
            build_barrier(boundary_data(f2, 1.0, 1.0), {}, 0.1);
        const GraphFunctionP gB =
            build_barrier(boundary_data(f2R, 1.0, 1.0), {}, 0.1);
        const double s0 = std::min({0.05, 0.9 * gA.s_max(), 0.9 * gB.s_max()});
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        double worst_pt = 0.0;
        int used = 0;
        while (used < 10) {
            const double theta = 0.5 + (M_PI - 1.0) * u01(rng);
            const double phi = 2.0 * M_PI * u01(rng);
            const Eigen::Vector3d y(std::sin(theta) * std::cos(phi),
                                    std::sin(theta) * std::sin(phi),
                                    std::cos(theta));
            const Eigen::Vector3d Ry = R * y;
            const double theta_r = std::acos(std::clamp(Ry.z(), -1.0, 1.0));
            if (std::sin(theta_r) < 0.2) continue;
            const double phi_r = std::atan2(Ry.y(), Ry.x());
            const NodeGeometry nB = geometry_at(gB, s0, theta, phi);
            const NodeGeometry nA = geometry_at(gA, s0, theta_r, phi_r);
            worst_pt = std::max({worst_pt, std::abs(nB.H - nA.H),
                                 std::abs(nB.A_ring - nA.A_ring)});
            ++used;
        }
        c.check_le(11, "pointwise curvature scalars commute with rotation",
                   worst_pt, 1e-8, "10 sample points");
    }

    // (d) chart and serialization round-trips.
    {
        const double m = 1.0;
        double worst = 0.0;
        for (double r : log_spaced(2.05, 50.0, 24)) {
            const double r2 = tortoise_inverse(m, tortoise(m, r));
            worst = std::max(worst, std::abs(r2 - r) / r);
        }
        c.check_le(11, "tortoise coordinate round-trip (rel)", worst, 1e-10);

        worst = 0.0;
        for (double r : log_spaced(2.05, 50.0, 16)) {
            for (double t : {-5.0, 0.0, 7.0}) {
                const Kruskal k = kruskal_from_tr(m, t, r);
                double t2 = 0.0, r2 = 0.0;
                tr_from_kruskal(m, k, &t2, &r2);
                worst = std::max(worst, std::abs(r2 - r) / r);
                worst = std::max(worst,
                                 std::abs(t2 - t) / std::max(std::abs(t), 1.0));
            }
        }
        c.check_le(11, "Kruskal map round-trip (rel)", worst, 1e-10);

        worst = 0.0;
        for (double r : log_spaced(2.05, 20.0, 12)) {
            for (double t : {-5.0, 0.0, 7.0}) {
                const Kruskal k = kruskal_from_tr(m, t, r);
                const Penrose pe = penrose_from_kruskal(k);
                const double V = std::tan(pe.xi + pe.chi);
                const double U = std::tan(pe.xi - pe.chi);
                const double T2 = 0.5 * (V + U), X2 = 0.5 * (V - U);
                const double scale =
                    std::max({1.0, std::abs(k.T), std::abs(k.X)});
                worst = std::max(worst, std::abs(T2 - k.T) / scale);
                worst = std::max(worst, std::abs(X2 - k.X) / scale);
            }
        }
        c.check_le(11, "Penrose compactification round-trip (rel)", worst,
                   1e-10);

        worst = 0.0;
        for (double r : log_spaced(2.0 * m * (1.0 + 1e-6), 50.0, 24)) {
            const double r2 = r_of_eta(m, eta_of_r(m, r));
            worst = std::max(worst, std::abs(r2 - r) / r);
        }
        c.check_le(11, "eta chart round-trip (rel)", worst, 1e-10);

        worst = 0.0;
        const double eta_cut = 0.9 * std::sqrt(1.0 - std::sqrt(0.5));
        for (int i = 0; i <= 20; ++i) {
            const double eta = eta_cut * i / 20.0;
            worst = std::max(worst,
                             std::abs(psi_corner_inverse(psi_corner(eta)) -
                                      eta));
        }
        c.check_le(11, "corner map round-trip", worst, 1e-12);

        const GridPtr grid8 = make_grid(8);
        const SphericalField f =
            synthesize(random_spectrum(grid8, 8, 4321, true));
        const auto dir = std::filesystem::temp_directory_path();
        const auto p_spec = dir / "cmclab_roundtrip_spectral.csv";
        const auto p_grid = dir / "cmclab_roundtrip_grid.csv";
        save_field(p_spec, f, SnapshotKind::Spectral);
        save_field(p_grid, f, SnapshotKind::Grid);
        SphericalField d_spec = load_field(p_spec);
        d_spec -= f;
        SphericalField d_grid = load_field(p_grid);
        d_grid -= f;
        std::filesystem::remove(p_spec);
        std::filesystem::remove(p_grid);
        c.check_le(11, "snapshot round-trip (spectral and grid)",
                   std::max(d_spec.sup_norm(), d_grid.sup_norm()), 1e-10);
    }

    c.runtime(11, elapsed_s(t0), 60.0);
}

// ---------------------------------------------------------------------------
// custom: config-driven one-off runs.
void run_custom(Ctx& c) {
    const std::string mode = c.cfg.get_str("custom", "mode");
    if (c.opt.out_dir.empty())
        throw ConfigError("custom: requires an output directory");
    std::filesystem::create_directories(c.opt.out_dir);

    if (mode == "jets") {
        const double m = c.cfg.get_num("custom", "m", 0.0);
        const double h0 = c.cfg.get_num("custom", "h0", 1.0);
        SphericalField f;
        if (c.cfg.has("custom", "snapshot")) {
            f = load_field(c.cfg.get_str("custom", "snapshot"));
        } else {
            // Collect coeff_<l>_<m> keys.
            struct Mode {
                int l, mm;
                double v;
            };
            std::vector<Mode> modes;
            int l_needed = 0;
            const auto& sections = c.cfg.sections();
            const auto sec = sections.find("custom");
            if (sec != sections.end()) {
                for (const auto& [key, val] : sec->second) {
                    if (key.rfind("coeff_", 0) != 0) continue;
                    const std::string rest = key.substr(6);
                    const auto us = rest.find('_');
                    if (us == std::string::npos)
                        throw ConfigError("custom: bad key '" + key +
                                          "', want coeff_<l>_<m>");
                    int l = 0, mm = 0;
                    double v = 0.0;
                    try {
                        l = std::stoi(rest.substr(0, us));
                        mm = std::stoi(rest.substr(us + 1));
                        v = std::stod(val);
                    } catch (const std::exception&) {
                        throw ConfigError("custom: bad key or value for '" +
                                          key + "'");
                    }
                    if (l < 0 || std::abs(mm) > l)
                        throw ConfigError("custom: mode out of range in '" +
                                          key + "'");
                    modes.push_back({l, mm, v});
                    l_needed = std::max(l_needed, l);
                }
            }
            if (modes.empty())
                throw ConfigError(
                    "custom: jets mode needs 'snapshot' or coeff_<l>_<m> "
                    "keys");
            const int l_grid =
                c.cfg.get_int("custom", "grid", std::max(4, l_needed));
            if (l_grid < l_needed)
                throw ConfigError("custom: grid l_max smaller than the "
                                  "highest coefficient degree");
            const GridPtr grid = make_grid(l_grid);
            Eigen::VectorXd coef = Eigen::VectorXd::Zero(grid->n_modes());
            for (const auto& md : modes)
                coef(SphericalGrid::mode_index(md.l, md.mm)) = md.v;
            f = synthesize(Spectrum(grid, std::move(coef)));
        }
        if (!(h0 > 0.0)) throw ConfigError("custom: h0 must be positive");
        if (!(m >= 0.0)) throw ConfigError("custom: m must be >= 0");

        const BoundaryData bd = boundary_data(f, h0, m);
        const JetFields j = jet_coefficients(bd);
        const SphericalField rest = compatibility_residual(bd);
        const auto save = [&](const std::string& name,
                              const SphericalField& field) {
            const auto p = c.opt.out_dir / name;
            save_field(p, field, SnapshotKind::Spectral);
            c.res->artifacts.push_back(p);
        };
        save("f1.csv", j.f1);
        save("f2.csv", j.f2);
        save("f3.csv", j.f3);
        save("residual.csv", rest);

        const EigenspaceCheck eig = eigenspace_membership(f);
        auto csv = CsvWriter(c.opt.out_dir / "summary.csv");
        c.res->artifacts.push_back(c.opt.out_dir / "summary.csv");
        csv.header({"quantity", "value"});
        csv.row(std::vector<std::string>{"sup_f", format_g17(f.sup_norm())});
        csv.row(std::vector<std::string>{"sup_f1",
                                         format_g17(j.f1.sup_norm())});
        csv.row(std::vector<std::string>{"sup_f2",
                                         format_g17(j.f2.sup_norm())});
        csv.row(std::vector<std::string>{"sup_f3",
                                         format_g17(j.f3.sup_norm())});
        csv.row(std::vector<std::string>{"sup_residual",
                                         format_g17(rest.sup_norm())});
        csv.row(std::vector<std::string>{"eigenspace_defect",
                                         format_g17(eig.defect)});
        c.info("sup of the compatibility residual", rest.sup_norm());
        c.info("eigenspace defect of the boundary data", eig.defect);
        return;
    }

    if (mode == "sscmc") {
        SSCMCParams p;
        p.m = c.cfg.get_num("custom", "m");
        p.H = c.cfg.get_num("custom", "H");
        p.c = c.cfg.get_num("custom", "c");
        try {
            p.validate();
        } catch (const DomainError& e) {
            throw ConfigError(std::string("custom: ") + e.what());
        }
        const double r_lo_default = p.m > 0.0 ? 3.0 * p.m : 1.0;
        const double r0 = c.cfg.get_num("custom", "r0", r_lo_default);
        const double r1 = c.cfg.get_num("custom", "r1", 10.0 * r_lo_default);
        const int n = c.cfg.get_int("custom", "n", 40);
        if (!(r0 > 2.0 * p.m) || !(r1 > r0) || n < 2)
            throw ConfigError("custom: need 2m < r0 < r1 and n >= 2");

        HeightTable table = sscmc_height_table(p, r0, r1, n);
        CsvWriter out_r(c.opt.out_dir / "slice_r.csv");
        c.res->artifacts.push_back(c.opt.out_dir / "slice_r.csv");
        out_r.comment("symmetric slice in the radial chart");
        out_r.header({"r", "f", "fprime"});
        for (std::size_t i = 0; i < table.r.size(); ++i)
            out_r.row({table.r[i], table.f[i], sscmc_slope(p, table.r[i])});

        const GraphFunctionP g = sscmc_graph(make_grid(2), p);
        CsvWriter out_s(c.opt.out_dir / "slice_s.csv");
        c.res->artifacts.push_back(c.opt.out_dir / "slice_s.csv");
        out_s.comment("symmetric slice in the boundary null chart");
        out_s.header({"s", "P", "Ps"});
        for (double s : log_spaced(1.0 / r1, 1.0 / r0, n))
            out_s.row({s, g.ds_field(0, s)(0, 0), sscmc_Ps(p, s)});

        c.info("rows written per chart table", double(n));
        return;
    }

    throw ConfigError("custom: unknown mode '" + mode +
                      "' (expected jets or sscmc)");
}

using Runner = void (*)(Ctx&);

const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> table = {
        {"sscmc-jets", run_sscmc_jets},
        {"sscmc-scalar", run_sscmc_scalar},
        {"ah-profile", run_ah_profile},
        {"ah-check", run_ah_check},
        {"barrier", run_barrier},
        {"compat", run_compat},
        {"adecay", run_adecay},
        {"horizon-slope", run_horizon_slope},
        {"boundary-geodesic", run_boundary_geodesic},
        {"horizon-residual", run_horizon_residual},
        {"custom", run_custom},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "sscmc-jets",    "sscmc-scalar",      "ah-profile",
        "ah-check",      "barrier",           "compat",
        "adecay",        "horizon-slope",     "boundary-geodesic",
        "horizon-residual", "custom",
    };
    return names;
}

ExperimentResult run_experiment(const std::string& name, const Config& cfg,
                                const RunOptions& opt) {
    const auto it = runners().find(name);
    if (it == runners().end())
        throw DomainError("unknown experiment '" + name + "'");
    ExperimentResult res;
    res.name = name;
    Ctx ctx{cfg, opt, &res};
    const auto t0 = Clock::now();
    it->second(ctx);
    res.elapsed_seconds = elapsed_s(t0);
    return res;
}

}  // namespace cmclab
