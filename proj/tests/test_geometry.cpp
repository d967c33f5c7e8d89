#include <doctest.h>

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <functional>

#include "cmclab/errors.hpp"
#include "cmclab/expansion.hpp"
#include "cmclab/geometry.hpp"
#include "cmclab/graph.hpp"
#include "cmclab/sphere.hpp"
#include "cmclab/sscmc.hpp"

using namespace cmclab;

namespace {

SphericalField linear_field(const GridPtr& g, const Eigen::Vector3d& a) {
    return SphericalField::from_cartesian(
        g, [&](const Eigen::Vector3d& y) { return a.dot(y); });
}

// Coordinate components (theta, phi, s) of the rescaled induced metric at an
// arbitrary point, from the orthonormal-frame matrix.
Eigen::Matrix3d coord_gbar(const GraphFunctionP& g,
                           const std::array<double, 3>& x) {
    const NodeGeometry n = geometry_at(g, x[2], x[0], x[1]);
    const double st = std::sin(x[0]);
    Eigen::Matrix3d m;
    m(0, 0) = n.gbar(0, 0);
    m(0, 1) = m(1, 0) = n.gbar(0, 1) * st;
    m(0, 2) = m(2, 0) = n.gbar(0, 2);
    m(1, 1) = n.gbar(1, 1) * st * st;
    m(1, 2) = m(2, 1) = n.gbar(1, 2) * st;
    m(2, 2) = n.gbar(2, 2);
    return m;
}

// Scalar curvature of a coordinate metric by central finite differences.
double scalar_curvature_fd(
    const std::function<Eigen::Matrix3d(const std::array<double, 3>&)>& met,
    const std::array<double, 3>& x, double h) {
    const Eigen::Matrix3d g = met(x);
    const Eigen::Matrix3d gi = g.inverse();

    std::array<Eigen::Matrix3d, 3> dg, dgi;
    std::array<std::array<Eigen::Matrix3d, 3>, 3> ddg;
    for (int k = 0; k < 3; ++k) {
        auto xp = x, xm = x;
        xp[std::size_t(k)] += h;
        xm[std::size_t(k)] -= h;
        const Eigen::Matrix3d gp = met(xp), gm = met(xm);
        dg[std::size_t(k)] = (gp - gm) / (2.0 * h);
        ddg[std::size_t(k)][std::size_t(k)] = (gp - 2.0 * g + gm) / (h * h);
        dgi[std::size_t(k)] = -gi * dg[std::size_t(k)] * gi;
    }
    for (int k = 0; k < 3; ++k)
        for (int l = k + 1; l < 3; ++l) {
            auto xpp = x, xpm = x, xmp = x, xmm = x;
            xpp[std::size_t(k)] += h; xpp[std::size_t(l)] += h;
            xpm[std::size_t(k)] += h; xpm[std::size_t(l)] -= h;
            xmp[std::size_t(k)] -= h; xmp[std::size_t(l)] += h;
            xmm[std::size_t(k)] -= h; xmm[std::size_t(l)] -= h;
            const Eigen::Matrix3d mixed =
                (met(xpp) - met(xpm) - met(xmp) + met(xmm)) / (4.0 * h * h);
            ddg[std::size_t(k)][std::size_t(l)] = mixed;
            ddg[std::size_t(l)][std::size_t(k)] = mixed;
        }

    double Gam[3][3][3];
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                double sum = 0.0;
                for (int d = 0; d < 3; ++d)
                    sum += 0.5 * gi(a, d) *
                           (dg[std::size_t(b)](d, c) +
                            dg[std::size_t(c)](b, d) -
                            dg[std::size_t(d)](b, c));
                Gam[a][b][c] = sum;
            }
    double dGam[3][3][3][3];  // dGam[e][a][b][c] = d_e Gamma^a_{bc}
    for (int e = 0; e < 3; ++e)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c) {
                    double sum = 0.0;
                    for (int d = 0; d < 3; ++d) {
                        sum += 0.5 * dgi[std::size_t(e)](a, d) *
                               (dg[std::size_t(b)](d, c) +
                                dg[std::size_t(c)](b, d) -
                                dg[std::size_t(d)](b, c));
                        sum += 0.5 * gi(a, d) *
                               (ddg[std::size_t(e)][std::size_t(b)](d, c) +
                                ddg[std::size_t(e)][std::size_t(c)](b, d) -
                                ddg[std::size_t(e)][std::size_t(d)](b, c));
                    }
                    dGam[e][a][b][c] = sum;
                }

    double R = 0.0;
    for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) {
            double ric = 0.0;
            for (int a = 0; a < 3; ++a) {
                ric += dGam[a][a][b][c] - dGam[c][a][b][a];
                for (int e = 0; e < 3; ++e)
                    ric += Gam[a][a][e] * Gam[e][b][c] -
                           Gam[a][c][e] * Gam[e][b][a];
            }
            R += gi(b, c) * ric;
        }
    return R;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("exact hyperboloids calibrate the engine") {
    const GridPtr g = make_grid(16);
    const GraphFunctionP hyp =
        hyperboloid_graph(g, Eigen::Vector3d(0.2, 0.0, 0.3));
    for (double s : {0.05, 0.2}) {
        const SurfaceGeometry geo(hyp, s);
        SphericalField H = geo.H_field();
        H.values() -= 1.0;
        CHECK(H.sup_norm() < 1e-9);
        SphericalField Hf = geo.H_formula_field();
        Hf.values() -= 1.0;
        CHECK(Hf.sup_norm() < 1e-9);
        CHECK(geo.A_ring_field().sup_norm() < 1e-10);
        SphericalField S = geo.S_field();
        S.values() += 6.0;
        CHECK(S.sup_norm() < 1e-8);
        CHECK(geo.min_L() > 0.0);
    }
}

TEST_CASE("mean curvature: tensor route vs scalar route") {
    const GridPtr g = make_grid(8);
    const GraphFunctionP b = build_barrier(
        boundary_data(0.3 * synthesize(random_spectrum(g, 4, 42, true)), 1.0,
                      1.0),
        {}, 0.12);
    for (double s : {0.02, 0.08}) {
        const SurfaceGeometry geo(b, s);
        SphericalField diff = geo.H_field();
        diff -= geo.H_formula_field();
        CHECK(diff.sup_norm() < 1e-8);
        SphericalField mc = mean_curvature(b, s);
        mc -= geo.H_formula_field();
        CHECK(mc.sup_norm() < 1e-13);
        SphericalField ln = lorentz_norm(b, s);
        ln -= geo.L_field();
        CHECK(ln.sup_norm() < 1e-13);
    }
}

TEST_CASE("symmetric slices: trace-free curvature has the closed magnitude") {
    // |A - H G|^2 = S + 6 H^2 = 6 c^2 s^6 for the symmetric slice at H = 1.
    const SSCMCParams p{1.0, 1.0, 2.0};
    const GraphFunctionP slice = sscmc_graph(make_grid(4), p);
    for (double s : {0.02, 0.05}) {
        const SurfaceGeometry geo(slice, s);
        const double expect = std::sqrt(6.0) * std::abs(p.c) * s * s * s;
        CHECK(geo.A_ring_field()(1, 2) ==
              doctest::Approx(expect).epsilon(1e-9));
        SphericalField H = geo.H_field();
        H.values() -= p.H;
        CHECK(H.sup_norm() < 1e-10);
    }
}

TEST_CASE("engine returns the constructed mean curvature") {
    const SSCMCParams p{1.0, 2.0, 1.0};
    const GraphFunctionP slice = sscmc_graph(make_grid(4), p);
    const SurfaceGeometry geo(slice, 0.05);
    SphericalField H = geo.H_field();
    H.values() -= p.H;
    CHECK(H.sup_norm() < 1e-6);
}

TEST_CASE("truncating the cubic slope term is an order-3 error") {
    const GridPtr g = make_grid(6);
    const double m = 1.0;
    const GraphFunctionP b = build_barrier(
        boundary_data(linear_field(g, Eigen::Vector3d(0.2, 0.1, 0.4)), 1.0,
                      m),
        {}, 0.12);
    std::vector<double> ss, sups;
    for (int k = 0; k < 6; ++k) {
        const double s = 0.02 * std::pow(2.0, -k);
        const SurfaceGeometry geo(b, s);
        const SphericalField Ps = b.ds_field(1, s);
        const SphericalField Pss = b.ds_field(2, s);
        const SphericalField L = geo.L_field();
        const double kk = s * s * (1.0 - 2.0 * m * s);
        const double c1 = s - 3.0 * m * s * s;
        const double c2 = 0.5 * kk * (2.0 * s - 6.0 * m * s * s);
        const auto& gr = *b.grid();
        double sup = 0.0, sup_exact = 0.0;
        for (int i = 0; i < gr.n_lat(); ++i)
            for (int j = 0; j < gr.n_lon(); ++j) {
                const double rootL = std::sqrt(L(i, j));
                const double A33 = geo.node(i, j).sAbar(2, 2) / s;
                const double full =
                    (-Pss(i, j) +
                     (3.0 * c1 + c2 * Ps(i, j)) * Ps(i, j) * Ps(i, j)) /
                    rootL;
                const double truncated =
                    (-Pss(i, j) + 3.0 * c1 * Ps(i, j) * Ps(i, j)) / rootL;
                sup_exact = std::max(sup_exact, std::abs(A33 - full));
                sup = std::max(sup, std::abs(A33 - truncated));
            }
        CHECK(sup_exact < 1e-12);  // engine assembles exactly this expression
        ss.push_back(s);
        sups.push_back(sup);
    }
    const DecayFit fit = decay_fit(ss, sups);
    CHECK(fit.exponent > 2.9);
    CHECK(fit.exponent < 3.3);
}

TEST_CASE("intrinsic scalar curvature agrees with a finite-difference Gauss "
          "computation") {
    const GridPtr g = make_grid(8);
    const GraphFunctionP b = build_barrier(
        boundary_data(linear_field(g, Eigen::Vector3d(0.25, -0.1, 0.3)),
                      1.0, 1.0),
        {}, 0.12);
    const double s = 0.05, th = 1.1, ph = 0.7;

    // Conformal split: the physical metric is s^{-2} gbar, so
    //   S = s^2 Rbar + 4 s (det gbar)^{-1/2} d_i(sqrt(det gbar) gbar^{i s})
    //       - 6 gbar^{ss}
    // with all derivatives in the coordinates (theta, phi, s).
    const auto met = [&](const std::array<double, 3>& x) {
        return coord_gbar(b, x);
    };
    const double h = 2e-3;
    const double Rbar = scalar_curvature_fd(met, {th, ph, s}, h);

    const Eigen::Matrix3d gb = met({th, ph, s});
    double div = 0.0;  // d_i (sqrt(det) gbar^{i3}) by central differences
    for (int k = 0; k < 3; ++k) {
        auto xp = std::array<double, 3>{th, ph, s};
        auto xm = xp;
        xp[std::size_t(k)] += h;
        xm[std::size_t(k)] -= h;
        const Eigen::Matrix3d gp = met(xp), gm = met(xm);
        const double fp = std::sqrt(gp.determinant()) * gp.inverse()(k, 2);
        const double fm = std::sqrt(gm.determinant()) * gm.inverse()(k, 2);
        div += (fp - fm) / (2.0 * h);
    }
    const double S_fd = s * s * Rbar +
                        4.0 * s * div / std::sqrt(gb.determinant()) -
                        6.0 * gb.inverse()(2, 2);

    const double S_engine = geometry_at(b, s, th, ph).S;
    CHECK(S_fd == doctest::Approx(S_engine).epsilon(1e-3));
}

TEST_CASE("physical-scaling accessors are consistent with the scalars") {
    const GridPtr g = make_grid(10);
    const GraphFunctionP hyp =
        hyperboloid_graph(g, Eigen::Vector3d(0.0, 0.25, 0.2));
    const double s = 0.1;
    const SurfaceGeometry geo(hyp, s);
    const int i = 3, j = 5;
    const Eigen::Matrix3d G = geo.physical_metric(i, j);
    const Eigen::Matrix3d A = geo.physical_shape(i, j);
    const NodeGeometry& n = geo.node(i, j);

    CHECK((G - n.gbar / (s * s)).norm() < 1e-12 * G.norm());
    CHECK((G.inverse() * A).trace() ==
          doctest::Approx(3.0 * n.H).epsilon(1e-12));
    const Eigen::Matrix3d N = G.inverse() * (A - n.H * G);
    CHECK(std::sqrt((N * N).trace()) ==
          doctest::Approx(n.A_ring).epsilon(1e-6));
}

TEST_CASE("point evaluation matches the grid assembly at the nodes") {
    const GridPtr g = make_grid(8);
    const GraphFunctionP b = build_barrier(
        boundary_data(0.2 * synthesize(random_spectrum(g, 3, 7, true)), 1.0,
                      1.0),
        {}, 0.1);
    const double s = 0.04;
    const SurfaceGeometry geo(b, s);
    const auto& gr = *b.grid();
    for (int i : {1, gr.n_lat() / 2}) {
        for (int j : {0, 4}) {
            const NodeGeometry pt =
                geometry_at(b, s, gr.theta(i), gr.phi(j));
            const NodeGeometry& nd = geo.node(i, j);
            CHECK(std::abs(pt.H - nd.H) < 1e-10);
            CHECK(std::abs(pt.A_ring - nd.A_ring) < 1e-10);
            CHECK(std::abs(pt.L - nd.L) < 1e-10);
            CHECK(std::abs(pt.S - nd.S) < 1e-9);
        }
    }
    CHECK_THROWS_AS(geometry_at(b, s, 1e-12, 0.0), DomainError);
}

TEST_CASE("non-spacelike graphs are rejected") {
    const GridPtr g = make_grid(2);
    SphericalField c0(g), c1(g);
    c1.values().setConstant(10.0);  // P_s = +10 makes L negative
    const GraphFunctionP bad = GraphFunctionP::poly_in_s({c0, c1}, 1.0);
    CHECK(lorentz_norm(bad, 0.05).values().maxCoeff() < 0.0);
    CHECK_THROWS_AS(SurfaceGeometry(bad, 0.05), DomainError);
    CHECK_THROWS_AS(spacelike_smax(bad, 0.1), DomainError);

    // A healthy graph keeps the requested window.
    const GraphFunctionP good =
        hyperboloid_graph(g, Eigen::Vector3d(0.1, 0.0, 0.0));
    CHECK(spacelike_smax(good, 0.2) == 0.2);
}

}  // TEST_SUITE
