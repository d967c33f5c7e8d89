#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "cmclab/errors.hpp"
#include "cmclab/expansion.hpp"
#include "cmclab/fitting.hpp"
#include "cmclab/geometry.hpp"
#include "cmclab/graph.hpp"
#include "cmclab/sphere.hpp"

using namespace cmclab;

namespace {

SphericalField linear_field(const GridPtr& g, const Eigen::Vector3d& a) {
    return SphericalField::from_cartesian(
        g, [&](const Eigen::Vector3d& y) { return a.dot(y); });
}

}  // namespace

TEST_SUITE("expansion") {

TEST_CASE("jet coefficients close the hyperboloid family") {
    const GridPtr g = make_grid(6);
    const Eigen::Vector3d a(0.3, -0.2, 0.4);
    const HyperboloidJets hyp = hyperboloid_jet_fields(g, a);
    const JetFields j = jet_coefficients(boundary_data(hyp.f, 1.0, 0.0));

    const auto compare = [&](const SphericalField& closed,
                             const SphericalField& jet) {
        SphericalField diff = synthesize_on(analyze(closed), j.grid);
        diff -= jet;
        return diff.sup_norm();
    };
    CHECK(compare(hyp.f1, j.f1) < 1e-10);
    CHECK(compare(hyp.f2, j.f2) < 1e-10);
    CHECK(compare(hyp.f3, j.f3) < 1e-10);
}

TEST_CASE("compatibility residual vanishes exactly on degree <= 1 data") {
    const GridPtr g = make_grid(8);
    const SphericalField f = linear_field(g, Eigen::Vector3d(0.7, 0.0, 0.0));
    // The floor is iterated spectral differentiation noise on the work grid,
    // roughly eps * (l(l+1))^2 ~ 5e-9 at l_max 34.
    CHECK(compatibility_residual(boundary_data(f, 1.0, 1.0)).sup_norm() <
          1e-8);
    SphericalField c(g);
    c.values().setConstant(0.4);
    CHECK(compatibility_residual(boundary_data(c, 1.0, 0.0)).sup_norm() <
          1e-8);
}

TEST_CASE("compatibility residual of the quadrupole fixture") {
    // f = z^2 - 1/3 on the sphere: the residual has sup 16 (attained at the
    // poles) and squared integral 1024 pi / 5.  Reference values computed
    // symbolically.
    const GridPtr g = make_grid(8);
    const SphericalField f = SphericalField::from_cartesian(
        g, [](const Eigen::Vector3d& y) { return y.z() * y.z() - 1.0 / 3.0; });
    const SphericalField rest = compatibility_residual(boundary_data(f, 1.0, 0.0));
    CHECK(integral(rest * rest) ==
          doctest::Approx(1024.0 * M_PI / 5.0).epsilon(1e-12));
    CHECK(std::abs(synth_at(analyze(rest), 0.0, 0.0)) ==
          doctest::Approx(16.0).epsilon(1e-9));
    CHECK(rest.sup_norm() <= 16.0 * (1.0 + 1e-12));
    CHECK(rest.sup_norm() > 15.0);
}

TEST_CASE("jet coefficients do not depend on the mass") {
    const GridPtr g = make_grid(6);
    const SphericalField f = synthesize(random_spectrum(g, 4, 31, true));
    const JetFields a = jet_coefficients(boundary_data(f, 1.0, 0.0));
    const JetFields b = jet_coefficients(boundary_data(f, 1.0, 7.3));
    CHECK((a.f1.values() == b.f1.values()).all());
    CHECK((a.f2.values() == b.f2.values()).all());
    CHECK((a.f3.values() == b.f3.values()).all());
    const SphericalField ra =
        compatibility_residual(boundary_data(f, 1.0, 0.0));
    const SphericalField rb =
        compatibility_residual(boundary_data(f, 1.0, 7.3));
    CHECK((ra.values() == rb.values()).all());
}

TEST_CASE("barrier drift realizes the residual: constant H0") {
    // H(s) - H0 = (H0^3/12) REST s^3 + O(s^4), checked per node by
    // Richardson extrapolation of the engine's mean curvature.
    const GridPtr g = make_grid(8);
    SphericalField f = SphericalField::from_cartesian(
        g, [](const Eigen::Vector3d& y) { return y.z() * y.z() - 1.0 / 3.0; });
    f *= 0.3;
    const BoundaryData bd = boundary_data(f, 1.0, 1.0);
    const GraphFunctionP barrier = build_barrier(bd, {}, 0.05);
    const SphericalField rest = compatibility_residual(bd);

    int i = 0, j = 0;
    double best = 0.0;
    for (int ii = 0; ii < rest.grid()->n_lat(); ++ii)
        for (int jj = 0; jj < rest.grid()->n_lon(); ++jj)
            if (std::abs(rest(ii, jj)) > best) {
                best = std::abs(rest(ii, jj));
                i = ii;
                j = jj;
            }
    REQUIRE(best > 0.05);
    std::vector<double> hs, vs;
    for (int k = 0; k < 6; ++k) {
        const double s = 0.02 * std::pow(2.0, -k);
        const SurfaceGeometry geo(barrier, s);
        hs.push_back(s);
        vs.push_back((geo.node(i, j).H - 1.0) / (s * s * s));
    }
    const double lim = neville_zero(hs, vs, 1);
    CHECK(lim == doctest::Approx(rest(i, j) / 12.0).epsilon(1e-3));
}

TEST_CASE("barrier drift realizes the residual: variable H0") {
    const GridPtr g = make_grid(8);
    const SphericalField f = linear_field(g, 0.3 * Eigen::Vector3d(1, 0, 0));
    SphericalField H0 = linear_field(g, 0.2 * Eigen::Vector3d(0, 0.6, 0.8));
    H0.values() += 1.0;
    const BoundaryData bd = boundary_data(f, H0, 0.0);
    const GraphFunctionP barrier = build_barrier(bd, {}, 0.05);
    const SphericalField rest = compatibility_residual(bd);
    const JetFields jets = jet_coefficients(bd);
    const SphericalField H0w = synthesize_on(analyze(H0), jets.grid);

    int i = 0, j = 0;
    double best = 0.0;
    for (int ii = 0; ii < rest.grid()->n_lat(); ++ii)
        for (int jj = 0; jj < rest.grid()->n_lon(); ++jj)
            if (std::abs(rest(ii, jj)) > best) {
                best = std::abs(rest(ii, jj));
                i = ii;
                j = jj;
            }
    REQUIRE(best > 0.01);
    const double h0 = H0w(i, j);
    std::vector<double> hs, vs;
    for (int k = 0; k < 6; ++k) {
        const double s = 0.02 * std::pow(2.0, -k);
        const SurfaceGeometry geo(barrier, s);
        hs.push_back(s);
        vs.push_back((geo.node(i, j).H - h0) / (s * s * s));
    }
    const double lim = neville_zero(hs, vs, 1);
    const double expect = h0 * h0 * h0 * rest(i, j) / 12.0;
    CHECK(lim == doctest::Approx(expect).epsilon(1e-3));

    // Prescribing the realized third derivative cancels the residual.
    SphericalField hsss = rest;
    hsss.values() *= 0.5 * H0w.values().pow(3.0);
    CHECK(compatibility_residual(bd, hsss).sup_norm() < 1e-9);
}

TEST_CASE("mismatched fourth coefficient degrades the trace-free decay to "
          "cubic") {
    const GridPtr g = make_grid(4);
    const Eigen::Vector3d a(0.0, 0.3, 0.4);
    const HyperboloidJets hyp = hyperboloid_jet_fields(g, a);
    SphericalField f4 = hyp.f4;
    f4.values() += 1.0;
    const GraphFunctionP barrier =
        build_barrier(boundary_data(hyp.f, 1.0, 0.0), f4, 0.1);
    std::vector<double> ss, sups;
    for (int k = 0; k < 6; ++k) {
        ss.push_back(0.05 * std::pow(2.0, -k));
        sups.push_back(
            SurfaceGeometry(barrier, ss.back()).A_ring_field().sup_norm());
    }
    const DecayFit fit = decay_fit(ss, sups);
    CHECK(fit.exponent > 2.5);
    CHECK(fit.exponent < 3.5);
}

TEST_CASE("eigenspace membership") {
    const GridPtr g = make_grid(6);
    SphericalField f = linear_field(g, Eigen::Vector3d(0.3, 0.2, -0.5));
    f.values() += 0.7;
    const EigenspaceCheck in = eigenspace_membership(f);
    CHECK(in.inside);
    CHECK(in.defect < 1e-12);

    SphericalField g2 = SphericalField::from_cartesian(
        g, [](const Eigen::Vector3d& y) { return y.x() * y.y(); });
    g2 *= 0.1;
    f += g2;
    const EigenspaceCheck out = eigenspace_membership(f);
    CHECK_FALSE(out.inside);
    CHECK(out.defect > 1e-5);
}

TEST_CASE("barrier construction reproduces the boundary data") {
    const GridPtr g = make_grid(8);
    const SphericalField f = synthesize(random_spectrum(g, 8, 5, true));
    const GraphFunctionP barrier =
        build_barrier(boundary_data(f, 1.0, 1.0), {}, 0.1);
    SphericalField bv = barrier.boundary_value();
    bv -= synthesize_on(analyze(f), barrier.grid());
    CHECK(bv.sup_norm() < 1e-12);
    CHECK(barrier.grid()->l_max() >= 4 * g->l_max());
    CHECK(barrier.s_max() <= 0.1);
    CHECK(barrier.s_max() > 0.0);
}

TEST_CASE("invalid boundary data is rejected") {
    const GridPtr g = make_grid(4);
    const SphericalField f = linear_field(g, Eigen::Vector3d(0.1, 0, 0));
    CHECK_THROWS_AS(jet_coefficients(boundary_data(f, -1.0, 0.0)),
                    DomainError);
    CHECK_THROWS_AS(jet_coefficients(boundary_data(f, 1.0, -2.0)),
                    DomainError);
    SphericalField bad_h0 = linear_field(g, Eigen::Vector3d(0, 0, 3.0));
    bad_h0.values() += 1.0;  // dips negative near the south pole
    CHECK_THROWS_AS(jet_coefficients(boundary_data(f, bad_h0, 0.0)),
                    DomainError);
}

}  // TEST_SUITE
