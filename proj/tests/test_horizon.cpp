#include <doctest.h>

#include <cmath>
#include <vector>

#include "cmclab/errors.hpp"
#include "cmclab/horizon.hpp"
#include "cmclab/sphere.hpp"
#include "cmclab/sscmc.hpp"

using namespace cmclab;

namespace {

SphericalField const_field(const GridPtr& g, double v) {
    SphericalField f(g);
    f.values().setConstant(v);
    return f;
}

}  // namespace

TEST_SUITE("horizon") {

TEST_CASE("polynomial horizon graphs differentiate exactly") {
    const GridPtr g = make_grid(4);
    const std::vector<SphericalField> coeffs = {
        const_field(g, 0.3), const_field(g, 2.0), const_field(g, -0.7),
        const_field(g, 0.1)};
    const HorizonGraph h = HorizonGraph::polynomial(g, 1.0, coeffs);
    CHECK(h.mass() == 1.0);
    const double eta = 0.4;
    const double u = 0.3 + 2.0 * eta - 0.7 * eta * eta +
                     0.1 * eta * eta * eta;
    CHECK(h.u_field(eta)(0, 0) == doctest::Approx(u).epsilon(1e-15));
    CHECK(h.u_eta_field(eta)(1, 2) ==
          doctest::Approx(2.0 - 1.4 * eta + 0.3 * eta * eta).epsilon(1e-15));
    CHECK(h.u_etaeta_field(eta)(0, 3) ==
          doctest::Approx(-1.4 + 0.6 * eta).epsilon(1e-15));
    CHECK(h.u_eta_at_zero()(2, 2) == doctest::Approx(2.0));
}

TEST_CASE("symmetric horizon-crossing slice through the eta chart") {
    const SSCMCParams p{1.0, 1.0, -8.0};
    const GridPtr g = make_grid(4);
    const HorizonGraph h = HorizonGraph::from_sscmc(g, p);

    // Frozen symbolic references for the slope field.
    CHECK(h.u_eta_field(0.3)(0, 0) ==
          doctest::Approx(14.084722654601214).epsilon(1e-12));
    CHECK(h.u_eta_at_zero()(0, 0) == doctest::Approx(24.0).epsilon(1e-12));

    // u is the antiderivative of the slope field.
    const double eta = 0.25, dh = 1e-5;
    const double fd =
        (h.u_field(eta + dh)(0, 0) - h.u_field(eta - dh)(0, 0)) / (2.0 * dh);
    CHECK(fd == doctest::Approx(h.u_eta_field(eta)(0, 0)).epsilon(1e-8));

    // The engine recovers the constructed mean curvature away from eta = 0.
    for (double e : {0.2, 0.4}) {
        SphericalField H = horizon_mean_curvature(h, e);
        H.values() -= 1.0;
        CHECK(H.sup_norm() < 1e-8);
    }

    // Series rearrangement of the curvature identity is exact.
    CHECK(horizon_series_residual(h, 0.3).sup_norm() < 1e-11);
}

TEST_CASE("boundary slope extrapolation is exact on polynomial data") {
    const GridPtr g = make_grid(4);
    const std::vector<SphericalField> coeffs = {
        const_field(g, 0.0), const_field(g, 5.0), const_field(g, -2.0),
        const_field(g, 0.4)};
    const HorizonGraph h = HorizonGraph::polynomial(g, 1.0, coeffs);
    const HorizonSlope slope = horizon_boundary_slope(h, 0.3, 6);
    CHECK((slope.estimate.values() - 5.0).abs().maxCoeff() < 1e-11);
    CHECK(slope.err_est < 1e-9);
}

TEST_CASE("series residual vanishes on generic polynomial graphs") {
    const GridPtr g = make_grid(6);
    std::vector<SphericalField> coeffs;
    for (int k = 0; k < 3; ++k) {
        SphericalField c = synthesize(
            random_spectrum(g, 2, 100 + std::uint64_t(k), true));
        c *= 0.15;
        coeffs.push_back(c);
    }
    coeffs[1] += const_field(g, 1.0);  // keep the slope bounded away from 0
    const HorizonGraph h = HorizonGraph::polynomial(g, 1.0, coeffs);
    CHECK(horizon_series_residual(h, 0.25).sup_norm() < 1e-12);
    CHECK(horizon_series_residual(h, 0.45).sup_norm() < 1e-12);
}

TEST_CASE("pairings of the symmetric slice against closed forms") {
    const SSCMCParams p{1.0, 1.0, -8.0};
    const GridPtr g = make_grid(6);
    const HorizonGraph h = HorizonGraph::from_sscmc(g, p);

    const auto rows = boundary_geodesic_pairings(h, {4.0, 2.2, 2.1});
    REQUIRE(rows.size() == 3u);
    // At r = 4m (h = 1/2): the radial pairing equals sqrt(2) m.
    CHECK(rows[0].p22 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    // p33 carries a sin^2(theta) factor, so its sup over the nodes sits just
    // below the closed-form value unless a node lies on the equator.
    CHECK(rows[0].p33 <= std::sqrt(2.0) * (1.0 + 1e-12));
    CHECK(rows[0].p33 > 0.95 * std::sqrt(2.0));
    CHECK(rows[0].h == doctest::Approx(0.5).epsilon(1e-14));
    // Killing-time pairings vanish identically for the symmetric slice;
    // the entries are built from O(10..100) intermediates, so round-off
    // lands near 1e-13.
    for (const auto& r : rows) {
        CHECK(r.p23 < 1e-12);
        CHECK(r.t22 < 1e-12);
        CHECK(r.t23 < 1e-12);
        CHECK(r.t33 < 1e-12);
    }
    // h^{3/2} scaling toward the horizon.
    const auto fine = boundary_geodesic_pairings(h, {2.0 / (1.0 - 0.02),
                                                     2.0 / (1.0 - 0.01)});
    const double ratio = fine[1].p22 / fine[0].p22;
    CHECK(ratio == doctest::Approx(std::pow(0.5, 1.5)).epsilon(0.05));
}

TEST_CASE("pairing preconditions") {
    const GridPtr g = make_grid(4);
    const HorizonGraph h = HorizonGraph::from_sscmc(g, {1.0, 1.0, -8.0});
    CHECK_THROWS_AS(boundary_geodesic_pairings(h, {2.0}), DomainError);
    CHECK_THROWS_AS(boundary_geodesic_pairings(h, {1.5}), DomainError);

    // A graph whose boundary slope vanishes is rejected.
    const HorizonGraph flat =
        HorizonGraph::polynomial(g, 1.0, {const_field(g, 1.0)});
    CHECK_THROWS_AS(boundary_geodesic_pairings(flat, {4.0}), DomainError);
}

TEST_CASE("non-spacelike eta-graphs are rejected") {
    const GridPtr g = make_grid(2);
    const HorizonGraph steep = HorizonGraph::polynomial(
        g, 1.0, {const_field(g, 0.0), const_field(g, 15.0)});
    CHECK_THROWS_AS(horizon_mean_curvature(steep, 0.4), DomainError);
    CHECK_NOTHROW(horizon_mean_curvature(steep, 0.1));
}

TEST_CASE("factory validation") {
    const GridPtr g = make_grid(2);
    CHECK_THROWS_AS(HorizonGraph::polynomial(g, 0.0, {const_field(g, 1.0)}),
                    DomainError);
    CHECK_THROWS_AS(HorizonGraph::polynomial(g, 1.0, {}), DomainError);
    CHECK_THROWS_AS(HorizonGraph::from_sscmc(g, {1.0, 1.0, 0.0}),
                    DomainError);  // not the horizon-crossing branch
}

}  // TEST_SUITE
