#include <doctest.h>

#include <cmath>
#include <vector>

#include "cmclab/detail/quad.hpp"
#include "cmclab/errors.hpp"
#include "cmclab/fitting.hpp"
#include "cmclab/jets.hpp"

using namespace cmclab;

TEST_SUITE("numerics") {

TEST_CASE("jet arithmetic reproduces closed-form derivatives") {
    // f(x) = sqrt(1 + x^2) / (2 - x) at x0 = 0.3.
    const double x0 = 0.3;
    const Jet<4> x = Jet<4>::variable(x0);
    const Jet<4> f = sqrt(1.0 + x * x) / (2.0 - x);

    const double r = std::sqrt(1.0 + x0 * x0), d = 2.0 - x0;
    CHECK(f.value() == doctest::Approx(r / d).epsilon(1e-14));
    // f' = x / (r d) + r / d^2
    const double f1 = x0 / (r * d) + r / (d * d);
    CHECK(f.deriv(1) == doctest::Approx(f1).epsilon(1e-13));
    // Cross-check the 4th derivative against a central difference of the
    // 3rd computed by jets at x0 +- h.
    const double h = 1e-4;
    const double d3p = (sqrt(1.0 + Jet<3>::variable(x0 + h) *
                                       Jet<3>::variable(x0 + h)) /
                        (2.0 - Jet<3>::variable(x0 + h)))
                           .deriv(3);
    const double d3m = (sqrt(1.0 + Jet<3>::variable(x0 - h) *
                                       Jet<3>::variable(x0 - h)) /
                        (2.0 - Jet<3>::variable(x0 - h)))
                           .deriv(3);
    CHECK(f.deriv(4) == doctest::Approx((d3p - d3m) / (2.0 * h)).epsilon(1e-6));
}

TEST_CASE("jet edge cases throw") {
    CHECK_THROWS_AS(sqrt(Jet<2>(-1.0)), DomainError);
    CHECK_THROWS_AS(Jet<2>(1.0) / Jet<2>(0.0), DomainError);
    CHECK(pow_int(Jet<2>::variable(3.0), 0).value() == 1.0);
    CHECK(pow_int(Jet<2>::variable(3.0), 2).deriv(1) == doctest::Approx(6.0));
}

TEST_CASE("decay_fit recovers an exact power law") {
    std::vector<double> x, y;
    for (int k = 0; k < 7; ++k) {
        x.push_back(0.1 * std::pow(2.0, -k));
        y.push_back(3.7 * std::pow(x.back(), 2.5));
    }
    const DecayFit f = decay_fit(x, y);
    CHECK(f.exponent == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(f.stderr_ < 1e-12);
    CHECK(f.n_used == 7);
    CHECK_FALSE(f.infinite);
}

TEST_CASE("decay_fit drops zeros and flags all-zero data") {
    std::vector<double> x = {0.1, 0.05, 0.025, 0.0125};
    std::vector<double> y = {1e-3, 0.0, 2.5e-4 / 4.0, 2.5e-4 / 16.0};
    const DecayFit f = decay_fit(x, y);
    CHECK(f.n_used == 3);
    CHECK(f.exponent == doctest::Approx(2.0).epsilon(1e-10));

    const DecayFit z = decay_fit(x, {0.0, 0.0, 0.0, 0.0});
    CHECK(z.infinite);
}

TEST_CASE("rate_fit recovers an exponential rate") {
    std::vector<double> t, y;
    for (int k = 0; k < 8; ++k) {
        t.push_back(0.5 * k);
        y.push_back(2.0 * std::exp(-1.7 * t.back()));
    }
    const DecayFit f = rate_fit(t, y);
    CHECK(f.exponent == doctest::Approx(1.7).epsilon(1e-12));
    CHECK(f.stderr_ < 1e-10);
}

TEST_CASE("neville_zero extrapolates one-sided and central stencils") {
    std::vector<double> h, v;
    for (int k = 0; k < 6; ++k) {
        h.push_back(0.4 * std::pow(2.0, -k));
        v.push_back(5.0 + 2.0 * h.back() + 3.0 * h.back() * h.back());
    }
    double err = 0.0;
    CHECK(neville_zero(h, v, 1, &err) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(std::abs(err) < 1e-8);

    std::vector<double> vc;
    for (double hh : h) vc.push_back(5.0 + hh * hh - 0.3 * hh * hh * hh * hh);
    CHECK(neville_zero(h, vc, 2) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("poly_fit recovers exact polynomial coefficients") {
    std::vector<double> x, y;
    for (int k = 0; k <= 8; ++k) {
        x.push_back(0.0125 * k);
        y.push_back(1.0 + 2.0 * x.back() + 0.5 * std::pow(x.back(), 3));
    }
    const auto a = poly_fit(x, y, 3, 0.1);
    REQUIRE(a.size() == 4);
    CHECK(a[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(a[1] == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(std::abs(a[2]) < 1e-6);
    CHECK(a[3] == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("adaptive quadrature hits analytic integrals") {
    const double s = detail::integrate([](double x) { return std::sin(x); },
                                       0.0, M_PI);
    CHECK(s == doctest::Approx(2.0).epsilon(1e-13));
    // Integrable endpoint singularity.
    const double t = detail::integrate(
        [](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    CHECK(t == doctest::Approx(2.0).epsilon(1e-10));
}

}  // TEST_SUITE
