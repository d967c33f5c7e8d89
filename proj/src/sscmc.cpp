#include "cmclab/sscmc.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "cmclab/detail/quad.hpp"
#include "cmclab/errors.hpp"
#include "cmclab/fitting.hpp"
#include "cmclab/schwarzschild.hpp"

namespace cmclab {

void SSCMCParams::validate() const {
    if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("sscmc: m must be >= 0");
    if (!(H > 0.0) || !std::isfinite(H)) throw DomainError("sscmc: H must be > 0");
    if (!std::isfinite(c)) throw DomainError("sscmc: c must be finite");
}

bool is_horizon_branch(const SSCMCParams& p) {
    p.validate();
    const double target = -8.0 * p.m * p.m * p.m * p.H;
    return std::abs(p.c - target) <= 1e-12 * std::max(1.0, std::abs(target));
}

double sscmc_ell(const SSCMCParams& p, double r) {
    p.validate();
    const double h = metric_h(p.m, r);
    return (p.H * r + p.c / (r * r)) / std::sqrt(h);
}

double sscmc_slope(const SSCMCParams& p, double r) {
    const double ell = sscmc_ell(p, r);
    const double h = metric_h(p.m, r);
    return ell / (h * std::sqrt(1.0 + ell * ell));
}

double sscmc_height(const SSCMCParams& p, double r0, double r1) {
    p.validate();
    if (r1 < r0) return -sscmc_height(p, r1, r0);
    if (p.m == 0.0) {
        if (r0 <= 0.0) throw DomainError("sscmc height: r0 must be > 0");
        return detail::integrate([&](double r) { return sscmc_slope(p, r); },
                                 r0, r1);
    }
    const double rh = 2.0 * p.m;
    if (r0 < rh || (r0 == rh && !is_horizon_branch(p)))
        throw DomainError("sscmc height: slice does not reach this radius");
    // Substitution r = 2m + w^2 removes the integrable (r - 2m)^{-1/2}
    // endpoint of the horizon branch and is harmless otherwise.
    const double w0 = std::sqrt(r0 - rh), w1 = std::sqrt(r1 - rh);
    return detail::integrate(
        [&](double w) { return 2.0 * w * sscmc_slope(p, rh + w * w); }, w0, w1);
}

HeightTable sscmc_height_table(const SSCMCParams& p, double r0, double r1,
                               int n) {
    if (n < 2) throw DomainError("sscmc height table: need n >= 2");
    HeightTable t;
    t.r.resize(n);
    t.f.resize(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        t.r[i] = r0 + (r1 - r0) * i / double(n - 1);
        if (i > 0) acc += sscmc_height(p, t.r[i - 1], t.r[i]);
        t.f[i] = acc;
    }
    return t;
}

namespace {

// P_s as a jet in s; shared by the pointwise and derivative paths.
template <std::size_t N>
Jet<N> Ps_jet_impl(const SSCMCParams& p, double s_val) {
    if (s_val < 0.0) throw DomainError("sscmc: s must be >= 0");
    if (p.m > 0.0 && s_val >= 1.0 / (2.0 * p.m))
        throw DomainError("sscmc: s outside the exterior region");
    Jet<N> s = Jet<N>::variable(s_val);
    Jet<N> denom = Jet<N>(p.H) + Jet<N>(p.c) * s * s * s;
    if (denom.value() <= 0.0)
        throw DomainError("sscmc: slice leaves the graphical regime here");
    Jet<N> k = s * s * (Jet<N>(1.0) - Jet<N>(2.0 * p.m) * s);
    Jet<N> x = k / (denom * denom);
    Jet<N> w = sqrt(Jet<N>(1.0) + x);
    return -(Jet<N>(1.0) / (denom * denom)) / (w * (Jet<N>(1.0) + w));
}

}  // namespace

double sscmc_Ps(const SSCMCParams& p, double s) {
    p.validate();
    return Ps_jet_impl<0>(p, s).value();
}

Jet<3> sscmc_Ps_jet3(const SSCMCParams& p, double s) {
    p.validate();
    return Ps_jet_impl<3>(p, s);
}

ExpansionJets sscmc_expansion_jets(const SSCMCParams& p) {
    p.validate();
    ExpansionJets out{};
    const double H = p.H;
    out.f1 = -0.5 / (H * H);
    out.f2 = 0.0;
    out.f3 = 0.75 / (H * H * H * H);
    out.f4 = (6.0 * p.c * H - 4.5 * p.m) / (H * H * H * H);

    // Independent numeric recovery: least-squares polynomial differentiation
    // of P_s sampled on Chebyshev nodes of a safe window [0, s0].  The
    // window must stay well inside the convergence disc of the profile or
    // the Taylor tail aliases into the recovered coefficients.
    double s0 = 0.1;
    if (p.m > 0.0) s0 = std::min(s0, 0.125 / p.m);
    if (p.c < 0.0) s0 = std::min(s0, 0.4 * std::cbrt(H / -p.c));
    const int n_nodes = 20, degree = 9;
    std::vector<double> xs(n_nodes), ys(n_nodes);
    for (int j = 0; j < n_nodes; ++j) {
        xs[j] = s0 * 0.5 * (1.0 - std::cos(M_PI * (j + 0.5) / n_nodes));
        ys[j] = sscmc_Ps(p, xs[j]);
    }
    // P_s = sum_j a_j s^j with a_j = f_{j+1} / j!  (jets are derivatives).
    auto a = poly_fit(xs, ys, degree, s0);
    out.check_f1 = a[0];
    out.check_f2 = a[1];
    out.check_f3 = 2.0 * a[2];
    out.check_f4 = 6.0 * a[3];
    return out;
}

double sscmc_scalar_curvature(const SSCMCParams& p, double r) {
    p.validate();
    metric_h(p.m, r);
    // u(r) = h (1 + ell^2); scalar curvature of B(r) dr^2 + r^2 dOmega^2 with
    // B = 1/u is S = 2 (1 - u)/r^2 - 2 u'/r.
    Jet<1> rj = Jet<1>::variable(r);
    Jet<1> h = Jet<1>(1.0) - Jet<1>(2.0 * p.m) / rj;
    Jet<1> ell = (Jet<1>(p.H) * rj + Jet<1>(p.c) / (rj * rj)) / sqrt(h);
    Jet<1> u = h * (Jet<1>(1.0) + ell * ell);
    return 2.0 * (1.0 - u.value()) / (r * r) - 2.0 * u.deriv(1) / r;
}

double sscmc_scalar_curvature_closed(const SSCMCParams& p, double r) {
    p.validate();
    metric_h(p.m, r);
    if (std::abs(p.H - 1.0) > 1e-12)
        throw DomainError("closed-form scalar curvature requires H = 1");
    const double r3 = r * r * r;
    return -6.0 + 6.0 * p.c * p.c / (r3 * r3);
}

namespace {

// (W - 1)/lambda with W = sqrt(L), L = -(2 P_s + k P_s^2), computed without
// cancellation: L - 1 = -(2 P_s + 1) - k P_s^2.
double lapse_dev_over_s(const SSCMCParams& p, double s) {
    const double Ps = sscmc_Ps(p, s);
    const double k = s * s * (1.0 - 2.0 * p.m * s);
    const double Lm1 = -(2.0 * Ps + 1.0) - k * Ps * Ps;
    const double W = std::sqrt(1.0 + Lm1);
    return Lm1 / ((1.0 + W) * s);
}

double atanh2_minus_2z(double z) {
    // 2 artanh(z) - 2z = 2 sum_{k>=1} z^{2k+1}/(2k+1), |z| < 1/4 here.
    double acc = 0.0, zp = z * z * z;
    for (int k = 1; k < 40; ++k) {
        const double term = 2.0 * zp / (2 * k + 1);
        acc += term;
        if (std::abs(term) < 1e-18 * std::max(1e-300, std::abs(acc))) break;
        zp *= z * z;
    }
    return acc;
}

double sinh_minus_x(double x) {
    if (std::abs(x) > 0.5) return std::sinh(x) - x;
    double acc = 0.0, xp = x * x * x / 6.0;  // x^3/3!
    for (int k = 1; k < 40; ++k) {
        acc += xp;
        xp *= x * x / double((2 * k + 2) * (2 * k + 3));
        if (std::abs(xp) < 1e-18 * std::max(1e-300, std::abs(acc))) break;
    }
    return acc;
}

}  // namespace

AHProfile sscmc_ah_profile(const SSCMCParams& p, double s0, int levels) {
    p.validate();
    if (!(s0 > 0.0)) throw DomainError("ah_profile: s0 must be > 0");
    if (levels < 4) throw DomainError("ah_profile: need >= 4 levels");
    AHProfile out;
    out.rows.resize(levels);

    // Cumulative integral I(s) = int_0^s (W-1)/lambda dlambda over the dyadic
    // ladder s_k = s0 2^{-k}, assembled from per-interval increments.
    std::vector<double> s(levels);
    for (int k = 0; k < levels; ++k) s[k] = s0 * std::pow(2.0, -k);
    auto integrand = [&](double l) { return lapse_dev_over_s(p, l); };
    std::vector<double> I(levels);
    I[levels - 1] = detail::integrate(integrand, 0.0, s[levels - 1]);
    for (int k = levels - 2; k >= 0; --k)
        I[k] = I[k + 1] + detail::integrate(integrand, s[k + 1], s[k]);

    for (int k = 0; k < levels; ++k) {
        const double ephi = s[k] * std::exp(I[k]);   // e^phi
        const double z = 0.5 * ephi;
        if (z >= 0.25)
            throw DomainError("ah_profile: window too wide for the profile map");
        const double ephi_m_s = s[k] * std::expm1(I[k]);
        const double tau_m_ephi = atanh2_minus_2z(z);
        const double tau = s[k] + (ephi_m_s + tau_m_ephi);
        const double sinh_m_s = sinh_minus_x(tau) + (ephi_m_s + tau_m_ephi);
        const double w2m1 =
            sinh_m_s * (std::sinh(tau) + s[k]) / (s[k] * s[k]);
        out.rows[k] = {s[k], tau, w2m1};
    }

    // Fit w^2 - 1 = b3 tau^3 + b4 tau^4 + b5 tau^5 (linear LSQ, 3 params).
    Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (const auto& row : out.rows) {
        const double t3 = row.tau * row.tau * row.tau;
        Eigen::Vector3d b{t3, t3 * row.tau, t3 * row.tau * row.tau};
        M += b * b.transpose();
        rhs += b * row.w2_minus_1;
    }
    out.tau3_fit = M.ldlt().solve(rhs)(0);
    out.tau3_expected = -(2.0 / 3.0) * (p.c - p.m);
    return out;
}

namespace {

template <std::size_t N>
Jet<N> horizon_u_eta_impl(const SSCMCParams& p, double eta_val) {
    if (!is_horizon_branch(p))
        throw DomainError("horizon chart slope requires the c = -8 m^3 H branch");
    if (eta_val < 0.0 || eta_val >= 1.0)
        throw DomainError("eta must lie in [0, 1)");
    Jet<N> eta = Jet<N>::variable(eta_val);
    Jet<N> r = Jet<N>(2.0 * p.m) / (Jet<N>(1.0) - eta * eta);
    Jet<N> q = Jet<N>(p.H) * (r * r + Jet<N>(2.0 * p.m) * r +
                              Jet<N>(4.0 * p.m * p.m)) / r;
    Jet<N> root = sqrt(Jet<N>(1.0) + eta * eta * q * q);
    return r * r * q / (Jet<N>(p.m) * root);
}

}  // namespace

double sscmc_horizon_u_eta(const SSCMCParams& p, double eta) {
    p.validate();
    if (p.m <= 0.0) throw DomainError("horizon chart requires m > 0");
    return horizon_u_eta_impl<0>(p, eta).value();
}

Jet<2> sscmc_horizon_u_eta_jet(const SSCMCParams& p, double eta) {
    p.validate();
    if (p.m <= 0.0) throw DomainError("horizon chart requires m > 0");
    return horizon_u_eta_impl<2>(p, eta);
}

}  // namespace cmclab
