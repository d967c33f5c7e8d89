#pragma once
// Spherically symmetric constant-mean-curvature slices t = f(r) of the
// Schwarzschild exterior.  The radial slope is closed-form,
//   ell(r) = h^{-1/2} (H r + c r^{-2}),   f'(r) = ell / (h sqrt(1 + ell^2)),
// parametrized by the mean curvature H > 0 and a flux constant c.  The
// distinguished branch c = -8 m^3 H crosses the horizon smoothly; every other
// branch asymptotes to it.  These slices supply exact reference data: their
// boundary expansion, scalar curvature and horizon behavior are all known in
// closed form, which makes the family the main calibration source for the
// generic machinery.

#include <vector>

#include "cmclab/jets.hpp"

namespace cmclab {

struct SSCMCParams {
    double m = 0.0;  // mass, >= 0 (0 = Minkowski)
    double H = 1.0;  // mean curvature, > 0
    double c = 0.0;  // flux constant
    void validate() const;
};

bool is_horizon_branch(const SSCMCParams& p);

double sscmc_ell(const SSCMCParams& p, double r);
double sscmc_slope(const SSCMCParams& p, double r);  // f'(r)

// Height relative to r0: f(r1) - f(r0) by adaptive quadrature of the slope.
// The horizon branch may start at r0 = 2m (integrable endpoint, handled by
// the substitution r = 2m + w^2); other branches require r0 > 2m.
double sscmc_height(const SSCMCParams& p, double r0, double r1);

struct HeightTable {
    std::vector<double> r, f;  // f(r[0]) = 0
};
HeightTable sscmc_height_table(const SSCMCParams& p, double r0, double r1,
                               int n);

// Graph description in the boundary-adapted null chart: the slice is
// {vbar = P(s)} with dP/ds given in closed form.  Requires H + c s^3 > 0
// (the graphical regime) and s inside the exterior.
double sscmc_Ps(const SSCMCParams& p, double s);
Jet<3> sscmc_Ps_jet3(const SSCMCParams& p, double s);  // P_s and 3 s-derivatives

// Taylor coefficients of P(s) = f0 + f1 s + f2 s^2 + f3 s^3 + f4 s^4 + ...
struct ExpansionJets {
    double f1, f2, f3, f4;                          // closed forms
    double check_f1, check_f2, check_f3, check_f4;  // numeric differentiation
};
ExpansionJets sscmc_expansion_jets(const SSCMCParams& p);

// Scalar curvature of the induced metric: generic route via radial jets of
// u(r) = h (1 + ell^2), and the closed form -6 + 6 c^2 r^{-6} valid for H = 1.
double sscmc_scalar_curvature(const SSCMCParams& p, double r);
double sscmc_scalar_curvature_closed(const SSCMCParams& p, double r);

// Intrinsic boundary profile: arc-length parameter tau(s) built from the
// radial lapse W = sqrt(-(2 P_s + s^2(1-2ms) P_s^2)) through
//   phi(s) = log s + int_0^s (W-1)/lambda dlambda,  tau = 2 artanh(e^phi / 2),
// and the normalized profile w = sinh(tau)/s.  The leading deviation
// w^2 - 1 = -(2/3)(c - m) tau^3 + O(tau^4) identifies c - m intrinsically.
struct AHProfileRow {
    double s, tau, w2_minus_1;
};
struct AHProfile {
    std::vector<AHProfileRow> rows;
    double tau3_fit;       // fitted tau^3 coefficient of w^2 - 1
    double tau3_expected;  // -(2/3)(c - m)
};
AHProfile sscmc_ah_profile(const SSCMCParams& p, double s0, int levels);

// Horizon-branch graph u over the eta chart: du/deta in closed form,
//   u_eta = r^2 q / (m sqrt(1 + eta^2 q^2)),  q = H (r^2 + 2mr + 4m^2)/r,
// with u_eta(0) = 24 m^2 H at the horizon.  Requires the horizon branch.
double sscmc_horizon_u_eta(const SSCMCParams& p, double eta);
Jet<2> sscmc_horizon_u_eta_jet(const SSCMCParams& p, double eta);

}  // namespace cmclab
