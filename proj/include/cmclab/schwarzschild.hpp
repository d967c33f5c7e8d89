#pragma once
// Schwarzschild background utilities: radial charts and their inverses,
// Kruskal and Penrose diagram maps (exterior region), the connection
// coefficients of the conformally rescaled metric in the boundary-adapted
// null chart, and the corner map used to glue the horizon chart to the
// conformal radial coordinate.
//
// Conventions: mass m >= 0 (m = 0 is Minkowski and is first-class),
// h(r) = 1 - 2m/r, exterior r > 2m, inverse radius s = 1/r,
// eta = h^{1/2} as the horizon-adapted radial coordinate.

#include "cmclab/jets.hpp"

namespace cmclab {

struct Kruskal {
    double T, X;
};
struct Penrose {
    double xi, chi;  // time, space
};

double metric_h(double m, double r);            // 1 - 2m/r
double eta_of_r(double m, double r);            // sqrt(h), requires m > 0
double r_of_eta(double m, double eta);          // 2m / (1 - eta^2)
double tortoise(double m, double r);            // r + 2m log(r/2m - 1)
double tortoise_inverse(double m, double rstar);
double retarded_time(double m, double t, double r);  // t - r_*

// Exterior Kruskal map and its inverse (m > 0, r > 2m, X > |T|).
Kruskal kruskal_from_tr(double m, double t, double r);
void tr_from_kruskal(double m, const Kruskal& k, double* t, double* r);
Penrose penrose_from_kruskal(const Kruskal& k);

// Nonzero connection coefficients of the rescaled metric in the null chart
// (s, vbar) over the sphere: with c1 = s (1 - 3 m s) and
// c2 = s^3 (1 - 5 m s + 6 m^2 s^2),
//   D_{d4} d4 = c2 * d3 + c1 * d4,   D_{d3} d4 = -c1 * d3,
// all other coefficients vanish (d3 = d/ds, d4 = d/dvbar; sphere directions
// are parallel).  Valid for all s >= 0 including the boundary s = 0.
struct NullChartConnection {
    double c1, c2;
};
NullChartConnection null_chart_connection(double m, double s);

// Corner map w = psi(eta) = eta sqrt(1-eta^2) exp(-1/(2(1-eta^2))) matching
// the horizon chart to the conformal chart; psi'(0) = e^{-1/2}.  The inverse
// is defined on [0, psi(eta_cut)) for eta_cut below the first critical point
// eta_* = sqrt(1 - sqrt(2)/2).
double psi_corner(double eta);
double psi_corner_inverse(double w);
template <std::size_t N>
Jet<N> psi_corner(const Jet<N>& eta) {
    Jet<N> one_me2 = Jet<N>(1.0) - eta * eta;
    // exp(-1/(2(1-eta^2))) via jets: use exp(u) with u = -1/(2(1-eta^2)).
    Jet<N> u = Jet<N>(-0.5) / one_me2;
    // exp through the recurrence e' = e u'
    Jet<N> e;
    e.c[0] = std::exp(u.c[0]);
    for (std::size_t k = 1; k <= N; ++k) {
        double s = 0.0;
        for (std::size_t i = 1; i <= k; ++i) s += double(i) * u.c[i] * e.c[k - i];
        e.c[k] = s / double(k);
    }
    return eta * sqrt(one_me2) * e;
}

}  // namespace cmclab
