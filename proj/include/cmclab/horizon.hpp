#pragma once

// Spacelike graphs over the near-horizon cylinder chart.
//
// For m > 0 the exterior is parametrized by eta = sqrt(1 - 2m/r) in (0, 1)
// and a graph is a height function t = u(eta, y) on (0, 1) x S^2.  In this
// chart the horizon sits at eta = 0 at finite parameter distance, so the
// boundary behavior of a slice that crosses the horizon becomes a regularity
// statement about u at eta = 0.  The module evaluates the mean curvature of
// such graphs, extrapolates the transversal slope u_eta to the boundary, and
// checks an exact series rearrangement of the curvature identity used by the
// regression suite.

#include <vector>

#include "cmclab/sphere.hpp"
#include "cmclab/sscmc.hpp"

namespace cmclab {

class HorizonGraph {
  public:
    // u(eta, y) = sum_k coeffs[k](y) eta^k.  Requires m > 0 and at least one
    // coefficient field; all fields must live on g.
    static HorizonGraph polynomial(GridPtr g, double m,
                                   std::vector<SphericalField> coeffs);

    // Height function of a spherically symmetric CMC slice on the branch that
    // crosses the horizon smoothly, rewritten in the eta chart and anchored
    // to u(0) = 0.
    static HorizonGraph from_sscmc(GridPtr g, const SSCMCParams& p);

    double mass() const { return m_; }
    const GridPtr& grid() const { return grid_; }

    SphericalField u_field(double eta) const;
    SphericalField u_eta_field(double eta) const;
    SphericalField u_etaeta_field(double eta) const;
    // Transversal boundary slope u_eta(0), exact from the representation.
    SphericalField u_eta_at_zero() const;

  private:
    HorizonGraph() = default;
    enum class Kind { Polynomial, SSCMC };
    Kind kind_ = Kind::Polynomial;
    GridPtr grid_;
    double m_ = 1.0;
    std::vector<SphericalField> coeffs_;  // Polynomial
    SSCMCParams params_{};                // SSCMC
};

// Mean curvature of the graph at 0 < eta < 1 (future unit normal).  Throws
// DomainError when the graph fails to be spacelike there.
SphericalField horizon_mean_curvature(const HorizonGraph& g, double eta);

// Per-node polynomial extrapolation eta -> 0 of u_eta sampled along
// eta_j = eta0 * 2^{-j}, j = 0 .. levels-1.
struct HorizonSlope {
    SphericalField estimate;
    double err_est = 0.0;  // sup over nodes of the tableau error estimate
};
HorizonSlope horizon_boundary_slope(const HorizonGraph& g, double eta0,
                                    int levels);

// Residual of the eta-series rearrangement of the mean curvature identity,
//   sum_{k=0}^{4} a_k eta^k - 3 H (1 - eta^2 W)^{3/2},
// where W collects the squared gradient terms of u and H is the directly
// assembled mean curvature.  The two sides are algebraically identical, so
// the residual measures pure evaluation error and must sit at round-off for
// a correct implementation.
SphericalField horizon_series_residual(const HorizonGraph& g, double eta);

// Sup norms of the connection pairings that quantify how far the r = const
// sections of the graph are from totally geodesic as r -> 2m.  The p-columns
// pair the sphere coordinate frame with the outward radial direction and
// decay like h^{3/2} (h = 1 - 2m/r); the t-columns pair it with the Killing
// time direction and vanish identically for rotationally symmetric graphs.
struct PairingRow {
    double r = 0.0, h = 0.0;
    double p22 = 0.0, p23 = 0.0, p33 = 0.0;
    double t22 = 0.0, t23 = 0.0, t33 = 0.0;
};
std::vector<PairingRow> boundary_geodesic_pairings(
    const HorizonGraph& g, const std::vector<double>& r_list);

}  // namespace cmclab
