#pragma once
// Extrinsic and intrinsic geometry of spacelike graphs near the conformal
// boundary.
//
// All fields are assembled in the rescaled picture, where the induced metric
// gbar and second fundamental form Abar of the graph {vbar = P(y, s)} stay
// O(1) as s -> 0.  The physical geometry at inverse radius s is recovered by
//   G = s^{-2} gbar,   A = s^{-1} (Abar + B gbar),
// but curvature scalars are never computed through that rescaling: the
// difference variable
//   D = s Abar + (s B - 1) gbar   ( = s A "minus" G, pulled back )
// encodes A - G directly, so
//   H       = 1 + tr_gbar(D) / 3,
//   |Aring| = |D - (tr/3) gbar|_gbar          (trace-free part of A),
//   |A|^2   = |D + gbar|^2_gbar,
//   S       = |D + gbar|^2_gbar - (3 + tr)^2  (Gauss, vacuum ambient).
// Subtracting H G from A in the physical scaling loses ~s^{-2} * eps digits
// and cannot reach the tolerances this library is tested at; D never
// amplifies round-off.

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "cmclab/fitting.hpp"
#include "cmclab/graph.hpp"
#include "cmclab/sphere.hpp"

namespace cmclab {

// Frame at a node: (e_th, e_ph, d/ds); gbar is positive definite there iff
// the surface is spacelike (equivalently L > 0).
struct NodeGeometry {
    double L;                // Lorentz factor of the defining function
    Eigen::Matrix3d gbar;    // rescaled induced metric
    Eigen::Matrix3d sAbar;   // s * Abar (rescaled second fundamental form)
    Eigen::Matrix3d D;       // s Abar + (s B - 1) gbar
    double sB;               // s * B = L^{-1/2} (1 + k P_s)
    double H;                // mean curvature, trace route
    double H_formula;        // mean curvature, scalar-equation route
    double A_ring;           // |A - H G|_G
    double A2;               // |A|_G^2
    double S;                // intrinsic scalar curvature
};

// Raw derivatives of P at one point, in the orthonormal sphere frame:
// s-derivatives, tangential gradient, covariant Hessian, and the gradient of
// P_s.  This is everything the pointwise assembly needs.
struct GraphPointData {
    double Ps, Pss;
    double Pt, Pp;
    double Ptt, Ptp, Ppp;
    double Pst, Psp;
};

// Assemble the full geometric state from raw derivatives (mass m, at s).
NodeGeometry assemble_node_geometry(double m, double s,
                                    const GraphPointData& d);

// Geometric state at an arbitrary sphere point (away from the poles).
NodeGeometry geometry_at(const GraphFunctionP& g, double s, double theta,
                         double phi);

class SurfaceGeometry {
  public:
    SurfaceGeometry(const GraphFunctionP& g, double s);

    double s() const { return s_; }
    const GridPtr& grid() const { return grid_; }
    const NodeGeometry& node(int i, int j) const {
        return nodes_[std::size_t(i) * grid_->n_lon() + j];
    }

    SphericalField H_field() const;
    SphericalField H_formula_field() const;
    SphericalField L_field() const;
    SphericalField A_ring_field() const;
    SphericalField S_field() const;

    double min_L() const;

    // Physical-scaling matrices (exposed for inspection; do not subtract
    // these against each other at small s).
    Eigen::Matrix3d physical_metric(int i, int j) const;
    Eigen::Matrix3d physical_shape(int i, int j) const;

  private:
    double s_;
    GridPtr grid_;
    std::vector<NodeGeometry> nodes_;
};

// Mean curvature by the scalar equation route (independent of the tensor
// assembly; the two agree to round-off and are cross-checked in the tests).
SphericalField mean_curvature(const GraphFunctionP& g, double s);
// Lorentz factor L(., s); the graph is spacelike at s iff min L > 0.
SphericalField lorentz_norm(const GraphFunctionP& g, double s);

// Largest s <= s_req at which the graph stays spacelike on a dyadic ladder
// down to s = 0 (shrinks by 0.8 until the ladder is clean).
double spacelike_smax(const GraphFunctionP& g, double s_req);

// Deviation from the exact reference hyperboloid with the same degree-1
// boundary data: theta = gbar - bbar measured in bbar, component-wise frame
// deviations, and their decay rates.  rho is the hyperbolic-distance-like
// abscissa min_y arcsinh(|y + s a| / s) used for the frame rates.
struct AHDeviation {
    Eigen::Vector3d a;
    std::vector<double> s, rho;
    std::vector<double> theta_sup;
    std::array<std::array<std::vector<double>, 3>, 3> frame_sup;
    DecayFit theta_fit;                  // sup|theta|_b  ~  s^p
    Eigen::Matrix3d frame_rates;         // per-component rate in rho
    double frame_rate_min;
};
AHDeviation ah_deviation(const GraphFunctionP& g,
                         const std::vector<double>& s_list);

}  // namespace cmclab
