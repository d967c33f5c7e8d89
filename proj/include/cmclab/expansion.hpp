#pragma once

// Formal expansion of the constant-mean-curvature graph equation about the
// conformal boundary s = 0.
//
// Given boundary data (the limit function f on the sphere and the boundary
// mean curvature H0 > 0), the graph equation determines the next two Taylor
// coefficients of P(s, y) algebraically,
//
//     P = f + f1 s + (f2/2) s^2 + (f3/6) s^3 + ...,
//
// while the s^3 coefficient f3 is determined only up to the compatibility of
// the data: the s-derivative of the mean curvature at the boundary is forced
// by (f, H0) and cannot be prescribed.  `compatibility_residual` evaluates
// that obstruction; it vanishes iff the third-order expansion of a graph with
// H identically equal to the constant H0 closes.
//
// All products are evaluated nodewise on a dealiased work grid with
// l_work = 4 l_f + 2 so that, for constant H0, every intermediate quantity
// (polynomial of degree <= 4 in f and its derivatives) is represented exactly.
// For non-constant H0 the reciprocal powers of H0 are not band-limited and
// the results carry a spectrally small truncation error.

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "cmclab/graph.hpp"
#include "cmclab/sphere.hpp"

namespace cmclab {

// Boundary data (f, H0) plus the mass of the ambient slice.  The mass enters
// only through barrier construction; the jet coefficients are mass-free.
struct BoundaryData {
    SphericalField f;
    SphericalField H0;
    bool constant_H0 = true;
    double m = 0.0;

    // Throws DomainError unless H0 > 0 everywhere, the grids agree, m >= 0.
    void validate() const;
};

BoundaryData boundary_data(const SphericalField& f, double H0, double m);
BoundaryData boundary_data(const SphericalField& f, const SphericalField& H0,
                           double m);

// Taylor/jet coefficient fields of P and of the Lorentz norm L = L0 + Ls s +
// (Lss/2) s^2 + ..., all sampled on the dealiased work grid.
struct JetFields {
    GridPtr grid;  // work grid (4 * l_f + 2)
    SphericalField f, f1, f2, f3;
    SphericalField L0, Ls, Lss;
};

JetFields jet_coefficients(const BoundaryData& in);

// Obstruction against H == H0 + O(s^3): the residual of the third-order
// expansion once f1, f2, f3 have been used up.  Identically zero exactly when
// f lies in the l <= 1 eigenspace (for constant H0).
SphericalField compatibility_residual(const BoundaryData& in);

// Same residual when the third s-derivative of the mean curvature along the
// graph is prescribed as `Hsss` instead of zero.
SphericalField compatibility_residual(const BoundaryData& in,
                                      const SphericalField& Hsss);

// Polynomial graph carrying the jet through order s^3 (optionally s^4 with a
// caller-supplied f4 field).  The result is restricted to a verified
// spacelike domain (0, s_max], s_max <= s_req.
GraphFunctionP build_barrier(const BoundaryData& in,
                             std::optional<SphericalField> f4 = {},
                             double s_req = 0.5);

// Membership of f in the span of the l = 0 and l = 1 spherical harmonics.
struct EigenspaceCheck {
    bool inside = false;
    double defect = 0.0;  // energy fraction outside l <= 1 (0 for f == 0)
    std::vector<double> degree_energy;  // index l = 0 .. l_max
};
EigenspaceCheck eigenspace_membership(const SphericalField& f,
                                      double rel_tol = 1e-10);

// Closed-form jets of the unit hyperboloid translated by a (mass 0),
// evaluated nodewise on g: with q = a.y and b = 1 + |a|^2,
//   f = q, f1 = (q^2 - b)/2, f2 = q (q^2 - b),
//   f3 = 3 (q^2 - b)(5 q^2 - b)/4, f4 = 3 q (7 q^2 - 3 b)(q^2 - b).
// Degrees up to 5 in y: pass a grid with l_max >= 5 for exact spectral use.
struct HyperboloidJets {
    SphericalField f, f1, f2, f3, f4;
};
HyperboloidJets hyperboloid_jet_fields(const GridPtr& g,
                                       const Eigen::Vector3d& a);

}  // namespace cmclab
