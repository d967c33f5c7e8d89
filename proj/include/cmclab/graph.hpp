#pragma once
// Graphs over the boundary sphere in the conformal null chart.
//
// A surface is described as {vbar = P(y, s)} with y on S^2 and s the inverse
// radius; the geometry engine consumes the fields  d^k P/ds^k (., s).  Three
// representations cover the use cases:
//   POLY_IN_S  - P is polynomial in s with band-limited coefficient fields
//                (boundary expansions, barriers); s-derivatives are exact.
//   ANALYTIC   - a node-wise truncated-Taylor sampler supplies exact jets
//                (closed-form surfaces: reference hyperboloids, symmetric
//                CMC slices).
//   NUMERIC    - a point sampler differentiated by central differences with
//                step s/10 and one Richardson level (solution tables).

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <vector>

#include "cmclab/jets.hpp"
#include "cmclab/sphere.hpp"
#include "cmclab/sscmc.hpp"

namespace cmclab {

enum class GraphKind { PolyInS, Analytic, Numeric };

class GraphFunctionP {
  public:
    using JetSampler = std::function<Jet<4>(int i, int j, double s)>;
    using Sampler = std::function<double(int i, int j, double s)>;

    static GraphFunctionP poly_in_s(std::vector<SphericalField> coeffs,
                                    double m);
    static GraphFunctionP analytic(GridPtr grid, JetSampler jets, double m);
    // `resolution` is the spacing of the backing table (0 for an exact
    // sampler); derivative requests whose stencil cannot be resolved fail.
    static GraphFunctionP numeric(GridPtr grid, Sampler sampler, double m,
                                  double resolution = 0.0);

    GraphKind kind() const { return kind_; }
    const GridPtr& grid() const { return grid_; }
    double mass() const { return m_; }

    // Validated s-domain (0, s_max]; evaluation beyond it is refused.
    double s_max() const { return s_max_; }
    GraphFunctionP restricted(double s_max) const;

    // d^k P/ds^k as a field, k <= 4.
    SphericalField ds_field(int k, double s) const;
    // Orders 0..k_max at once.
    std::vector<SphericalField> ds_fields(int k_max, double s) const;

    SphericalField boundary_value() const;  // P(., 0)

  private:
    GraphFunctionP() = default;
    GraphKind kind_{};
    GridPtr grid_;
    double m_ = 0.0;
    std::vector<SphericalField> coeffs_;  // PolyInS
    JetSampler jet_;                      // Analytic
    Sampler sampler_;                     // Numeric
    double resolution_ = 0.0;
    double s_max_ = std::numeric_limits<double>::infinity();
};

// Exact reference hyperboloid in Minkowski (m = 0):
//   P0(y, s) = (1 - w)/s,  w = sqrt(1 - 2 s q + s^2 b),
//   q = a . y,  b = 1 + |a|^2,
// with boundary value a . y; implemented as the cancellation-free quotient
// P0 = (2q - s b)/(1 + w).  Mean curvature is identically 1.
GraphFunctionP hyperboloid_graph(GridPtr g, const Eigen::Vector3d& a);

// Spherically symmetric CMC slice as an (angle-independent) analytic graph.
GraphFunctionP sscmc_graph(GridPtr g, const SSCMCParams& p);
// The same surface through a value-only sampler (exercises the NUMERIC path).
GraphFunctionP sscmc_graph_numeric(GridPtr g, const SSCMCParams& p,
                                   double resolution = 0.0);

}  // namespace cmclab
