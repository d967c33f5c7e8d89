#include "cmclab/geometry.hpp"

#include <cmath>
#include <limits>

#include "cmclab/errors.hpp"
#include "cmclab/parallel.hpp"

namespace cmclab {

namespace {

struct ChartFactors {
    double k, kp, c1, c2;  // k(s), k'(s), (1/2)k', (1/2)k k'
};

ChartFactors chart_factors(double m, double s) {
    ChartFactors f;
    f.k = s * s * (1.0 - 2.0 * m * s);
    f.kp = 2.0 * s - 6.0 * m * s * s;
    f.c1 = 0.5 * f.kp;
    f.c2 = 0.5 * f.k * f.kp;
    return f;
}

}  // namespace

NodeGeometry assemble_node_geometry(double m, double s,
                                    const GraphPointData& d) {
    const ChartFactors cf = chart_factors(m, s);
    const double Ps = d.Ps, Pss = d.Pss;
    const double Pt = d.Pt, Pp = d.Pp;
    const double Ptt = d.Ptt, Ptp = d.Ptp, Ppp = d.Ppp;
    const double Pst = d.Pst, Psp = d.Psp;
    const double grad2 = Pt * Pt + Pp * Pp;
    const double lapP = Ptt + Ppp;

    NodeGeometry n;
    n.L = -(2.0 * Ps + cf.k * Ps * Ps + grad2);
    if (!(n.L > 0.0))
        throw DomainError("geometry: graph is not spacelike at this s");
    const double Li = 1.0 / std::sqrt(n.L);

    Eigen::Matrix3d& gb = n.gbar;
    gb(0, 0) = 1.0 - cf.k * Pt * Pt;
    gb(0, 1) = gb(1, 0) = -cf.k * Pt * Pp;
    gb(1, 1) = 1.0 - cf.k * Pp * Pp;
    gb(0, 2) = gb(2, 0) = -Pt * (1.0 + cf.k * Ps);
    gb(1, 2) = gb(2, 1) = -Pp * (1.0 + cf.k * Ps);
    gb(2, 2) = -2.0 * Ps - cf.k * Ps * Ps;

    const double w1 = cf.c1 + cf.c2 * Ps;
    const double w2 = 2.0 * cf.c1 + cf.c2 * Ps;
    const double w3 = 3.0 * cf.c1 + cf.c2 * Ps;
    Eigen::Matrix3d M;
    M(0, 0) = -Ptt + w1 * Pt * Pt;
    M(0, 1) = M(1, 0) = -Ptp + w1 * Pt * Pp;
    M(1, 1) = -Ppp + w1 * Pp * Pp;
    M(0, 2) = M(2, 0) = -Pst + w2 * Ps * Pt;
    M(1, 2) = M(2, 1) = -Psp + w2 * Ps * Pp;
    M(2, 2) = -Pss + w3 * Ps * Ps;
    n.sAbar = (s * Li) * M;
    n.sB = Li * (1.0 + cf.k * Ps);

    n.D = n.sAbar + (n.sB - 1.0) * gb;
    const Eigen::Matrix3d ginv = gb.inverse();
    const double t = (ginv * n.D).trace();
    n.H = 1.0 + t / 3.0;
    const Eigen::Matrix3d N = n.D - (t / 3.0) * gb;
    const Eigen::Matrix3d NN = ginv * N;
    n.A_ring = std::sqrt(std::max(0.0, (NN * NN).trace()));
    const Eigen::Matrix3d E = ginv * (n.D + gb);
    n.A2 = (E * E).trace();
    n.S = n.A2 - (3.0 + t) * (3.0 + t);

    // Scalar-equation route for H (shares only the jet fields).
    const double Ls = -(2.0 * Pss + cf.kp * Ps * Ps + 2.0 * cf.k * Ps * Pss +
                        2.0 * (Pst * Pt + Psp * Pp));
    const double Lt = -(2.0 * Pst * (1.0 + cf.k * Ps) + 2.0 * (Ptt * Pt + Ptp * Pp));
    const double Lp = -(2.0 * Psp * (1.0 + cf.k * Ps) + 2.0 * (Ptp * Pt + Ppp * Pp));
    const double gLgP = Lt * Pt + Lp * Pp;
    const double rhs = s * n.L * (cf.k * Pss + lapP) -
                       0.5 * s * (Ls + cf.k * Ls * Ps + gLgP) -
                       s * s * n.L * Ps - 3.0 * n.L;
    n.H_formula = -rhs / (3.0 * n.L * std::sqrt(n.L));
    return n;
}

NodeGeometry geometry_at(const GraphFunctionP& g, double s, double theta,
                         double phi) {
    const double st = std::sin(theta);
    if (std::abs(st) < 1e-8)
        throw DomainError("geometry_at: point too close to a pole");
    const double cot = std::cos(theta) / st;
    const auto js = g.ds_fields(2, s);
    const PointDerivs p0 = synth_point_derivs(analyze(js[0]), theta, phi);
    const PointDerivs p1 = synth_point_derivs(analyze(js[1]), theta, phi);
    GraphPointData d;
    d.Ps = p1.f;
    d.Pss = synth_at(analyze(js[2]), theta, phi);
    // Coordinate partials -> orthonormal-frame covariant components.
    d.Pt = p0.f_th;
    d.Pp = p0.f_ph / st;
    d.Ptt = p0.f_thth;
    d.Ptp = (p0.f_thph - cot * p0.f_ph) / st;
    d.Ppp = p0.f_phph / (st * st) + cot * p0.f_th;
    d.Pst = p1.f_th;
    d.Psp = p1.f_ph / st;
    return assemble_node_geometry(g.mass(), s, d);
}

SurfaceGeometry::SurfaceGeometry(const GraphFunctionP& g, double s)
    : s_(s), grid_(g.grid()) {
    if (s < 0.0) throw DomainError("geometry: s must be >= 0");
    const auto& gr = *grid_;
    const auto js = g.ds_fields(2, s);
    const Spectrum specP = analyze(js[0]);
    const Spectrum specPs = analyze(js[1]);
    const VectorField gP = gradient(specP);
    const SymTensorField hP = hessian(specP);
    const VectorField gPs = gradient(specPs);
    const double m = g.mass();

    nodes_.resize(std::size_t(gr.n_lat()) * gr.n_lon());
    parallel_for(std::size_t(gr.n_lat()), [&](std::size_t ii) {
        const int i = int(ii);
        for (int j = 0; j < gr.n_lon(); ++j) {
            GraphPointData d;
            d.Ps = js[1](i, j);
            d.Pss = js[2](i, j);
            d.Pt = gP.th(i, j);
            d.Pp = gP.ph(i, j);
            d.Ptt = hP.tt(i, j);
            d.Ptp = hP.tp(i, j);
            d.Ppp = hP.pp(i, j);
            d.Pst = gPs.th(i, j);
            d.Psp = gPs.ph(i, j);
            nodes_[std::size_t(i) * gr.n_lon() + j] =
                assemble_node_geometry(m, s, d);
        }
    });
}

namespace {
template <typename Fn>
SphericalField extract(const SurfaceGeometry& s, const GridPtr& g, Fn&& fn) {
    SphericalField out(g);
    for (int i = 0; i < g->n_lat(); ++i)
        for (int j = 0; j < g->n_lon(); ++j) out.at(i, j) = fn(s.node(i, j));
    return out;
}
}  // namespace

SphericalField SurfaceGeometry::H_field() const {
    return extract(*this, grid_, [](const NodeGeometry& n) { return n.H; });
}
SphericalField SurfaceGeometry::H_formula_field() const {
    return extract(*this, grid_,
                   [](const NodeGeometry& n) { return n.H_formula; });
}
SphericalField SurfaceGeometry::L_field() const {
    return extract(*this, grid_, [](const NodeGeometry& n) { return n.L; });
}
SphericalField SurfaceGeometry::A_ring_field() const {
    return extract(*this, grid_,
                   [](const NodeGeometry& n) { return n.A_ring; });
}
SphericalField SurfaceGeometry::S_field() const {
    return extract(*this, grid_, [](const NodeGeometry& n) { return n.S; });
}

double SurfaceGeometry::min_L() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& n : nodes_) m = std::min(m, n.L);
    return m;
}

Eigen::Matrix3d SurfaceGeometry::physical_metric(int i, int j) const {
    if (s_ <= 0.0) throw DomainError("physical scaling undefined at s = 0");
    return node(i, j).gbar / (s_ * s_);
}

Eigen::Matrix3d SurfaceGeometry::physical_shape(int i, int j) const {
    if (s_ <= 0.0) throw DomainError("physical scaling undefined at s = 0");
    const NodeGeometry& n = node(i, j);
    return (n.D + n.gbar) / (s_ * s_);
}

SphericalField mean_curvature(const GraphFunctionP& g, double s) {
    return SurfaceGeometry(g, s).H_formula_field();
}

SphericalField lorentz_norm(const GraphFunctionP& g, double s) {
    const auto js = g.ds_fields(1, s);
    const Spectrum specP = analyze(js[0]);
    const VectorField gP = gradient(specP);
    const double k = s * s * (1.0 - 2.0 * g.mass() * s);
    SphericalField out(g.grid());
    const auto& gr = *g.grid();
    for (int i = 0; i < gr.n_lat(); ++i)
        for (int j = 0; j < gr.n_lon(); ++j) {
            const double Ps = js[1](i, j);
            const double g2 = gP.th(i, j) * gP.th(i, j) +
                              gP.ph(i, j) * gP.ph(i, j);
            out.at(i, j) = -(2.0 * Ps + k * Ps * Ps + g2);
        }
    return out;
}

double spacelike_smax(const GraphFunctionP& g, double s_req) {
    if (!(s_req > 0.0)) throw DomainError("spacelike_smax: s_req must be > 0");
    double smax = s_req;
    for (int tries = 0; tries < 200; ++tries) {
        bool ok = true;
        for (int k = 0; k < 8 && ok; ++k) {
            SphericalField L = lorentz_norm(g, smax * std::pow(2.0, -k));
            ok = L.values().minCoeff() > 0.0;
        }
        if (ok) return smax;
        smax *= 0.8;
    }
    throw DomainError("spacelike_smax: graph is not spacelike near s = 0");
}

AHDeviation ah_deviation(const GraphFunctionP& g,
                         const std::vector<double>& s_list) {
    if (s_list.size() < 2) throw DomainError("ah_deviation: need >= 2 s values");
    AHDeviation out;

    // Boundary data must be degree <= 1; extract the direction vector a.
    const Spectrum spec = analyze(g.boundary_value());
    double total = spec.coeffs().squaredNorm();
    double low = spec.degree_energy(0) + (spec.l_max() >= 1 ? spec.degree_energy(1) : 0.0);
    if (total - low > 1e-20 + 1e-10 * total)
        throw DomainError("ah_deviation: boundary value is not degree <= 1");
    const double fac = std::sqrt(3.0 / (4.0 * M_PI));
    out.a = {spec.l_max() >= 1 ? fac * spec.coeff(1, 1) : 0.0,
             spec.l_max() >= 1 ? fac * spec.coeff(1, -1) : 0.0,
             spec.l_max() >= 1 ? fac * spec.coeff(1, 0) : 0.0};

    const GraphFunctionP ref = hyperboloid_graph(g.grid(), out.a);
    const auto& gr = *g.grid();
    const double na = out.a.norm();

    out.s = s_list;
    out.rho.resize(s_list.size());
    out.theta_sup.assign(s_list.size(), 0.0);
    for (auto& row : out.frame_sup)
        for (auto& v : row) v.assign(s_list.size(), 0.0);

    for (std::size_t kk = 0; kk < s_list.size(); ++kk) {
        const double s = s_list[kk];
        if (!(s > 0.0) || s * na >= 1.0)
            throw DomainError("ah_deviation: s outside the comparison range");
        out.rho[kk] = std::asinh((1.0 - s * na) / s);
        const SurfaceGeometry geo(g, s), refgeo(ref, s);
        for (int i = 0; i < gr.n_lat(); ++i)
            for (int j = 0; j < gr.n_lon(); ++j) {
                const Eigen::Matrix3d& bb = refgeo.node(i, j).gbar;
                Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(bb);
                const Eigen::Matrix3d bis = es.operatorInverseSqrt();
                const Eigen::Matrix3d M =
                    bis * (geo.node(i, j).gbar - bb) * bis;
                out.theta_sup[kk] = std::max(out.theta_sup[kk], M.norm());
                for (int p = 0; p < 3; ++p)
                    for (int q = 0; q < 3; ++q)
                        out.frame_sup[p][q][kk] =
                            std::max(out.frame_sup[p][q][kk],
                                     std::abs(M(p, q)));
            }
    }

    out.theta_fit = decay_fit(out.s, out.theta_sup);
    out.frame_rate_min = std::numeric_limits<double>::infinity();
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) {
            const DecayFit f = rate_fit(out.rho, out.frame_sup[p][q]);
            out.frame_rates(p, q) =
                f.infinite ? std::numeric_limits<double>::infinity()
                           : f.exponent;
            out.frame_rate_min = std::min(out.frame_rate_min,
                                          out.frame_rates(p, q));
        }
    return out;
}

}  // namespace cmclab
