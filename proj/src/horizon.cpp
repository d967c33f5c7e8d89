#include "cmclab/horizon.hpp"

#include <cmath>
#include <utility>

#include "cmclab/detail/quad.hpp"
#include "cmclab/errors.hpp"
#include "cmclab/fitting.hpp"
#include "cmclab/parallel.hpp"

namespace cmclab {

namespace {

// (1 - x)^{3/2} for 0 <= x < 1 through its binomial series, truncated when
// the running term drops below 1e-14.  Deliberately a different evaluation
// path than pow/sqrt so the series-residual check compares two independent
// routes.
double binom_three_halves(double x) {
    double c = 1.0;   // binomial coefficient C(3/2, k)
    double p = 1.0;   // (-x)^k
    double sum = 1.0;
    for (int k = 0; k < 10000; ++k) {
        c *= (1.5 - k) / (k + 1);
        p *= -x;
        const double term = c * p;
        sum += term;
        if (std::abs(term) < 1e-14) return sum;
    }
    throw AccuracyError(
        "horizon: series for (1 - x)^{3/2} converges too slowly");
}

// Tangential derivative fields of u and u_eta at fixed eta.
struct TangentialData {
    SphericalField ue, uee;
    VectorField gu, gue;
    SymTensorField hu;
    SphericalField lap;
};

TangentialData tangential_data(const HorizonGraph& g, double eta) {
    TangentialData d;
    const SphericalField u = g.u_field(eta);
    d.ue = g.u_eta_field(eta);
    d.uee = g.u_etaeta_field(eta);
    const Spectrum su = analyze(u);
    d.gu = gradient(su);
    d.hu = hessian(su);
    d.lap = laplacian(su);
    d.gue = gradient(analyze(d.ue));
    return d;
}

// Scalars entering both curvature routes at one node.
struct NodeScalars {
    double ue, uee, lap;
    double gu2;       // |grad u|^2
    double gu_gue;    // <grad u, grad u_eta>
    double hgu_gu;    // <(hess u) grad u, grad u>
};

NodeScalars node_scalars(const TangentialData& d, int i, int j) {
    NodeScalars n;
    n.ue = d.ue(i, j);
    n.uee = d.uee(i, j);
    n.lap = d.lap(i, j);
    const double gt = d.gu.th(i, j), gp = d.gu.ph(i, j);
    n.gu2 = gt * gt + gp * gp;
    n.gu_gue = gt * d.gue.th(i, j) + gp * d.gue.ph(i, j);
    n.hgu_gu = d.hu.tt(i, j) * gt * gt + 2.0 * d.hu.tp(i, j) * gt * gp +
               d.hu.pp(i, j) * gp * gp;
    return n;
}

struct ChartScalars {
    double r, m2r4, r2i, eta;
};

ChartScalars chart_scalars(double m, double eta) {
    if (!(eta > 0.0 && eta < 1.0))
        throw DomainError("horizon: eta must lie in (0, 1)");
    ChartScalars c;
    c.eta = eta;
    c.r = 2.0 * m / (1.0 - eta * eta);
    c.m2r4 = m * m / (c.r * c.r * c.r * c.r);
    c.r2i = 1.0 / (c.r * c.r);
    return c;
}

struct CurvatureTerms {
    double W, L, rhs, H;
};

CurvatureTerms curvature_terms(double m, const ChartScalars& c,
                               const NodeScalars& n) {
    CurvatureTerms t;
    t.W = c.m2r4 * n.ue * n.ue + c.r2i * n.gu2;
    t.L = 1.0 / (c.eta * c.eta) - t.W;
    if (!(t.L > 0.0))
        throw DomainError("horizon: graph is not spacelike at this eta");
    const double W_eta = 2.0 * c.m2r4 * n.ue * n.uee -
                         4.0 * m * c.eta / (c.r * c.r * c.r) * n.ue * n.ue +
                         2.0 * c.r2i * n.gu_gue -
                         2.0 * c.eta / (m * c.r) * n.gu2;
    const double L_eta = -2.0 / (c.eta * c.eta * c.eta) - W_eta;
    const double gradL_gu =
        -(2.0 * c.m2r4 * n.ue * n.gu_gue + 2.0 * c.r2i * n.hgu_gu);
    t.rhs = c.m2r4 * (t.L * n.uee + (t.L / c.eta - 0.5 * L_eta) * n.ue) +
            c.r2i * (t.L * n.lap - 0.5 * gradL_gu);
    t.H = t.rhs / (3.0 * t.L * std::sqrt(t.L));
    return t;
}

}  // namespace

HorizonGraph HorizonGraph::polynomial(GridPtr g, double m,
                                      std::vector<SphericalField> coeffs) {
    if (!(m > 0.0)) throw DomainError("horizon: mass must be > 0");
    if (coeffs.empty())
        throw DomainError("horizon: need at least one coefficient field");
    for (const auto& c : coeffs)
        if (c.grid().get() != g.get())
            throw DomainError("horizon: coefficient fields must live on g");
    HorizonGraph h;
    h.kind_ = Kind::Polynomial;
    h.grid_ = std::move(g);
    h.m_ = m;
    h.coeffs_ = std::move(coeffs);
    return h;
}

HorizonGraph HorizonGraph::from_sscmc(GridPtr g, const SSCMCParams& p) {
    p.validate();
    if (!(p.m > 0.0)) throw DomainError("horizon: mass must be > 0");
    if (!is_horizon_branch(p))
        throw DomainError(
            "horizon: slice must be on the branch crossing the horizon");
    HorizonGraph h;
    h.kind_ = Kind::SSCMC;
    h.grid_ = std::move(g);
    h.m_ = p.m;
    h.params_ = p;
    return h;
}

SphericalField HorizonGraph::u_field(double eta) const {
    SphericalField out(grid_);
    if (kind_ == Kind::Polynomial) {
        for (std::size_t k = coeffs_.size(); k-- > 0;)
            out = eta * out + coeffs_[k];
        return out;
    }
    const double val = detail::integrate(
        [&](double x) { return sscmc_horizon_u_eta(params_, x); }, 0.0, eta);
    out.values().setConstant(val);
    return out;
}

SphericalField HorizonGraph::u_eta_field(double eta) const {
    SphericalField out(grid_);
    if (kind_ == Kind::Polynomial) {
        for (std::size_t k = coeffs_.size(); k-- > 1;)
            out = eta * out + double(k) * coeffs_[k];
        return out;
    }
    out.values().setConstant(sscmc_horizon_u_eta(params_, eta));
    return out;
}

SphericalField HorizonGraph::u_etaeta_field(double eta) const {
    SphericalField out(grid_);
    if (kind_ == Kind::Polynomial) {
        for (std::size_t k = coeffs_.size(); k-- > 2;)
            out = eta * out + double(k) * double(k - 1) * coeffs_[k];
        return out;
    }
    out.values().setConstant(sscmc_horizon_u_eta_jet(params_, eta).deriv(1));
    return out;
}

SphericalField HorizonGraph::u_eta_at_zero() const {
    SphericalField out(grid_);
    if (kind_ == Kind::Polynomial) {
        if (coeffs_.size() >= 2) out = coeffs_[1];
        return out;
    }
    out.values().setConstant(sscmc_horizon_u_eta(params_, 0.0));
    return out;
}

SphericalField horizon_mean_curvature(const HorizonGraph& g, double eta) {
    const ChartScalars c = chart_scalars(g.mass(), eta);
    const TangentialData d = tangential_data(g, eta);
    SphericalField out(g.grid());
    const auto& gr = *g.grid();
    for (int i = 0; i < gr.n_lat(); ++i)
        for (int j = 0; j < gr.n_lon(); ++j)
            out.at(i, j) =
                curvature_terms(g.mass(), c, node_scalars(d, i, j)).H;
    return out;
}

HorizonSlope horizon_boundary_slope(const HorizonGraph& g, double eta0,
                                    int levels) {
    if (!(eta0 > 0.0 && eta0 < 1.0))
        throw DomainError("horizon: eta0 must lie in (0, 1)");
    if (levels < 2) throw DomainError("horizon: need at least two levels");
    std::vector<double> etas(std::size_t(levels), 0.0);
    std::vector<SphericalField> samples;
    samples.reserve(std::size_t(levels));
    double e = eta0;
    for (int j = 0; j < levels; ++j, e *= 0.5) {
        etas[std::size_t(j)] = e;
        samples.push_back(g.u_eta_field(e));
    }
    HorizonSlope out{SphericalField(g.grid()), 0.0};
    const auto& gr = *g.grid();
    std::vector<double> v(std::size_t(levels), 0.0);
    for (int i = 0; i < gr.n_lat(); ++i) {
        for (int j = 0; j < gr.n_lon(); ++j) {
            for (int k = 0; k < levels; ++k)
                v[std::size_t(k)] = samples[std::size_t(k)](i, j);
            double err = 0.0;
            out.estimate.at(i, j) = neville_zero(etas, v, 1, &err);
            out.err_est = std::max(out.err_est, std::abs(err));
        }
    }
    return out;
}

SphericalField horizon_series_residual(const HorizonGraph& g, double eta) {
    const double m = g.mass();
    const ChartScalars c = chart_scalars(m, eta);
    const TangentialData d = tangential_data(g, eta);
    SphericalField out(g.grid());
    const auto& gr = *g.grid();
    for (int i = 0; i < gr.n_lat(); ++i) {
        for (int j = 0; j < gr.n_lon(); ++j) {
            const NodeScalars n = node_scalars(d, i, j);
            const CurvatureTerms t = curvature_terms(m, c, n);
            const double a0 = 2.0 * c.m2r4 * n.ue;
            const double a1 = c.m2r4 * n.uee + c.r2i * n.lap;
            const double a2 = -c.m2r4 * t.W * n.ue;
            const double a3 =
                -c.m2r4 * t.W * n.uee - c.r2i * t.W * n.lap +
                0.5 * c.m2r4 * n.ue *
                    (2.0 * c.m2r4 * n.ue * n.uee + 2.0 * c.r2i * n.gu_gue) +
                0.5 * c.r2i *
                    (2.0 * c.m2r4 * n.ue * n.gu_gue + 2.0 * c.r2i * n.hgu_gu);
            const double a4 = -c.m2r4 *
                              (2.0 * m / (c.r * c.r * c.r) * n.ue * n.ue +
                               n.gu2 / (m * c.r)) *
                              n.ue;
            const double series =
                a0 + eta * (a1 + eta * (a2 + eta * (a3 + eta * a4)));
            const double x = eta * eta * t.W;
            out.at(i, j) = series - 3.0 * t.H * binom_three_halves(x);
        }
    }
    return out;
}

std::vector<PairingRow> boundary_geodesic_pairings(
    const HorizonGraph& g, const std::vector<double>& r_list) {
    const double m = g.mass();
    {
        const SphericalField slope = g.u_eta_at_zero();
        if (slope.values().abs().minCoeff() <= 0.0)
            throw DomainError(
                "horizon: pairings need a nonvanishing boundary slope");
    }
    std::vector<PairingRow> rows;
    rows.reserve(r_list.size());
    const auto& gr = *g.grid();
    for (const double r : r_list) {
        if (!(r > 2.0 * m))
            throw DomainError("horizon: pairings need r > 2m");
        PairingRow row;
        row.r = r;
        row.h = 1.0 - 2.0 * m / r;
        const double eta = std::sqrt(row.h);
        const double h32 = row.h * std::sqrt(row.h);
        const SphericalField u = g.u_field(eta);
        const Spectrum su = analyze(u);
        const VectorField gu = gradient(su);
        const SymTensorField hu = hessian(su);
        for (int i = 0; i < gr.n_lat(); ++i) {
            const double st = gr.sin_theta(i);
            const double ct = std::cos(gr.theta(i));
            for (int j = 0; j < gr.n_lon(); ++j) {
                // Coordinate partials from frame components.
                const double ut = gu.th(i, j);
                const double up = st * gu.ph(i, j);
                const double utt = hu.tt(i, j);
                const double utp = st * hu.tp(i, j) + ct * gu.ph(i, j);
                const double upp =
                    st * st * hu.pp(i, j) - st * ct * gu.th(i, j);
                const double w = m / (r * r) * h32;
                row.p22 = std::max(row.p22, std::abs(ut * ut * w - r * h32));
                row.p23 = std::max(row.p23, std::abs(ut * up * w));
                row.p33 = std::max(
                    row.p33, std::abs(up * up * w - r * st * st * h32));
                row.t22 = std::max(row.t22, std::abs(row.h * utt));
                row.t23 = std::max(row.t23, std::abs(row.h * utp));
                row.t33 = std::max(row.t33, std::abs(row.h * upp));
            }
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace cmclab
