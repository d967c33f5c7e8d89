#include "cmclab/graph.hpp"

#include <cmath>
#include <map>
#include <memory>

#include "cmclab/detail/quad.hpp"
#include "cmclab/errors.hpp"

namespace cmclab {

GraphFunctionP GraphFunctionP::poly_in_s(std::vector<SphericalField> coeffs,
                                         double m) {
    if (coeffs.empty()) throw DomainError("graph: need >= 1 coefficient field");
    for (const auto& c : coeffs)
        if (c.grid() != coeffs.front().grid())
            throw DomainError("graph: coefficient fields on different grids");
    GraphFunctionP g;
    g.kind_ = GraphKind::PolyInS;
    g.grid_ = coeffs.front().grid();
    g.m_ = m;
    g.coeffs_ = std::move(coeffs);
    return g;
}

GraphFunctionP GraphFunctionP::analytic(GridPtr grid, JetSampler jets,
                                        double m) {
    GraphFunctionP g;
    g.kind_ = GraphKind::Analytic;
    g.grid_ = std::move(grid);
    g.m_ = m;
    g.jet_ = std::move(jets);
    return g;
}

GraphFunctionP GraphFunctionP::numeric(GridPtr grid, Sampler sampler, double m,
                                       double resolution) {
    GraphFunctionP g;
    g.kind_ = GraphKind::Numeric;
    g.grid_ = std::move(grid);
    g.m_ = m;
    g.sampler_ = std::move(sampler);
    g.resolution_ = resolution;
    return g;
}

namespace {

// Central difference of order `k` with one Richardson level (h^2 -> h^4).
double fd_deriv(const std::function<double(double)>& f, double s, int k,
                double h) {
    auto stencil = [&](double hh) {
        switch (k) {
            case 1: return (f(s + hh) - f(s - hh)) / (2.0 * hh);
            case 2: return (f(s + hh) - 2.0 * f(s) + f(s - hh)) / (hh * hh);
            case 3:
                return (f(s + 2 * hh) - 2.0 * f(s + hh) + 2.0 * f(s - hh) -
                        f(s - 2 * hh)) /
                       (2.0 * hh * hh * hh);
            default:
                return (f(s + 2 * hh) - 4.0 * f(s + hh) + 6.0 * f(s) -
                        4.0 * f(s - hh) + f(s - 2 * hh)) /
                       (hh * hh * hh * hh);
        }
    };
    return (4.0 * stencil(h / 2.0) - stencil(h)) / 3.0;
}

}  // namespace

GraphFunctionP GraphFunctionP::restricted(double s_max) const {
    if (!(s_max > 0.0)) throw DomainError("graph: s_max must be > 0");
    GraphFunctionP g = *this;
    g.s_max_ = s_max;
    return g;
}

SphericalField GraphFunctionP::ds_field(int k, double s) const {
    if (k < 0 || k > 4) throw DomainError("graph: derivative order must be 0..4");
    if (s < 0.0) throw DomainError("graph: s must be >= 0");
    if (s > s_max_ * (1.0 + 1e-12))
        throw DomainError("graph: s outside the validated domain (0, s_max]");
    const auto& g = *grid_;
    SphericalField out(grid_);
    switch (kind_) {
        case GraphKind::PolyInS: {
            for (int j = int(coeffs_.size()) - 1; j >= k; --j) {
                double fall = 1.0;
                for (int i = 0; i < k; ++i) fall *= double(j - i);
                out.values() = out.values() * s + fall * coeffs_[j].values();
            }
            return out;
        }
        case GraphKind::Analytic: {
            for (int i = 0; i < g.n_lat(); ++i)
                for (int j = 0; j < g.n_lon(); ++j)
                    out.at(i, j) = jet_(i, j, s).deriv(k);
            return out;
        }
        case GraphKind::Numeric:
        default: {
            if (k == 0) {
                for (int i = 0; i < g.n_lat(); ++i)
                    for (int j = 0; j < g.n_lon(); ++j)
                        out.at(i, j) = sampler_(i, j, s);
                return out;
            }
            if (s <= 0.0)
                throw DomainError(
                    "numeric graph: cannot difference at the boundary s = 0");
            const double h = s / 10.0;
            // Stencil span must clear the backing-table resolution; otherwise
            // the requested derivative is not available from this data.
            if (resolution_ > 0.0 && h / 2.0 < 4.0 * resolution_)
                throw AccuracyError(
                    "numeric graph: tabulation too coarse for derivative of "
                    "order " + std::to_string(k));
            for (int i = 0; i < g.n_lat(); ++i)
                for (int j = 0; j < g.n_lon(); ++j) {
                    auto f1 = [&](double ss) { return sampler_(i, j, ss); };
                    out.at(i, j) = fd_deriv(f1, s, k, h);
                }
            return out;
        }
    }
}

std::vector<SphericalField> GraphFunctionP::ds_fields(int k_max,
                                                      double s) const {
    std::vector<SphericalField> out;
    out.reserve(k_max + 1);
    if (kind_ == GraphKind::Analytic) {
        // evaluate the jet once per node
        const auto& g = *grid_;
        for (int k = 0; k <= k_max; ++k) out.emplace_back(grid_);
        for (int i = 0; i < g.n_lat(); ++i)
            for (int j = 0; j < g.n_lon(); ++j) {
                const Jet<4> jet = jet_(i, j, s);
                for (int k = 0; k <= k_max; ++k) out[k].at(i, j) = jet.deriv(k);
            }
        return out;
    }
    for (int k = 0; k <= k_max; ++k) out.push_back(ds_field(k, s));
    return out;
}

SphericalField GraphFunctionP::boundary_value() const {
    return ds_field(0, 0.0);
}

GraphFunctionP hyperboloid_graph(GridPtr g, const Eigen::Vector3d& a) {
    const double b = 1.0 + a.squaredNorm();
    // per-node q = a . y is fixed; capture the node table by value
    std::vector<double> q(std::size_t(g->n_lat()) * g->n_lon());
    for (int i = 0; i < g->n_lat(); ++i)
        for (int j = 0; j < g->n_lon(); ++j)
            q[std::size_t(i) * g->n_lon() + j] = a.dot(g->node(i, j));
    const int n_lon = g->n_lon();
    auto jets = [q = std::move(q), b, n_lon](int i, int j, double s) {
        const double qq = q[std::size_t(i) * n_lon + j];
        Jet<4> sj = Jet<4>::variable(s);
        Jet<4> w = sqrt(Jet<4>(1.0) - Jet<4>(2.0 * qq) * sj +
                        Jet<4>(b) * sj * sj);
        return (Jet<4>(2.0 * qq) - Jet<4>(b) * sj) / (Jet<4>(1.0) + w);
    };
    return GraphFunctionP::analytic(std::move(g), std::move(jets), 0.0);
}

namespace {

// P(s) = int_0^s P_s with memoized increments (the value itself never enters
// the geometry, but the jet should still be a genuine jet of P).
std::function<double(double)> make_P_value(const SSCMCParams& p) {
    auto cache = std::make_shared<std::map<double, double>>();
    (*cache)[0.0] = 0.0;
    return [p, cache](double s) {
        auto it = cache->find(s);
        if (it != cache->end()) return it->second;
        auto prev = cache->upper_bound(s);  // 0.0 is cached, so s >= begin
        --prev;                             // largest cached anchor <= s
        const double s0 = prev->first, P0 = prev->second;
        const double val =
            P0 + detail::integrate([&](double t) { return sscmc_Ps(p, t); },
                                   s0, s);
        (*cache)[s] = val;
        return val;
    };
}

}  // namespace

GraphFunctionP sscmc_graph(GridPtr g, const SSCMCParams& p) {
    p.validate();
    auto value = make_P_value(p);
    auto jets = [p, value](int, int, double s) {
        const Jet<3> ps = sscmc_Ps_jet3(p, s);
        Jet<4> out;
        out.c[0] = value(s);
        for (std::size_t k = 1; k <= 4; ++k) out.c[k] = ps.c[k - 1] / double(k);
        return out;
    };
    return GraphFunctionP::analytic(std::move(g), std::move(jets), p.m);
}

GraphFunctionP sscmc_graph_numeric(GridPtr g, const SSCMCParams& p,
                                   double resolution) {
    p.validate();
    auto value = make_P_value(p);
    auto sampler = [value](int, int, double s) { return value(s); };
    return GraphFunctionP::numeric(std::move(g), std::move(sampler), p.m,
                                   resolution);
}

}  // namespace cmclab
