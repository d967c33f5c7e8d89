#include "cmclab/expansion.hpp"

#include <cmath>
#include <utility>

#include "cmclab/errors.hpp"
#include "cmclab/geometry.hpp"

namespace cmclab {

namespace {

SphericalField constant_field(const GridPtr& g, double value) {
    SphericalField f(g);
    f.values().setConstant(value);
    return f;
}

SphericalField nodewise_pow(const SphericalField& f, int p) {
    SphericalField r = f;
    r.values() = f.values().pow(p);
    return r;
}

SphericalField reciprocal(const SphericalField& f) {
    SphericalField r = f;
    r.values() = 1.0 / f.values();
    return r;
}

// Analysis with coefficients above a known exact band zeroed.  Products of
// band-limited fields are band-limited (bands add), so for constant H0 every
// intermediate of the jet recursion has a provable band; everything above it
// is rounding noise, which the next Laplacian would otherwise amplify by
// l(l+1).  Truncation keeps the iterated-derivative noise floor near eps.
Spectrum analyze_banded(const SphericalField& f, int band) {
    Spectrum s = analyze(f);
    const int n_keep = (band + 1) * (band + 1);
    if (n_keep < s.coeffs().size())
        s.coeffs().tail(s.coeffs().size() - n_keep).setZero();
    return s;
}

// Everything jet_coefficients and the residual need, precomputed on the work
// grid.  Gradients/Laplacians are spectral; products are nodewise.
struct Workspace {
    GridPtr wg;
    bool constant_H0;
    int band_f;  // exact band of the boundary data (base-grid l_max)
    SphericalField H0, Hi1, Hi2, Hi3;  // H0 and reciprocal powers
    VectorField gH0, gHi2;             // zero fields when H0 is constant
    SphericalField fW;
    VectorField gF;
    SphericalField lapF;

    // Band to truncate an intermediate's analysis at.  Exact bands exist
    // only for constant H0 (reciprocals of a variable H0 are not
    // band-limited); otherwise keep the full work-grid spectrum.
    int band(int multiple) const {
        return constant_H0 ? multiple * band_f : wg->l_max();
    }
};

Workspace make_workspace(const BoundaryData& in) {
    in.validate();
    Workspace w;
    w.wg = product_grid(*in.f.grid(), 4);
    w.constant_H0 = in.constant_H0;
    w.band_f = in.f.grid()->l_max();
    w.fW = synthesize_on(analyze(in.f), w.wg);
    if (in.constant_H0) {
        w.H0 = constant_field(w.wg, in.H0(0, 0));
        w.gH0 = VectorField{SphericalField(w.wg), SphericalField(w.wg)};
        w.gHi2 = VectorField{SphericalField(w.wg), SphericalField(w.wg)};
    } else {
        w.H0 = synthesize_on(analyze(in.H0), w.wg);
        if (w.H0.values().minCoeff() <= 0.0)
            throw DomainError(
                "expansion: H0 must stay positive on the work grid");
        // H0 also originates on the base grid, so its band is exact.
        w.gH0 = gradient(analyze_banded(w.H0, w.band_f));
    }
    w.Hi1 = reciprocal(w.H0);
    w.Hi2 = w.Hi1 * w.Hi1;
    w.Hi3 = w.Hi2 * w.Hi1;
    if (!in.constant_H0) w.gHi2 = gradient(analyze(w.Hi2));
    const Spectrum sF = analyze_banded(w.fW, w.band_f);
    w.gF = gradient(sF);
    w.lapF = laplacian(sF);
    return w;
}

struct JetDetail {
    JetFields jets;
    // Spectra/gradients reused by the compatibility residual.
    VectorField gF, gF1, gF2, gLs, gLss;
    SphericalField lapF, lapF1, lapF2;
};

JetDetail jet_detail(const Workspace& w) {
    JetDetail d;
    d.gF = w.gF;
    d.lapF = w.lapF;

    JetFields& j = d.jets;
    j.grid = w.wg;
    j.f = w.fW;
    j.L0 = w.Hi2;

    // First order: f1 and the first s-derivative of the Lorentz norm.
    j.f1 = -0.5 * (w.Hi2 + vdot(w.gF, w.gF));
    j.Ls = -1.0 * (w.Hi2 * w.lapF);
    if (!w.constant_H0) j.Ls -= w.Hi3 * vdot(w.gH0, w.gF);

    const Spectrum sF1 = analyze_banded(j.f1, w.band(2));
    d.gF1 = gradient(sF1);
    d.lapF1 = laplacian(sF1);

    // Second order.
    j.f2 = -0.5 * j.Ls - vdot(d.gF1, d.gF);

    d.gLs = gradient(analyze_banded(j.Ls, w.band(1)));
    j.Lss = -4.5 * (w.H0 * w.H0 * j.Ls * j.Ls) -
            4.0 * (j.Ls * w.lapF + w.Hi2 * d.lapF1) +
            2.0 * vdot(d.gLs, d.gF) + 2.0 * vdot(w.gHi2, d.gF1) +
            4.0 * (w.Hi2 * j.f1);

    const Spectrum sF2 = analyze_banded(j.f2, w.band(3));
    d.gF2 = gradient(sF2);
    d.lapF2 = laplacian(sF2);

    // Third order.
    j.f3 = -0.5 * j.Lss - vdot(d.gF2, d.gF) - vdot(d.gF1, d.gF1) -
           j.f1 * j.f1;

    d.gLss = gradient(analyze_banded(j.Lss, w.band(2)));
    return d;
}

SphericalField residual_from(const Workspace& w, const JetDetail& d) {
    const JetFields& j = d.jets;
    SphericalField rest = 2.5 * (j.Lss * d.lapF) +
                          0.75 * nodewise_pow(w.H0, 4) * nodewise_pow(j.Ls, 3) -
                          4.0 * (j.Ls * d.lapF1) - 2.0 * (w.Hi2 * d.lapF2) +
                          6.0 * (j.Ls * j.f1) + vdot(d.gLss, d.gF) +
                          2.0 * vdot(d.gLs, d.gF1);
    if (!w.constant_H0) {
        rest += 4.5 * (w.Hi1 * vdot(w.gH0, d.gF) * j.Lss) +
                vdot(w.gHi2, d.gF2);
    }
    return rest;
}

}  // namespace

void BoundaryData::validate() const {
    if (!f.grid()) throw DomainError("expansion: boundary data has no grid");
    if (!H0.grid() || H0.grid().get() != f.grid().get())
        throw DomainError("expansion: f and H0 must share one grid");
    if (!(m >= 0.0)) throw DomainError("expansion: mass must be >= 0");
    if (H0.values().minCoeff() <= 0.0)
        throw DomainError("expansion: H0 must be positive");
}

BoundaryData boundary_data(const SphericalField& f, double H0, double m) {
    BoundaryData b;
    b.f = f;
    b.H0 = constant_field(f.grid(), H0);
    b.constant_H0 = true;
    b.m = m;
    b.validate();
    return b;
}

BoundaryData boundary_data(const SphericalField& f, const SphericalField& H0,
                           double m) {
    BoundaryData b;
    b.f = f;
    b.H0 = H0;
    b.constant_H0 = false;
    b.m = m;
    b.validate();
    return b;
}

JetFields jet_coefficients(const BoundaryData& in) {
    const Workspace w = make_workspace(in);
    return jet_detail(w).jets;
}

SphericalField compatibility_residual(const BoundaryData& in) {
    const Workspace w = make_workspace(in);
    return residual_from(w, jet_detail(w));
}

SphericalField compatibility_residual(const BoundaryData& in,
                                      const SphericalField& Hsss) {
    const Workspace w = make_workspace(in);
    SphericalField rest = residual_from(w, jet_detail(w));
    const SphericalField HsssW = synthesize_on(analyze(Hsss), w.wg);
    rest -= 2.0 * (w.Hi3 * HsssW);
    return rest;
}

GraphFunctionP build_barrier(const BoundaryData& in,
                             std::optional<SphericalField> f4, double s_req) {
    if (!(s_req > 0.0)) throw DomainError("expansion: s_req must be > 0");
    const JetFields j = jet_coefficients(in);
    std::vector<SphericalField> coeffs = {j.f, j.f1, 0.5 * j.f2,
                                          (1.0 / 6.0) * j.f3};
    if (f4) {
        coeffs.push_back((1.0 / 24.0) *
                         synthesize_on(analyze(*f4), j.grid));
    }
    GraphFunctionP g = GraphFunctionP::poly_in_s(std::move(coeffs), in.m);
    const double s_max = spacelike_smax(g, s_req);
    return g.restricted(s_max);
}

EigenspaceCheck eigenspace_membership(const SphericalField& f,
                                      double rel_tol) {
    const Spectrum spec = analyze(f);
    EigenspaceCheck out;
    const int l_max = spec.l_max();
    out.degree_energy.resize(std::size_t(l_max) + 1);
    double total = 0.0;
    for (int l = 0; l <= l_max; ++l) {
        out.degree_energy[std::size_t(l)] = spec.degree_energy(l);
        total += out.degree_energy[std::size_t(l)];
    }
    const double low = out.degree_energy[0] +
                       (l_max >= 1 ? out.degree_energy[1] : 0.0);
    if (total <= 0.0) {
        out.inside = true;
        out.defect = 0.0;
        return out;
    }
    out.defect = (total - low) / total;
    out.inside = out.defect <= rel_tol;
    return out;
}

HyperboloidJets hyperboloid_jet_fields(const GridPtr& g,
                                       const Eigen::Vector3d& a) {
    const double b = 1.0 + a.squaredNorm();
    HyperboloidJets out{SphericalField(g), SphericalField(g),
                        SphericalField(g), SphericalField(g),
                        SphericalField(g)};
    for (int i = 0; i < g->n_lat(); ++i) {
        for (int jj = 0; jj < g->n_lon(); ++jj) {
            const double q = a.dot(g->node(i, jj));
            const double q2b = q * q - b;
            out.f.at(i, jj) = q;
            out.f1.at(i, jj) = 0.5 * q2b;
            out.f2.at(i, jj) = q * q2b;
            out.f3.at(i, jj) = 0.75 * q2b * (5.0 * q * q - b);
            out.f4.at(i, jj) = 3.0 * q * (7.0 * q * q - 3.0 * b) * q2b;
        }
    }
    return out;
}

}  // namespace cmclab
