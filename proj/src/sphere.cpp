#include "cmclab/sphere.hpp"

#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_legendre.h>

#include <cmath>
#include <random>

#include "cmclab/parallel.hpp"

namespace cmclab {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;

int default_n_lat(int l_max) {
    return int(std::ceil(1.5 * (l_max + 1)));
}

// P_n(x) and P_n'(x) by the three-term recurrence (x strictly inside (-1,1)).
std::pair<double, double> legendre_pn(int n, double x) {
    if (n == 0) return {1.0, 0.0};
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}
}  // namespace

SphericalGrid::SphericalGrid(int l_max)
    : SphericalGrid(l_max, default_n_lat(l_max), 2 * default_n_lat(l_max)) {}

SphericalGrid::SphericalGrid(int l_max, int n_lat, int n_lon)
    : l_max_(l_max), n_lat_(n_lat), n_lon_(n_lon) {
    if (l_max < 0) throw DomainError("grid: l_max must be >= 0");
    if (n_lat < l_max + 1)
        throw DomainError("grid: n_lat must be >= l_max + 1 for exact analysis");
    if (n_lon < 2 * l_max + 1)
        throw DomainError("grid: n_lon must be >= 2 l_max + 1 for exact analysis");
    build();
}

void SphericalGrid::build() {
    theta_.resize(n_lat_);
    mu_.resize(n_lat_);
    sin_th_.resize(n_lat_);
    w_.resize(n_lat_);
    phi_.resize(n_lon_);

    gsl_integration_glfixed_table* t =
        gsl_integration_glfixed_table_alloc(std::size_t(n_lat_));
    for (int i = 0; i < n_lat_; ++i) {
        double x, w;
        gsl_integration_glfixed_point(-1.0, 1.0, std::size_t(i), &x, &w, t);
        // GSL computes tables for uncached sizes to ~1e-12 only; polish the
        // node to machine precision and recompute the weight from it.
        for (int it = 0; it < 4; ++it) {
            const auto [p, d] = legendre_pn(n_lat_, x);
            const double dx = p / d;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double d = legendre_pn(n_lat_, x).second;
        w = 2.0 / ((1.0 - x * x) * d * d);
        mu_[i] = x;
        w_[i] = w;
        theta_[i] = std::acos(x);
        sin_th_[i] = std::sin(theta_[i]);
    }
    gsl_integration_glfixed_table_free(t);

    for (int j = 0; j < n_lon_; ++j) phi_[j] = kTwoPi * j / n_lon_;

    // Associated Legendre tables and their first two theta-derivatives.
    const int nh = n_half();
    const std::size_t gsl_n = gsl_sf_legendre_array_n(std::size_t(l_max_));
    std::vector<double> v(gsl_n), d1(gsl_n), d2(gsl_n);
    for (int d = 0; d < 3; ++d) plm_[d].resize(std::size_t(n_lat_) * nh);
    for (int i = 0; i < n_lat_; ++i) {
        gsl_sf_legendre_deriv2_array(GSL_SF_LEGENDRE_SPHARM, l_max_, mu_[i],
                                     v.data(), d1.data(), d2.data());
        const double st = sin_th_[i], ct = mu_[i];
        for (int k = 0; k < nh; ++k) {
            // chain rule x = cos(theta):  dS/dth = -sin th S',
            // d2S/dth2 = sin^2 th S'' - cos th S'
            plm_[0][std::size_t(i) * nh + k] = v[k];
            plm_[1][std::size_t(i) * nh + k] = -st * d1[k];
            plm_[2][std::size_t(i) * nh + k] = st * st * d2[k] - ct * d1[k];
        }
    }

    cos_m_.resize(std::size_t(n_lon_) * (l_max_ + 1));
    sin_m_.resize(std::size_t(n_lon_) * (l_max_ + 1));
    for (int j = 0; j < n_lon_; ++j)
        for (int m = 0; m <= l_max_; ++m) {
            cos_m_[std::size_t(j) * (l_max_ + 1) + m] = std::cos(m * phi_[j]);
            sin_m_[std::size_t(j) * (l_max_ + 1) + m] = std::sin(m * phi_[j]);
        }
}

const double* SphericalGrid::plm_row(int i, int d) const {
    return plm_[d].data() + std::size_t(i) * n_half();
}

double SphericalGrid::node_weight(int i, int j) const {
    (void)j;
    return w_[i] * kTwoPi / n_lon_;
}

Eigen::Vector3d SphericalGrid::node(int i, int j) const {
    return {sin_th_[i] * std::cos(phi_[j]), sin_th_[i] * std::sin(phi_[j]),
            mu_[i]};
}

GridPtr make_grid(int l_max) { return std::make_shared<SphericalGrid>(l_max); }
GridPtr make_grid(int l_max, int n_lat, int n_lon) {
    return std::make_shared<SphericalGrid>(l_max, n_lat, n_lon);
}
GridPtr product_grid(const SphericalGrid& g, int factor) {
    return make_grid(factor * g.l_max() + 2);
}

SphericalField::SphericalField(GridPtr g, Eigen::ArrayXXd v)
    : grid_(std::move(g)), v_(std::move(v)) {
    if (v_.rows() != grid_->n_lat() || v_.cols() != grid_->n_lon())
        throw DomainError("field: value array does not match grid");
}

SphericalField SphericalField::from_function(
    GridPtr g, const std::function<double(double, double)>& f) {
    SphericalField out(g);
    for (int i = 0; i < g->n_lat(); ++i)
        for (int j = 0; j < g->n_lon(); ++j)
            out.at(i, j) = f(g->theta(i), g->phi(j));
    return out;
}

SphericalField SphericalField::from_cartesian(
    GridPtr g, const std::function<double(const Eigen::Vector3d&)>& f) {
    SphericalField out(g);
    for (int i = 0; i < g->n_lat(); ++i)
        for (int j = 0; j < g->n_lon(); ++j) out.at(i, j) = f(g->node(i, j));
    return out;
}

Spectrum::Spectrum(GridPtr g, Eigen::VectorXd c)
    : grid_(std::move(g)), c_(std::move(c)) {
    if (c_.size() != grid_->n_modes())
        throw DomainError("spectrum: coefficient count does not match grid");
}

double Spectrum::degree_energy(int l) const {
    double e = 0.0;
    for (int m = -l; m <= l; ++m) {
        double c = coeff(l, m);
        e += c * c;
    }
    return e;
}

namespace {

// Shared synthesis kernel: theta-derivative order `dth` (0..2) applied to the
// Legendre factor, phi-derivative order `dph` (0..2) applied to the azimuthal
// factor.  Coordinate partials, not frame components.
Eigen::ArrayXXd synth_kernel(const Spectrum& s, const SphericalGrid& g,
                             int dth, int dph) {
    const int L = g.l_max(), n_lat = g.n_lat(), n_lon = g.n_lon();
    const double root2 = std::sqrt(2.0);
    Eigen::ArrayXXd out(n_lat, n_lon);
    // Per latitude: accumulate over l for each m, then combine over phi.
    parallel_for(std::size_t(n_lat), [&](std::size_t ii) {
        const int i = int(ii);
        const double* T = g.plm_row(i, dth);
        std::vector<double> Gc(L + 1, 0.0), Gs(L + 1, 0.0);
        for (int m = 0; m <= L; ++m) {
            const double fac = (m == 0) ? 1.0 : root2;
            double gc = 0.0, gs = 0.0;
            for (int l = m; l <= L; ++l) {
                const double t = T[g.half_index(l, m)];
                gc += s.coeff(l, m) * t;
                if (m > 0) gs += s.coeff(l, -m) * t;
            }
            Gc[m] = fac * gc;
            Gs[m] = fac * gs;
        }
        for (int j = 0; j < n_lon; ++j) {
            double acc = 0.0;
            for (int m = 0; m <= L; ++m) {
                const double cm = g.cos_m(j, m), sm = g.sin_m(j, m);
                switch (dph) {
                    case 0: acc += Gc[m] * cm + Gs[m] * sm; break;
                    case 1: acc += m * (-Gc[m] * sm + Gs[m] * cm); break;
                    default: acc += -double(m) * m * (Gc[m] * cm + Gs[m] * sm);
                }
            }
            out(i, j) = acc;
        }
    });
    return out;
}

}  // namespace

Spectrum analyze(const SphericalField& f) {
    const auto& gp = f.grid();
    const SphericalGrid& g = *gp;
    const int L = g.l_max(), n_lat = g.n_lat(), n_lon = g.n_lon();
    const double root2 = std::sqrt(2.0);
    const double dphi = kTwoPi / n_lon;

    // Azimuthal quadrature per latitude...
    Eigen::ArrayXXd Fc(n_lat, L + 1), Fs(n_lat, L + 1);
    parallel_for(std::size_t(n_lat), [&](std::size_t ii) {
        const int i = int(ii);
        for (int m = 0; m <= L; ++m) {
            double ac = 0.0, as = 0.0;
            for (int j = 0; j < n_lon; ++j) {
                ac += f(i, j) * g.cos_m(j, m);
                as += f(i, j) * g.sin_m(j, m);
            }
            Fc(i, m) = ac * dphi;
            Fs(i, m) = as * dphi;
        }
    });

    // ...then Gauss-Legendre quadrature against the Legendre factors.
    Eigen::VectorXd c = Eigen::VectorXd::Zero(g.n_modes());
    for (int i = 0; i < n_lat; ++i) {
        const double* T = g.plm_row(i, 0);
        const double w = g.lat_weight(i);
        for (int m = 0; m <= L; ++m) {
            const double fac = (m == 0) ? 1.0 : root2;
            for (int l = m; l <= L; ++l) {
                const double base = w * fac * T[g.half_index(l, m)];
                c(SphericalGrid::mode_index(l, m)) += base * Fc(i, m);
                if (m > 0)
                    c(SphericalGrid::mode_index(l, -m)) += base * Fs(i, m);
            }
        }
    }
    return Spectrum(gp, std::move(c));
}

SphericalField synthesize(const Spectrum& s) {
    return SphericalField(s.grid(), synth_kernel(s, *s.grid(), 0, 0));
}

namespace {
Spectrum pad_to(const Spectrum& s, const GridPtr& target) {
    if (target->l_max() < s.l_max())
        throw DomainError("synthesize_on: target grid cannot hold the band");
    Eigen::VectorXd c = Eigen::VectorXd::Zero(target->n_modes());
    c.head(s.coeffs().size()) = s.coeffs();  // mode layout nests by degree
    return Spectrum(target, std::move(c));
}
}  // namespace

SphericalField synthesize_on(const Spectrum& s, const GridPtr& target) {
    if (target.get() == s.grid().get()) return synthesize(s);
    return synthesize(pad_to(s, target));
}

double synth_at(const Spectrum& s, double theta, double phi) {
    const int L = s.l_max();
    const double x = std::cos(theta);
    std::vector<double> v(gsl_sf_legendre_array_n(std::size_t(L)));
    gsl_sf_legendre_array(GSL_SF_LEGENDRE_SPHARM, L, x, v.data());
    const double root2 = std::sqrt(2.0);
    double acc = 0.0;
    for (int m = 0; m <= L; ++m) {
        const double fac = (m == 0) ? 1.0 : root2;
        double gc = 0.0, gs = 0.0;
        for (int l = m; l <= L; ++l) {
            const double t = v[std::size_t(l * (l + 1) / 2 + m)];
            gc += s.coeff(l, m) * t;
            if (m > 0) gs += s.coeff(l, -m) * t;
        }
        acc += fac * (gc * std::cos(m * phi) + gs * std::sin(m * phi));
    }
    return acc;
}

PointDerivs synth_point_derivs(const Spectrum& s, double theta, double phi) {
    const int L = s.l_max();
    const double x = std::cos(theta), st = std::sin(theta);
    if (std::abs(st) < 1e-12)
        throw DomainError("synth_point_derivs: point too close to a pole");
    const std::size_t n = gsl_sf_legendre_array_n(std::size_t(L));
    std::vector<double> v(n), d1(n), d2(n);
    gsl_sf_legendre_deriv2_array(GSL_SF_LEGENDRE_SPHARM, L, x, v.data(),
                                 d1.data(), d2.data());
    const double root2 = std::sqrt(2.0);
    PointDerivs out{};
    for (int m = 0; m <= L; ++m) {
        const double fac = (m == 0) ? 1.0 : root2;
        double gc = 0, gs = 0, gc_t = 0, gs_t = 0, gc_tt = 0, gs_tt = 0;
        for (int l = m; l <= L; ++l) {
            const std::size_t k = std::size_t(l * (l + 1) / 2 + m);
            const double T = v[k];
            const double Tt = -st * d1[k];
            const double Ttt = st * st * d2[k] - x * d1[k];
            const double cp = s.coeff(l, m);
            gc += cp * T; gc_t += cp * Tt; gc_tt += cp * Ttt;
            if (m > 0) {
                const double cm = s.coeff(l, -m);
                gs += cm * T; gs_t += cm * Tt; gs_tt += cm * Ttt;
            }
        }
        const double cm = std::cos(m * phi), sm = std::sin(m * phi);
        out.f += fac * (gc * cm + gs * sm);
        out.f_th += fac * (gc_t * cm + gs_t * sm);
        out.f_ph += fac * m * (-gc * sm + gs * cm);
        out.f_thth += fac * (gc_tt * cm + gs_tt * sm);
        out.f_thph += fac * m * (-gc_t * sm + gs_t * cm);
        out.f_phph += -fac * double(m) * m * (gc * cm + gs * sm);
    }
    return out;
}

VectorField gradient(const Spectrum& s) {
    const auto& g = s.grid();
    Eigen::ArrayXXd ft = synth_kernel(s, *g, 1, 0);
    Eigen::ArrayXXd fp = synth_kernel(s, *g, 0, 1);
    for (int i = 0; i < g->n_lat(); ++i) fp.row(i) /= g->sin_theta(i);
    return {SphericalField(g, std::move(ft)), SphericalField(g, std::move(fp))};
}

SymTensorField hessian(const Spectrum& s) {
    const auto& g = s.grid();
    Eigen::ArrayXXd ft = synth_kernel(s, *g, 1, 0);
    Eigen::ArrayXXd fp = synth_kernel(s, *g, 0, 1);
    Eigen::ArrayXXd ftt = synth_kernel(s, *g, 2, 0);
    Eigen::ArrayXXd ftp = synth_kernel(s, *g, 1, 1);
    Eigen::ArrayXXd fpp = synth_kernel(s, *g, 0, 2);
    Eigen::ArrayXXd htp(g->n_lat(), g->n_lon()), hpp(g->n_lat(), g->n_lon());
    for (int i = 0; i < g->n_lat(); ++i) {
        const double st = g->sin_theta(i), ct = g->mu(i);
        const double cot = ct / st;
        // Christoffel corrections of the round metric in (theta, phi),
        // expressed in the orthonormal frame.
        htp.row(i) = (ftp.row(i) - cot * fp.row(i)) / st;
        hpp.row(i) = fpp.row(i) / (st * st) + cot * ft.row(i);
    }
    return {SphericalField(g, std::move(ftt)), SphericalField(g, std::move(htp)),
            SphericalField(g, std::move(hpp))};
}

SphericalField laplacian(const Spectrum& s) {
    Spectrum t = s;
    for (int l = 0; l <= s.l_max(); ++l)
        for (int m = -l; m <= l; ++m) t.coeff(l, m) *= -double(l) * (l + 1);
    return synthesize(t);
}

SphericalField eigenspace_project(const Spectrum& s, int l) {
    Spectrum t(s.grid(), Eigen::VectorXd::Zero(s.coeffs().size()));
    if (l <= s.l_max())
        for (int m = -l; m <= l; ++m) t.coeff(l, m) = s.coeff(l, m);
    return synthesize(t);
}

SphericalField vdot(const VectorField& a, const VectorField& b) {
    SphericalField r = a.th * b.th;
    r += a.ph * b.ph;
    return r;
}

double integral(const SphericalField& f) {
    const auto& g = *f.grid();
    const double dphi = kTwoPi / g.n_lon();
    double acc = 0.0;
    for (int i = 0; i < g.n_lat(); ++i) {
        double row = 0.0;
        for (int j = 0; j < g.n_lon(); ++j) row += f(i, j);
        acc += row * g.lat_weight(i) * dphi;
    }
    return acc;
}

double l2_norm(const SphericalField& f) {
    return std::sqrt(integral(f * f));
}

Eigen::Matrix3d random_rotation(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
    q.normalize();
    return q.toRotationMatrix();
}

SphericalField rotate(const Spectrum& s, const Eigen::Matrix3d& R,
                      const GridPtr& target) {
    SphericalField out(target);
    const auto& g = *target;
    parallel_for(std::size_t(g.n_lat()), [&](std::size_t ii) {
        const int i = int(ii);
        for (int j = 0; j < g.n_lon(); ++j) {
            Eigen::Vector3d y = R * g.node(i, j);
            const double th = std::acos(std::clamp(y.z(), -1.0, 1.0));
            const double ph = std::atan2(y.y(), y.x());
            out.at(i, j) = synth_at(s, th, ph);
        }
    });
    return out;
}

Spectrum random_spectrum(const GridPtr& g, int l_band, std::uint64_t seed,
                         bool unit_norm) {
    if (l_band > g->l_max())
        throw DomainError("random_spectrum: band exceeds grid");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(g->n_modes());
    for (int l = 0; l <= l_band; ++l)
        for (int m = -l; m <= l; ++m)
            c(SphericalGrid::mode_index(l, m)) = n(rng);
    if (unit_norm) c /= c.norm();
    return Spectrum(g, std::move(c));
}

}  // namespace cmclab
