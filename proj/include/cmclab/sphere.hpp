#pragma once
// Band-limited scalar calculus on the unit sphere.
//
// Fields live on a Gauss-Legendre (colatitude) x equispaced (longitude) grid
// and are represented spectrally in real orthonormal spherical harmonics
//   Y_{l,0}  = S_{l,0}(cos th)
//   Y_{l,+m} = sqrt(2) S_{l,m}(cos th) cos(m ph)   (m > 0)
//   Y_{l,-m} = sqrt(2) S_{l,m}(cos th) sin(m ph)
// with S_{l,m} the orthonormalized associated Legendre functions.  Analysis
// and synthesis are exact (to round-off) for fields band-limited by l_max
// provided n_lat >= l_max + 1 and n_lon >= 2 l_max + 1; the default sizing
// oversizes both.  Grid nodes exclude the poles, so frame components built
// with cot(theta) factors are finite everywhere.
//
// Tangential calculus (gradient, covariant Hessian, Laplacian) is returned in
// the orthonormal frame {e_th, e_ph = (1/sin th) d_ph}.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "cmclab/errors.hpp"

namespace cmclab {

class SphericalGrid;
using GridPtr = std::shared_ptr<const SphericalGrid>;

class SphericalGrid {
  public:
    // Default sizing: n_lat = ceil(1.5 (l_max+1)), n_lon = 2 n_lat.
    explicit SphericalGrid(int l_max);
    SphericalGrid(int l_max, int n_lat, int n_lon);

    int l_max() const { return l_max_; }
    int n_lat() const { return n_lat_; }
    int n_lon() const { return n_lon_; }
    int n_modes() const { return (l_max_ + 1) * (l_max_ + 1); }

    double theta(int i) const { return theta_[i]; }
    double mu(int i) const { return mu_[i]; }           // cos(theta_i)
    double sin_theta(int i) const { return sin_th_[i]; }
    double phi(int j) const { return phi_[j]; }
    double lat_weight(int i) const { return w_[i]; }    // Gauss-Legendre weight
    double node_weight(int i, int j) const;             // full quadrature weight
    Eigen::Vector3d node(int i, int j) const;           // unit vector

    // Flat index of the real mode (l, m), m in [-l, l]:  l^2 + l + m.
    static int mode_index(int l, int m) { return l * l + l + m; }

    // Internal basis tables; exposed for the transform kernels.
    // Half-index for (l, m>=0): gsl layout l(l+1)/2 + m.
    int half_index(int l, int m) const { return l * (l + 1) / 2 + m; }
    int n_half() const { return (l_max_ + 1) * (l_max_ + 2) / 2; }
    const double* plm_row(int i, int d) const;   // d = 0,1,2: S, dS/dth, d2S/dth2
    double cos_m(int j, int m) const { return cos_m_[j * (l_max_ + 1) + m]; }
    double sin_m(int j, int m) const { return sin_m_[j * (l_max_ + 1) + m]; }

  private:
    void build();
    int l_max_, n_lat_, n_lon_;
    std::vector<double> theta_, mu_, sin_th_, w_, phi_;
    std::vector<double> plm_[3];          // [d][i * n_half + half_index]
    std::vector<double> cos_m_, sin_m_;
};

GridPtr make_grid(int l_max);
GridPtr make_grid(int l_max, int n_lat, int n_lon);
// Grid able to represent products of `factor` fields band-limited by g.l_max
// (plus slack for curvature factors): l_work = factor * l_max + 2.
GridPtr product_grid(const SphericalGrid& g, int factor);

class SphericalField {
  public:
    SphericalField() = default;
    explicit SphericalField(GridPtr g)
        : grid_(std::move(g)),
          v_(Eigen::ArrayXXd::Zero(grid_->n_lat(), grid_->n_lon())) {}
    SphericalField(GridPtr g, Eigen::ArrayXXd v);

    static SphericalField from_function(
        GridPtr g, const std::function<double(double, double)>& f_theta_phi);
    static SphericalField from_cartesian(
        GridPtr g, const std::function<double(const Eigen::Vector3d&)>& f);

    const GridPtr& grid() const { return grid_; }
    const Eigen::ArrayXXd& values() const { return v_; }
    Eigen::ArrayXXd& values() { return v_; }
    double operator()(int i, int j) const { return v_(i, j); }
    double& at(int i, int j) { return v_(i, j); }

    double sup_norm() const { return v_.abs().maxCoeff(); }

    SphericalField& operator+=(const SphericalField& o) { v_ += o.v_; return *this; }
    SphericalField& operator-=(const SphericalField& o) { v_ -= o.v_; return *this; }
    SphericalField& operator*=(double a) { v_ *= a; return *this; }
    friend SphericalField operator+(SphericalField a, const SphericalField& b) { return a += b; }
    friend SphericalField operator-(SphericalField a, const SphericalField& b) { return a -= b; }
    friend SphericalField operator*(double a, SphericalField f) { return f *= a; }
    friend SphericalField operator*(const SphericalField& a, const SphericalField& b) {
        SphericalField r = a;
        r.v_ *= b.v_;
        return r;
    }

  private:
    GridPtr grid_;
    Eigen::ArrayXXd v_;
};

class Spectrum {
  public:
    Spectrum() = default;
    Spectrum(GridPtr g, Eigen::VectorXd c);

    const GridPtr& grid() const { return grid_; }
    const Eigen::VectorXd& coeffs() const { return c_; }
    Eigen::VectorXd& coeffs() { return c_; }
    double coeff(int l, int m) const { return c_(SphericalGrid::mode_index(l, m)); }
    double& coeff(int l, int m) { return c_(SphericalGrid::mode_index(l, m)); }
    int l_max() const { return grid_->l_max(); }

    // Sum of squared coefficients of degree l (= L2 energy in that eigenspace).
    double degree_energy(int l) const;

  private:
    GridPtr grid_;
    Eigen::VectorXd c_;
};

// Transforms ----------------------------------------------------------------
Spectrum analyze(const SphericalField& f);
SphericalField synthesize(const Spectrum& s);
// Synthesis on a (finer or equal) target grid; target must hold the band.
SphericalField synthesize_on(const Spectrum& s, const GridPtr& target);
double synth_at(const Spectrum& s, double theta, double phi);

// Value and coordinate partial derivatives at an arbitrary point.
struct PointDerivs {
    double f, f_th, f_ph, f_thth, f_thph, f_phph;
};
PointDerivs synth_point_derivs(const Spectrum& s, double theta, double phi);

// Tangential calculus --------------------------------------------------------
struct VectorField {
    SphericalField th, ph;  // orthonormal-frame components
};
struct SymTensorField {
    SphericalField tt, tp, pp;  // orthonormal-frame components
};

VectorField gradient(const Spectrum& s);
SymTensorField hessian(const Spectrum& s);     // covariant (Levi-Civita of round metric)
SphericalField laplacian(const Spectrum& s);   // spectral: -l(l+1) per degree
SphericalField eigenspace_project(const Spectrum& s, int l);

SphericalField vdot(const VectorField& a, const VectorField& b);

double integral(const SphericalField& f);      // over the unit sphere
double l2_norm(const SphericalField& f);

// Rotations and random data ---------------------------------------------------
Eigen::Matrix3d random_rotation(std::uint64_t seed);
// Pullback (f o R)(y) = f(R y) sampled on `target`.
SphericalField rotate(const Spectrum& s, const Eigen::Matrix3d& R,
                      const GridPtr& target);
Spectrum random_spectrum(const GridPtr& g, int l_band, std::uint64_t seed,
                         bool unit_norm);

}  // namespace cmclab
