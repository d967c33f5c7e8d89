#include "cmclab/fitting.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "cmclab/errors.hpp"

namespace cmclab {

DecayFit decay_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw DomainError("decay_fit: need >= 2 samples");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0.0) throw DomainError("decay_fit: abscissae must be > 0");
        if (y[i] == 0.0) continue;  // exact zero: no rate information
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(std::abs(y[i])));
    }
    DecayFit f;
    f.n_used = int(lx.size());
    if (lx.empty()) {
        f.infinite = true;  // identically zero decays faster than any power
        return f;
    }
    if (lx.size() < 2) throw AccuracyError("decay_fit: too few nonzero samples");

    const std::size_t n = lx.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) { mx += lx[i]; my += ly[i]; }
    mx /= double(n);
    my /= double(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw DomainError("decay_fit: abscissae coincide");
    f.exponent = sxy / sxx;
    double ssr = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = ly[i] - my - f.exponent * (lx[i] - mx);
        ssr += r * r;
    }
    f.residual = std::sqrt(ssr / double(n));
    f.stderr_ = n > 2 ? std::sqrt(ssr / double(n - 2) / sxx) : 0.0;
    return f;
}

DecayFit rate_fit(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size() || t.size() < 2)
        throw DomainError("rate_fit: need >= 2 samples");
    std::vector<double> tt, ly;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (y[i] == 0.0) continue;
        tt.push_back(t[i]);
        ly.push_back(std::log(std::abs(y[i])));
    }
    DecayFit f;
    f.n_used = int(tt.size());
    if (tt.empty()) {
        f.infinite = true;
        return f;
    }
    if (tt.size() < 2) throw AccuracyError("rate_fit: too few nonzero samples");

    const std::size_t n = tt.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) { mx += tt[i]; my += ly[i]; }
    mx /= double(n);
    my /= double(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (tt[i] - mx) * (tt[i] - mx);
        sxy += (tt[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw DomainError("rate_fit: abscissae coincide");
    f.exponent = -sxy / sxx;  // decay rate, positive when |y| shrinks in t
    double ssr = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = ly[i] - my + f.exponent * (tt[i] - mx);
        ssr += r * r;
    }
    f.residual = std::sqrt(ssr / double(n));
    f.stderr_ = n > 2 ? std::sqrt(ssr / double(n - 2) / sxx) : 0.0;
    return f;
}

double neville_zero(const std::vector<double>& h, const std::vector<double>& v,
                    int order_step, double* err_est) {
    if (h.size() != v.size() || h.empty())
        throw DomainError("neville_zero: bad input sizes");
    const std::size_t n = h.size();
    std::vector<double> t(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = std::pow(h[i], order_step);  // expansion variable
        p[i] = v[i];
    }
    double prev = p[0];
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = 0; i + level < n; ++i) {
            // interpolate through (t_i .. t_{i+level}) evaluated at t = 0
            p[i] = (t[i + level] * p[i] - t[i] * p[i + 1]) /
                   (t[i + level] - t[i]);
        }
        if (level == n - 1 && err_est) *err_est = std::abs(p[0] - prev);
        prev = p[0];
    }
    if (n == 1 && err_est) *err_est = std::abs(p[0]);
    return p[0];
}

std::vector<double> poly_fit(const std::vector<double>& x,
                             const std::vector<double>& y, int degree,
                             double scale) {
    if (x.size() != y.size() || int(x.size()) < degree + 1)
        throw DomainError("poly_fit: underdetermined");
    const int n = int(x.size()), m = degree + 1;
    Eigen::MatrixXd V(n, m);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        double u = x[i] / scale, p = 1.0;
        for (int j = 0; j < m; ++j) { V(i, j) = p; p *= u; }
        b(i) = y[i];
    }
    Eigen::VectorXd a = V.colPivHouseholderQr().solve(b);
    std::vector<double> out(m);
    double sc = 1.0;
    for (int j = 0; j < m; ++j) { out[j] = a(j) / sc; sc *= scale; }
    return out;
}

}  // namespace cmclab
