#include "cmclab/schwarzschild.hpp"

#include <cmath>
#include <limits>

#include "cmclab/errors.hpp"

namespace cmclab {

double metric_h(double m, double r) {
    if (m < 0.0) throw DomainError("mass must be >= 0");
    if (r <= 0.0 || (m > 0.0 && r <= 2.0 * m))
        throw DomainError("radius outside the exterior region");
    return 1.0 - 2.0 * m / r;
}

double eta_of_r(double m, double r) {
    if (m <= 0.0) throw DomainError("eta chart requires m > 0");
    return std::sqrt(metric_h(m, r));
}

double r_of_eta(double m, double eta) {
    if (m <= 0.0) throw DomainError("eta chart requires m > 0");
    if (eta < 0.0 || eta >= 1.0) throw DomainError("eta must lie in [0, 1)");
    return 2.0 * m / (1.0 - eta * eta);
}

double tortoise(double m, double r) {
    double h = metric_h(m, r);  // validates the domain
    if (m == 0.0) return r;
    (void)h;
    return r + 2.0 * m * std::log(r / (2.0 * m) - 1.0);
}

double tortoise_inverse(double m, double rstar) {
    if (m < 0.0) throw DomainError("mass must be >= 0");
    if (m == 0.0) {
        if (rstar <= 0.0) throw DomainError("r_* must be > 0 when m = 0");
        return rstar;
    }
    // Solve rho + log(rho - 1) = rstar / 2m for rho = r/2m > 1 (monotone).
    const double w = rstar / (2.0 * m);
    double rho = w > 2.0 ? w - std::log(w - 1.0) : 1.0 + std::exp(w - 1.0);
    rho = std::max(rho, 1.0 + 1e-300);
    for (int it = 0; it < 100; ++it) {
        const double g = rho + std::log(rho - 1.0) - w;
        const double dg = rho / (rho - 1.0);
        double step = g / dg;
        // keep the iterate inside the branch
        while (rho - step <= 1.0) step *= 0.5;
        rho -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, rho)) return 2.0 * m * rho;
    }
    throw AccuracyError("tortoise_inverse: Newton failed to converge");
}

double retarded_time(double m, double t, double r) {
    return t - tortoise(m, r);
}

Kruskal kruskal_from_tr(double m, double t, double r) {
    if (m <= 0.0) throw DomainError("Kruskal map requires m > 0");
    metric_h(m, r);  // domain check r > 2m
    const double a = tortoise(m, r) / (4.0 * m);
    const double b = t / (4.0 * m);
    if (a + std::abs(b) > 700.0)
        throw DomainError("Kruskal map overflows for these (t, r)");
    const double ea = std::exp(a);
    return {ea * std::sinh(b), ea * std::cosh(b)};
}

void tr_from_kruskal(double m, const Kruskal& k, double* t, double* r) {
    if (m <= 0.0) throw DomainError("Kruskal map requires m > 0");
    if (!(k.X > std::abs(k.T)))
        throw DomainError("point outside the exterior Kruskal wedge");
    // X^2 - T^2 = e^{r_*/2m}; work with logs to avoid overflow.
    const double w = std::log(k.X - k.T) + std::log(k.X + k.T);  // r_*/2m
    *r = tortoise_inverse(m, 2.0 * m * w);
    *t = 2.0 * m * (std::log(k.X + k.T) - std::log(k.X - k.T));
}

Penrose penrose_from_kruskal(const Kruskal& k) {
    const double p = std::atan(k.T + k.X), q = std::atan(k.T - k.X);
    return {0.5 * (p + q), 0.5 * (p - q)};
}

NullChartConnection null_chart_connection(double m, double s) {
    if (m < 0.0) throw DomainError("mass must be >= 0");
    if (s < 0.0) throw DomainError("s must be >= 0");
    if (m > 0.0 && s >= 1.0 / (2.0 * m))
        throw DomainError("s outside the exterior region");
    return {s * (1.0 - 3.0 * m * s),
            s * s * s * (1.0 - 5.0 * m * s + 6.0 * m * m * s * s)};
}

double psi_corner(double eta) {
    if (eta < 0.0 || eta >= 1.0) throw DomainError("psi: eta must lie in [0,1)");
    const double u = 1.0 - eta * eta;
    return eta * std::sqrt(u) * std::exp(-0.5 / u);
}

double psi_corner_inverse(double w) {
    // psi is strictly increasing on [0, eta_*), eta_*^2 = 1 - sqrt(2)/2.
    static const double eta_star = std::sqrt(1.0 - std::sqrt(2.0) / 2.0);
    static const double w_max = psi_corner(eta_star);
    if (w < 0.0 || w >= w_max)
        throw DomainError("psi inverse: value outside [0, psi(eta_*))");
    if (w == 0.0) return 0.0;
    double lo = 0.0, hi = eta_star;
    double eta = std::min(w * std::exp(0.5), 0.99 * eta_star);  // psi'(0)=e^{-1/2}
    for (int it = 0; it < 200; ++it) {
        const Jet<1> p = psi_corner(Jet<1>::variable(eta));
        const double g = p.value() - w;
        if (g > 0.0) hi = eta; else lo = eta;
        double step = g / p.deriv(1);
        double next = eta - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisect fallback
        if (std::abs(next - eta) < 1e-16 + 1e-15 * eta) return next;
        eta = next;
    }
    throw AccuracyError("psi inverse: Newton failed to converge");
}

}  // namespace cmclab
