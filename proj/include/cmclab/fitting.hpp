#pragma once
// Small fitting/extrapolation toolkit shared across experiments:
//  * log-log decay-rate fits with a slope standard error,
//  * Neville/Richardson extrapolation to zero step,
//  * scaled polynomial least squares (one-sided derivative recovery).

#include <cstddef>
#include <vector>

namespace cmclab {

// Result of fitting |data| ~ C * x^p on a window of positive abscissae.
struct DecayFit {
    double exponent = 0.0;   // fitted p
    double stderr_ = 0.0;    // standard error of the slope
    double residual = 0.0;   // rms residual of the log-log fit
    bool infinite = false;   // data identically zero: decays faster than any power
    int n_used = 0;          // points entering the fit (zeros are dropped)
};

// Fit log|y| = p log x + c by least squares.  Points with y == 0 are skipped
// (exact zeros carry no rate information); if everything is zero the fit
// short-circuits to the `infinite` flag.
DecayFit decay_fit(const std::vector<double>& x, const std::vector<double>& y);

// Fit log|y| = c - p * t by least squares (exponential decay rate in the
// abscissa itself rather than in its logarithm).  Zero samples are skipped;
// all-zero data sets the `infinite` flag.
DecayFit rate_fit(const std::vector<double>& t, const std::vector<double>& y);

// Neville extrapolation of samples v(h_i) to h -> 0, assuming an expansion in
// integer powers of h starting at h^order_step (1 for one-sided stencils, 2
// for central ones).  Returns the extrapolated value; err_est (if non-null)
// receives the difference of the last two diagonal entries.
double neville_zero(const std::vector<double>& h, const std::vector<double>& v,
                    int order_step, double* err_est = nullptr);

// Least-squares fit of y(x) by a polynomial of given degree in x/scale.
// Returns coefficients a_k of y = sum a_k (x)^k (already rescaled back).
std::vector<double> poly_fit(const std::vector<double>& x,
                             const std::vector<double>& y, int degree,
                             double scale);

}  // namespace cmclab
