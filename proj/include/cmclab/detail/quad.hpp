#pragma once
// Internal adaptive-quadrature wrapper around GSL (QAGS on a finite interval)
// with the library error handler silenced and status codes mapped to
// exceptions.

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <functional>
#include <memory>
#include <string>

#include "cmclab/errors.hpp"

namespace cmclab::detail {

inline void quiet_gsl() {
    static const gsl_error_handler_t* old = gsl_set_error_handler_off();
    (void)old;
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double epsabs = 1e-13,
                        double epsrel = 1e-11) {
    quiet_gsl();
    struct Wrap {
        static double call(double x, void* p) {
            return (*static_cast<const std::function<double(double)>*>(p))(x);
        }
    };
    gsl_function gf;
    gf.function = &Wrap::call;
    gf.params = const_cast<std::function<double(double)>*>(&f);
    std::unique_ptr<gsl_integration_workspace,
                    decltype(&gsl_integration_workspace_free)>
        ws(gsl_integration_workspace_alloc(4000),
           &gsl_integration_workspace_free);
    double result = 0.0, abserr = 0.0;
    int status = gsl_integration_qags(&gf, a, b, epsabs, epsrel, 4000,
                                      ws.get(), &result, &abserr);
    if (status != GSL_SUCCESS && status != GSL_EROUND)
        throw AccuracyError(std::string("quadrature failed: ") +
                            gsl_strerror(status));
    return result;
}

}  // namespace cmclab::detail
