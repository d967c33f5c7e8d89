#pragma once
// Truncated Taylor-series arithmetic ("jets") in one variable.
//
// Jet<N> carries a value and N derivatives as Taylor coefficients
// c[k] = f^(k)/k!.  Propagating jets through a closed-form expression yields
// machine-accurate derivatives without finite differencing, which several
// boundary-expansion checks need at tolerances no FD stencil can reach.

#include <array>
#include <cmath>
#include <cstddef>

#include "cmclab/errors.hpp"

namespace cmclab {

template <std::size_t N>
struct Jet {
    std::array<double, N + 1> c{};  // Taylor coefficients about the base point

    Jet() = default;
    /*implicit*/ Jet(double constant) { c[0] = constant; }

    // The jet of the expansion variable itself: value x, slope 1.
    static Jet variable(double x) {
        Jet j;
        j.c[0] = x;
        if constexpr (N >= 1) j.c[1] = 1.0;
        return j;
    }

    double value() const { return c[0]; }

    // k-th derivative (k! * c[k]).
    double deriv(std::size_t k) const {
        double fact = 1.0;
        for (std::size_t i = 2; i <= k; ++i) fact *= double(i);
        return c[k] * fact;
    }

    Jet operator-() const {
        Jet r;
        for (std::size_t k = 0; k <= N; ++k) r.c[k] = -c[k];
        return r;
    }
    Jet& operator+=(const Jet& o) {
        for (std::size_t k = 0; k <= N; ++k) c[k] += o.c[k];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (std::size_t k = 0; k <= N; ++k) c[k] -= o.c[k];
        return *this;
    }
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }

    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        for (std::size_t k = 0; k <= N; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i <= k; ++i) s += a.c[i] * b.c[k - i];
            r.c[k] = s;
        }
        return r;
    }
    Jet& operator*=(const Jet& o) { return *this = *this * o; }

    friend Jet operator/(const Jet& a, const Jet& b) {
        if (b.c[0] == 0.0) throw DomainError("jet division by zero value");
        Jet q;
        for (std::size_t k = 0; k <= N; ++k) {
            double s = a.c[k];
            for (std::size_t i = 0; i < k; ++i) s -= q.c[i] * b.c[k - i];
            q.c[k] = s / b.c[0];
        }
        return q;
    }
    Jet& operator/=(const Jet& o) { return *this = *this / o; }
};

template <std::size_t N>
Jet<N> sqrt(const Jet<N>& a) {
    if (a.c[0] <= 0.0) throw DomainError("jet sqrt of non-positive value");
    Jet<N> r;
    r.c[0] = std::sqrt(a.c[0]);
    for (std::size_t k = 1; k <= N; ++k) {
        double s = a.c[k];
        for (std::size_t i = 1; i < k; ++i) s -= r.c[i] * r.c[k - i];
        r.c[k] = s / (2.0 * r.c[0]);
    }
    return r;
}

template <std::size_t N>
Jet<N> pow_int(Jet<N> base, int e) {
    Jet<N> r{1.0};
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

}  // namespace cmclab
