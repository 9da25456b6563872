#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "dflat/error.hpp"

namespace dflat {

// Univariate truncated Taylor series to order 3 (Taylor coefficients, i.e.
// c[k] = f^(k)/k!). Third derivatives of the solution-generator's f reach the
// quadrature integrand, so order-2 jets are not enough for those inputs.
template <class S>
struct Taylor3 {
    std::array<S, 4> c{};

    Taylor3() = default;
    Taylor3(S v) { c[0] = v; }

    static Taylor3 variable(S v) {
        Taylor3 t;
        t.c[0] = v;
        t.c[1] = S(1);
        return t;
    }

    S value() const { return c[0]; }
    S d1() const { return c[1]; }
    S d2() const { return 2.0 * c[2]; }
    S d3() const { return 6.0 * c[3]; }

    friend Taylor3 operator-(const Taylor3& a) {
        Taylor3 r;
        for (int k = 0; k < 4; ++k) r.c[k] = -a.c[k];
        return r;
    }
    friend Taylor3 operator+(const Taylor3& a, const Taylor3& b) {
        Taylor3 r;
        for (int k = 0; k < 4; ++k) r.c[k] = a.c[k] + b.c[k];
        return r;
    }
    friend Taylor3 operator-(const Taylor3& a, const Taylor3& b) {
        Taylor3 r;
        for (int k = 0; k < 4; ++k) r.c[k] = a.c[k] - b.c[k];
        return r;
    }
    friend Taylor3 operator*(const Taylor3& a, const Taylor3& b) {
        Taylor3 r;
        for (int k = 0; k < 4; ++k)
            for (int j = 0; j <= k; ++j) r.c[k] += a.c[j] * b.c[k - j];
        return r;
    }
    friend Taylor3 operator/(const Taylor3& a, const Taylor3& b) {
        using std::abs;
        if (abs(b.c[0]) == 0.0) fail(ErrorKind::singular, "Taylor3 division by zero value");
        // Solve r * b = a coefficient by coefficient.
        Taylor3 r;
        S inv = S(1) / b.c[0];
        for (int k = 0; k < 4; ++k) {
            S acc = a.c[k];
            for (int j = 0; j < k; ++j) acc -= r.c[j] * b.c[k - j];
            r.c[k] = acc * inv;
        }
        return r;
    }

    friend Taylor3 operator+(const Taylor3& a, double s) { Taylor3 r = a; r.c[0] = r.c[0] + s; return r; }
    friend Taylor3 operator+(double s, const Taylor3& a) { return a + s; }
    friend Taylor3 operator-(const Taylor3& a, double s) { Taylor3 r = a; r.c[0] = r.c[0] - s; return r; }
    friend Taylor3 operator-(double s, const Taylor3& a) { Taylor3 r = -a; r.c[0] = s + r.c[0]; return r; }
    friend Taylor3 operator*(const Taylor3& a, double s) {
        Taylor3 r;
        for (int k = 0; k < 4; ++k) r.c[k] = a.c[k] * s;
        return r;
    }
    friend Taylor3 operator*(double s, const Taylor3& a) { return a * s; }
    friend Taylor3 operator/(const Taylor3& a, double s) { return a * (1.0 / s); }
    friend Taylor3 operator/(double s, const Taylor3& a) { return Taylor3(S(s)) / a; }
};

// Composition with an elementary function given its derivatives at a.value().
template <class S>
Taylor3<S> taylor_compose(const Taylor3<S>& a, S f0, S f1, S f2, S f3) {
    const S& a1 = a.c[1];
    const S& a2 = a.c[2];
    const S& a3 = a.c[3];
    Taylor3<S> r;
    r.c[0] = f0;
    r.c[1] = f1 * a1;
    r.c[2] = f1 * a2 + 0.5 * f2 * a1 * a1;
    r.c[3] = f1 * a3 + f2 * a1 * a2 + (1.0 / 6.0) * f3 * a1 * a1 * a1;
    return r;
}

template <class S>
Taylor3<S> sqrt(const Taylor3<S>& a) {
    using std::sqrt;
    if constexpr (std::is_same_v<S, double>) {
        if (a.c[0] <= 0.0) fail(ErrorKind::domain, "Taylor3 sqrt of non-positive value");
    }
    S r = sqrt(a.c[0]);
    S f1 = 0.5 / r;
    S f2 = -0.5 * f1 / a.c[0];
    S f3 = -1.5 * f2 / a.c[0];
    return taylor_compose(a, r, f1, f2, f3);
}

template <class S>
Taylor3<S> pow(const Taylor3<S>& a, double p) {
    using std::pow;
    if constexpr (std::is_same_v<S, double>) {
        if (a.c[0] <= 0.0 && p != std::floor(p))
            fail(ErrorKind::domain, "Taylor3 pow of non-positive base");
    }
    S f0 = pow(a.c[0], p);
    S f1 = p * pow(a.c[0], p - 1.0);
    S f2 = p * (p - 1.0) * pow(a.c[0], p - 2.0);
    S f3 = p * (p - 1.0) * (p - 2.0) * pow(a.c[0], p - 3.0);
    return taylor_compose(a, f0, f1, f2, f3);
}

template <class S>
Taylor3<S> exp(const Taylor3<S>& a) {
    using std::exp;
    S e = exp(a.c[0]);
    return taylor_compose(a, e, e, e, e);
}

template <class S>
Taylor3<S> log(const Taylor3<S>& a) {
    using std::abs;
    using std::log;
    if constexpr (std::is_same_v<S, double>) {
        if (a.c[0] <= 0.0) fail(ErrorKind::domain, "Taylor3 log of non-positive value");
    } else {
        if (abs(a.c[0]) == 0.0) fail(ErrorKind::domain, "Taylor3 log of zero");
    }
    S f1 = S(1) / a.c[0];
    S f2 = -f1 * f1;
    S f3 = -2.0 * f2 * f1;
    return taylor_compose(a, log(a.c[0]), f1, f2, f3);
}

using RTaylor3 = Taylor3<double>;
using CTaylor3 = Taylor3<std::complex<double>>;

} // namespace dflat
