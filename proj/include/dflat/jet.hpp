#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <sstream>
#include <type_traits>
#include <vector>

#include "dflat/error.hpp"

namespace dflat {

// Second-order truncated Taylor value of a scalar in m variables:
// value, gradient and (symmetric) Hessian. Generic over the scalar type so
// that Jet<Jet<double>> yields third/fourth order data and
// Jet<std::complex<double>> carries the complex-backed catalog entry.
template <class S>
struct Jet;

using Jet2  = Jet<double>;
using CJet2 = Jet<std::complex<double>>;

namespace detail {

template <class T>
struct is_jet : std::false_type {};
template <class S>
struct is_jet<Jet<S>> : std::true_type {};

// True when the innermost scalar is real (domain guards apply).
template <class T>
struct real_based : std::is_same<T, double> {};
template <class S>
struct real_based<Jet<S>> : real_based<S> {};

template <class T>
inline constexpr bool real_based_v = real_based<T>::value;

// Innermost plain scalar of a (possibly nested) jet type.
template <class T>
struct inner_scalar {
    using type = T;
};
template <class S>
struct inner_scalar<Jet<S>> {
    using type = typename inner_scalar<S>::type;
};
template <class T>
using inner_scalar_t = typename inner_scalar<T>::type;

// Scalar types accepted on the right/left of mixed arithmetic with Jet<S>:
// double always, plus the innermost scalar (complex for complex-backed jets).
template <class S, class T>
inline constexpr bool scalar_for_v =
    std::is_same_v<T, double> ||
    (!std::is_same_v<inner_scalar_t<S>, double> && std::is_same_v<T, inner_scalar_t<S>>);

} // namespace detail

inline double zero_like(double) { return 0.0; }
inline std::complex<double> zero_like(const std::complex<double>&) { return {}; }
inline double one_like(double) { return 1.0; }
inline std::complex<double> one_like(const std::complex<double>&) { return {1.0, 0.0}; }

// Innermost value, used for pivoting and domain checks.
inline double leading_value(double v) { return v; }
inline std::complex<double> leading_value(const std::complex<double>& v) { return v; }

template <class S>
struct Jet {
    S val{};
    std::vector<S> grad;
    std::vector<S> hess; // m*m row-major, kept exactly symmetric

    Jet() = default;

    int m() const { return static_cast<int>(grad.size()); }

    S& h(int i, int j) { return hess[static_cast<size_t>(i) * grad.size() + j]; }
    const S& h(int i, int j) const { return hess[static_cast<size_t>(i) * grad.size() + j]; }

    static Jet constant(const S& v, int m) {
        Jet j;
        j.val = v;
        j.grad.assign(m, zero_like(v));
        j.hess.assign(static_cast<size_t>(m) * m, zero_like(v));
        return j;
    }

    // Jet of the coordinate function x -> x[index].
    static Jet variable(const S& v, int m, int index) {
        if (index < 0 || index >= m)
            fail(ErrorKind::input, "jet seed index out of range");
        Jet j = constant(v, m);
        j.grad[index] = one_like(v);
        return j;
    }

    Jet& operator+=(const Jet& o) { *this = *this + o; return *this; }
    Jet& operator-=(const Jet& o) { *this = *this - o; return *this; }
    Jet& operator*=(const Jet& o) { *this = *this * o; return *this; }
    Jet& operator/=(const Jet& o) { *this = *this / o; return *this; }

    friend Jet operator-(const Jet& a) {
        Jet r = a;
        r.val = -r.val;
        for (auto& g : r.grad) g = -g;
        for (auto& hh : r.hess) hh = -hh;
        return r;
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        check_same_m(a, b);
        Jet r = a;
        r.val = a.val + b.val;
        for (int i = 0; i < a.m(); ++i) r.grad[i] = a.grad[i] + b.grad[i];
        for (size_t k = 0; k < a.hess.size(); ++k) r.hess[k] = a.hess[k] + b.hess[k];
        return r;
    }

    friend Jet operator-(const Jet& a, const Jet& b) {
        check_same_m(a, b);
        Jet r = a;
        r.val = a.val - b.val;
        for (int i = 0; i < a.m(); ++i) r.grad[i] = a.grad[i] - b.grad[i];
        for (size_t k = 0; k < a.hess.size(); ++k) r.hess[k] = a.hess[k] - b.hess[k];
        return r;
    }

    friend Jet operator*(const Jet& a, const Jet& b) {
        check_same_m(a, b);
        const int m = a.m();
        Jet r = Jet::constant(a.val * b.val, m);
        for (int i = 0; i < m; ++i) r.grad[i] = a.grad[i] * b.val + a.val * b.grad[i];
        for (int i = 0; i < m; ++i) {
            for (int j = i; j < m; ++j) {
                S hij = a.h(i, j) * b.val + a.grad[i] * b.grad[j] +
                        a.grad[j] * b.grad[i] + a.val * b.h(i, j);
                r.h(i, j) = hij;
                if (j != i) r.h(j, i) = hij;
            }
        }
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b) { return a * recip(b); }

    static void check_same_m(const Jet& a, const Jet& b) {
        if (a.grad.size() != b.grad.size())
            fail(ErrorKind::input, "jet arithmetic on mismatched variable counts");
    }
};

template <class S>
auto leading_value(const Jet<S>& j) { return leading_value(j.val); }

template <class S>
Jet<S> zero_like(const Jet<S>& j) { return Jet<S>::constant(zero_like(j.val), j.m()); }
template <class S>
Jet<S> one_like(const Jet<S>& j) { return Jet<S>::constant(one_like(j.val), j.m()); }

// ---- mixed scalar arithmetic -------------------------------------------------

template <class S, class T>
    requires(detail::scalar_for_v<S, T>)
Jet<S> operator+(const Jet<S>& a, const T& c) {
    Jet<S> r = a;
    r.val = r.val + c;
    return r;
}
template <class S, class T>
    requires(detail::scalar_for_v<S, T>)
Jet<S> operator+(const T& c, const Jet<S>& a) { return a + c; }

template <class S, class T>
    requires(detail::scalar_for_v<S, T>)
Jet<S> operator-(const Jet<S>& a, const T& c) {
    Jet<S> r = a;
    r.val = r.val - c;
    return r;
}
template <class S, class T>
    requires(detail::scalar_for_v<S, T>)
Jet<S> operator-(const T& c, const Jet<S>& a) {
    Jet<S> r = -a;
    r.val = c + r.val;
    return r;
}

template <class S, class T>
    requires(detail::scalar_for_v<S, T>)
Jet<S> operator*(const Jet<S>& a, const T& c) {
    Jet<S> r = a;
    r.val = r.val * c;
    for (auto& g : r.grad) g = g * c;
    for (auto& hh : r.hess) hh = hh * c;
    return r;
}
template <class S, class T>
    requires(detail::scalar_for_v<S, T>)
Jet<S> operator*(const T& c, const Jet<S>& a) { return a * c; }

template <class S, class T>
    requires(detail::scalar_for_v<S, T>)
Jet<S> operator/(const Jet<S>& a, const T& c) { return a * (one_like(a.val) / c); }

template <class S, class T>
    requires(detail::scalar_for_v<S, T>)
Jet<S> operator/(const T& c, const Jet<S>& a) { return recip(a) * c; }

// ---- chain rule and elementary functions -------------------------------------

// f applied to jet a with f(v)=f0, f'(v)=f1, f''(v)=f2 already evaluated.
template <class S>
Jet<S> apply_chain(const Jet<S>& a, const S& f0, const S& f1, const S& f2) {
    const int m = a.m();
    Jet<S> r = Jet<S>::constant(f0, m);
    for (int i = 0; i < m; ++i) r.grad[i] = f1 * a.grad[i];
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            S hij = f1 * a.h(i, j) + f2 * a.grad[i] * a.grad[j];
            r.h(i, j) = hij;
            if (j != i) r.h(j, i) = hij;
        }
    }
    return r;
}

namespace detail {

template <class S>
[[noreturn]] void domain_error(const char* fn, const S& v) {
    std::ostringstream os;
    os << fn << " out of domain at value " << leading_value(v);
    fail(ErrorKind::domain, os.str());
}

} // namespace detail

template <class S>
Jet<S> recip(const Jet<S>& a) {
    using std::abs;
    if (abs(leading_value(a.val)) == 0.0)
        fail(ErrorKind::singular, "division by a jet with zero value");
    S inv = one_like(a.val) / a.val;
    S inv2 = inv * inv;
    return apply_chain(a, inv, -inv2, 2.0 * inv2 * inv);
}

template <class S>
Jet<S> sqrt(const Jet<S>& a) {
    using std::sqrt;
    if constexpr (detail::real_based_v<S>) {
        if (leading_value(a.val) <= 0.0) detail::domain_error("sqrt", a.val);
    }
    S r = sqrt(a.val);
    S f1 = 0.5 / r;
    S f2 = -0.5 * f1 / a.val;
    return apply_chain(a, r, f1, f2);
}

template <class S>
Jet<S> pow(const Jet<S>& a, double p) {
    using std::pow;
    if constexpr (detail::real_based_v<S>) {
        if (leading_value(a.val) <= 0.0 && p != std::floor(p))
            detail::domain_error("pow", a.val);
    }
    S f0 = pow(a.val, p);
    S f1 = p * pow(a.val, p - 1.0);
    S f2 = p * (p - 1.0) * pow(a.val, p - 2.0);
    return apply_chain(a, f0, f1, f2);
}

template <class S>
Jet<S> exp(const Jet<S>& a) {
    using std::exp;
    S e = exp(a.val);
    return apply_chain(a, e, e, e);
}

template <class S>
Jet<S> log(const Jet<S>& a) {
    using std::log;
    using std::abs;
    if constexpr (detail::real_based_v<S>) {
        if (leading_value(a.val) <= 0.0) detail::domain_error("log", a.val);
    } else {
        if (abs(leading_value(a.val)) == 0.0) detail::domain_error("log", a.val);
    }
    S f1 = one_like(a.val) / a.val;
    return apply_chain(a, log(a.val), f1, -f1 * f1);
}

template <class S>
Jet<S> asin(const Jet<S>& a) {
    using std::asin;
    using std::sqrt;
    if constexpr (detail::real_based_v<S>) {
        if (std::abs(leading_value(a.val)) >= 1.0) detail::domain_error("asin", a.val);
    }
    S q = one_like(a.val) - a.val * a.val; // 1 - v^2
    S f1 = one_like(a.val) / sqrt(q);
    S f2 = a.val * f1 / q;
    return apply_chain(a, asin(a.val), f1, f2);
}

template <class S>
Jet<S> asinh(const Jet<S>& a) {
    using std::asinh;
    using std::sqrt;
    S q = one_like(a.val) + a.val * a.val; // 1 + v^2
    S f1 = one_like(a.val) / sqrt(q);
    S f2 = -a.val * f1 / q;
    return apply_chain(a, asinh(a.val), f1, f2);
}

template <class S>
Jet<S> atan(const Jet<S>& a) {
    using std::atan;
    S q = one_like(a.val) + a.val * a.val;
    S f1 = one_like(a.val) / q;
    S f2 = -2.0 * a.val * f1 * f1;
    return apply_chain(a, atan(a.val), f1, f2);
}

// ---- seeding helpers ----------------------------------------------------------

inline std::vector<Jet2> seed_all(std::span<const double> xs) {
    const int m = static_cast<int>(xs.size());
    std::vector<Jet2> out;
    out.reserve(m);
    for (int i = 0; i < m; ++i) out.push_back(Jet2::variable(xs[i], m, i));
    return out;
}

// Seeds over the joint variable list (x, y): x gets indices [0,n), y [n,2n).
inline std::vector<Jet2> seed_joint(std::span<const double> x, std::span<const double> y) {
    const int n = static_cast<int>(x.size());
    std::vector<Jet2> out;
    out.reserve(2 * n);
    for (int i = 0; i < n; ++i) out.push_back(Jet2::variable(x[i], 2 * n, i));
    for (int i = 0; i < n; ++i) out.push_back(Jet2::variable(y[i], 2 * n, n + i));
    return out;
}

// Composition phi(u, v) where phi is known through its own 2-variable jet `p`
// (value, d/du, d/dv, second partials) and u, v are jets in m variables.
template <class S>
Jet<S> compose2(const Jet<S>& p, const Jet<S>& u, const Jet<S>& v) {
    if (p.m() != 2) fail(ErrorKind::input, "compose2 expects a 2-variable outer jet");
    Jet<S>::check_same_m(u, v);
    const int m = u.m();
    Jet<S> r = Jet<S>::constant(p.val, m);
    const S& p1 = p.grad[0];
    const S& p2 = p.grad[1];
    const S& p11 = p.h(0, 0);
    const S& p12 = p.h(0, 1);
    const S& p22 = p.h(1, 1);
    for (int i = 0; i < m; ++i) r.grad[i] = p1 * u.grad[i] + p2 * v.grad[i];
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            S hij = p1 * u.h(i, j) + p2 * v.h(i, j) +
                    p11 * u.grad[i] * u.grad[j] +
                    p12 * (u.grad[i] * v.grad[j] + u.grad[j] * v.grad[i]) +
                    p22 * v.grad[i] * v.grad[j];
            r.h(i, j) = hij;
            if (j != i) r.h(j, i) = hij;
        }
    }
    return r;
}

// Real part of a complex jet; commutes with differentiation in real variables.
inline Jet2 real_part(const CJet2& a) {
    Jet2 r;
    r.val = a.val.real();
    r.grad.resize(a.grad.size());
    r.hess.resize(a.hess.size());
    for (size_t i = 0; i < a.grad.size(); ++i) r.grad[i] = a.grad[i].real();
    for (size_t k = 0; k < a.hess.size(); ++k) r.hess[k] = a.hess[k].real();
    return r;
}

inline Jet<Jet2> real_part(const Jet<Jet<std::complex<double>>>& a) {
    Jet<Jet2> r;
    r.val = real_part(a.val);
    r.grad.reserve(a.grad.size());
    r.hess.reserve(a.hess.size());
    for (const auto& g : a.grad) r.grad.push_back(real_part(g));
    for (const auto& hh : a.hess) r.hess.push_back(real_part(hh));
    return r;
}

// Plain-scalar forwarders so generic field/phi expressions instantiate on the
// fast double path. Out-of-domain values propagate as NaN (the quiet probes
// rely on that); the jet path is the one that throws.
inline double sqrt(double x) { return std::sqrt(x); }
inline double pow(double x, double p) { return std::pow(x, p); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double asin(double x) { return std::asin(x); }
inline double asinh(double x) { return std::asinh(x); }
inline double atan(double x) { return std::atan(x); }

} // namespace dflat
