#pragma once

// Truncated Taylor arithmetic to second order.
//
// Jet2Scalar carries (f, f', f'') of a function of one variable; JetN carries the
// value, gradient and Hessian of a function of up to kMaxJetVars variables. Both
// support the elementary functions used by the expression language, and every
// nonlinear function is pushed through the same second-order chain rule:
//
//     (g o f)'  = g'(f) f'
//     (g o f)'' = g''(f) f' f'^T + g'(f) f''

#include <array>
#include <cmath>
#include <type_traits>
#include <ostream>

#include "subgeom/error.hpp"

namespace subgeom {

struct Jet2Scalar {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;

    static constexpr Jet2Scalar variable(double x) noexcept { return {x, 1.0, 0.0}; }
    static constexpr Jet2Scalar constant(double c) noexcept { return {c, 0.0, 0.0}; }
};

inline Jet2Scalar constant_like(const Jet2Scalar&, double c) noexcept { return Jet2Scalar::constant(c); }
inline double constant_like(double, double c) noexcept { return c; }
inline double primal(double x) noexcept { return x; }
inline double primal(const Jet2Scalar& x) noexcept { return x.value; }

/// g(x) given g(x.value), g'(x.value), g''(x.value).
inline Jet2Scalar chain(const Jet2Scalar& x, double g, double dg, double d2g) noexcept {
    return {g, dg * x.d1, d2g * x.d1 * x.d1 + dg * x.d2};
}

inline Jet2Scalar operator+(const Jet2Scalar& a, const Jet2Scalar& b) noexcept {
    return {a.value + b.value, a.d1 + b.d1, a.d2 + b.d2};
}
inline Jet2Scalar operator-(const Jet2Scalar& a, const Jet2Scalar& b) noexcept {
    return {a.value - b.value, a.d1 - b.d1, a.d2 - b.d2};
}
inline Jet2Scalar operator-(const Jet2Scalar& a) noexcept { return {-a.value, -a.d1, -a.d2}; }
inline Jet2Scalar operator*(const Jet2Scalar& a, const Jet2Scalar& b) noexcept {
    return {a.value * b.value, a.d1 * b.value + a.value * b.d1,
            a.d2 * b.value + 2.0 * a.d1 * b.d1 + a.value * b.d2};
}
inline Jet2Scalar operator*(double s, const Jet2Scalar& a) noexcept { return {s * a.value, s * a.d1, s * a.d2}; }
inline Jet2Scalar operator*(const Jet2Scalar& a, double s) noexcept { return s * a; }
inline Jet2Scalar operator+(const Jet2Scalar& a, double s) noexcept { return {a.value + s, a.d1, a.d2}; }
inline Jet2Scalar operator+(double s, const Jet2Scalar& a) noexcept { return a + s; }
inline Jet2Scalar operator-(const Jet2Scalar& a, double s) noexcept { return {a.value - s, a.d1, a.d2}; }
inline Jet2Scalar operator-(double s, const Jet2Scalar& a) noexcept { return {s - a.value, -a.d1, -a.d2}; }

inline Jet2Scalar reciprocal(const Jet2Scalar& a) {
    if (a.value == 0.0) throw DomainError("division by zero");
    const double inv = 1.0 / a.value;
    return chain(a, inv, -inv * inv, 2.0 * inv * inv * inv);
}
inline Jet2Scalar operator/(const Jet2Scalar& a, const Jet2Scalar& b) { return a * reciprocal(b); }
inline Jet2Scalar operator/(const Jet2Scalar& a, double s) {
    if (s == 0.0) throw DomainError("division by zero");
    return a * (1.0 / s);
}
inline Jet2Scalar operator/(double s, const Jet2Scalar& a) { return s * reciprocal(a); }

inline std::ostream& operator<<(std::ostream& os, const Jet2Scalar& j) {
    return os << "(" << j.value << ", " << j.d1 << ", " << j.d2 << ")";
}

// ---------------------------------------------------------------------------
// Multivariate 2-jets
// ---------------------------------------------------------------------------

inline constexpr int kMaxJetVars = 8;

/// Value, gradient and Hessian of a scalar function of `vars()` variables.
/// The Hessian is stored packed (i <= j) in a layout that does not depend on n.
class JetN {
public:
    JetN() = default;

    static JetN constant(int n, double c) noexcept {
        JetN j;
        j.n_ = n;
        j.v_ = c;
        return j;
    }
    static JetN variable(int n, int index, double x) noexcept {
        JetN j = constant(n, x);
        j.g_[index] = 1.0;
        return j;
    }

    int vars() const noexcept { return n_; }
    double value() const noexcept { return v_; }
    double grad(int i) const noexcept { return g_[i]; }
    double hess(int i, int j) const noexcept { return h_[tri(i, j)]; }

    friend JetN chain(const JetN& x, double g, double dg, double d2g) noexcept {
        JetN r = constant(x.n_, g);
        for (int j = 0; j < x.n_; ++j) {
            r.g_[j] = dg * x.g_[j];
            for (int i = 0; i <= j; ++i) r.h_[tri(i, j)] = d2g * x.g_[i] * x.g_[j] + dg * x.h_[tri(i, j)];
        }
        return r;
    }

    friend JetN operator+(const JetN& a, const JetN& b) noexcept { return a.combine(b, 1.0, 1.0); }
    friend JetN operator-(const JetN& a, const JetN& b) noexcept { return a.combine(b, 1.0, -1.0); }
    friend JetN operator-(const JetN& a) noexcept { return a.scaled(-1.0); }
    friend JetN operator*(double s, const JetN& a) noexcept { return a.scaled(s); }
    friend JetN operator*(const JetN& a, double s) noexcept { return a.scaled(s); }
    friend JetN operator+(const JetN& a, double s) noexcept {
        JetN r = a;
        r.v_ += s;
        return r;
    }
    friend JetN operator+(double s, const JetN& a) noexcept { return a + s; }
    friend JetN operator-(const JetN& a, double s) noexcept { return a + (-s); }
    friend JetN operator-(double s, const JetN& a) noexcept { return (-a) + s; }

    friend JetN operator*(const JetN& a, const JetN& b) noexcept {
        const int n = a.n_ > b.n_ ? a.n_ : b.n_;
        JetN r = constant(n, a.v_ * b.v_);
        for (int j = 0; j < n; ++j) {
            r.g_[j] = a.g_[j] * b.v_ + a.v_ * b.g_[j];
            for (int i = 0; i <= j; ++i) {
                const int t = tri(i, j);
                r.h_[t] = a.h_[t] * b.v_ + a.v_ * b.h_[t] + a.g_[i] * b.g_[j] + a.g_[j] * b.g_[i];
            }
        }
        return r;
    }

    friend JetN reciprocal(const JetN& a) {
        if (a.v_ == 0.0) throw DomainError("division by zero");
        const double inv = 1.0 / a.v_;
        return chain(a, inv, -inv * inv, 2.0 * inv * inv * inv);
    }
    friend JetN operator/(const JetN& a, const JetN& b) { return a * reciprocal(b); }
    friend JetN operator/(const JetN& a, double s) {
        if (s == 0.0) throw DomainError("division by zero");
        return a.scaled(1.0 / s);
    }
    friend JetN operator/(double s, const JetN& a) { return s * reciprocal(a); }

private:
    static constexpr int tri(int i, int j) noexcept { return i <= j ? j * (j + 1) / 2 + i : i * (i + 1) / 2 + j; }

    JetN combine(const JetN& b, double sa, double sb) const noexcept {
        const int n = n_ > b.n_ ? n_ : b.n_;
        JetN r = constant(n, sa * v_ + sb * b.v_);
        for (int j = 0; j < n; ++j) r.g_[j] = sa * g_[j] + sb * b.g_[j];
        for (int t = 0; t < n * (n + 1) / 2; ++t) r.h_[t] = sa * h_[t] + sb * b.h_[t];
        return r;
    }
    JetN scaled(double s) const noexcept {
        JetN r = *this;
        r.v_ *= s;
        for (int j = 0; j < n_; ++j) r.g_[j] *= s;
        for (int t = 0; t < n_ * (n_ + 1) / 2; ++t) r.h_[t] *= s;
        return r;
    }

    int n_ = 0;
    double v_ = 0.0;
    std::array<double, kMaxJetVars> g_{};
    std::array<double, kMaxJetVars*(kMaxJetVars + 1) / 2> h_{};
};

inline JetN constant_like(const JetN& like, double c) noexcept { return JetN::constant(like.vars(), c); }
inline double primal(const JetN& x) noexcept { return x.value(); }

// ---------------------------------------------------------------------------
// Elementary functions, shared by double and both jet types.
// ---------------------------------------------------------------------------

namespace jetfn {

inline double apply(double, double g, double, double) noexcept { return g; }
inline Jet2Scalar apply(const Jet2Scalar& x, double g, double dg, double d2g) noexcept { return chain(x, g, dg, d2g); }
inline JetN apply(const JetN& x, double g, double dg, double d2g) noexcept { return chain(x, g, dg, d2g); }

}  // namespace jetfn

template <class T>
T sin(const T& x) {
    const double v = primal(x);
    const double s = std::sin(v), c = std::cos(v);
    return jetfn::apply(x, s, c, -s);
}

template <class T>
T cos(const T& x) {
    const double v = primal(x);
    const double s = std::sin(v), c = std::cos(v);
    return jetfn::apply(x, c, -s, -c);
}

template <class T>
T exp(const T& x) {
    const double e = std::exp(primal(x));
    return jetfn::apply(x, e, e, e);
}

template <class T>
T log(const T& x) {
    const double v = primal(x);
    if (!(v > 0.0)) throw DomainError("log of nonpositive argument");
    return jetfn::apply(x, std::log(v), 1.0 / v, -1.0 / (v * v));
}

template <class T>
T sqrt(const T& x) {
    const double v = primal(x);
    if (v < 0.0) throw DomainError("sqrt of negative argument");
    const double s = std::sqrt(v);
    if constexpr (std::is_same_v<T, double>) {
        return s;
    } else {
        // derivatives blow up at zero
        if (v == 0.0) throw DomainError("sqrt jet at zero");
        return jetfn::apply(x, s, 0.5 / s, -0.25 / (s * v));
    }
}

/// x^p for a fixed real exponent.
template <class T>
T pow_const(const T& x, double p) {
    const double v = primal(x);
    const bool integral = std::floor(p) == p;
    if (v < 0.0 && !integral) throw DomainError("non-integer power of negative argument");
    if (v == 0.0) {
        if (p < 0.0) throw DomainError("division by zero");
        if constexpr (!std::is_same_v<T, double>) {
            if (!integral && p < 2.0) throw DomainError("power jet not differentiable at zero");
        }
    }
    if (p == 0.0) return constant_like(x, 1.0);
    const double g = std::pow(v, p);
    const double dg = p == 1.0 ? 1.0 : p * std::pow(v, p - 1.0);
    const double d2g = (p == 1.0) ? 0.0 : (p == 2.0 ? 2.0 : p * (p - 1.0) * std::pow(v, p - 2.0));
    return jetfn::apply(x, g, dg, d2g);
}

/// x^y with both operands variable; requires x > 0.
template <class T>
T pow(const T& x, const T& y) {
    if (!(primal(x) > 0.0)) throw DomainError("variable power of nonpositive base");
    return exp(y * log(x));
}

}  // namespace subgeom
