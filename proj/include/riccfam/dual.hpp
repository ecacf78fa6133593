#pragma once

#include <cmath>

namespace riccfam {

/// Truncated second-order dual number: carries a value together with first
/// and second derivatives with respect to a single scalar parameter.
///
/// Arithmetic follows the chain rule exactly, so derivative propagation is
/// free of truncation error -- this is what lets curve jets avoid finite
/// differences entirely.
struct Dual2 {
    double v  = 0.0; ///< value
    double d1 = 0.0; ///< first derivative
    double d2 = 0.0; ///< second derivative

    constexpr Dual2() = default;
    constexpr Dual2(double value) : v(value) {}
    constexpr Dual2(double value, double first, double second)
        : v(value), d1(first), d2(second) {}

    /// The independent variable itself: d/dx x = 1, d^2/dx^2 x = 0.
    static constexpr Dual2 variable(double x) { return {x, 1.0, 0.0}; }

    constexpr Dual2 operator-() const { return {-v, -d1, -d2}; }

    constexpr Dual2& operator+=(const Dual2& o) {
        v += o.v; d1 += o.d1; d2 += o.d2;
        return *this;
    }
    constexpr Dual2& operator-=(const Dual2& o) {
        v -= o.v; d1 -= o.d1; d2 -= o.d2;
        return *this;
    }
    constexpr Dual2& operator*=(const Dual2& o) {
        d2 = v * o.d2 + 2.0 * d1 * o.d1 + d2 * o.v;
        d1 = v * o.d1 + d1 * o.v;
        v *= o.v;
        return *this;
    }
    constexpr Dual2& operator/=(const Dual2& o) {
        const double q  = v / o.v;
        const double q1 = (d1 - q * o.d1) / o.v;
        const double q2 = (d2 - 2.0 * q1 * o.d1 - q * o.d2) / o.v;
        v = q; d1 = q1; d2 = q2;
        return *this;
    }
};

constexpr Dual2 operator+(Dual2 a, const Dual2& b) { return a += b; }
constexpr Dual2 operator-(Dual2 a, const Dual2& b) { return a -= b; }
constexpr Dual2 operator*(Dual2 a, const Dual2& b) { return a *= b; }
constexpr Dual2 operator/(Dual2 a, const Dual2& b) { return a /= b; }

inline Dual2 exp(const Dual2& a) {
    const double e = std::exp(a.v);
    return {e, e * a.d1, e * (a.d2 + a.d1 * a.d1)};
}

inline Dual2 log(const Dual2& a) {
    const double l1 = a.d1 / a.v;
    return {std::log(a.v), l1, a.d2 / a.v - l1 * l1};
}

inline Dual2 sqrt(const Dual2& a) {
    const double r  = std::sqrt(a.v);
    const double r1 = a.d1 / (2.0 * r);
    return {r, r1, (a.d2 / 2.0 - r1 * r1) / r};
}

/// Integer power by repeated multiplication (exponents stay tiny here).
constexpr Dual2 pow(const Dual2& a, int n) {
    if (n < 0) return Dual2{1.0} / pow(a, -n);
    Dual2 r{1.0};
    for (int i = 0; i < n; ++i) r *= a;
    return r;
}

} // namespace riccfam
