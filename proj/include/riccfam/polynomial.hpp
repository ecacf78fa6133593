#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace riccfam {

/// Dense real-coefficient polynomial in ascending powers of u:
/// p(u) = c0 + c1*u + ... + cd*u^d.  Degrees in this library never exceed 3,
/// so no sparse representation is attempted.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) {}
    explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

    static Polynomial zero() { return Polynomial{}; }
    static Polynomial constant(double c) { return Polynomial{c}; }

    /// Index of the highest coefficient that is exactly nonzero; the zero
    /// polynomial reports -1.
    int degree() const {
        for (int i = static_cast<int>(coeffs_.size()) - 1; i >= 0; --i)
            if (coeffs_[static_cast<std::size_t>(i)] != 0.0) return i;
        return -1;
    }

    /// Coefficient of u^i (zero beyond the stored range).
    double coeff(std::size_t i) const {
        return i < coeffs_.size() ? coeffs_[i] : 0.0;
    }

    const std::vector<double>& coeffs() const { return coeffs_; }

    /// Horner evaluation; T may be double, Dual2, or any ring with
    /// T*T, T+double semantics.
    template <class T>
    T operator()(const T& u) const {
        if (coeffs_.empty()) return T(0.0);
        T acc(coeffs_.back());
        for (std::size_t i = coeffs_.size() - 1; i-- > 0;)
            acc = acc * u + T(coeffs_[i]);
        return acc;
    }

    Polynomial derivative() const {
        if (coeffs_.size() <= 1) return Polynomial{};
        std::vector<double> d(coeffs_.size() - 1);
        for (std::size_t i = 1; i < coeffs_.size(); ++i)
            d[i - 1] = static_cast<double>(i) * coeffs_[i];
        return Polynomial(std::move(d));
    }

    /// Largest absolute coefficient difference against another polynomial
    /// (compared over the union of stored ranges).
    double max_coeff_diff(const Polynomial& o) const {
        const std::size_t n = std::max(coeffs_.size(), o.coeffs_.size());
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            m = std::max(m, std::fabs(coeff(i) - o.coeff(i)));
        return m;
    }

    bool almost_equal(const Polynomial& o, double tol) const {
        return max_coeff_diff(o) <= tol;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
        return Polynomial(std::move(c));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.degree() < 0 || b.degree() < 0) return Polynomial{};
        std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(double s, const Polynomial& p) {
        std::vector<double> c(p.coeffs_);
        for (double& x : c) x *= s;
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(const Polynomial& p, double s) { return s * p; }
    Polynomial operator-() const { return -1.0 * *this; }

    /// Render like "3 - 4u + u^2"; the zero polynomial prints "0".
    std::string str(std::string_view var = "u") const {
        const int d = degree();
        if (d < 0) return "0";
        std::string out;
        for (int i = 0; i <= d; ++i) {
            const double c = coeff(static_cast<std::size_t>(i));
            if (c == 0.0) continue;
            const double mag = std::fabs(c);
            if (out.empty()) {
                if (c < 0.0) out += "-";
            } else {
                out += (c < 0.0) ? " - " : " + ";
            }
            const bool unit = (mag == 1.0) && i > 0;
            if (!unit) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%g", mag);
                out += buf;
            }
            if (i >= 1) out += var;
            if (i >= 2) {
                out += "^";
                out += std::to_string(i);
            }
        }
        return out.empty() ? "0" : out;
    }

private:
    std::vector<double> coeffs_;
};

} // namespace riccfam
