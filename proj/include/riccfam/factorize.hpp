#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "riccfam/errors.hpp"
#include "riccfam/lienard.hpp"
#include "riccfam/polynomial.hpp"

namespace riccfam {

/// Which root of the branch quadratic 2C a1^2 + g1 a1 + 1 = 0 a factorization
/// came from (PlusRoot takes the +sqrt of the discriminant).
enum class Branch { PlusRoot, MinusRoot };

/// The first factor phi1(u) = c1 u + c2.  A vanishing slope would make the
/// reduced first-order equation linear instead of Riccati, so it is rejected.
class LinearFactor {
public:
    LinearFactor(double c1, double c2) : c1_(c1), c2_(c2) {
        if (c1 == 0.0) throw ValidationError("LinearFactor requires a nonzero slope c1");
    }

    double c1() const { return c1_; }
    double c2() const { return c2_; }

    template <class T>
    T operator()(const T& u) const {
        return T(c1_) * u + T(c2_);
    }

    Polynomial poly() const { return Polynomial{c2_, c1_}; }

private:
    double c1_;
    double c2_;
};

/// A two-operator factorization [D - phi2][D - phi1] u = 0 of a Liénard
/// equation, with the branch metadata that produced it.
struct Factorization {
    LinearFactor phi1;
    Polynomial phi2; ///< degree <= 1
    double a1 = std::numeric_limits<double>::quiet_NaN();
    double delta = std::numeric_limits<double>::quiet_NaN(); ///< +sqrt(B^2-4AC)
    Branch branch = Branch::PlusRoot;
    /// Slope parameter in the sqrt(C)-normalized convention (a1 * sqrt(C));
    /// NaN when C <= 0 or for the quadratic engine.
    double a1_scaled = std::numeric_limits<double>::quiet_NaN();

    /// The damping this factorization induces: -(phi1 + phi2 + c1 u).
    Polynomial induced_g() const {
        return -(phi1.poly() + phi2 + Polynomial{0.0, phi1.c1()});
    }

    /// The restoring force it induces: u * phi1(u) * phi2(u).
    Polynomial induced_F() const {
        return Polynomial{0.0, 1.0} * phi1.poly() * phi2;
    }

    /// The full Liénard equation this factorization solves.
    LienardEquation induced_equation() const {
        return LienardEquation(induced_g(), induced_F());
    }
};

/// Factorize F(u) = A u + B u^2 + C u^3 for a chosen branch scale a1:
///   phi1 = a1 (C u + (B+D)/2),  phi2 = ((B-D)/(2C) + u) / a1,  D = +sqrt(B^2-4AC).
inline Factorization factor_cubic_forward(double A, double B, double C, double a1,
                                          Branch tag = Branch::PlusRoot) {
    if (C == 0.0)
        throw ZeroCubicCoefficientError("factor_cubic_forward: C = 0 (use the quadratic engine)");
    const double disc = B * B - 4.0 * A * C;
    if (disc < 0.0)
        throw ComplexDiscriminantError("factor_cubic_forward: B^2 - 4AC < 0");
    if (a1 == 0.0) throw ZeroBranchError("factor_cubic_forward: a1 = 0");

    const double delta = std::sqrt(disc);
    Factorization f{
        LinearFactor(a1 * C, a1 * (B + delta) / 2.0),
        Polynomial{(B - delta) / (2.0 * C * a1), 1.0 / a1},
        a1,
        delta,
        tag,
        C > 0.0 ? a1 * std::sqrt(C) : std::numeric_limits<double>::quiet_NaN(),
    };
    return f;
}

/// Given g(u) = g0 + g1 u, solve the slope-matching quadratic
/// 2C a1^2 + g1 a1 + 1 = 0 and keep each real root whose forward
/// factorization also reproduces g0 (within 1e-10).  Returns 0, 1 or 2
/// factorizations, PlusRoot first.
inline std::vector<Factorization> factor_cubic_inverse(double g0, double g1, double A,
                                                       double B, double C) {
    if (C == 0.0)
        throw ZeroCubicCoefficientError("factor_cubic_inverse: C = 0 (use the quadratic engine)");
    if (B * B - 4.0 * A * C < 0.0)
        throw ComplexDiscriminantError("factor_cubic_inverse: B^2 - 4AC < 0");
    // Snap the branch discriminant to zero when it is indistinguishable from
    // the rounding noise of its own evaluation, so a degenerate double root
    // (g1^2 = 8C up to fp error) collapses to one branch instead of two
    // branches a few ulps apart.
    const double disc_raw = g1 * g1 - 8.0 * C;
    const double disc_noise =
        16.0 * std::numeric_limits<double>::epsilon() * (g1 * g1 + 8.0 * std::fabs(C));
    const double disc = (std::fabs(disc_raw) <= disc_noise) ? 0.0 : disc_raw;
    if (disc < 0.0)
        throw NoRealBranchError("factor_cubic_inverse: g1^2 - 8C < 0, no real branch");

    const double sq = std::sqrt(disc);
    const std::pair<double, Branch> roots[2] = {
        {(-g1 + sq) / (4.0 * C), Branch::PlusRoot},
        {(-g1 - sq) / (4.0 * C), Branch::MinusRoot},
    };
    std::vector<Factorization> out;
    double last_kept = std::numeric_limits<double>::quiet_NaN();
    for (const auto& [root, tag] : roots) {
        if (!out.empty() && root == last_kept) continue; // double root
        Factorization f = factor_cubic_forward(A, B, C, root, tag);
        if (std::fabs(f.induced_g().coeff(0) - g0) <= 1e-10) {
            out.push_back(f);
            last_kept = root;
        }
    }
    return out;
}

/// Factorize F(u) = A u + B u^2 with a constant second factor k:
///   phi1 = (A + B u)/k,  phi2 = k,  g = -(A/k + k) - (2B/k) u.
inline Factorization factor_quadratic(double A, double B, double k) {
    if (k == 0.0) throw ZeroConstantCofactorError("factor_quadratic: k = 0");
    if (B == 0.0)
        throw ZeroQuadraticCoefficientError("factor_quadratic: B = 0, no quadratic term");
    return Factorization{LinearFactor(B / k, A / k), Polynomial{k}};
}

/// Inverse mode of the quadratic engine: recover k from the slope match
/// g1 = -2B/k, then keep the result only if the constant term g0 also
/// matches (within 1e-10).  Returns 0 or 1 factorizations.
inline std::vector<Factorization> factor_quadratic_inverse(double g0, double g1, double A,
                                                           double B) {
    if (B == 0.0)
        throw ZeroQuadraticCoefficientError("factor_quadratic_inverse: B = 0");
    if (g1 == 0.0)
        throw ZeroConstantCofactorError("factor_quadratic_inverse: g1 = 0 admits no finite k");
    const double k = -2.0 * B / g1;
    Factorization f = factor_quadratic(A, B, k);
    std::vector<Factorization> out;
    if (std::fabs(f.induced_g().coeff(0) - g0) <= 1e-10) out.push_back(f);
    return out;
}

/// Per-condition verdict of a factorization against an equation: the
/// operator-expansion condition on g and the product condition on F(u)/u.
struct FactorizationCheck {
    double g_mismatch = 0.0;
    double F_mismatch = 0.0;
    bool g_pass = false;
    bool F_pass = false;
    bool passed() const { return g_pass && F_pass; }
};

inline FactorizationCheck check_factorization(const LienardEquation& eq,
                                              const Factorization& f, double tol = 1e-12) {
    FactorizationCheck r;
    r.g_mismatch = f.induced_g().max_coeff_diff(eq.g());
    r.F_mismatch = (f.phi1.poly() * f.phi2).max_coeff_diff(eq.F_over_u());
    r.g_pass = r.g_mismatch <= tol;
    r.F_pass = r.F_mismatch <= tol;
    return r;
}

} // namespace riccfam
