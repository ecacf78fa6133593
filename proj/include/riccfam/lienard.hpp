#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "riccfam/curve.hpp"
#include "riccfam/errors.hpp"
#include "riccfam/polynomial.hpp"

namespace riccfam {

/// The equation  u'' + g(u) u' + F(u) = 0  with polynomial damping g and
/// restoring force F.  F(0) = 0 is required (exactly) so that F(u)/u stays a
/// polynomial, which the factorization machinery depends on.
class LienardEquation {
public:
    LienardEquation(Polynomial g, Polynomial F)
        : g_(std::move(g)), F_(std::move(F)) {
        if (F_.coeff(0) != 0.0)
            throw ValidationError("LienardEquation requires F(0) = 0 exactly");
    }

    const Polynomial& g() const { return g_; }
    const Polynomial& F() const { return F_; }

    /// F(u)/u as a polynomial (degree shift; valid because F(0)=0).
    Polynomial F_over_u() const {
        if (F_.degree() < 1) return Polynomial{};
        std::vector<double> c(F_.coeffs().begin() + 1, F_.coeffs().end());
        return Polynomial(std::move(c));
    }

private:
    Polynomial g_;
    Polynomial F_;
};

/// Defect of a candidate curve against the equation at one point, using the
/// curve's exact derivatives: u'' + g(u) u' + F(u).
inline double residual(const LienardEquation& eq, const SolutionCurve& curve, double tau) {
    const CurveJet j = curve.jet(tau);
    return j.d2u + eq.g()(j.u) * j.du + eq.F()(j.u);
}

/// Result of a residual sweep: worst surviving defect plus the number of grid
/// points that had to be skipped (pole-excluded or out of domain).
struct ResidualSweep {
    double max_abs = 0.0;
    int skipped = 0;
};

inline ResidualSweep max_residual(const LienardEquation& eq, const SolutionCurve& curve,
                                  const std::vector<double>& grid) {
    if (grid.empty()) throw ValidationError("max_residual: empty grid");
    ResidualSweep sweep;
    int used = 0;
    for (double tau : grid) {
        if (curve.excluded(tau)) {
            ++sweep.skipped;
            continue;
        }
        sweep.max_abs = std::max(sweep.max_abs, std::fabs(residual(eq, curve, tau)));
        ++used;
    }
    if (used == 0)
        throw EmptyEffectiveGridError("max_residual: every grid point was skipped");
    return sweep;
}

/// n equally spaced points covering [a, b] inclusive (n >= 2).
inline std::vector<double> linspace(double a, double b, int n) {
    if (n < 2) throw ValidationError("linspace requires n >= 2");
    std::vector<double> g(static_cast<std::size_t>(n));
    const double h = (b - a) / (n - 1);
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = a + h * i;
    g.back() = b;
    return g;
}

} // namespace riccfam
