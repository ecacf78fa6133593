#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "riccfam/errors.hpp"

namespace riccfam {

/// Value and first two derivatives of a curve at one point.
struct CurveJet {
    double u   = 0.0;
    double du  = 0.0;
    double d2u = 0.0;
};

/// Interval of validity; infinite bounds by default.  Containment is
/// inclusive so that numerically produced curves remain evaluable at the
/// endpoints of their integration span.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = +std::numeric_limits<double>::infinity();

    bool contains(double tau) const { return tau >= lo && tau <= hi; }
    static Interval all() { return {}; }
};

/// Tags curves whose Riccati integrals I1, I2 admit closed-form
/// antiderivatives.  `Generic` forces the quadrature path.
struct SeedForm {
    enum class Kind { Generic, Rational, Logistic, Equilibrium, Null };
    Kind kind = Kind::Generic;
    double c1 = 0.0; ///< Riccati coefficients the seed solves
    double c2 = 0.0;
    double K = 0.0;  ///< logistic amplitude (Logistic kind)
    double ref = 0.0;///< pole location (Rational) or reference point (Logistic)
};

/// An evaluable solution curve tau -> (u, du/dtau, d2u/dtau2) with a declared
/// (possibly empty) pole list and a domain of validity.  Evaluation inside the
/// pole-exclusion radius or outside the domain throws; derivative values are
/// exact to round-off (no finite differencing anywhere in the library).
class SolutionCurve {
public:
    using EvalFn = std::function<CurveJet(double)>;

    SolutionCurve() = default;
    SolutionCurve(EvalFn eval, std::vector<double> poles, Interval domain = {},
                  SeedForm seed = {})
        : eval_(std::move(eval)), poles_(std::move(poles)), domain_(domain),
          seed_(seed) {
        std::sort(poles_.begin(), poles_.end());
    }

    /// Exclusion radius around a pole: 1e-6 scaled by the local tau magnitude.
    static double exclusion_radius(double tau) {
        return 1e-6 * std::max(1.0, std::fabs(tau));
    }

    /// Distance to the nearest declared pole (+inf if none).
    double pole_distance(double tau) const {
        double best = std::numeric_limits<double>::infinity();
        auto it = std::lower_bound(poles_.begin(), poles_.end(), tau);
        if (it != poles_.end()) best = std::min(best, std::fabs(*it - tau));
        if (it != poles_.begin()) best = std::min(best, std::fabs(*std::prev(it) - tau));
        return best;
    }

    /// True when evaluation at tau would be rejected (outside the domain or
    /// within the exclusion radius of a declared pole).
    bool excluded(double tau) const {
        return !domain_.contains(tau) || pole_distance(tau) <= exclusion_radius(tau);
    }

    CurveJet jet(double tau) const {
        if (!domain_.contains(tau)) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "tau=%.17g outside curve domain", tau);
            throw OutOfDomainError(buf);
        }
        if (pole_distance(tau) <= exclusion_radius(tau)) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "tau=%.17g within pole exclusion radius", tau);
            throw PoleProximityError(buf);
        }
        return eval_(tau);
    }

    double value(double tau) const { return jet(tau).u; }
    double operator()(double tau) const { return value(tau); }

    const std::vector<double>& poles() const { return poles_; }
    const Interval& domain() const { return domain_; }
    const SeedForm& seed() const { return seed_; }

    /// Copy of this curve with extra poles merged in (duplicates within 1e-9
    /// collapse, matching the pole-finder convention).
    SolutionCurve with_poles(const std::vector<double>& extra) const {
        SolutionCurve c = *this;
        c.poles_.insert(c.poles_.end(), extra.begin(), extra.end());
        std::sort(c.poles_.begin(), c.poles_.end());
        auto last = std::unique(c.poles_.begin(), c.poles_.end(),
                                [](double a, double b) { return std::fabs(a - b) < 1e-9; });
        c.poles_.erase(last, c.poles_.end());
        return c;
    }

private:
    EvalFn eval_;
    std::vector<double> poles_;
    Interval domain_;
    SeedForm seed_;
};

/// The trivial solution u = 0 (a valid seed for any Riccati equation).
inline SolutionCurve null_curve() {
    return SolutionCurve([](double) { return CurveJet{}; }, {}, Interval::all(),
                         SeedForm{SeedForm::Kind::Null, 0.0, 0.0, 0.0, 0.0});
}

} // namespace riccfam
