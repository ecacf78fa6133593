#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "riccfam/curve.hpp"
#include "riccfam/dual.hpp"
#include "riccfam/errors.hpp"
#include "riccfam/factorize.hpp"
#include "riccfam/quadrature.hpp"
#include "riccfam/rootfind.hpp"

namespace riccfam {

/// The reduced first-order equation  u' = c1 u^2 + c2 u.
struct RiccatiODE {
    double c1;
    double c2;

    RiccatiODE(double c1_, double c2_) : c1(c1_), c2(c2_) {
        if (c1 == 0.0) throw ValidationError("RiccatiODE requires c1 != 0");
    }

    template <class T>
    T rhs(const T& u) const {
        return T(c1) * u * u + T(c2) * u;
    }
};

/// Read the Riccati coefficients off the first factor.
inline RiccatiODE reduce(const Factorization& f) {
    return RiccatiODE(f.phi1.c1(), f.phi1.c2());
}

/// Defect of a jet against the first-order equation: u' - c1 u^2 - c2 u.
inline double riccati_residual(const RiccatiODE& ode, const CurveJet& j) {
    return j.du - ode.c1 * j.u * j.u - ode.c2 * j.u;
}

/// Worst first-order defect over a grid (pole-excluded points are skipped).
inline ResidualSweep max_riccati_residual(const RiccatiODE& ode, const SolutionCurve& curve,
                                          const std::vector<double>& grid) {
    if (grid.empty()) throw ValidationError("max_riccati_residual: empty grid");
    ResidualSweep sweep;
    int used = 0;
    for (double tau : grid) {
        if (curve.excluded(tau)) {
            ++sweep.skipped;
            continue;
        }
        const CurveJet j = curve.jet(tau);
        sweep.max_abs = std::max(sweep.max_abs, std::fabs(riccati_residual(ode, j)));
        ++used;
    }
    if (used == 0)
        throw EmptyEffectiveGridError("max_riccati_residual: every grid point was skipped");
    return sweep;
}

namespace detail {

/// Build the logistic curve u = c2 / (K e^{-c2 (tau-ref)} - c1) (K != 0).
inline SolutionCurve make_logistic(double c1, double c2, double K, double ref) {
    std::vector<double> poles;
    if (c1 / K > 0.0) poles.push_back(ref - std::log(c1 / K) / c2);
    SeedForm seed{SeedForm::Kind::Logistic, c1, c2, K, ref};
    auto eval = [c1, c2, K, ref](double tau) {
        const Dual2 t = Dual2::variable(tau);
        const Dual2 E = Dual2(K) * exp(Dual2(-c2) * (t - Dual2(ref)));
        const Dual2 u = Dual2(c2) / (E - Dual2(c1));
        return CurveJet{u.v, u.d1, u.d2};
    };
    return SolutionCurve(eval, std::move(poles), Interval::all(), seed);
}

/// Build the rational curve u = -1 / (c1 (tau - p)).
inline SolutionCurve make_rational(double c1, double p) {
    SeedForm seed{SeedForm::Kind::Rational, c1, 0.0, 0.0, p};
    auto eval = [c1, p](double tau) {
        const Dual2 t = Dual2::variable(tau);
        const Dual2 u = Dual2(-1.0) / (Dual2(c1) * (t - Dual2(p)));
        return CurveJet{u.v, u.d1, u.d2};
    };
    return SolutionCurve(eval, {p}, Interval::all(), seed);
}

/// Build the equilibrium curve u = -c2/c1.
inline SolutionCurve make_equilibrium(double c1, double c2) {
    SeedForm seed{SeedForm::Kind::Equilibrium, c1, c2, 0.0, 0.0};
    const double value = -c2 / c1;
    auto eval = [value](double) { return CurveJet{value, 0.0, 0.0}; };
    return SolutionCurve(eval, {}, Interval::all(), seed);
}

} // namespace detail

/// The solution of [D - phi1(u)] u = 0 through the standard separation
/// constant:  c2 = 0 gives u = -1/(c1 (tau - tau0)) (pole at tau0);
/// c2 != 0 gives u = c2/(K e^{-c2 (tau - tau0)} - c1) with K = branch_const.
/// K = 0 collapses to the equilibrium u = -c2/c1, returned as a valid curve.
inline SolutionCurve particular_solution(const RiccatiODE& ode, double tau0,
                                         double branch_const = 1.0) {
    if (ode.c2 == 0.0) return detail::make_rational(ode.c1, tau0);
    if (branch_const == 0.0) return detail::make_equilibrium(ode.c1, ode.c2);
    return detail::make_logistic(ode.c1, ode.c2, branch_const, tau0);
}

/// Independent closed-form oracle for the full solution set of
/// u' = c1 u^2 + c2 u, parametrized by the separation constant K:
/// c2 != 0: u = c2/(K e^{-c2 (tau - tau0)} - c1) (K = 0 is the equilibrium);
/// c2  = 0: u = -1/(c1 (tau - tau0) + K).  Together with u = 0 this is every
/// solution of the equation.
inline SolutionCurve bernoulli_family(const RiccatiODE& ode, double K, double tau0) {
    if (ode.c2 == 0.0) return detail::make_rational(ode.c1, tau0 - K / ode.c1);
    if (K == 0.0) return detail::make_equilibrium(ode.c1, ode.c2);
    return detail::make_logistic(ode.c1, ode.c2, K, tau0);
}

/// The pair (e^{I1(tau)}, I2(tau)) with I1 = \int_{tau0}^{tau} (2 c1 u1 + c2)
/// and I2 = \int_{tau0}^{tau} e^{I1}.  Closed forms are used whenever the
/// seed curve advertises a recognized shape and matching coefficients;
/// otherwise nested adaptive quadrature at relative tolerance 1e-10.
class RiccatiIntegrals {
public:
    struct Values {
        double exp_i1;
        double i2;
    };

    RiccatiIntegrals(const RiccatiODE& ode, SolutionCurve u1, double tau0,
                     QuadratureOptions quad = {})
        : c1_(ode.c1), c2_(ode.c2), u1_(std::move(u1)), tau0_(tau0), quad_(quad) {
        if (u1_.excluded(tau0))
            throw PoleAtReferenceError("Riccati integrals anchored at an excluded point");
        const SeedForm& s = u1_.seed();
        const bool coeffs_match = s.c1 == c1_ && s.c2 == c2_;
        kind_ = (coeffs_match || s.kind == SeedForm::Kind::Null) ? s.kind
                                                                 : SeedForm::Kind::Generic;
    }

    bool closed_form() const { return kind_ != SeedForm::Kind::Generic; }

    Values operator()(double tau) const {
        switch (kind_) {
        case SeedForm::Kind::Rational: {
            // u1 = -1/(c1 (tau - p)):  e^{I1} = (r0/r)^2,  I2 = r0 - r0^2/r.
            const double p = u1_.seed().ref;
            const double r0 = tau0_ - p;
            const double r = tau - p;
            return {(r0 / r) * (r0 / r), r0 - r0 * r0 / r};
        }
        case SeedForm::Kind::Logistic: {
            // u1 = c2/(E - c1), E = K e^{-c2 (tau - ref)}:
            // e^{I1} = e^{-c2 (tau - tau0)} (E0 - c1)^2 / (E - c1)^2,
            // I2 = (E0 - c1)^2/(c2 E0) * (1/(E - c1) - 1/(E0 - c1)).
            const SeedForm& s = u1_.seed();
            const double E = s.K * std::exp(-c2_ * (tau - s.ref));
            const double E0 = s.K * std::exp(-c2_ * (tau0_ - s.ref));
            const double q = E0 - c1_;
            const double expi1 = std::exp(-c2_ * (tau - tau0_)) * q * q / ((E - c1_) * (E - c1_));
            const double i2 = q * q / (c2_ * E0) * (1.0 / (E - c1_) - 1.0 / q);
            return {expi1, i2};
        }
        case SeedForm::Kind::Equilibrium: {
            // u1 = -c2/c1:  2 c1 u1 + c2 = -c2.
            const double expi1 = std::exp(-c2_ * (tau - tau0_));
            return {expi1, (1.0 - expi1) / c2_};
        }
        case SeedForm::Kind::Null: {
            // u1 = 0:  2 c1 u1 + c2 = c2.
            if (c2_ == 0.0) return {1.0, tau - tau0_};
            const double expi1 = std::exp(c2_ * (tau - tau0_));
            return {expi1, (expi1 - 1.0) / c2_};
        }
        case SeedForm::Kind::Generic:
            break;
        }
        // Quadrature path: I2's integrand re-integrates I1 from tau0 at each
        // node (no cross-call caching; evaluation stays re-entrant).
        QuadratureOptions inner = quad_;
        inner.rel_tol = std::min(quad_.rel_tol, 1e-12);
        auto i1 = [this, &inner](double s) {
            auto f = [this](double x) { return 2.0 * c1_ * u1_.value(x) + c2_; };
            return integrate_adaptive(f, tau0_, s, inner);
        };
        const double expi1 = std::exp(i1(tau));
        const double i2 = integrate_adaptive(
            [&i1](double s) { return std::exp(i1(s)); }, tau0_, tau, quad_);
        return {expi1, i2};
    }

    double lambda_s(double tau) const { return c1_ * (*this)(tau).i2; }

    double c1() const { return c1_; }
    double c2() const { return c2_; }
    double tau0() const { return tau0_; }
    const SolutionCurve& seed_curve() const { return u1_; }

private:
    double c1_;
    double c2_;
    SolutionCurve u1_;
    double tau0_;
    QuadratureOptions quad_;
    SeedForm::Kind kind_;
};

/// One member of the lambda-family built on a particular solution.
struct RiccatiFamilyMember {
    enum class Form { ClosedForm, Quadrature };

    SolutionCurve curve; ///< the lambda-member itself (exact jets)
    SolutionCurve u1;    ///< the seed it was built on
    double c1;
    double c2;
    double lambda;
    double tau0;
    Form form;
};

/// The family member u_lambda = u1 + e^{I1} / (lambda - c1 I2) with both
/// integrals anchored at tau0 (a regular point of u1).  Values of I1, I2 come
/// from RiccatiIntegrals; first and second derivatives are assembled exactly
/// from d I1/d tau = 2 c1 u1 + c2 and d I2/d tau = e^{I1}, so the member's
/// jets carry no quadrature error beyond the integral values themselves.
inline RiccatiFamilyMember general_solution(const RiccatiODE& ode, const SolutionCurve& u1,
                                            double lambda, double tau0,
                                            QuadratureOptions quad = {}) {
    auto integrals = std::make_shared<RiccatiIntegrals>(ode, u1, tau0, quad);
    const double c1 = ode.c1;
    const double c2 = ode.c2;
    SolutionCurve seed = integrals->seed_curve();

    auto eval = [integrals, seed, c1, c2, lambda](double tau) {
        const CurveJet j1 = seed.jet(tau);
        const RiccatiIntegrals::Values v = (*integrals)(tau);
        const double s = 2.0 * c1 * j1.u + c2; // d I1 / d tau
        const Dual2 w{v.exp_i1, s * v.exp_i1, (2.0 * c1 * j1.du) * v.exp_i1 + s * s * v.exp_i1};
        const Dual2 i2{v.i2, v.exp_i1, w.d1};
        const Dual2 u = Dual2{j1.u, j1.du, j1.d2u} + w / (Dual2(lambda) - Dual2(c1) * i2);
        return CurveJet{u.v, u.d1, u.d2};
    };

    RiccatiFamilyMember m{
        SolutionCurve(eval, u1.poles(), u1.domain(), SeedForm{}),
        u1,
        c1,
        c2,
        lambda,
        tau0,
        integrals->closed_form() ? RiccatiFamilyMember::Form::ClosedForm
                                 : RiccatiFamilyMember::Form::Quadrature,
    };
    return m;
}

/// The singular-parameter locus lambda_s(tau) = c1 I2(tau) and, for the given
/// lambda, every root of lambda - lambda_s inside the interval (bracketing
/// scan + bisection; roots closer than 1e-9 merge).
struct SingularLocus {
    std::function<double(double)> lambda_s;
    std::vector<double> pole_positions;
};

inline SingularLocus singular_locus(const RiccatiODE& ode, const SolutionCurve& u1,
                                    double lambda, Interval interval, double tau0,
                                    QuadratureOptions quad = {}) {
    if (!std::isfinite(interval.lo) || !std::isfinite(interval.hi) ||
        !(interval.lo < interval.hi))
        throw ValidationError("singular_locus requires a finite interval [a, b], a < b");
    auto integrals = std::make_shared<RiccatiIntegrals>(ode, u1, tau0, quad);
    auto ls = [integrals](double tau) { return integrals->lambda_s(tau); };

    auto objective = [&ls, lambda](double tau) -> double {
        try {
            return lambda - ls(tau);
        } catch (const Error&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    std::vector<double> roots = find_roots(objective, interval.lo, interval.hi);
    std::vector<double> confirmed;
    for (double r : roots) {
        const double v = objective(r);
        if (std::isfinite(v) && std::fabs(v) < 1e-10) confirmed.push_back(r);
    }
    return SingularLocus{ls, std::move(confirmed)};
}

} // namespace riccfam
