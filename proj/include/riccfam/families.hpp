#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "riccfam/curve.hpp"
#include "riccfam/dual.hpp"
#include "riccfam/errors.hpp"
#include "riccfam/factorize.hpp"
#include "riccfam/lienard.hpp"
#include "riccfam/riccati.hpp"

namespace riccfam {

/// The sign alternative inside the logistic seed of the convective Fisher
/// preset (the two kink orientations).
enum class Sign { Plus, Minus };

inline double sign_value(Sign s) { return s == Sign::Plus ? 1.0 : -1.0; }

// ---------------------------------------------------------------------------
// Modified Emden preset:  u'' + alpha u u' + beta u^3 = 0.
// ---------------------------------------------------------------------------

struct EmdenParams {
    double alpha;
    double beta;
    Branch branch;
    double lambda;
    double tau0;

    EmdenParams(double alpha_, double beta_, Branch branch_, double lambda_, double tau0_)
        : alpha(alpha_), beta(beta_), branch(branch_), lambda(lambda_), tau0(tau0_) {
        if (!(beta > 0.0)) throw ValidationError("EmdenParams requires beta > 0");
        if (alpha * alpha - 8.0 * beta < 0.0)
            throw ComplexBranchError("EmdenParams: alpha^2 - 8 beta < 0, no real branch");
    }

    /// The slope of the reduced Riccati equation: (-alpha +- sqrt(alpha^2-8beta))/4.
    double a1_sqrt_beta() const {
        const double sq = std::sqrt(alpha * alpha - 8.0 * beta);
        return (branch == Branch::PlusRoot ? (-alpha + sq) : (-alpha - sq)) / 4.0;
    }
};

/// Construct Emden parameters directly from the slope s = a1 sqrt(beta)
/// (with beta = 1): alpha = -(2s + 1/s), and the branch is whichever root of
/// the slope quadratic s happens to be.  Any s != 0 is realizable.
inline EmdenParams emden_from_slope(double s, double lambda, double tau0) {
    if (s == 0.0) throw ValidationError("emden_from_slope requires s != 0");
    const double alpha = -(2.0 * s + 1.0 / s);
    const Branch b = (2.0 * s - 1.0 / s >= 0.0) ? Branch::PlusRoot : Branch::MinusRoot;
    return EmdenParams(alpha, 1.0, b, lambda, tau0);
}

inline LienardEquation emden_equation(double alpha, double beta) {
    return LienardEquation(Polynomial{0.0, alpha}, Polynomial{0.0, 0.0, 0.0, beta});
}

inline Factorization emden_factorization(double alpha, double beta, Branch branch) {
    EmdenParams probe(alpha, beta, branch, 0.0, 0.0);
    const double s = probe.a1_sqrt_beta();
    return factor_cubic_forward(0.0, 0.0, beta, s / beta, branch);
}

inline SolutionCurve emden_u1(const EmdenParams& p) {
    return detail::make_rational(p.a1_sqrt_beta(), p.tau0);
}

/// u_lambda(xi) = -1/(s xi) + 1/(lambda xi^2 + s xi), xi = tau - tau0,
/// s = a1 sqrt(beta).  lambda = 0 collapses identically to the null solution
/// (returned without the removable singularity at xi = 0).
inline SolutionCurve emden_family(const EmdenParams& p) {
    if (p.lambda == 0.0) return null_curve();
    const double s = p.a1_sqrt_beta();
    const double lam = p.lambda;
    const double tau0 = p.tau0;
    std::vector<double> poles = {tau0, tau0 - s / lam};
    auto eval = [s, lam, tau0](double tau) {
        const Dual2 xi = Dual2::variable(tau) - Dual2(tau0);
        const Dual2 u =
            Dual2(-1.0) / (Dual2(s) * xi) + Dual2(1.0) / (Dual2(lam) * xi * xi + Dual2(s) * xi);
        return CurveJet{u.v, u.d1, u.d2};
    };
    return SolutionCurve(eval, std::move(poles));
}

/// Singular-parameter locus of the Emden family: lambda_s(tau) = -s/xi.
inline double emden_lambda_s(const EmdenParams& p, double tau) {
    return -p.a1_sqrt_beta() / (tau - p.tau0);
}

// ---------------------------------------------------------------------------
// Convective Fisher preset:  u'' + 2(nu - mu u) u' + 2u(1-u) = 0,
// factorizable on the constraint line nu = mu/2 + 1/mu.
// ---------------------------------------------------------------------------

struct FisherParams {
    double mu;
    Sign sign;
    double lambda;
    double tau0;

    FisherParams(double mu_, Sign sign_, double lambda_, double tau0_)
        : mu(mu_), sign(sign_), lambda(lambda_), tau0(tau0_) {
        if (mu == 0.0) throw ValidationError("FisherParams requires mu != 0");
    }

    double nu() const { return mu / 2.0 + 1.0 / mu; }
};

inline LienardEquation fisher_equation(double mu) {
    if (mu == 0.0) throw ValidationError("fisher_equation requires mu != 0");
    const double nu = mu / 2.0 + 1.0 / mu;
    return LienardEquation(Polynomial{2.0 * nu, -2.0 * mu}, Polynomial{0.0, 2.0, -2.0});
}

inline Factorization fisher_factorization(double mu) {
    if (mu == 0.0) throw ValidationError("fisher_factorization requires mu != 0");
    return factor_quadratic(2.0, -2.0, -2.0 / mu);
}

/// u1 = [1 +- e^{mu xi}]^{-1}; the Minus sign has a pole at xi = 0.
inline SolutionCurve fisher_u1(const FisherParams& p) {
    return detail::make_logistic(p.mu, -p.mu, -sign_value(p.sign) * p.mu, p.tau0);
}

/// u_lambda = u1 + E / ([E +- 1][lambda (E +- 1) - 1]), E = e^{-mu xi}.
inline SolutionCurve fisher_family(const FisherParams& p) {
    if (p.lambda == 0.0) return null_curve();
    const double mu = p.mu;
    const double sg = sign_value(p.sign);
    const double lam = p.lambda;
    const double tau0 = p.tau0;

    std::vector<double> poles;
    if (p.sign == Sign::Minus) poles.push_back(tau0);
    const double Estar = 1.0 / lam - sg; // second bracket root: E = 1/lambda -+ 1
    if (Estar > 0.0) poles.push_back(tau0 - std::log(Estar) / mu);

    auto eval = [mu, sg, lam, tau0](double tau) {
        const Dual2 xi = Dual2::variable(tau) - Dual2(tau0);
        const Dual2 E = exp(Dual2(-mu) * xi);
        const Dual2 b1 = E + Dual2(sg);
        const Dual2 u = E / b1 + E / (b1 * (Dual2(lam) * b1 - Dual2(1.0)));
        return CurveJet{u.v, u.d1, u.d2};
    };
    return SolutionCurve(eval, std::move(poles));
}

/// lambda_s(tau) = 1 / (e^{-mu xi} +- 1).
inline double fisher_lambda_s(const FisherParams& p, double tau) {
    return 1.0 / (std::exp(-p.mu * (tau - p.tau0)) + sign_value(p.sign));
}

// ---------------------------------------------------------------------------
// Generalized cubic Liénard preset:  u'' + g(u) u' + A u + B u^2 + C u^3 = 0
// with the damping induced by the cubic factorization engine.
// ---------------------------------------------------------------------------

struct CubicLienardParams {
    double A;
    double B;
    double C;
    double a1;
    double lambda;
    double tau0;

    CubicLienardParams(double A_, double B_, double C_, double a1_, double lambda_,
                       double tau0_)
        : A(A_), B(B_), C(C_), a1(a1_), lambda(lambda_), tau0(tau0_) {
        if (C == 0.0)
            throw ZeroCubicCoefficientError("CubicLienardParams requires C != 0");
        if (B * B - 4.0 * A * C < 0.0)
            throw ComplexDiscriminantError("CubicLienardParams: B^2 - 4AC < 0");
        if (a1 == 0.0) throw ZeroBranchError("CubicLienardParams requires a1 != 0");
        if (half_sum() == 0.0)
            throw DegenerateExponentError(
                "CubicLienardParams: (B + delta)/2 = 0, the seed exponent degenerates");
    }

    double delta() const { return std::sqrt(B * B - 4.0 * A * C); }
    double half_sum() const { return (B + delta()) / 2.0; } ///< (B + delta)/2
};

inline Factorization lienard_factorization(double A, double B, double C, double a1) {
    return factor_cubic_forward(A, B, C, a1);
}

inline LienardEquation lienard_equation(double A, double B, double C, double a1) {
    const Factorization f = lienard_factorization(A, B, C, a1);
    return LienardEquation(f.induced_g(), Polynomial{0.0, A, B, C});
}

/// u1(xi) = P / (e^{-a1 P xi} - C), P = (B + delta)/2.
inline SolutionCurve lienard_u1(const CubicLienardParams& p) {
    return detail::make_logistic(p.a1 * p.C, p.a1 * p.half_sum(), p.a1, p.tau0);
}

/// u_lambda(xi) = u1 + P E / ([E - C][(lambda P - 1) E - lambda C P]),
/// E = e^{-a1 P xi}.  lambda = 0 is identically null.
inline SolutionCurve lienard_family(const CubicLienardParams& p) {
    if (p.lambda == 0.0) return null_curve();
    const double P = p.half_sum();
    const double rate = p.a1 * P;
    const double C = p.C;
    const double lam = p.lambda;
    const double tau0 = p.tau0;

    std::vector<double> poles;
    if (C > 0.0) poles.push_back(tau0 - std::log(C) / rate); // first bracket: E = C
    if (lam * P - 1.0 != 0.0) {
        const double Estar = lam * C * P / (lam * P - 1.0); // second bracket root
        if (Estar > 0.0) {
            const double pole = tau0 - std::log(Estar) / rate;
            if (poles.empty() || std::fabs(pole - poles.front()) > 1e-9)
                poles.push_back(pole);
        }
    }

    auto eval = [P, rate, C, lam, tau0](double tau) {
        const Dual2 xi = Dual2::variable(tau) - Dual2(tau0);
        const Dual2 E = exp(Dual2(-rate) * xi);
        const Dual2 b1 = E - Dual2(C);
        const Dual2 b2 = Dual2(lam * P - 1.0) * E - Dual2(lam * C * P);
        const Dual2 u = Dual2(P) / b1 + Dual2(P) * E / (b1 * b2);
        return CurveJet{u.v, u.d1, u.d2};
    };
    return SolutionCurve(eval, std::move(poles));
}

/// lambda_s(tau) = E / (P (E - C)), E = e^{-a1 P xi}.
inline double lienard_lambda_s(const CubicLienardParams& p, double tau) {
    const double P = p.half_sum();
    const double E = std::exp(-p.a1 * P * (tau - p.tau0));
    return E / (P * (E - p.C));
}

} // namespace riccfam
