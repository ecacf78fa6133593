#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <initializer_list>
#include <utility>
#include <vector>

#include "riccfam/errors.hpp"

namespace riccfam {

/// Tolerances and budget for the embedded Runge-Kutta 5(4) oracle.
struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    long max_steps = 1'000'000;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw ValidationError("IntegratorConfig tolerances must be positive");
        if (max_steps < 1) throw ValidationError("IntegratorConfig requires max_steps >= 1");
    }
};

namespace detail {

/// Dormand-Prince 5(4) coefficients (FSAL pair) with the quartic
/// dense-output polynomial.
struct Dopri5 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    // b - bhat (5th-order weights minus the embedded 4th-order ones).
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    // Dense-output weights.
    static constexpr double d1 = -12715105075.0 / 11282082432.0;
    static constexpr double d3 = 87487479700.0 / 32700410799.0;
    static constexpr double d4 = -10690763975.0 / 1880347072.0;
    static constexpr double d5 = 701980252875.0 / 199316789632.0;
    static constexpr double d6 = -1453857185.0 / 822651844.0;
    static constexpr double d7 = 69997945.0 / 29380423.0;
};

} // namespace detail

/// Dense-output trajectory of a two-dimensional first-order system.  Each
/// accepted step stores the quartic interpolation polynomial, so states can
/// be queried anywhere inside the integration span with 5th-order accuracy.
class DenseTrajectory {
public:
    using State = std::array<double, 2>;

    struct Step {
        double t0;
        double h;
        std::array<State, 5> rcont;
    };

    DenseTrajectory(double a, double b, std::vector<Step> steps)
        : a_(a), b_(b), steps_(std::move(steps)) {}

    double a() const { return a_; }
    double b() const { return b_; }

    State eval(double t) const {
        if (t < a_ || t > b_) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "tau=%.17g outside integration span", t);
            throw OutOfDomainError(buf);
        }
        // Binary search for the step containing t.
        std::size_t lo = 0, hi = steps_.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi + 1) / 2;
            if (steps_[mid].t0 <= t)
                lo = mid;
            else
                hi = mid - 1;
        }
        const Step& s = steps_[lo];
        const double th = (t - s.t0) / s.h;
        const double th1 = 1.0 - th;
        State y;
        for (int i = 0; i < 2; ++i) {
            const auto& r = s.rcont;
            y[static_cast<std::size_t>(i)] =
                r[0][static_cast<std::size_t>(i)] +
                th * (r[1][static_cast<std::size_t>(i)] +
                      th1 * (r[2][static_cast<std::size_t>(i)] +
                             th * (r[3][static_cast<std::size_t>(i)] +
                                   th1 * r[4][static_cast<std::size_t>(i)])));
        }
        return y;
    }

private:
    double a_;
    double b_;
    std::vector<Step> steps_;
};

/// Integrate y' = f(t, y) over [a, b] (forward only) with the Dormand-Prince
/// 5(4) pair, PI-free basic step control, and dense output.  The first state
/// component is guarded: |y[0]| > 1e12 raises BlowUp at the escape time.
inline DenseTrajectory
integrate_dopri5(const std::function<std::array<double, 2>(double, std::array<double, 2>)>& f,
                 double a, double b, std::array<double, 2> y0, IntegratorConfig cfg = {}) {
    using D = detail::Dopri5;
    using State = std::array<double, 2>;
    cfg.validate();
    if (!(a < b)) throw ValidationError("integrate_dopri5 requires a < b");
    constexpr double blowup_guard = 1e12;

    auto axpy = [](State y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
        for (const auto& [w, k] : terms)
            for (int i = 0; i < 2; ++i)
                y[static_cast<std::size_t>(i)] += h * w * (*k)[static_cast<std::size_t>(i)];
        return y;
    };

    std::vector<DenseTrajectory::Step> steps;
    double t = a;
    State y = y0;
    State k1 = f(t, y);

    // Initial step heuristic; the controller corrects poor guesses quickly.
    const double ynorm = std::sqrt(y[0] * y[0] + y[1] * y[1]);
    const double fnorm = std::sqrt(k1[0] * k1[0] + k1[1] * k1[1]);
    double h = std::min((b - a) / 10.0, 1e-2 * (1.0 + ynorm) / (1.0 + fnorm));

    for (long step = 0; step < cfg.max_steps; ++step) {
        if (t >= b || b - t <= 1e-14 * std::max(1.0, std::fabs(b)))
            return DenseTrajectory(a, b, std::move(steps));
        if (h < 1e-14 * std::max(1.0, std::fabs(t))) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "step size underflow at tau=%.17g", t);
            throw BlowUpError(buf, t);
        }
        if (t + h > b) h = b - t;

        const State k2 = f(t + D::c2 * h, axpy(y, h, {{D::a21, &k1}}));
        const State k3 = f(t + D::c3 * h, axpy(y, h, {{D::a31, &k1}, {D::a32, &k2}}));
        const State k4 =
            f(t + D::c4 * h, axpy(y, h, {{D::a41, &k1}, {D::a42, &k2}, {D::a43, &k3}}));
        const State k5 = f(t + D::c5 * h, axpy(y, h, {{D::a51, &k1},
                                                      {D::a52, &k2},
                                                      {D::a53, &k3},
                                                      {D::a54, &k4}}));
        const State k6 = f(t + h, axpy(y, h, {{D::a61, &k1},
                                              {D::a62, &k2},
                                              {D::a63, &k3},
                                              {D::a64, &k4},
                                              {D::a65, &k5}}));
        const State y1 = axpy(y, h, {{D::a71, &k1},
                                     {D::a73, &k3},
                                     {D::a74, &k4},
                                     {D::a75, &k5},
                                     {D::a76, &k6}});
        const State k7 = f(t + h, y1);

        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            const auto u = static_cast<std::size_t>(i);
            const double ei = h * (D::e1 * k1[u] + D::e3 * k3[u] + D::e4 * k4[u] +
                                   D::e5 * k5[u] + D::e6 * k6[u] + D::e7 * k7[u]);
            const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::fabs(y[u]), std::fabs(y1[u]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / 2.0);

        if (std::isfinite(err) && err <= 1.0) {
            DenseTrajectory::Step s;
            s.t0 = t;
            s.h = h;
            for (int i = 0; i < 2; ++i) {
                const auto u = static_cast<std::size_t>(i);
                const double dy = y1[u] - y[u];
                s.rcont[0][u] = y[u];
                s.rcont[1][u] = dy;
                s.rcont[2][u] = h * k1[u] - dy;
                s.rcont[3][u] = dy - h * k7[u] - s.rcont[2][u];
                s.rcont[4][u] = h * (D::d1 * k1[u] + D::d3 * k3[u] + D::d4 * k4[u] +
                                     D::d5 * k5[u] + D::d6 * k6[u] + D::d7 * k7[u]);
            }
            steps.push_back(s);
            t += h;
            y = y1;
            k1 = k7; // FSAL
            if (std::fabs(y[0]) > blowup_guard || !std::isfinite(y[0]) || !std::isfinite(y[1])) {
                char buf[96];
                std::snprintf(buf, sizeof(buf), "trajectory escaped |u| > 1e12 at tau=%.17g", t);
                throw BlowUpError(buf, t);
            }
        }

        const double fac = std::isfinite(err) && err > 0.0
                               ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0)
                               : (std::isfinite(err) ? 5.0 : 0.2);
        h *= fac;
    }
    throw StepLimitExceededError("integrate_dopri5: max_steps exhausted");
}

} // namespace riccfam
