#include <catch2/catch_amalgamated.hpp>

#include <riccfam/dual.hpp>
#include <riccfam/lienard.hpp>

using namespace riccfam;
using Catch::Matchers::WithinAbs;

namespace {

// u1 = 1/tau solves u'' + 3u u' + u^3 = 0 (pole at 0); exact jets via Dual2.
SolutionCurve inverse_tau_curve(double shift = 0.0) {
    return SolutionCurve(
        [shift](double tau) {
            const Dual2 t = Dual2::variable(tau);
            const Dual2 u = Dual2{1.0} / t + Dual2{shift};
            return CurveJet{u.v, u.d1, u.d2};
        },
        {0.0});
}

} // namespace

TEST_CASE("construction requires F(0) = 0", "[lienard]") {
    CHECK_NOTHROW(LienardEquation(Polynomial{0.0, 3.0}, Polynomial{0.0, 0.0, 0.0, 1.0}));
    CHECK_THROWS_AS(LienardEquation(Polynomial{1.0}, Polynomial{0.5, 1.0}), ValidationError);
    CHECK_THROWS_AS(LienardEquation(Polynomial{}, Polynomial{1e-300}), ValidationError);
}

TEST_CASE("F_over_u shifts coefficients down by one power", "[lienard]") {
    const LienardEquation eq(Polynomial{0.0, 3.0}, Polynomial{0.0, 2.0, -5.0, 1.0});
    const Polynomial q = eq.F_over_u();
    CHECK(q.coeff(0) == 2.0);
    CHECK(q.coeff(1) == -5.0);
    CHECK(q.coeff(2) == 1.0);
    CHECK(q.degree() == 2);
}

TEST_CASE("residual vanishes on an exact solution", "[lienard]") {
    const LienardEquation eq(Polynomial{0.0, 3.0}, Polynomial{0.0, 0.0, 0.0, 1.0});
    const SolutionCurve u1 = inverse_tau_curve();
    for (double tau : {0.5, 1.0, 2.0, 7.0})
        CHECK_THAT(residual(eq, u1, tau), WithinAbs(0.0, 1e-12));
}

TEST_CASE("residual detects a near-miss curve", "[lienard]") {
    // Shifting the exact solution by 0.1 leaves a residual of 0.031 at tau=1:
    // d2u + 3(u+0.1)du + (u+0.1)^3 - (d2u + 3u du + u^3) evaluated exactly.
    const LienardEquation eq(Polynomial{0.0, 3.0}, Polynomial{0.0, 0.0, 0.0, 1.0});
    const SolutionCurve off = inverse_tau_curve(0.1);
    CHECK_THAT(residual(eq, off, 1.0), WithinAbs(0.031, 1e-12));
    CHECK(std::fabs(residual(eq, off, 1.0)) > 1e-2);
}

TEST_CASE("max_residual sweeps, skips excluded points, and reports both", "[lienard]") {
    const LienardEquation eq(Polynomial{0.0, 3.0}, Polynomial{0.0, 0.0, 0.0, 1.0});
    const SolutionCurve u1 = inverse_tau_curve();

    SECTION("pole points are skipped and counted") {
        const std::vector<double> grid = {-1.0, -0.5, 0.0, 0.5, 1.0};
        const ResidualSweep sweep = max_residual(eq, u1, grid);
        CHECK(sweep.skipped == 1);
        CHECK_THAT(sweep.max_abs, WithinAbs(0.0, 1e-11));
    }
    SECTION("empty grid is a validation error") {
        CHECK_THROWS_AS(max_residual(eq, u1, {}), ValidationError);
    }
    SECTION("grid entirely inside exclusion zones throws EmptyEffectiveGridError") {
        CHECK_THROWS_AS(max_residual(eq, u1, {0.0, 1e-8, -1e-8}), EmptyEffectiveGridError);
    }
    SECTION("non-solution residual dominates the sweep") {
        const ResidualSweep sweep = max_residual(eq, inverse_tau_curve(0.1),
                                                 linspace(0.5, 2.0, 16));
        CHECK(sweep.max_abs > 1e-2);
        CHECK(sweep.skipped == 0);
    }
}

TEST_CASE("linspace hits both endpoints exactly", "[lienard]") {
    const std::vector<double> g = linspace(0.1, 10.0, 200);
    REQUIRE(g.size() == 200);
    CHECK(g.front() == 0.1);
    CHECK(g.back() == 10.0);
    CHECK(g[1] > g[0]);
    CHECK_THROWS_AS(linspace(0.0, 1.0, 1), ValidationError);

    const std::vector<double> two = linspace(-3.0, 4.0, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[0] == -3.0);
    CHECK(two[1] == 4.0);
}
