#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include <riccfam/riccfam.hpp>

using namespace riccfam;

TEST_CASE("umbrella header instantiates across modules", "[smoke]") {
    const EmdenParams p(3.0, 1.0, Branch::MinusRoot, -0.2, 0.0);
    const SolutionCurve fam = emden_family(p);
    REQUIRE(std::isfinite(fam.value(1.0)));

    const LienardEquation eq = emden_equation(3.0, 1.0);
    const RiccatiODE ode = reduce(emden_factorization(3.0, 1.0, Branch::MinusRoot));
    REQUIRE(ode.c2 == 0.0);

    std::ostringstream out, err;
    const int rc = cli::run({"factor", "--model", "emden", "--alpha", "3", "--beta", "1"},
                            out, err);
    REQUIRE(rc == 0);
}
