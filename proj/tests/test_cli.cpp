#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <riccfam/cli.hpp>

using namespace riccfam;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> lines;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

struct EnvGuard {
    explicit EnvGuard(const char* value) {
        if (value)
            ::setenv("RICCATI_FAM_TOL", value, 1);
        else
            ::unsetenv("RICCATI_FAM_TOL");
    }
    ~EnvGuard() { ::unsetenv("RICCATI_FAM_TOL"); }
};

} // namespace

TEST_CASE("usage errors exit with code 2", "[cli]") {
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"swizzle"}).code == 2);
    CHECK(run_cli({"factor"}).code == 2);                             // no model
    CHECK(run_cli({"factor", "--model", "nonsense"}).code == 2);      // bad model
    CHECK(run_cli({"sample", "--model", "emden"}).code == 2);         // no lambdas
    CHECK(run_cli({"sample", "--model", "emden", "--lambdas"}).code == 2);
    CHECK(run_cli({"sample", "--model", "emden", "--a1sqrtbeta", "-1", "--lambdas", "x"})
              .code == 2);
    CHECK(run_cli({"sample", "--model", "emden", "--a1sqrtbeta", "-1", "--lambdas", "1",
                   "--range", "5:1:100"})
              .code == 2); // start >= stop
    CHECK(run_cli({"sample", "--model", "emden", "--a1sqrtbeta", "-1", "--lambdas", "1",
                   "--range", "0:1:1"})
              .code == 2); // count < 2
    CHECK(run_cli({"verify", "--model", "emden", "--lambdas", "1"}).code == 2); // no branch
    CHECK(run_cli({"singular", "--model", "emden", "--a1sqrtbeta", "-1"}).code == 2);
    CHECK(run_cli({"verify", "--model", "custom", "--g", "0,3", "--lambdas", "1"}).code ==
          2); // missing --F
    CHECK(run_cli({"sample", "--model", "custom", "--g", "0,3", "--F", "1,0,0,1",
                   "--lambdas", "1"})
              .code == 2); // F(0) != 0
    CHECK(run_cli({"factor", "--model", "emden", "--alpha", "3", "--beta", "1",
                   "--frobnicate", "7"})
              .code == 2);
    const RunResult usage = run_cli({});
    CHECK(usage.err.find("usage:") != std::string::npos);
}

TEST_CASE("factor exit codes follow the branch count", "[cli]") {
    SECTION("two real branches: exit 0") {
        const RunResult r =
            run_cli({"factor", "--model", "emden", "--alpha", "3", "--beta", "1"});
        CHECK(r.code == 0);
        CHECK(r.out.find("branches found: 2") != std::string::npos);
        CHECK(r.out.find("a1        = -0.5") != std::string::npos);
        CHECK(r.out.find("a1        = -1") != std::string::npos);
    }
    SECTION("no real branch: exit 2") {
        const RunResult r =
            run_cli({"factor", "--model", "emden", "--alpha", "1", "--beta", "1"});
        CHECK(r.code == 2);
        CHECK_FALSE(r.err.empty());
    }
    SECTION("custom quadratic worked example: exit 0") {
        const RunResult r = run_cli(
            {"factor", "--model", "custom", "--g", "3,-4", "--F", "0,2,-2"});
        CHECK(r.code == 0);
        CHECK(r.out.find("branches found: 1") != std::string::npos);
        CHECK(r.out.find("g(u)      = 3 - 4u") != std::string::npos);
    }
    SECTION("custom with unmatched constant damping: exit 1") {
        const RunResult r = run_cli(
            {"factor", "--model", "custom", "--g", "5,3", "--F", "0,0,0,1"});
        CHECK(r.code == 1);
        CHECK(r.out.find("branches found: 0") != std::string::npos);
    }
    SECTION("lienard forward factorization reports the scale-invariant slope") {
        const RunResult r = run_cli({"factor", "--model", "lienard", "--A", "1", "--B",
                                     "2", "--C", "1", "--a1", "1"});
        CHECK(r.code == 0);
        CHECK(r.out.find("a1*sqrtC  = 1") != std::string::npos);
    }
}

TEST_CASE("sample emits deterministic CSV with pole gaps", "[cli]") {
    const std::vector<std::string> args = {"sample",    "--model",  "emden",
                                           "--a1sqrtbeta", "-1",    "--lambdas",
                                           "-0.2,1",    "--range",  "0.5:1.5:3"};
    const RunResult r1 = run_cli(args);
    REQUIRE(r1.code == 0);

    SECTION("byte-identical across runs") {
        const RunResult r2 = run_cli(args);
        CHECK(r1.out == r2.out);
    }
    SECTION("header and comments") {
        const std::vector<std::string> lines = split_lines(r1.out);
        REQUIRE(lines.size() >= 8);
        CHECK(lines[0] == "# model: emden");
        CHECK(lines[1].find("# params:") == 0);
        CHECK(lines[1].find("a1sqrtbeta=-1") != std::string::npos);
        CHECK(lines[2] == "# range: 0.5:1.5:3");
        CHECK(lines[3].find("# poles: lambda=-0.2: (none)") == 0);
        CHECK(lines[4].find("# poles: lambda=1: 1") == 0);
        CHECK(lines[5] == "tau,u_lambda_-0.2,u_lambda_1");
    }
    SECTION("pole row prints literal nan; others carry 17 significant digits") {
        // Closed form collapses to u = lambda/(lambda xi - 1) on this branch:
        // u(0.5; -0.2) = 2/11, u(1; 1) is the pole, u(1.5; 1) = 2.  Digits
        // below are the evaluation route 1/xi + 1/(lambda xi^2 - xi), which
        // differs from the collapsed form by one ulp at xi = 0.5.
        const std::vector<std::string> lines = split_lines(r1.out);
        REQUIRE(lines.size() == 9);
        CHECK(lines[6] == "0.5,0.18181818181818188,-2");
        CHECK(lines[7] == "1,0.16666666666666663,nan");
        CHECK(lines[8] == "1.5,0.15384615384615385,2");
    }
}

TEST_CASE("sample --out writes the same bytes to a file", "[cli]") {
    const std::string path = "cli_sample_out_test.csv";
    const std::vector<std::string> base = {"sample",    "--model",   "fisher", "--mu",
                                           "1",         "--lambdas", "-1",     "--range",
                                           "-1:1:5"};
    const RunResult direct = run_cli(base);
    REQUIRE(direct.code == 0);

    std::vector<std::string> with_out = base;
    with_out.push_back("--out");
    with_out.push_back(path);
    const RunResult filed = run_cli(with_out);
    REQUIRE(filed.code == 0);
    CHECK(filed.out.empty());

    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == direct.out);
    in.close();
    std::remove(path.c_str());
}

TEST_CASE("sample lambda=0 column is identically zero", "[cli]") {
    const RunResult r = run_cli({"sample", "--model", "fisher", "--mu", "1", "--lambdas",
                                 "0", "--range", "-5:5:11"});
    REQUIRE(r.code == 0);
    for (const std::string& line : split_lines(r.out)) {
        if (line.empty() || line[0] == '#' || line.rfind("tau,", 0) == 0) continue;
        const std::size_t comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        CHECK(line.substr(comma + 1) == "0");
    }
}

TEST_CASE("verify emits JSONL and exit codes reflect check outcomes", "[cli]") {
    SECTION("fisher figure member verifies clean") {
        const RunResult r = run_cli({"verify", "--model", "fisher", "--mu", "1",
                                     "--lambdas", "-1", "--range", "-3:3:61"});
        CHECK(r.code == 0);
        const std::vector<std::string> lines = split_lines(r.out);
        REQUIRE(lines.size() == 5); // 4 per-lambda checks + limit_suite
        for (const std::string& line : lines) {
            CHECK(line.find("\"passed\":true") != std::string::npos);
            CHECK(line.find("\"check_name\"") != std::string::npos);
            CHECK(line.find("\"threshold\"") != std::string::npos);
        }
        CHECK(lines[0].find("second_order_residual(lambda=-1)") != std::string::npos);
        CHECK(lines[1].find("riccati_residual(lambda=-1)") != std::string::npos);
        CHECK(lines[2].find("cross_check(lambda=-1)") != std::string::npos);
        CHECK(lines[3].find("equivalence_check(lambda=-1)") != std::string::npos);
        CHECK(lines[4].find("limit_suite") != std::string::npos);
    }
    SECTION("pole inside the range is reported and split around") {
        const RunResult r = run_cli({"verify", "--model", "emden", "--a1sqrtbeta", "-1",
                                     "--lambdas", "1", "--range", "0.1:10:100"});
        CHECK(r.code == 0);
        CHECK(r.out.find("\"pole_list\":[1.0]") != std::string::npos);
    }
    SECTION("an unmeetable threshold flips the exit code to 1") {
        EnvGuard env("1e-30");
        const RunResult r = run_cli({"verify", "--model", "fisher", "--mu", "1",
                                     "--lambdas", "-1", "--range", "-3:3:61"});
        CHECK(r.code == 1);
        CHECK(r.out.find("\"passed\":false") != std::string::npos);
    }
    SECTION("custom cubic model verifies through the inverse factorization") {
        const RunResult r = run_cli({"verify", "--model", "custom", "--g", "0,3", "--F",
                                     "0,0,0,1", "--lambdas", "-1", "--range",
                                     "0.5:4:60"});
        CHECK(r.code == 0);
        for (const std::string& line : split_lines(r.out))
            CHECK(line.find("\"passed\":true") != std::string::npos);
    }
}

TEST_CASE("singular prints a fixed-point pole table", "[cli]") {
    SECTION("emden lambda=1 pole at xi=1") {
        const RunResult r = run_cli({"singular", "--model", "emden", "--a1sqrtbeta",
                                     "-1", "--lambda", "1", "--range", "0.1:10:200"});
        CHECK(r.code == 0);
        const std::vector<std::string> lines = split_lines(r.out);
        REQUIRE(lines.size() == 1);
        CHECK(lines[0] == "1.000000000000");
    }
    SECTION("fisher lambda=0.5 pole at xi=0") {
        const RunResult r = run_cli(
            {"singular", "--model", "fisher", "--mu", "1", "--lambda", "0.5"});
        CHECK(r.code == 0);
        const std::vector<std::string> lines = split_lines(r.out);
        REQUIRE(lines.size() == 1);
        CHECK(lines[0] == "0.000000000000");
    }
    SECTION("no singular point in range: empty table, exit 0") {
        const RunResult r = run_cli({"singular", "--model", "emden", "--a1sqrtbeta",
                                     "-1", "--lambda", "-1", "--range", "0.1:10:200"});
        CHECK(r.code == 0);
        CHECK(r.out.empty());
    }
    SECTION("custom model locates anchored-labeling poles") {
        // Anchored at the pole-free grid point nearest the midpoint, the
        // locus spans roughly (-0.5, 4) over this range, so lambda = 1 has
        // exactly one singular point inside it.
        const RunResult r = run_cli({"singular", "--model", "custom", "--g", "0,3",
                                     "--F", "0,0,0,1", "--lambda", "1", "--range",
                                     "0.5:4:60"});
        CHECK(r.code == 0);
        const std::vector<std::string> lines = split_lines(r.out);
        REQUIRE(lines.size() == 1);
        const double root = std::stod(lines[0]);
        CHECK(root > 0.5);
        CHECK(root < 4.0);
    }
}

TEST_CASE("factor output is itself deterministic", "[cli]") {
    const std::vector<std::string> args = {"factor", "--model", "lienard", "--A", "1",
                                           "--B",    "3",       "--C",     "1", "--a1",
                                           "0.5"};
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}
