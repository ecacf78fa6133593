#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "riccfam/errors.hpp"
#include "riccfam/families.hpp"
#include "riccfam/verify.hpp"

namespace riccfam::cli {

// Exit codes (stable scripting contract).
inline constexpr int exit_ok = 0;
inline constexpr int exit_check_failed = 1;
inline constexpr int exit_usage = 2;

enum class Model { Emden, Fisher, Lienard, Custom };

struct Range {
    double start = 0.0;
    double stop = 1.0;
    int count = 2;
};

/// Parsed command line for one subcommand invocation.
struct RunSpec {
    std::string command;
    std::optional<Model> model;
    std::map<std::string, double> params; // alpha beta mu A B C a1 a1sqrtbeta K
    std::optional<Branch> branch;
    std::optional<Sign> sign;
    std::vector<double> lambdas;
    std::optional<double> single_lambda;
    std::optional<Range> range;
    double tau0 = 0.0;
    std::vector<double> g_coeffs;
    std::vector<double> F_coeffs;
    std::string out_path; // empty: stdout
};

// ---------------------------------------------------------------------------
// Deterministic, locale-independent formatting helpers.
// ---------------------------------------------------------------------------

inline std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmtg(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

inline std::string fmt12f(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12f", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Argument parsing.
// ---------------------------------------------------------------------------

namespace detail {

inline bool parse_double(std::string_view s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

inline bool parse_double_list(std::string_view s, std::vector<double>& out) {
    out.clear();
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t comma = s.find(',', pos);
        const std::string_view tok =
            s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        double v;
        if (!parse_double(tok, v)) return false;
        out.push_back(v);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return !out.empty();
}

inline bool parse_range(std::string_view s, Range& r) {
    const std::size_t p1 = s.find(':');
    if (p1 == std::string_view::npos) return false;
    const std::size_t p2 = s.find(':', p1 + 1);
    if (p2 == std::string_view::npos) return false;
    double cnt;
    if (!parse_double(s.substr(0, p1), r.start) ||
        !parse_double(s.substr(p1 + 1, p2 - p1 - 1), r.stop) ||
        !parse_double(s.substr(p2 + 1), cnt))
        return false;
    if (cnt < 2.0 || cnt != std::floor(cnt) || cnt > 1e7) return false;
    r.count = static_cast<int>(cnt);
    return r.start < r.stop;
}

} // namespace detail

inline void print_usage(std::ostream& err) {
    err << "usage: riccfam <factor|sample|verify|singular> --model <emden|fisher|lienard|custom> [options]\n"
           "\n"
           "models and their parameters:\n"
           "  emden    --alpha A --beta B --branch plus|minus   (or --a1sqrtbeta S)\n"
           "  fisher   --mu M [--sign plus|minus]               (default sign: plus)\n"
           "  lienard  --A a --B b --C c --a1 s\n"
           "  custom   --g c0,c1 --F 0,f1,f2[,f3] [--K k] [--tau0 t]\n"
           "\n"
           "common options:\n"
           "  --lambdas l1,l2,...   family parameters (sample, verify)\n"
           "  --lambda l            single family parameter (singular)\n"
           "  --range a:b:n         evaluation grid, n >= 2 points (model-specific default)\n"
           "  --tau0 t              reference point (default 0)\n"
           "  --out path            write output to a file instead of stdout\n"
           "\n"
           "environment: RICCATI_FAM_TOL overrides the default verification threshold.\n"
           "exit codes: 0 ok, 1 verification failure, 2 usage error.\n";
}

/// Parse argv-style tokens (without the program name) into a RunSpec.
/// Returns std::nullopt after printing a diagnostic on failure.
inline std::optional<RunSpec> parse_args(const std::vector<std::string>& args,
                                         std::ostream& err) {
    if (args.empty()) {
        print_usage(err);
        return std::nullopt;
    }
    RunSpec spec;
    spec.command = args[0];
    if (spec.command != "factor" && spec.command != "sample" && spec.command != "verify" &&
        spec.command != "singular") {
        err << "unknown command '" << spec.command << "'\n";
        print_usage(err);
        return std::nullopt;
    }

    auto fail = [&err](const std::string& msg) {
        err << "argument error: " << msg << "\n";
        return std::nullopt;
    };

    for (std::size_t i = 1; i < args.size(); ++i) {
        std::string key = args[i];
        std::string value;
        if (key.rfind("--", 0) != 0) return fail("expected --option, got '" + key + "'");
        const std::size_t eq = key.find('=');
        if (eq != std::string::npos) {
            value = key.substr(eq + 1);
            key = key.substr(0, eq);
        } else {
            if (i + 1 >= args.size()) return fail("missing value for '" + key + "'");
            value = args[++i];
        }
        const std::string name = key.substr(2);

        if (name == "model") {
            if (value == "emden")
                spec.model = Model::Emden;
            else if (value == "fisher")
                spec.model = Model::Fisher;
            else if (value == "lienard")
                spec.model = Model::Lienard;
            else if (value == "custom")
                spec.model = Model::Custom;
            else
                return fail("unknown model '" + value + "'");
        } else if (name == "branch") {
            if (value == "plus")
                spec.branch = Branch::PlusRoot;
            else if (value == "minus")
                spec.branch = Branch::MinusRoot;
            else
                return fail("--branch expects plus or minus");
        } else if (name == "sign") {
            if (value == "plus")
                spec.sign = Sign::Plus;
            else if (value == "minus")
                spec.sign = Sign::Minus;
            else
                return fail("--sign expects plus or minus");
        } else if (name == "lambdas") {
            if (!detail::parse_double_list(value, spec.lambdas))
                return fail("--lambdas expects a comma-separated list of reals");
        } else if (name == "lambda") {
            double v;
            if (!detail::parse_double(value, v)) return fail("--lambda expects a real");
            spec.single_lambda = v;
        } else if (name == "range") {
            Range r;
            if (!detail::parse_range(value, r))
                return fail("--range expects start:stop:count with start < stop, count >= 2");
            spec.range = r;
        } else if (name == "tau0") {
            if (!detail::parse_double(value, spec.tau0)) return fail("--tau0 expects a real");
        } else if (name == "g") {
            if (!detail::parse_double_list(value, spec.g_coeffs))
                return fail("--g expects a comma-separated coefficient list");
        } else if (name == "F") {
            if (!detail::parse_double_list(value, spec.F_coeffs))
                return fail("--F expects a comma-separated coefficient list");
        } else if (name == "out") {
            spec.out_path = value;
        } else if (name == "alpha" || name == "beta" || name == "mu" || name == "A" ||
                   name == "B" || name == "C" || name == "a1" || name == "a1sqrtbeta" ||
                   name == "K") {
            double v;
            if (!detail::parse_double(value, v)) return fail("--" + name + " expects a real");
            spec.params[name] = v;
        } else {
            return fail("unknown option '--" + name + "'");
        }
    }

    if (!spec.model) {
        err << "argument error: --model is required\n";
        return std::nullopt;
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Model resolution for sample / verify / singular.
// ---------------------------------------------------------------------------

/// Everything the sampling/verification commands need about one model: the
/// equation, the reduced Riccati data, the seed, a lambda -> curve builder
/// (members carry their in-range poles), the singular locus, and the lambda
/// of the identically-null member.
struct ResolvedModel {
    LienardEquation eq;
    RiccatiODE ode;
    SolutionCurve u1;
    std::function<SolutionCurve(double)> family;
    std::function<double(double)> lambda_s;
    double null_lambda = 0.0;
    std::string model_name;
    std::string params_line;
};

inline Range default_range(Model m) {
    switch (m) {
    case Model::Emden: return {0.1, 10.0, 200};
    case Model::Fisher: return {-5.0, 5.0, 201};
    case Model::Lienard:
    case Model::Custom: return {0.1, 5.0, 200};
    }
    return {0.1, 5.0, 200};
}

namespace detail {

inline bool has(const RunSpec& s, const char* key) { return s.params.count(key) != 0; }
inline double get(const RunSpec& s, const char* key) { return s.params.at(key); }

inline std::optional<ResolvedModel> resolve_emden(const RunSpec& spec, std::ostream& err) {
    EmdenParams base(3.0, 1.0, Branch::MinusRoot, 0.0, spec.tau0); // overwritten below
    if (has(spec, "a1sqrtbeta")) {
        base = emden_from_slope(get(spec, "a1sqrtbeta"), 0.0, spec.tau0);
    } else if (has(spec, "alpha") && has(spec, "beta") && spec.branch) {
        base = EmdenParams(get(spec, "alpha"), get(spec, "beta"), *spec.branch, 0.0, spec.tau0);
    } else {
        err << "emden requires --a1sqrtbeta or (--alpha, --beta, --branch)\n";
        return std::nullopt;
    }
    const Factorization f = emden_factorization(base.alpha, base.beta, base.branch);
    char params[160];
    std::snprintf(params, sizeof(params), "alpha=%g beta=%g branch=%s a1sqrtbeta=%g tau0=%g",
                  base.alpha, base.beta, base.branch == Branch::PlusRoot ? "plus" : "minus",
                  base.a1_sqrt_beta(), base.tau0);
    return ResolvedModel{
        emden_equation(base.alpha, base.beta),
        reduce(f),
        emden_u1(base),
        [base](double lam) {
            EmdenParams p = base;
            p.lambda = lam;
            return emden_family(p);
        },
        [base](double tau) { return emden_lambda_s(base, tau); },
        0.0,
        "emden",
        params,
    };
}

inline std::optional<ResolvedModel> resolve_fisher(const RunSpec& spec, std::ostream& err) {
    if (!has(spec, "mu")) {
        err << "fisher requires --mu\n";
        return std::nullopt;
    }
    const Sign sign = spec.sign.value_or(Sign::Plus);
    FisherParams base(get(spec, "mu"), sign, 0.0, spec.tau0);
    const Factorization f = fisher_factorization(base.mu);
    char params[160];
    std::snprintf(params, sizeof(params), "mu=%g nu=%g sign=%s tau0=%g", base.mu, base.nu(),
                  sign == Sign::Plus ? "plus" : "minus", base.tau0);
    return ResolvedModel{
        fisher_equation(base.mu),
        reduce(f),
        fisher_u1(base),
        [base](double lam) {
            FisherParams p = base;
            p.lambda = lam;
            return fisher_family(p);
        },
        [base](double tau) { return fisher_lambda_s(base, tau); },
        0.0,
        "fisher",
        params,
    };
}

inline std::optional<ResolvedModel> resolve_lienard(const RunSpec& spec, std::ostream& err) {
    if (!(has(spec, "A") && has(spec, "B") && has(spec, "C") && has(spec, "a1"))) {
        err << "lienard requires --A, --B, --C and --a1\n";
        return std::nullopt;
    }
    CubicLienardParams base(get(spec, "A"), get(spec, "B"), get(spec, "C"), get(spec, "a1"),
                            0.0, spec.tau0);
    const Factorization f = lienard_factorization(base.A, base.B, base.C, base.a1);
    char params[160];
    std::snprintf(params, sizeof(params), "A=%g B=%g C=%g a1=%g delta=%g tau0=%g", base.A,
                  base.B, base.C, base.a1, base.delta(), base.tau0);
    return ResolvedModel{
        lienard_equation(base.A, base.B, base.C, base.a1),
        reduce(f),
        lienard_u1(base),
        [base](double lam) {
            CubicLienardParams p = base;
            p.lambda = lam;
            return lienard_family(p);
        },
        [base](double tau) { return lienard_lambda_s(base, tau); },
        0.0,
        "lienard",
        params,
    };
}

/// Custom models factorize through the inverse engines and parametrize the
/// family by the integrals anchored at a pole-free grid point nearest the
/// range midpoint (the preset closed forms use their own textbook labeling;
/// for custom equations only the anchored labeling is well defined).
inline std::optional<ResolvedModel> resolve_custom(const RunSpec& spec, const Range& range,
                                                   std::ostream& err) {
    if (spec.g_coeffs.empty() || spec.F_coeffs.empty()) {
        err << "custom requires --g and --F coefficient lists\n";
        return std::nullopt;
    }
    if (spec.g_coeffs.size() > 2) {
        err << "custom --g supports degree <= 1 (c0,c1)\n";
        return std::nullopt;
    }
    if (spec.F_coeffs.size() > 4) {
        err << "custom --F supports degree <= 3\n";
        return std::nullopt;
    }
    const Polynomial g(spec.g_coeffs);
    const Polynomial F(spec.F_coeffs);
    if (F.coeff(0) != 0.0) {
        err << "custom --F must have zero constant coefficient (F(0) = 0)\n";
        return std::nullopt;
    }
    const double g0 = g.coeff(0), g1 = g.coeff(1);
    std::vector<Factorization> facts;
    if (F.coeff(3) != 0.0)
        facts = factor_cubic_inverse(g0, g1, F.coeff(1), F.coeff(2), F.coeff(3));
    else
        facts = factor_quadratic_inverse(g0, g1, F.coeff(1), F.coeff(2));
    if (facts.empty()) {
        err << "no factorization reproduces the requested g(u)\n";
        return std::nullopt;
    }
    const Factorization f = facts.front();
    const RiccatiODE ode = reduce(f);
    const double K = has(spec, "K") ? get(spec, "K") : 1.0;
    SolutionCurve u1 = particular_solution(ode, spec.tau0, K);

    // Anchor the integrals at the pole-free grid point nearest the midpoint.
    const std::vector<double> grid = linspace(range.start, range.stop, range.count);
    const double mid = 0.5 * (range.start + range.stop);
    double anchor = std::numeric_limits<double>::quiet_NaN();
    double best = std::numeric_limits<double>::infinity();
    for (double tau : grid) {
        if (u1.excluded(tau)) continue;
        const double d = std::fabs(tau - mid);
        if (d < best) {
            best = d;
            anchor = tau;
        }
    }
    if (!std::isfinite(anchor)) {
        err << "custom seed has no pole-free grid point to anchor at\n";
        return std::nullopt;
    }

    auto integrals = std::make_shared<RiccatiIntegrals>(ode, u1, anchor);
    Interval span{range.start, range.stop};
    auto family = [ode, u1, anchor, span](double lam) {
        RiccatiFamilyMember m = general_solution(ode, u1, lam, anchor);
        const SingularLocus locus = singular_locus(ode, u1, lam, span, anchor);
        return m.curve.with_poles(locus.pole_positions);
    };
    char params[200];
    std::snprintf(params, sizeof(params),
                  "g=%s F=%s a1=%g K=%g tau0=%g anchor=%g (family anchored at the range midpoint)",
                  g.str().c_str(), F.str().c_str(), f.a1, K, spec.tau0, anchor);
    return ResolvedModel{
        LienardEquation(g, F),
        ode,
        u1,
        family,
        [integrals](double tau) { return integrals->lambda_s(tau); },
        -1.0 / u1.value(anchor),
        "custom",
        params,
    };
}

inline std::optional<ResolvedModel> resolve(const RunSpec& spec, const Range& range,
                                            std::ostream& err) {
    switch (*spec.model) {
    case Model::Emden: return resolve_emden(spec, err);
    case Model::Fisher: return resolve_fisher(spec, err);
    case Model::Lienard: return resolve_lienard(spec, err);
    case Model::Custom: return resolve_custom(spec, range, err);
    }
    return std::nullopt;
}

inline std::vector<double> poles_in_range(const std::vector<double>& poles, const Range& r) {
    std::vector<double> out;
    for (double p : poles)
        if (p >= r.start && p <= r.stop) out.push_back(p);
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Subcommands.
// ---------------------------------------------------------------------------

inline int cmd_factor(const RunSpec& spec, std::ostream& out, std::ostream& err) {
    std::optional<LienardEquation> eq;
    std::vector<Factorization> facts;
    try {
        switch (*spec.model) {
        case Model::Emden: {
            if (!(detail::has(spec, "alpha") && detail::has(spec, "beta"))) {
                err << "factor --model emden requires --alpha and --beta\n";
                return exit_usage;
            }
            const double alpha = detail::get(spec, "alpha");
            const double beta = detail::get(spec, "beta");
            if (!(beta > 0.0)) {
                err << "emden requires beta > 0\n";
                return exit_usage;
            }
            eq = emden_equation(alpha, beta);
            facts = factor_cubic_inverse(0.0, alpha, 0.0, 0.0, beta);
            break;
        }
        case Model::Fisher: {
            if (!detail::has(spec, "mu")) {
                err << "factor --model fisher requires --mu\n";
                return exit_usage;
            }
            const double mu = detail::get(spec, "mu");
            eq = fisher_equation(mu);
            facts.push_back(fisher_factorization(mu));
            break;
        }
        case Model::Lienard: {
            if (!(detail::has(spec, "A") && detail::has(spec, "B") && detail::has(spec, "C") &&
                  detail::has(spec, "a1"))) {
                err << "factor --model lienard requires --A, --B, --C and --a1\n";
                return exit_usage;
            }
            const double A = detail::get(spec, "A"), B = detail::get(spec, "B"),
                         C = detail::get(spec, "C"), a1 = detail::get(spec, "a1");
            eq = lienard_equation(A, B, C, a1);
            facts.push_back(lienard_factorization(A, B, C, a1));
            break;
        }
        case Model::Custom: {
            if (spec.g_coeffs.empty() || spec.F_coeffs.empty()) {
                err << "factor --model custom requires --g and --F\n";
                return exit_usage;
            }
            const Polynomial g(spec.g_coeffs), F(spec.F_coeffs);
            if (F.coeff(0) != 0.0) {
                err << "custom --F must have zero constant coefficient\n";
                return exit_usage;
            }
            eq = LienardEquation(g, F);
            if (F.coeff(3) != 0.0)
                facts = factor_cubic_inverse(g.coeff(0), g.coeff(1), F.coeff(1), F.coeff(2),
                                             F.coeff(3));
            else
                facts = factor_quadratic_inverse(g.coeff(0), g.coeff(1), F.coeff(1), F.coeff(2));
            break;
        }
        }
    } catch (const Error& e) {
        err << "factorization failed: " << e.what() << "\n";
        return exit_usage;
    }

    out << "equation: u'' + (" << eq->g().str() << ") u' + (" << eq->F().str() << ") = 0\n";
    out << "branches found: " << facts.size() << "\n";
    for (const Factorization& f : facts) {
        out << "[branch " << (f.branch == Branch::PlusRoot ? "+" : "-") << "]\n";
        if (std::isfinite(f.a1)) out << "  a1        = " << fmt17(f.a1) << "\n";
        if (std::isfinite(f.a1_scaled))
            out << "  a1*sqrtC  = " << fmt17(f.a1_scaled) << "\n";
        if (std::isfinite(f.delta)) out << "  delta     = " << fmt17(f.delta) << "\n";
        out << "  phi1(u)   = " << f.phi1.poly().str() << "\n";
        out << "  phi2(u)   = " << f.phi2.str() << "\n";
        out << "  g(u)      = " << f.induced_g().str() << "\n";
        const FactorizationCheck chk = check_factorization(*eq, f);
        out << "  g mismatch   = " << fmt17(chk.g_mismatch) << "\n";
        out << "  F/u mismatch = " << fmt17(chk.F_mismatch) << "\n";
    }
    return facts.empty() ? exit_check_failed : exit_ok;
}

inline int cmd_sample(const RunSpec& spec, std::ostream& out, std::ostream& err) {
    if (spec.lambdas.empty()) {
        err << "sample requires --lambdas\n";
        return exit_usage;
    }
    const Range range = spec.range.value_or(default_range(*spec.model));
    std::optional<ResolvedModel> model;
    try {
        model = detail::resolve(spec, range, err);
    } catch (const Error& e) {
        err << "invalid parameters: " << e.what() << "\n";
        return exit_usage;
    }
    if (!model) return exit_usage;

    std::vector<SolutionCurve> curves;
    try {
        for (double lam : spec.lambdas) curves.push_back(model->family(lam));
    } catch (const Error& e) {
        err << "invalid parameters: " << e.what() << "\n";
        return exit_usage;
    }

    out << "# model: " << model->model_name << "\n";
    out << "# params: " << model->params_line << "\n";
    out << "# range: " << fmtg(range.start) << ":" << fmtg(range.stop) << ":" << range.count
        << "\n";
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const std::vector<double> poles = detail::poles_in_range(curves[i].poles(), range);
        out << "# poles: lambda=" << fmtg(spec.lambdas[i]) << ":";
        if (poles.empty()) out << " (none)";
        for (double p : poles) out << " " << fmt17(p);
        out << "\n";
    }
    out << "tau";
    for (double lam : spec.lambdas) out << ",u_lambda_" << fmtg(lam);
    out << "\n";

    for (double tau : linspace(range.start, range.stop, range.count)) {
        out << fmt17(tau);
        for (const SolutionCurve& c : curves) {
            double v = std::numeric_limits<double>::quiet_NaN();
            if (!c.excluded(tau)) {
                const double cand = c.value(tau);
                if (std::isfinite(cand)) v = cand;
            }
            out << "," << fmt17(v);
        }
        out << "\n";
    }
    return exit_ok;
}

inline int cmd_verify(const RunSpec& spec, std::ostream& out, std::ostream& err) {
    if (spec.lambdas.empty()) {
        err << "verify requires --lambdas\n";
        return exit_usage;
    }
    const Range range = spec.range.value_or(default_range(*spec.model));
    std::optional<ResolvedModel> model;
    try {
        model = detail::resolve(spec, range, err);
    } catch (const Error& e) {
        err << "invalid parameters: " << e.what() << "\n";
        return exit_usage;
    }
    if (!model) return exit_usage;

    const std::vector<double> grid = linspace(range.start, range.stop, range.count);
    const Interval span{range.start, range.stop};
    const double tol_residual = verification_tolerance(1e-8);
    bool all_passed = true;
    auto emit = [&](const VerificationReport& r) {
        out << r.to_json().dump() << "\n";
        if (!r.passed) all_passed = false;
    };
    char label[96];

    std::vector<SolutionCurve> members;
    for (double lam : spec.lambdas) {
        try {
            members.push_back(model->family(lam));
        } catch (const Error& e) {
            err << "invalid parameters: " << e.what() << "\n";
            return exit_usage;
        }
    }

    for (std::size_t i = 0; i < members.size(); ++i) {
        const double lam = spec.lambdas[i];
        const SolutionCurve& curve = members[i];
        const std::vector<double> poles = detail::poles_in_range(curve.poles(), range);

        // Second-order defect against the full equation.
        {
            VerificationReport r;
            std::snprintf(label, sizeof(label), "second_order_residual(lambda=%g)", lam);
            r.check_name = label;
            r.threshold = tol_residual;
            r.pole_list = poles;
            try {
                const ResidualSweep sweep = max_residual(model->eq, curve, grid);
                r.residual_max = sweep.max_abs;
                r.skipped_points = sweep.skipped;
                r.passed = r.residual_max <= r.threshold;
            } catch (const Error& e) {
                err << r.check_name << ": " << e.what() << "\n";
                r.passed = false;
            }
            emit(r);
        }

        // First-order defect against the reduced Riccati equation.
        {
            VerificationReport r;
            std::snprintf(label, sizeof(label), "riccati_residual(lambda=%g)", lam);
            r.check_name = label;
            r.threshold = tol_residual;
            r.pole_list = poles;
            try {
                const ResidualSweep sweep = max_riccati_residual(model->ode, curve, grid);
                r.residual_max = sweep.max_abs;
                r.skipped_points = sweep.skipped;
                r.passed = r.residual_max <= r.threshold;
            } catch (const Error& e) {
                err << r.check_name << ": " << e.what() << "\n";
                r.passed = false;
            }
            emit(r);
        }

        // Independent integration cross-check, split at in-range poles.
        {
            VerificationReport r;
            std::snprintf(label, sizeof(label), "cross_check(lambda=%g)", lam);
            r.check_name = label;
            r.threshold = verification_tolerance(1e-6);
            r.pole_list = poles;
            const double margin = 0.02 * (range.stop - range.start);
            std::vector<std::pair<double, double>> pieces;
            double lo = range.start;
            for (double p : poles) {
                if (p - margin > lo) pieces.emplace_back(lo, p - margin);
                lo = p + margin;
            }
            if (range.stop > lo) pieces.emplace_back(lo, range.stop);
            r.passed = true;
            for (const auto& [a, b] : pieces) {
                if (b - a < 1e-3 * (range.stop - range.start)) continue;
                try {
                    const VerificationReport piece =
                        cross_check(curve, model->eq, Interval{a, b}, {}, r.threshold);
                    r.max_deviation = std::max(r.max_deviation, piece.max_deviation);
                    r.skipped_points += piece.skipped_points;
                    if (!piece.passed) r.passed = false;
                } catch (const Error& e) {
                    err << r.check_name << ": " << e.what() << "\n";
                    r.passed = false;
                }
            }
            emit(r);
        }

        // Oracle equivalence (skipped for the identically-null member).
        if (lam != model->null_lambda) {
            VerificationReport r;
            std::snprintf(label, sizeof(label), "equivalence_check(lambda=%g)", lam);
            r.check_name = label;
            try {
                // Anchor at the pole-free grid point nearest the midpoint.
                const double mid = 0.5 * (range.start + range.stop);
                double anchor = std::numeric_limits<double>::quiet_NaN();
                double best = std::numeric_limits<double>::infinity();
                for (double tau : grid) {
                    if (curve.excluded(tau)) continue;
                    const double v = curve.value(tau);
                    if (!std::isfinite(v) || v == 0.0) continue;
                    const double d = std::fabs(tau - mid);
                    if (d < best) {
                        best = d;
                        anchor = tau;
                    }
                }
                if (!std::isfinite(anchor))
                    throw UnmatchableAnchorError("no usable anchor point on the grid");
                r = equivalence_check(model->ode, curve, span, anchor);
                std::snprintf(label, sizeof(label), "equivalence_check(lambda=%g)", lam);
                r.check_name = label;
            } catch (const Error& e) {
                err << r.check_name << ": " << e.what() << "\n";
                r.passed = false;
            }
            emit(r);
        }
    }

    // Limit suite over the requested ladder.
    {
        VerificationReport r;
        r.check_name = "limit_suite";
        try {
            // Probes: pole-free (for every requested member and the decay
            // members) grid points spread across the range.
            std::vector<SolutionCurve> all = members;
            all.push_back(model->family(model->null_lambda));
            all.push_back(model->family(1e3));
            all.push_back(model->family(2e3));
            std::vector<double> candidates;
            for (double tau : grid) {
                bool ok = !model->u1.excluded(tau);
                for (const SolutionCurve& c : all)
                    if (!ok || c.excluded(tau)) ok = false;
                if (ok) candidates.push_back(tau);
            }
            if (candidates.size() < 2)
                throw EmptyEffectiveGridError("limit_suite: no usable probe points");
            std::vector<double> probes;
            for (int k = 1; k <= 5; ++k)
                probes.push_back(candidates[(candidates.size() - 1) * k / 6]);
            r = limit_suite(model->family, model->u1, probes, spec.lambdas,
                            model->null_lambda);
        } catch (const Error& e) {
            err << "limit_suite: " << e.what() << "\n";
            r.passed = false;
        }
        emit(r);
    }

    return all_passed ? exit_ok : exit_check_failed;
}

inline int cmd_singular(const RunSpec& spec, std::ostream& out, std::ostream& err) {
    if (!spec.single_lambda) {
        err << "singular requires --lambda\n";
        return exit_usage;
    }
    const Range range = spec.range.value_or(default_range(*spec.model));
    std::optional<ResolvedModel> model;
    try {
        model = detail::resolve(spec, range, err);
    } catch (const Error& e) {
        err << "invalid parameters: " << e.what() << "\n";
        return exit_usage;
    }
    if (!model) return exit_usage;

    const double lam = *spec.single_lambda;
    auto objective = [&](double tau) -> double {
        try {
            return lam - model->lambda_s(tau);
        } catch (const Error&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    std::vector<double> roots = find_roots(objective, range.start, range.stop);
    for (double root : roots) {
        const double defect = objective(root);
        if (std::isfinite(defect) && std::fabs(defect) < 1e-10) out << fmt12f(root) << "\n";
    }
    return exit_ok;
}

/// Entry point shared by the binary and the in-process tests.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const std::optional<RunSpec> spec = parse_args(args, err);
    if (!spec) return exit_usage;

    std::ofstream file;
    std::ostream* sink = &out;
    if (!spec->out_path.empty()) {
        file.open(spec->out_path);
        if (!file) {
            err << "cannot open output file '" << spec->out_path << "'\n";
            return exit_usage;
        }
        sink = &file;
    }

    try {
        if (spec->command == "factor") return cmd_factor(*spec, *sink, err);
        if (spec->command == "sample") return cmd_sample(*spec, *sink, err);
        if (spec->command == "verify") return cmd_verify(*spec, *sink, err);
        if (spec->command == "singular") return cmd_singular(*spec, *sink, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    err << "unreachable command dispatch\n";
    return exit_usage;
}

} // namespace riccfam::cli
