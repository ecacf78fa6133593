#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "riccfam/errors.hpp"

namespace riccfam {

struct RootScanOptions {
    int brackets = 1000;        ///< uniform scan resolution over [a, b]
    double tol = 1e-12;         ///< bisection half-width target
    double merge_radius = 1e-9; ///< roots closer than this collapse to one
};

/// Bisection on a bracket with a known sign change; returns the midpoint of
/// the final bracket.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-12) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    double fhi = f(hi);
    if (fhi == 0.0) return hi;
    if (!(flo < 0.0) == !(fhi < 0.0))
        throw ValidationError("bisect: endpoints do not bracket a sign change");
    for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Scan [a, b] with uniform brackets, bisect every sign change, merge near
/// duplicates.  Brackets with non-finite endpoint values (the objective may
/// itself have poles) are skipped; scan density is therefore a documented
/// limitation, not a guarantee of completeness.
inline std::vector<double> find_roots(const std::function<double(double)>& f, double a,
                                      double b, RootScanOptions opt = {}) {
    if (!(a < b)) throw ValidationError("find_roots requires a < b");
    if (opt.brackets < 1) throw ValidationError("find_roots requires brackets >= 1");

    std::vector<double> roots;
    const double h = (b - a) / opt.brackets;
    double x0 = a;
    double f0 = f(x0);
    for (int i = 1; i <= opt.brackets; ++i) {
        const double x1 = (i == opt.brackets) ? b : a + h * i;
        const double f1 = f(x1);
        if (std::isfinite(f0) && f0 == 0.0) {
            roots.push_back(x0);
        } else if (std::isfinite(f0) && std::isfinite(f1) && (f0 < 0.0) != (f1 < 0.0)) {
            roots.push_back(bisect(f, x0, x1, opt.tol));
        }
        x0 = x1;
        f0 = f1;
    }
    if (std::isfinite(f0) && f0 == 0.0) roots.push_back(b);

    std::sort(roots.begin(), roots.end());
    std::vector<double> merged;
    for (double r : roots) {
        if (merged.empty() || std::fabs(r - merged.back()) > opt.merge_radius)
            merged.push_back(r);
    }
    return merged;
}

} // namespace riccfam
