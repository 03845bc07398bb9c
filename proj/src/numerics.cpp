#include "fishtax/numerics.hpp"
#include "fishtax/errors.hpp"

#include <cmath>

namespace fishtax {

double bisect(const std::function<double(double)>& fn, double lo, double hi,
              double xtol, int max_iter) {
    double flo = fn(lo);
    double fhi = fn(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw InvalidParameter("bisect: endpoints do not bracket a root");
    for (int i = 0; i < max_iter && (hi - lo) > xtol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = fn(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

double simpson_rec(const std::function<double(double)>& fn, double a, double b,
                   double fa, double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = fn(lm);
    const double frm = fn(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double both = left + right;
    if (depth <= 0 || std::abs(both - whole) <= 15.0 * tol)
        return both + (both - whole) / 15.0;
    return simpson_rec(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
         + simpson_rec(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                        double tol, int max_depth) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = fn(a);
    const double fm = fn(m);
    const double fb = fn(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(fn, a, b, fa, fm, fb, whole, tol, max_depth);
}

double hermite(double x, double x0, double x1, double v0, double v1, double m0, double m1) {
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return v0 * (2.0 * t3 - 3.0 * t2 + 1.0)
         + m0 * h * (t3 - 2.0 * t2 + t)
         + v1 * (-2.0 * t3 + 3.0 * t2)
         + m1 * h * (t3 - t2);
}

double hermite_derivative(double x, double x0, double x1, double v0, double v1, double m0, double m1) {
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t;
    return (v0 * (6.0 * t2 - 6.0 * t) + v1 * (6.0 * t - 6.0 * t2)) / h
         + m0 * (3.0 * t2 - 4.0 * t + 1.0)
         + m1 * (3.0 * t2 - 2.0 * t);
}

} // namespace fishtax
