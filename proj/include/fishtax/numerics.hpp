#ifndef FISHTAX_NUMERICS_HPP
#define FISHTAX_NUMERICS_HPP

#include <functional>

namespace fishtax {

// Bisection for a continuous function with fn(lo) and fn(hi) of opposite sign.
// Converges to |hi-lo| <= xtol; returns the midpoint of the final bracket.
double bisect(const std::function<double(double)>& fn, double lo, double hi,
              double xtol = 1e-13, int max_iter = 200);

// Adaptive Simpson quadrature with absolute error target `tol`.
double adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                        double tol = 1e-10, int max_depth = 40);

// Cubic Hermite interpolation on [x0, x1] with values v0, v1 and slopes m0, m1.
double hermite(double x, double x0, double x1, double v0, double v1, double m0, double m1);
double hermite_derivative(double x, double x0, double x1, double v0, double v1, double m0, double m1);

} // namespace fishtax

#endif
