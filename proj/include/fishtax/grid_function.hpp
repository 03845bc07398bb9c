#ifndef FISHTAX_GRID_FUNCTION_HPP
#define FISHTAX_GRID_FUNCTION_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace fishtax {

// Slope interval [lower, upper] of a one-sided derivative pair. For a concave
// piecewise-linear function at an interior node this is [right slope, left slope].
struct SuperdiffInterval {
    double lower = 0.0;
    double upper = 0.0;

    double mid() const { return 0.5 * (lower + upper); }
    double width() const { return upper - lower; }
    bool is_point(double tol = 1e-9) const { return width() <= tol * (1.0 + 0.5 * (std::abs(lower) + std::abs(upper))); }
};

// Scalar function on a uniform grid over [lo, hi]; the piecewise-linear
// interpolant of the stored node values is the defining semantics.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(double lo, double hi, std::vector<double> values);

    static GridFunction sample(double lo, double hi, std::size_t n_nodes,
                               const std::function<double(double)>& fn);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    std::size_t size() const { return v_.size(); }
    double spacing() const { return (hi_ - lo_) / static_cast<double>(v_.size() - 1); }
    double node(std::size_t i) const { return lo_ + spacing() * static_cast<double>(i); }
    double value(std::size_t i) const { return v_[i]; }
    const std::vector<double>& values() const { return v_; }

    bool contains(double q, double tol = 1e-9) const;

    // Piecewise-linear evaluation. Arguments within a relative tolerance of the
    // domain are clamped; anything farther out throws PointOutsideDomain.
    double operator()(double q) const;

    double slope(std::size_t segment) const;
    double max_value() const;
    std::size_t least_max_index() const;

    SuperdiffInterval superdifferential(double q) const;

private:
    double lo_ = 0.0;
    double hi_ = 1.0;
    std::vector<double> v_;
};

// GridFunction whose successive chord slopes are non-increasing.
class ConcaveGridFunction {
public:
    explicit ConcaveGridFunction(GridFunction g, double rel_tol = 1e-10);

    const GridFunction& grid() const { return g_; }
    double operator()(double q) const { return g_(q); }
    double lo() const { return g_.lo(); }
    double hi() const { return g_.hi(); }
    std::size_t size() const { return g_.size(); }
    double node(std::size_t i) const { return g_.node(i); }
    double value(std::size_t i) const { return g_.value(i); }
    SuperdiffInterval superdifferential(double q) const { return g_.superdifferential(q); }

private:
    GridFunction g_;
};

// GridFunction whose successive chord slopes are non-decreasing.
class ConvexGridFunction {
public:
    explicit ConvexGridFunction(GridFunction g, double rel_tol = 1e-10);

    const GridFunction& grid() const { return g_; }
    double operator()(double z) const { return g_(z); }
    double lo() const { return g_.lo(); }
    double hi() const { return g_.hi(); }
    std::size_t size() const { return g_.size(); }
    double node(std::size_t i) const { return g_.node(i); }
    double value(std::size_t i) const { return g_.value(i); }

private:
    GridFunction g_;
};

} // namespace fishtax

#endif
