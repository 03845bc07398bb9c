#include "fishtax/grid_function.hpp"
#include "fishtax/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fishtax {

GridFunction::GridFunction(double lo, double hi, std::vector<double> values)
    : lo_(lo), hi_(hi), v_(std::move(values)) {
    if (!(hi_ > lo_))
        throw InvalidParameter("GridFunction: domain must satisfy lo < hi");
    if (v_.size() < 2)
        throw InvalidParameter("GridFunction: need at least 2 nodes");
    for (double x : v_)
        if (!std::isfinite(x))
            throw InvalidParameter("GridFunction: non-finite node value");
}

GridFunction GridFunction::sample(double lo, double hi, std::size_t n_nodes,
                                  const std::function<double(double)>& fn) {
    if (n_nodes < 2)
        throw InvalidParameter("GridFunction::sample: need at least 2 nodes");
    std::vector<double> v(n_nodes);
    const double h = (hi - lo) / static_cast<double>(n_nodes - 1);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        const double x = (i + 1 == n_nodes) ? hi : lo + h * static_cast<double>(i);
        v[i] = fn(x);
    }
    return GridFunction(lo, hi, std::move(v));
}

bool GridFunction::contains(double q, double tol) const {
    const double slack = tol * (1.0 + hi_ - lo_);
    return q >= lo_ - slack && q <= hi_ + slack;
}

double GridFunction::operator()(double q) const {
    if (!contains(q))
        throw PointOutsideDomain("GridFunction: argument " + std::to_string(q) +
                                 " outside [" + std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
    const double h = spacing();
    double t = (q - lo_) / h;
    t = std::clamp(t, 0.0, static_cast<double>(v_.size() - 1));
    const std::size_t i = std::min(static_cast<std::size_t>(t), v_.size() - 2);
    const double w = t - static_cast<double>(i);
    return v_[i] + w * (v_[i + 1] - v_[i]);
}

double GridFunction::slope(std::size_t segment) const {
    return (v_[segment + 1] - v_[segment]) / spacing();
}

double GridFunction::max_value() const {
    return *std::max_element(v_.begin(), v_.end());
}

std::size_t GridFunction::least_max_index() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v_.size(); ++i)
        if (v_[i] > v_[best]) best = i;
    return best;
}

SuperdiffInterval GridFunction::superdifferential(double q) const {
    if (!contains(q))
        throw PointOutsideDomain("GridFunction::superdifferential: argument outside domain");
    const double h = spacing();
    double t = std::clamp((q - lo_) / h, 0.0, static_cast<double>(v_.size() - 1));
    const std::size_t nearest = static_cast<std::size_t>(std::llround(t));
    const double node_tol = 1e-9;
    if (std::abs(t - static_cast<double>(nearest)) <= node_tol) {
        // at a node: [right slope, left slope] (one-sided at the endpoints)
        const double right = (nearest + 1 < v_.size()) ? slope(nearest) : slope(nearest - 1);
        const double left = (nearest > 0) ? slope(nearest - 1) : slope(nearest);
        return {right, left};
    }
    const std::size_t i = std::min(static_cast<std::size_t>(t), v_.size() - 2);
    const double s = slope(i);
    return {s, s};
}

namespace {

void check_slope_monotone(const GridFunction& g, bool non_increasing, double rel_tol,
                          const char* what) {
    double scale = 1.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        scale = std::max(scale, std::abs(g.value(i)));
    const double tol = rel_tol * scale / g.spacing();
    for (std::size_t i = 0; i + 1 < g.size() - 1; ++i) {
        const double d = g.slope(i + 1) - g.slope(i);
        if (non_increasing ? d > tol : d < -tol)
            throw InvalidParameter(std::string(what) + ": slope monotonicity violated at segment " +
                                   std::to_string(i + 1));
    }
}

} // namespace

ConcaveGridFunction::ConcaveGridFunction(GridFunction g, double rel_tol) : g_(std::move(g)) {
    check_slope_monotone(g_, true, rel_tol, "ConcaveGridFunction");
}

ConvexGridFunction::ConvexGridFunction(GridFunction g, double rel_tol) : g_(std::move(g)) {
    check_slope_monotone(g_, false, rel_tol, "ConvexGridFunction");
}

} // namespace fishtax
