#ifndef FISHTAX_HJB_SOLVER_HPP
#define FISHTAX_HJB_SOLVER_HPP

#include "fishtax/bio_model.hpp"
#include "fishtax/convex_kit.hpp"

#include <cstddef>
#include <vector>

namespace fishtax {

// Which representation the stationary equation consumes. The agent routes use
// the exact per-agent concave machinery; the grid routes take the transform of
// the folded aggregate F (or of its concave hull), which by construction sees
// only the hull and must give the same value function.
enum class ConjugateSource {
    Agents,
    AgentsConcavified,
    GridAggregate,
    GridAggregateConcavified,
};

struct SolverOptions {
    std::size_t n_nodes = 4097;
    double x_min = 1e-3;
    double root_xtol = 1e-13;
    double p_cap = 1e6;
    ConjugateSource source = ConjugateSource::Agents;
    std::size_t aggregate_nodes = 4097; // fold resolution for the grid routes
};

// Solved value function on a uniform grid over [x_min, 1], anchored at the
// golden-rule point. v is interpolated with cubic Hermite segments (the node
// slopes are known); the derivative is interpolated linearly.
struct ValueTable {
    std::vector<double> x;
    std::vector<double> v;
    std::vector<double> p; // v' at the nodes
    std::vector<double> residual;

    double golden_x = 0.0;
    double b_hat = 0.0;
    double anchor_value = 0.0;       // v(golden_x)
    double anchor_slope = 0.0;       // v'(golden_x); superdifferential midpoint at a kink
    SuperdiffInterval anchor_superdiff;
    bool anchor_kinked = false;

    GrowthModel model;
    double beta = 0.0;
    FenchelConjugate fhat;
    double root_xtol = 1e-13;
    double p_cap = 1e6;

    double x_min() const { return x.front(); }
    double spacing() const { return (x.back() - x.front()) / static_cast<double>(x.size() - 1); }

    double value(double xq) const;
    double derivative(double xq) const;

    // v' consistent with the stationary equation at the interpolated value:
    // the root of beta*v(x) = b(x) p + conj(p) on the branch matching the side
    // of the golden-rule point. This is what the taxation scheme quotes.
    double consistent_derivative(double xq) const;

    // branch-selected root solve (exposed for the marcher and the tax engine)
    double solve_slope(double xq, double vq, double warm) const;
};

ValueTable solve_value(const ValidatedCommunity& vc, const GrowthModel& m,
                       const SolverOptions& opts = {});

// Closed-form table for n identical agents with f(u) = u on [0, alpha_max]:
// two exponential-integral branches joined at the golden-rule point, evaluated
// by adaptive quadrature.
ValueTable closed_form_linear(const ValidatedCommunity& vc, const GrowthModel& m,
                              const SolverOptions& opts = {});

// max over nodes of |beta*v - b(x) p - conj(p)|
double hjb_residual(const ValueTable& vt);

struct CriticalTax {
    double lower = 0.0;
    double upper = 0.0;
    bool kinked = false;
    double value() const { return 0.5 * (lower + upper); }
};

// v'(golden_x) = slope of the concave envelope at b(golden_x); reports the
// superdifferential interval when the envelope has a kink there.
CriticalTax critical_tax(const ValueTable& vt);

} // namespace fishtax

#endif
