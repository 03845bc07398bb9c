#ifndef FISHTAX_STRATEGIES_HPP
#define FISHTAX_STRATEGIES_HPP

#include "fishtax/bio_model.hpp"
#include "fishtax/convex_kit.hpp"
#include "fishtax/hjb_solver.hpp"

#include <memory>
#include <variant>
#include <vector>

namespace fishtax {

struct PayoffEstimate {
    double value = 0.0;
    double truncation_bound = 0.0; // max flow revenue * exp(-beta*T) / beta
    double horizon = 0.0;
};

struct StaticStrategy {
    double q = 0.0;
};

struct FeedbackStrategy {
    std::shared_ptr<const ValueTable> table;
};

// feedback prefix until the golden-rule point, then the two-point static mix
struct RelaxedMixStrategy {
    std::shared_ptr<const ValueTable> table;
    ChatterTriple mix;
};

// periodic piecewise-constant control cycling the stock
// x_hat -> x_hat + g -> x_hat - eps -> x_hat; started from x != x_hat it runs
// the feedback prefix first when a table is attached.
struct PulseStrategy {
    double p1 = 0.0, p2 = 0.0;
    double epsilon = 0.0;
    double g = 0.0;
    double tau1 = 0.0, tau2 = 0.0, tau3 = 0.0;
    double f_p1 = 0.0, f_p2 = 0.0; // aggregate revenue at the two levels
    double x_hat = 0.0;
    double b_hat = 0.0;
    double kappa = 1.0; // (p2 - b_hat) / (p2 - p1)
    std::shared_ptr<const ValueTable> table;

    double period() const { return tau1 + tau2 + tau3; }
};

using Strategy = std::variant<StaticStrategy, FeedbackStrategy, RelaxedMixStrategy, PulseStrategy>;

// Horizon making the tail bound max_flow * exp(-beta T)/beta equal to tol.
double default_horizon(double beta, double max_flow_revenue, double tol);

// Integrates dY = (b(Y) - demand_mid(v'(Y))) dt toward the golden-rule point;
// on arrival (|Y - x_hat| < arrival_tol, crossing interpolated) the control is
// pinned to b(x_hat).
Trajectory feedback_trajectory(const ValueTable& vt, const GrowthModel& m, double x,
                               double horizon, double dt = 5e-4, double arrival_tol = 1e-6);

// Discounted revenue of a strategy started at x, trapezoidal in time along the
// simulated trajectory (exact tail for the relaxed mix).
PayoffEstimate payoff(const GrowthModel& m, const ValidatedCommunity& vc, const Strategy& s,
                      double x, double horizon, double dt);

// Constructs the pulse strategy at the golden-rule point: the band extension g
// solves the balance equation
//   int_{x_hat-eps}^{x_hat} (b(x_hat)-b(x)) rho dx = int_{x_hat}^{x_hat+g} (b(x)-b(x_hat)) rho dx,
//   rho(x) = 1 / ((b(x)-p1)(p2-b(x))),
// and the phase durations are the corresponding time-of-flight quadratures.
// Degenerate chatter collapses to the static strategy b(x_hat).
Strategy build_pulse(const GrowthModel& m, const GridFunction& F,
                     const ConcaveGridFunction& F_tilde, double x_hat, double eps);

// Exact discounted payoff of the periodic control started at x_hat.
PayoffEstimate pulse_payoff_closed_form(const PulseStrategy& s, const GridFunction& F,
                                        double beta);

// Per-agent intensities attaining F(q), recovered through suffix folds of the
// pairwise sup-convolution; least-lexicographic tie break.
std::vector<double> split_to_agents(double q, const std::vector<GridFunction>& fs,
                                    const GridFunction& F);

} // namespace fishtax

#endif
