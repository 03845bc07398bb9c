#ifndef FISHTAX_BIO_MODEL_HPP
#define FISHTAX_BIO_MODEL_HPP

#include "fishtax/convex_kit.hpp"
#include "fishtax/grid_function.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

namespace fishtax {

// Scaled Verhulst growth b(x) = r x (1 - x) on [0, 1].
struct GrowthModel {
    double r = 1.0;

    double b(double x) const { return r * x * (1.0 - x); }
    double b_prime(double x) const { return r * (1.0 - 2.0 * x); }
    double b_max() const { return 0.25 * r; }
    double lipschitz() const { return r; }
};

// Unique interior root of b'(x) = beta, found by bisection.
double golden_rule(const GrowthModel& m, double beta, double xtol = 1e-12);

struct RevenueSpec {
    enum class Kind { Linear, Quadratic, Power, Piecewise };
    Kind kind = Kind::Linear;
    double slope = 1.0;               // linear: f(u) = slope * u
    double a = 0.0, b = 0.0;          // quadratic: f(u) = a*u - b*u^2
    double p = 1.0;                   // power: f(u) = u^p
    std::vector<std::pair<double, double>> points; // piecewise (u, f) breakpoints

    double eval(double u) const;
};

// One agent's instantaneous revenue, sampled onto a uniform grid over
// [0, alpha_max]; the piecewise-linear interpolant is the single source of
// truth downstream.
class AgentRevenue {
public:
    AgentRevenue(RevenueSpec spec, double alpha_max, std::size_t n_nodes = 4097);

    double alpha_max() const { return alpha_max_; }
    const GridFunction& f() const { return f_; }
    const RevenueSpec& spec() const { return spec_; }
    double delta_star() const { return delta_star_; } // least maximizer of f
    const ConcaveHull& hull() const { return hull_; }

private:
    RevenueSpec spec_;
    double alpha_max_;
    GridFunction f_;
    double delta_star_;
    ConcaveHull hull_;
};

struct Community {
    std::vector<AgentRevenue> agents;
    double beta = 0.0;

    double q_max() const;
};

// Aggregate revenue on the grid: F = inf_convolution of the agent revenues,
// F_tilde its least concave majorant.
struct AggregateRevenue {
    GridFunction F;
    ConcaveGridFunction F_tilde;
};

// Community with the standing assumptions checked and the derived quantities
// cached. Immutable after construction.
class ValidatedCommunity {
public:
    const GrowthModel& model() const { return model_; }
    const Community& community() const { return community_; }
    const std::vector<AgentRevenue>& agents() const { return community_.agents; }
    double beta() const { return community_.beta; }
    double q_max() const { return q_max_; }
    double golden_x() const { return golden_x_; }
    double b_hat() const { return b_hat_; }

    // exact concave machinery: F_tilde as a vertex-form hull and its transform
    const ConcaveHull& envelope() const { return envelope_; }
    const FenchelConjugate& transform() const { return fhat_; }
    double max_flow_revenue() const { return envelope_.max_value(); } // sum of f_i(delta*_i)

    // grid-route aggregate (lazy; the fold is the expensive part)
    std::shared_ptr<const AggregateRevenue> aggregate(std::size_t out_nodes = 4097) const;

    friend ValidatedCommunity validate_community(const Community& c, const GrowthModel& m);

private:
    GrowthModel model_;
    Community community_;
    double q_max_ = 0.0;
    double golden_x_ = 0.0;
    double b_hat_ = 0.0;
    ConcaveHull envelope_;
    FenchelConjugate fhat_;

    struct Cache {
        std::mutex mu;
        std::size_t nodes = 0;
        std::shared_ptr<const AggregateRevenue> agg;
    };
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

ValidatedCommunity validate_community(const Community& c, const GrowthModel& m);

struct Trajectory {
    std::vector<double> times;
    std::vector<double> states;
    std::vector<double> controls;
    double payoff = 0.0;
    double extinction_time = std::numeric_limits<double>::infinity();

    bool extinct() const { return std::isfinite(extinction_time); }
};

// Fixed-step RK4 integration of dX = (b(X) - q(t)) dt with extinction event
// detection (crossing time interpolated within the step, state pinned at 0 and
// the control forced to 0 afterwards). States are clamped to [0, 1].
Trajectory integrate_dynamics(const GrowthModel& m, const std::function<double(double)>& control,
                              double x0, double horizon, double dt);

} // namespace fishtax

#endif
