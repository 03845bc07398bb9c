#include "fishtax/bio_model.hpp"
#include "fishtax/errors.hpp"
#include "fishtax/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fishtax {

double golden_rule(const GrowthModel& m, double beta, double xtol) {
    if (beta < 0.0)
        throw InvalidParameter("golden_rule: beta must be non-negative");
    if (beta >= m.b_prime(0.0))
        throw NoInteriorGoldenRule("golden_rule: beta >= b'(0), no interior solution");
    return bisect([&](double x) { return m.b_prime(x) - beta; }, 0.0, 1.0, xtol);
}

double RevenueSpec::eval(double u) const {
    switch (kind) {
    case Kind::Linear:
        return slope * u;
    case Kind::Quadratic:
        return a * u - b * u * u;
    case Kind::Power:
        return std::pow(u, p);
    case Kind::Piecewise: {
        if (u <= points.front().first) return points.front().second;
        for (std::size_t i = 1; i < points.size(); ++i) {
            if (u <= points[i].first) {
                const double w = (u - points[i - 1].first) /
                                 (points[i].first - points[i - 1].first);
                return points[i - 1].second + w * (points[i].second - points[i - 1].second);
            }
        }
        return points.back().second;
    }
    }
    return 0.0;
}

AgentRevenue::AgentRevenue(RevenueSpec spec, double alpha_max, std::size_t n_nodes)
    : spec_(std::move(spec)), alpha_max_(alpha_max) {
    if (!(alpha_max_ > 0.0))
        throw InvalidParameter("AgentRevenue: alpha_max must be positive");
    if (n_nodes < 2)
        throw InvalidParameter("AgentRevenue: need at least 2 revenue nodes");
    if (spec_.kind == RevenueSpec::Kind::Piecewise) {
        if (spec_.points.size() < 2)
            throw InvalidParameter("AgentRevenue: piecewise revenue needs at least 2 points");
        for (std::size_t i = 1; i < spec_.points.size(); ++i)
            if (!(spec_.points[i].first > spec_.points[i - 1].first))
                throw InvalidParameter("AgentRevenue: piecewise breakpoints must be increasing");
        if (spec_.points.front().first != 0.0)
            throw InvalidParameter("AgentRevenue: piecewise revenue must start at u = 0");
        if (std::abs(spec_.points.back().first - alpha_max_) > 1e-12 * (1.0 + alpha_max_))
            throw InvalidParameter("AgentRevenue: piecewise revenue must end at u = alpha_max");
    }
    f_ = GridFunction::sample(0.0, alpha_max_, n_nodes,
                              [this](double u) { return spec_.eval(u); });
    delta_star_ = f_.node(f_.least_max_index());
    hull_ = ConcaveHull::upper_hull(f_);
}

double Community::q_max() const {
    double s = 0.0;
    for (const auto& a : agents) s += a.alpha_max();
    return s;
}

ValidatedCommunity validate_community(const Community& c, const GrowthModel& m) {
    if (c.agents.empty())
        throw EmptyAgentList("validate_community: community has no agents");
    if (!(m.r > 0.0))
        throw InvalidParameter("validate_community: growth rate must be positive");
    if (!(c.beta > 0.0))
        throw InvalidParameter("validate_community: discount rate must be positive");
    if (c.beta >= m.b_prime(0.0))
        throw DiscountTooLarge("validate_community: beta >= b'(0), golden-rule point not interior");

    double delta_sum = 0.0;
    for (std::size_t i = 0; i < c.agents.size(); ++i) {
        const auto& f = c.agents[i].f();
        const double scale = 1.0 + std::abs(f.max_value());
        if (std::abs(f.value(0)) > 1e-12 * scale)
            throw RevenueNonzeroAtOrigin("validate_community: agent " + std::to_string(i + 1) +
                                         " has f(0) != 0");
        for (std::size_t k = 0; k < f.size(); ++k)
            if (f.value(k) < -1e-12 * scale)
                throw RevenueNegative("validate_community: agent " + std::to_string(i + 1) +
                                      " has negative revenue at u = " + std::to_string(f.node(k)));
        delta_sum += c.agents[i].delta_star();
    }
    if (!(m.b_max() < delta_sum)) {
        std::ostringstream os;
        os << "validate_community: Assumption 1 violated: max b = " << m.b_max()
           << " is not below the aggregate least maximizer sum = " << delta_sum;
        throw AssumptionOneViolated(os.str());
    }

    ValidatedCommunity vc;
    vc.model_ = m;
    vc.community_ = c;
    vc.q_max_ = c.q_max();
    vc.golden_x_ = golden_rule(m, c.beta);
    vc.b_hat_ = m.b(vc.golden_x_);
    std::vector<ConcaveHull> hulls;
    hulls.reserve(c.agents.size());
    for (const auto& a : c.agents) hulls.push_back(a.hull());
    vc.envelope_ = sup_convolve(hulls);
    vc.fhat_ = FenchelConjugate(vc.envelope_);
    return vc;
}

std::shared_ptr<const AggregateRevenue> ValidatedCommunity::aggregate(std::size_t out_nodes) const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    if (cache_->agg && cache_->nodes == out_nodes)
        return cache_->agg;
    std::vector<GridFunction> fs;
    fs.reserve(community_.agents.size());
    for (const auto& a : community_.agents) fs.push_back(a.f());
    GridFunction F = inf_convolution(fs, out_nodes);
    ConcaveGridFunction Ft = concave_hull(F);
    auto agg = std::make_shared<AggregateRevenue>(AggregateRevenue{std::move(F), std::move(Ft)});
    cache_->nodes = out_nodes;
    cache_->agg = agg;
    return agg;
}

Trajectory integrate_dynamics(const GrowthModel& m, const std::function<double(double)>& control,
                              double x0, double horizon, double dt) {
    if (!(dt > 0.0))
        throw InvalidParameter("integrate_dynamics: dt must be positive");
    if (x0 < 0.0 || x0 > 1.0)
        throw InvalidParameter("integrate_dynamics: x0 must lie in [0, 1]");

    Trajectory tr;
    const std::size_t n_steps = static_cast<std::size_t>(std::ceil(horizon / dt));
    tr.times.reserve(n_steps + 2);
    tr.states.reserve(n_steps + 2);
    tr.controls.reserve(n_steps + 2);

    double t = 0.0;
    double x = x0;
    bool extinct = (x == 0.0);
    if (extinct) tr.extinction_time = 0.0;

    tr.times.push_back(t);
    tr.states.push_back(x);
    tr.controls.push_back(extinct ? 0.0 : control(t));

    while (t < horizon - 1e-12 * (1.0 + horizon)) {
        const double h = std::min(dt, horizon - t);
        if (extinct) {
            t += h;
            tr.times.push_back(t);
            tr.states.push_back(0.0);
            tr.controls.push_back(0.0);
            continue;
        }
        const double k1 = m.b(x) - control(t);
        const double k2 = m.b(x + 0.5 * h * k1) - control(t + 0.5 * h);
        const double k3 = m.b(x + 0.5 * h * k2) - control(t + 0.5 * h);
        const double k4 = m.b(x + h * k3) - control(t + h);
        double x_next = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        if (x_next <= 0.0) {
            // extinction inside the step: interpolate the crossing time
            const double theta = (x > 0.0 && x - x_next > 0.0) ? x / (x - x_next) : 0.0;
            const double t_ext = t + theta * h;
            tr.extinction_time = t_ext;
            extinct = true;
            tr.times.push_back(t_ext);
            tr.states.push_back(0.0);
            tr.controls.push_back(0.0);
            t = t_ext;
            x = 0.0;
            continue;
        }

        x = std::min(x_next, 1.0);
        t += h;
        tr.times.push_back(t);
        tr.states.push_back(x);
        tr.controls.push_back(control(t));
    }
    return tr;
}

} // namespace fishtax
