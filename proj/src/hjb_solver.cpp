#include "fishtax/hjb_solver.hpp"
#include "fishtax/errors.hpp"
#include "fishtax/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fishtax {

namespace {

ConcaveHull route_envelope(const ValidatedCommunity& vc, const SolverOptions& opts) {
    switch (opts.source) {
    case ConjugateSource::Agents:
        return vc.envelope();
    case ConjugateSource::AgentsConcavified: {
        // hulls of the concavified agents; conjugation cannot tell them apart
        std::vector<ConcaveHull> hulls;
        for (const auto& a : vc.agents()) {
            std::vector<double> nodes(a.f().size());
            std::size_t k = 0;
            const ConcaveHull& h = a.hull();
            for (std::size_t i = 0; i < a.f().size(); ++i) {
                const double u = std::min(a.f().node(i), h.hi());
                while (k + 2 < h.vertex_count() && h.abscissae()[k + 1] < u) ++k;
                nodes[i] = h.ordinates()[k] + h.segment_slope(k) * (u - h.abscissae()[k]);
            }
            hulls.push_back(ConcaveHull::upper_hull(GridFunction(0.0, a.alpha_max(), std::move(nodes))));
        }
        return sup_convolve(hulls);
    }
    case ConjugateSource::GridAggregate:
        return ConcaveHull::upper_hull(vc.aggregate(opts.aggregate_nodes)->F);
    case ConjugateSource::GridAggregateConcavified:
        return ConcaveHull::upper_hull(vc.aggregate(opts.aggregate_nodes)->F_tilde.grid());
    }
    return vc.envelope();
}

} // namespace

double ValueTable::value(double xq) const {
    const double x0 = x.front();
    if (xq < x0) {
        // monotone cubic through (0, 0), matching value and slope at x_min
        if (xq <= 0.0) return 0.0;
        const double delta = v.front() / x0;
        const double m1 = p.front();
        const double m0 = 2.0 * delta - m1;
        return hermite(xq, 0.0, x0, 0.0, v.front(), m0, m1);
    }
    const double h = spacing();
    double t = (xq - x0) / h;
    t = std::clamp(t, 0.0, static_cast<double>(x.size() - 1));
    const std::size_t i = std::min(static_cast<std::size_t>(t), x.size() - 2);
    return hermite(xq, x[i], x[i + 1], v[i], v[i + 1], p[i], p[i + 1]);
}

double ValueTable::derivative(double xq) const {
    const double x0 = x.front();
    if (xq < x0) {
        if (xq <= 0.0) xq = 0.0;
        const double delta = v.front() / x0;
        const double m1 = p.front();
        const double m0 = 2.0 * delta - m1;
        return hermite_derivative(xq, 0.0, x0, 0.0, v.front(), m0, m1);
    }
    const double h = spacing();
    double t = (xq - x0) / h;
    t = std::clamp(t, 0.0, static_cast<double>(x.size() - 1));
    const std::size_t i = std::min(static_cast<std::size_t>(t), x.size() - 2);
    const double w = (xq - x[i]) / h;
    return p[i] + w * (p[i + 1] - p[i]);
}

double ValueTable::solve_slope(double xq, double vq, double warm) const {
    const double bx = model.b(std::clamp(xq, 0.0, 1.0));
    const auto G = [&](double z) { return bx * z + fhat(z) - beta * vq; };

    const ConcaveHull& env = fhat.envelope();
    const SuperdiffInterval S =
        env.superdifferential(std::clamp(bx, env.lo(), env.hi()));
    const double pm = std::max(S.mid(), 0.0); // argmin of the convex G
    const double gm = G(pm);
    const double gm_tol = 1e-8 * (1.0 + std::abs(beta * vq));
    if (gm >= 0.0) {
        if (gm <= gm_tol) return pm;
        throw BranchRootNotBracketed(
            "solve_slope: value lies below the Hamiltonian minimum at x = " + std::to_string(xq));
    }

    if (xq < golden_x) {
        // branch with b(x) above the maximizer set: root right of the argmin
        double lo = pm;
        if (warm > lo && warm < p_cap && G(warm) <= 0.0) lo = warm;
        double hi = std::max(2.0 * anchor_slope + 1.0, lo + 1.0);
        while (G(hi) <= 0.0) {
            hi = lo + 2.0 * (hi - lo);
            if (hi > p_cap)
                throw BranchRootNotBracketed("solve_slope: no sign change below the slope cap");
        }
        return bisect(G, lo, hi, root_xtol * (1.0 + hi));
    }
    // branch with b(x) below the maximizer set: root in [0, argmin]
    double lo = 0.0;
    double hi = pm;
    if (warm > lo && warm < hi && G(warm) > 0.0) lo = warm;
    if (G(lo) <= 0.0) return lo; // v at its ceiling: slope pinned at 0
    return bisect(G, lo, hi, root_xtol * (1.0 + hi));
}

double ValueTable::consistent_derivative(double xq) const {
    if (std::abs(xq - golden_x) <= 1e-12) return anchor_slope;
    return solve_slope(xq, value(xq), derivative(xq));
}

ValueTable solve_value(const ValidatedCommunity& vc, const GrowthModel& m,
                       const SolverOptions& opts) {
    if (opts.n_nodes < 3)
        throw InvalidParameter("solve_value: need at least 3 grid nodes");

    ValueTable vt;
    vt.model = m;
    vt.beta = vc.beta();
    vt.root_xtol = opts.root_xtol;
    vt.p_cap = opts.p_cap;
    vt.golden_x = golden_rule(m, vc.beta());
    vt.b_hat = m.b(vt.golden_x);
    if (!(opts.x_min > 0.0 && opts.x_min < vt.golden_x))
        throw InvalidParameter("solve_value: x_min must lie in (0, golden_x)");

    ConcaveHull env = route_envelope(vc, opts);
    vt.anchor_superdiff = env.superdifferential(vt.b_hat);
    vt.anchor_slope = vt.anchor_superdiff.mid();
    vt.anchor_kinked = !vt.anchor_superdiff.is_point(1e-9);
    vt.anchor_value = env(vt.b_hat) / vt.beta;
    vt.fhat = FenchelConjugate(std::move(env));

    const std::size_t n = opts.n_nodes;
    vt.x.resize(n);
    vt.v.resize(n);
    vt.p.resize(n);
    vt.residual.resize(n);
    const double h = (1.0 - opts.x_min) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        vt.x[i] = (i + 1 == n) ? 1.0 : opts.x_min + h * static_cast<double>(i);

    // one 4th-order step of dv/dx = p(x, v); every stage re-solves the slope
    const auto advance = [&](double x0, double v0, double x1, double& warm) {
        const double d = x1 - x0;
        const double k1 = vt.solve_slope(x0, v0, warm);
        const double k2 = vt.solve_slope(x0 + 0.5 * d, v0 + 0.5 * d * k1, k1);
        const double k3 = vt.solve_slope(x0 + 0.5 * d, v0 + 0.5 * d * k2, k2);
        const double k4 = vt.solve_slope(x1, v0 + d * k3, k3);
        warm = k4;
        return v0 + d / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    // last node strictly left of the anchor
    const long long j = std::min<long long>(
        static_cast<long long>((vt.golden_x - opts.x_min) / h),
        static_cast<long long>(n - 2));

    const double mono_tol = 1e-12;

    // left march
    {
        double cx = vt.golden_x, cv = vt.anchor_value, warm = vt.anchor_slope;
        double prev_p = vt.anchor_slope;
        for (long long i = j; i >= 0; --i) {
            const std::size_t ui = static_cast<std::size_t>(i);
            cv = advance(cx, cv, vt.x[ui], warm);
            cx = vt.x[ui];
            const double pi = vt.solve_slope(cx, cv, warm);
            if (pi < prev_p - mono_tol * (1.0 + std::abs(pi)))
                throw NonConcaveValueDetected("solve_value: slope not increasing on the left march");
            vt.v[ui] = cv;
            vt.p[ui] = pi;
            warm = pi;
            prev_p = pi;
        }
    }
    // right march
    {
        double cx = vt.golden_x, cv = vt.anchor_value, warm = vt.anchor_slope;
        double prev_p = vt.anchor_slope;
        for (std::size_t i = static_cast<std::size_t>(j + 1); i < n; ++i) {
            cv = advance(cx, cv, vt.x[i], warm);
            cx = vt.x[i];
            const double pi = vt.solve_slope(cx, cv, warm);
            if (pi > prev_p + mono_tol * (1.0 + std::abs(pi)))
                throw NonConcaveValueDetected("solve_value: slope not decreasing on the right march");
            vt.v[i] = cv;
            vt.p[i] = pi;
            warm = pi;
            prev_p = pi;
        }
    }

    for (std::size_t i = 0; i < n; ++i)
        vt.residual[i] =
            std::abs(vt.beta * vt.v[i] - m.b(vt.x[i]) * vt.p[i] - vt.fhat(vt.p[i]));
    return vt;
}

ValueTable closed_form_linear(const ValidatedCommunity& vc, const GrowthModel& m,
                              const SolverOptions& opts) {
    const auto& agents = vc.agents();
    for (const auto& a : agents) {
        const bool linear_unit = a.spec().kind == RevenueSpec::Kind::Linear &&
                                 std::abs(a.spec().slope - 1.0) <= 1e-12;
        const bool same_cap = std::abs(a.alpha_max() - agents.front().alpha_max()) <=
                              1e-12 * (1.0 + agents.front().alpha_max());
        if (!linear_unit || !same_cap)
            throw NotLinearIdenticalCommunity(
                "closed_form_linear: community must consist of identical agents with f(u) = u");
    }
    const double n_alpha = vc.q_max();
    const double beta = vc.beta();

    ValueTable vt;
    vt.model = m;
    vt.beta = beta;
    vt.golden_x = golden_rule(m, beta);
    vt.b_hat = m.b(vt.golden_x);
    ConcaveHull env = vc.envelope();
    vt.anchor_superdiff = env.superdifferential(vt.b_hat);
    vt.anchor_slope = vt.anchor_superdiff.mid();
    vt.anchor_kinked = !vt.anchor_superdiff.is_point(1e-9);
    vt.anchor_value = env(vt.b_hat) / beta;
    vt.fhat = FenchelConjugate(std::move(env));

    const std::size_t n = opts.n_nodes;
    vt.x.resize(n);
    vt.v.resize(n);
    vt.p.resize(n);
    vt.residual.resize(n);
    const double h = (1.0 - opts.x_min) / static_cast<double>(n - 1);
    const double xhat = vt.golden_x;
    const double bhat = vt.b_hat;

    for (std::size_t i = 0; i < n; ++i) {
        const double xi = (i + 1 == n) ? 1.0 : opts.x_min + h * static_cast<double>(i);
        vt.x[i] = xi;
        if (xi <= xhat) {
            const double I = adaptive_simpson([&](double y) { return beta / m.b(y); }, xi, xhat,
                                              1e-12);
            const double e = std::exp(-I);
            vt.v[i] = bhat / beta * e;
            vt.p[i] = bhat / m.b(xi) * e;
        } else {
            const double J = adaptive_simpson([&](double y) { return beta / (n_alpha - m.b(y)); },
                                              xhat, xi, 1e-12);
            const double e = std::exp(-J);
            vt.v[i] = (bhat - n_alpha) / beta * e + n_alpha / beta;
            vt.p[i] = (n_alpha - bhat) / (n_alpha - m.b(xi)) * e;
        }
        vt.residual[i] =
            std::abs(beta * vt.v[i] - m.b(xi) * vt.p[i] - vt.fhat(vt.p[i]));
    }
    return vt;
}

double hjb_residual(const ValueTable& vt) {
    double worst = 0.0;
    for (std::size_t i = 0; i < vt.x.size(); ++i) {
        const double r = std::abs(vt.beta * vt.v[i] - vt.model.b(vt.x[i]) * vt.p[i] -
                                  vt.fhat(vt.p[i]));
        worst = std::max(worst, r);
    }
    return worst;
}

CriticalTax critical_tax(const ValueTable& vt) {
    return {vt.anchor_superdiff.lower, vt.anchor_superdiff.upper, vt.anchor_kinked};
}

} // namespace fishtax
