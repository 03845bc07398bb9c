#include "fishtax/convex_kit.hpp"
#include "fishtax/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fishtax {

// ---------------------------------------------------------------- ConcaveHull

ConcaveHull::ConcaveHull(std::vector<double> q, std::vector<double> f)
    : q_(std::move(q)), f_(std::move(f)) {
    if (q_.size() != f_.size() || q_.size() < 2)
        throw InvalidParameter("ConcaveHull: need matching abscissae/ordinates, at least 2 vertices");
    for (std::size_t i = 0; i + 1 < q_.size(); ++i)
        if (!(q_[i + 1] > q_[i]))
            throw InvalidParameter("ConcaveHull: abscissae must be strictly increasing");
}

ConcaveHull ConcaveHull::upper_hull(const GridFunction& g) {
    std::vector<double> hx, hy;
    hx.reserve(g.size());
    hy.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.node(i);
        const double y = g.value(i);
        while (hx.size() >= 2) {
            const double x0 = hx[hx.size() - 2], y0 = hy[hy.size() - 2];
            const double x1 = hx.back(), y1 = hy.back();
            // pop the middle point when it lies on or below the chord (x0,y0)-(x,y)
            const double cross = (x1 - x0) * (y - y0) - (y1 - y0) * (x - x0);
            if (cross >= 0.0) {
                hx.pop_back();
                hy.pop_back();
            } else {
                break;
            }
        }
        hx.push_back(x);
        hy.push_back(y);
    }
    return ConcaveHull(std::move(hx), std::move(hy));
}

double ConcaveHull::max_value() const {
    return *std::max_element(f_.begin(), f_.end());
}

std::size_t ConcaveHull::segment_of(double x) const {
    auto it = std::upper_bound(q_.begin(), q_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - q_.begin());
    if (i == 0) return 0;
    if (i >= q_.size()) return q_.size() - 2;
    return i - 1;
}

double ConcaveHull::segment_slope(std::size_t k) const {
    return (f_[k + 1] - f_[k]) / (q_[k + 1] - q_[k]);
}

double ConcaveHull::operator()(double x) const {
    const double slack = 1e-9 * (1.0 + hi() - lo());
    if (x < lo() - slack || x > hi() + slack)
        throw PointOutsideDomain("ConcaveHull: argument " + std::to_string(x) + " outside domain");
    x = std::clamp(x, lo(), hi());
    const std::size_t k = segment_of(x);
    return f_[k] + segment_slope(k) * (x - q_[k]);
}

SuperdiffInterval ConcaveHull::superdifferential(double x) const {
    const double slack = 1e-9 * (1.0 + hi() - lo());
    if (x < lo() - slack || x > hi() + slack)
        throw PointOutsideDomain("ConcaveHull::superdifferential: argument outside domain");
    x = std::clamp(x, lo(), hi());
    const double vertex_tol = 1e-11 * (1.0 + hi() - lo());
    const std::size_t k = segment_of(x);
    if (std::abs(x - q_[k]) <= vertex_tol) {
        const double right = segment_slope(k);
        const double left = (k > 0) ? segment_slope(k - 1) : right;
        return {right, left};
    }
    if (std::abs(x - q_[k + 1]) <= vertex_tol) {
        const double left = segment_slope(k);
        const double right = (k + 2 < q_.size()) ? segment_slope(k + 1) : left;
        return {right, left};
    }
    const double s = segment_slope(k);
    return {s, s};
}

ConcaveHull sup_convolve(const std::vector<ConcaveHull>& parts) {
    if (parts.empty())
        throw EmptyAgentList("sup_convolve: no parts");
    struct Seg { double slope, dq, df; };
    std::vector<Seg> segs;
    double q0 = 0.0, f0 = 0.0;
    for (const auto& p : parts) {
        q0 += p.abscissae().front();
        f0 += p.ordinates().front();
        for (std::size_t k = 0; k + 1 < p.vertex_count(); ++k) {
            const double dq = p.abscissae()[k + 1] - p.abscissae()[k];
            const double df = p.ordinates()[k + 1] - p.ordinates()[k];
            segs.push_back({df / dq, dq, df});
        }
    }
    std::stable_sort(segs.begin(), segs.end(),
                     [](const Seg& a, const Seg& b) { return a.slope > b.slope; });
    std::vector<double> q{q0}, f{f0};
    for (const auto& s : segs) {
        const double merge_tol = 1e-12 * (1.0 + std::abs(s.slope));
        if (q.size() >= 2) {
            const double last_slope = (f.back() - f[f.size() - 2]) / (q.back() - q[q.size() - 2]);
            if (std::abs(last_slope - s.slope) <= merge_tol) {
                q.back() += s.dq;
                f.back() += s.df;
                continue;
            }
        }
        q.push_back(q.back() + s.dq);
        f.push_back(f.back() + s.df);
    }
    return ConcaveHull(std::move(q), std::move(f));
}

// ----------------------------------------------------------- FenchelConjugate

FenchelConjugate::FenchelConjugate(ConcaveHull env) : env_(std::move(env)) {
    slopes_.resize(env_.vertex_count() - 1);
    for (std::size_t k = 0; k + 1 < env_.vertex_count(); ++k)
        slopes_[k] = env_.segment_slope(k);
}

double FenchelConjugate::operator()(double z) const {
    const auto& q = env_.abscissae();
    const auto& f = env_.ordinates();
    // first segment with slope <= z; vertices before it have increasing objective
    auto it = std::lower_bound(slopes_.begin(), slopes_.end(), z,
                               [](double s, double v) { return s > v; });
    const std::size_t j = static_cast<std::size_t>(it - slopes_.begin());
    return f[j] - z * q[j];
}

Interval FenchelConjugate::demand(double z, double slope_tol) const {
    const auto& q = env_.abscissae();
    const double tol = slope_tol * (1.0 + std::abs(z));
    auto ita = std::lower_bound(slopes_.begin(), slopes_.end(), z + tol,
                                [](double s, double v) { return s > v; });
    auto itb = std::lower_bound(slopes_.begin(), slopes_.end(), z - tol,
                                [](double s, double v) { return s > v; });
    const std::size_t a = static_cast<std::size_t>(ita - slopes_.begin());
    const std::size_t b = static_cast<std::size_t>(itb - slopes_.begin());
    return {q[a], q[b]};
}

// ------------------------------------------------------------ paired kernels

namespace detail {

struct PLView {
    double lo, hi, h, inv_h;
    const double* v;
    std::size_t n;

    explicit PLView(const GridFunction& g)
        : lo(g.lo()), hi(g.hi()), h(g.spacing()), inv_h(1.0 / g.spacing()),
          v(g.values().data()), n(g.size()) {}

    double eval(double x) const {
        double t = (x - lo) * inv_h;
        if (t <= 0.0) return v[0];
        const double tmax = static_cast<double>(n - 1);
        if (t >= tmax) return v[n - 1];
        const std::size_t i = static_cast<std::size_t>(t);
        const double w = t - static_cast<double>(i);
        return v[i] + w * (v[i + 1] - v[i]);
    }
};

// max over a + b = q of f(a) + g(b); candidates are the kinks of either factor
// plus the clipped endpoints, which is exact for piecewise-linear f and g.
double best_split_at(double q, const PLView& f, const PLView& g) {
    double alo = std::max(f.lo, q - g.hi);
    double ahi = std::min(f.hi, q - g.lo);
    if (alo > ahi) { // fp guard at the domain corners
        alo = ahi = std::clamp(0.5 * (alo + ahi), f.lo, f.hi);
    }
    double best = f.eval(alo) + g.eval(q - alo);
    if (ahi > alo)
        best = std::max(best, f.eval(ahi) + g.eval(q - ahi));

    long long i_lo = static_cast<long long>(std::ceil((alo - f.lo) * f.inv_h - 1e-12));
    long long i_hi = static_cast<long long>(std::floor((ahi - f.lo) * f.inv_h + 1e-12));
    i_lo = std::max(i_lo, 0LL);
    i_hi = std::min(i_hi, static_cast<long long>(f.n - 1));
    for (long long i = i_lo; i <= i_hi; ++i) {
        const double a = f.lo + f.h * static_cast<double>(i);
        best = std::max(best, f.v[i] + g.eval(q - a));
    }

    const double blo = q - ahi, bhi = q - alo;
    long long j_lo = static_cast<long long>(std::ceil((blo - g.lo) * g.inv_h - 1e-12));
    long long j_hi = static_cast<long long>(std::floor((bhi - g.lo) * g.inv_h + 1e-12));
    j_lo = std::max(j_lo, 0LL);
    j_hi = std::min(j_hi, static_cast<long long>(g.n - 1));
    for (long long j = j_lo; j <= j_hi; ++j) {
        const double b = g.lo + g.h * static_cast<double>(j);
        best = std::max(best, f.eval(q - b) + g.v[j]);
    }
    return best;
}

} // namespace detail

namespace serial {

GridFunction sup_convolve_pair(const GridFunction& f, const GridFunction& g,
                               std::size_t out_nodes) {
    if (out_nodes < 2)
        throw InvalidParameter("sup_convolve_pair: need at least 2 output nodes");
    const detail::PLView fv(f), gv(g);
    const double lo = f.lo() + g.lo();
    const double hi = f.hi() + g.hi();
    const double h = (hi - lo) / static_cast<double>(out_nodes - 1);
    std::vector<double> out(out_nodes);
    for (std::size_t k = 0; k < out_nodes; ++k) {
        const double q = (k + 1 == out_nodes) ? hi : lo + h * static_cast<double>(k);
        out[k] = detail::best_split_at(q, fv, gv);
    }
    return GridFunction(lo, hi, std::move(out));
}

ConvexGridFunction conjugate(const GridFunction& F, double z_lo, double z_hi,
                             std::size_t z_nodes) {
    if (z_nodes < 2)
        throw InvalidParameter("conjugate: need at least 2 z nodes");
    const double hz = (z_hi - z_lo) / static_cast<double>(z_nodes - 1);
    std::vector<double> out(z_nodes);
    for (std::size_t k = 0; k < z_nodes; ++k) {
        const double z = (k + 1 == z_nodes) ? z_hi : z_lo + hz * static_cast<double>(k);
        double best = F.value(0) - z * F.node(0);
        for (std::size_t i = 1; i < F.size(); ++i)
            best = std::max(best, F.value(i) - z * F.node(i));
        out[k] = best;
    }
    return ConvexGridFunction(GridFunction(z_lo, z_hi, std::move(out)));
}

} // namespace serial

GridFunction sup_convolve_pair(const GridFunction& f, const GridFunction& g,
                               std::size_t out_nodes) {
    if (out_nodes < 2)
        throw InvalidParameter("sup_convolve_pair: need at least 2 output nodes");
    const detail::PLView fv(f), gv(g);
    const double lo = f.lo() + g.lo();
    const double hi = f.hi() + g.hi();
    const double h = (hi - lo) / static_cast<double>(out_nodes - 1);
    std::vector<double> out(out_nodes);
    const long long n = static_cast<long long>(out_nodes);
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < n; ++k) {
        const double q = (k + 1 == n) ? hi : lo + h * static_cast<double>(k);
        out[static_cast<std::size_t>(k)] = detail::best_split_at(q, fv, gv);
    }
    return GridFunction(lo, hi, std::move(out));
}

ConvexGridFunction conjugate(const GridFunction& F, double z_lo, double z_hi,
                             std::size_t z_nodes) {
    if (z_nodes < 2)
        throw InvalidParameter("conjugate: need at least 2 z nodes");
    const double hz = (z_hi - z_lo) / static_cast<double>(z_nodes - 1);
    std::vector<double> out(z_nodes);
    const long long n = static_cast<long long>(z_nodes);
    const double* qv = F.values().data();
    const std::size_t nq = F.size();
    const double qlo = F.lo();
    const double qh = F.spacing();
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < n; ++k) {
        const double z = (k + 1 == n) ? z_hi : z_lo + hz * static_cast<double>(k);
        double best = qv[0] - z * qlo;
        for (std::size_t i = 1; i < nq; ++i)
            best = std::max(best, qv[i] - z * (qlo + qh * static_cast<double>(i)));
        out[static_cast<std::size_t>(k)] = best;
    }
    return ConvexGridFunction(GridFunction(z_lo, z_hi, std::move(out)));
}

// ------------------------------------------------------------ grid operations

GridFunction inf_convolution(const std::vector<GridFunction>& fs, std::size_t out_nodes) {
    if (fs.empty())
        throw EmptyAgentList("inf_convolution: empty agent list");
    if (out_nodes < 2)
        throw InvalidParameter("inf_convolution: need at least 2 output nodes");
    double total_span = 0.0;
    for (const auto& f : fs) total_span += f.hi() - f.lo();
    const double target_h = total_span / static_cast<double>(out_nodes - 1);

    if (fs.size() == 1) {
        const auto& f = fs[0];
        std::vector<double> v(out_nodes);
        const double h = (f.hi() - f.lo()) / static_cast<double>(out_nodes - 1);
        for (std::size_t i = 0; i < out_nodes; ++i)
            v[i] = f((i + 1 == out_nodes) ? f.hi() : f.lo() + h * static_cast<double>(i));
        return GridFunction(f.lo(), f.hi(), std::move(v));
    }

    GridFunction acc = fs[0];
    double span = fs[0].hi() - fs[0].lo();
    for (std::size_t k = 1; k < fs.size(); ++k) {
        span += fs[k].hi() - fs[k].lo();
        std::size_t nodes;
        if (k + 1 == fs.size()) {
            nodes = out_nodes;
        } else {
            nodes = static_cast<std::size_t>(std::max<long long>(
                2, std::llround(span / target_h) + 1));
        }
        acc = sup_convolve_pair(acc, fs[k], nodes);
    }
    return acc;
}

ConcaveGridFunction concave_hull(const GridFunction& F) {
    const ConcaveHull hull = ConcaveHull::upper_hull(F);
    std::vector<double> v(F.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double x = std::min(F.node(i), hull.hi());
        while (k + 2 < hull.vertex_count() && hull.abscissae()[k + 1] < x) ++k;
        v[i] = hull.ordinates()[k] + hull.segment_slope(k) * (x - hull.abscissae()[k]);
    }
    return ConcaveGridFunction(GridFunction(F.lo(), F.hi(), std::move(v)));
}

GridFunction biconjugate(const GridFunction& F) {
    const ConcaveHull hull = ConcaveHull::upper_hull(F);
    const FenchelConjugate conj(hull);
    const std::size_t m = hull.vertex_count() - 1;
    std::vector<double> kink_z(m), kink_c(m);
    for (std::size_t k = 0; k < m; ++k) {
        kink_z[k] = hull.segment_slope(k);
        kink_c[k] = conj(kink_z[k]);
    }
    std::vector<double> v(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double q = F.node(i);
        double best = kink_c[0] + q * kink_z[0];
        for (std::size_t k = 1; k < m; ++k)
            best = std::min(best, kink_c[k] + q * kink_z[k]);
        v[i] = best;
    }
    return GridFunction(F.lo(), F.hi(), std::move(v));
}

Interval demand_map(const ConcaveGridFunction& F_tilde, double z) {
    const auto& g = F_tilde.grid();
    double gmax = g.value(0) - z * g.node(0);
    for (std::size_t i = 1; i < g.size(); ++i)
        gmax = std::max(gmax, g.value(i) - z * g.node(i));
    const double tol = 1e-9 * (1.0 + std::abs(gmax));
    std::size_t first = g.size(), last = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double gi = g.value(i) - z * g.node(i);
        if (gi >= gmax - tol) {
            first = std::min(first, i);
            last = i;
        }
    }
    return {g.node(first), g.node(last)};
}

double least_best_response(const GridFunction& f, double z) {
    std::size_t best = 0;
    double best_val = f.value(0) - z * f.node(0);
    for (std::size_t i = 1; i < f.size(); ++i) {
        const double gi = f.value(i) - z * f.node(i);
        if (gi > best_val) {
            best_val = gi;
            best = i;
        }
    }
    return f.node(best);
}

ChatterTriple chatter_decompose(const GridFunction& F, const ConcaveGridFunction& F_tilde,
                                double p) {
    if (!F.contains(p))
        throw PointOutsideDomain("chatter_decompose: point outside the domain of F");
    const double ft_p = F_tilde(p);
    const double f_p = F(p);
    if (ft_p - f_p <= 1e-9 * (1.0 + std::abs(ft_p)))
        return {p, p, 1.0, f_p, f_p, true};
    const ConcaveHull hull = ConcaveHull::upper_hull(F);
    const std::size_t k = hull.segment_of(std::clamp(p, hull.lo(), hull.hi()));
    const double p1 = hull.abscissae()[k];
    const double p2 = hull.abscissae()[k + 1];
    const double kappa = (p2 - p) / (p2 - p1);
    return {p1, p2, kappa, hull.ordinates()[k], hull.ordinates()[k + 1], false};
}

} // namespace fishtax
