#ifndef FISHTAX_CONVEX_KIT_HPP
#define FISHTAX_CONVEX_KIT_HPP

#include "fishtax/grid_function.hpp"

#include <cstddef>
#include <vector>

namespace fishtax {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
};

// Concave piecewise-linear function in vertex form: q strictly increasing,
// chord slopes decreasing. Vertices of an upper hull satisfy F_tilde = F.
class ConcaveHull {
public:
    ConcaveHull() = default;
    ConcaveHull(std::vector<double> q, std::vector<double> f);

    // least concave majorant of the node set of g (monotone chain)
    static ConcaveHull upper_hull(const GridFunction& g);

    const std::vector<double>& abscissae() const { return q_; }
    const std::vector<double>& ordinates() const { return f_; }
    std::size_t vertex_count() const { return q_.size(); }
    double lo() const { return q_.front(); }
    double hi() const { return q_.back(); }
    double max_value() const;

    double operator()(double x) const;
    SuperdiffInterval superdifferential(double x) const;

    // index of the segment [q_k, q_{k+1}] containing x
    std::size_t segment_of(double x) const;
    double segment_slope(std::size_t k) const;

private:
    std::vector<double> q_;
    std::vector<double> f_;
};

// Exact infimal (sup-) convolution of concave piecewise-linear functions by
// merging segments in decreasing slope order.
ConcaveHull sup_convolve(const std::vector<ConcaveHull>& parts);

// Fenchel-type transform of a concave piecewise-linear function:
//   conj(z) = sup_q { env(q) - z q },
// evaluated exactly from the vertex form, together with the maximizer set
//   demand(z) = argmax_q { env(q) - z q },
// a (possibly degenerate) interval that is non-increasing in z.
class FenchelConjugate {
public:
    FenchelConjugate() = default;
    explicit FenchelConjugate(ConcaveHull env);

    double operator()(double z) const;
    Interval demand(double z, double slope_tol = 1e-10) const;
    const ConcaveHull& envelope() const { return env_; }
    double max_revenue() const { return env_.max_value(); } // conj(0)

private:
    ConcaveHull env_;
    std::vector<double> slopes_; // decreasing segment slopes
};

// ---- grid-level operations ----

// Pairwise sup-convolution of piecewise-linear grid functions:
//   (f # g)(q) = max { f(a) + g(q - a) : a + b = q },
// exact at the output nodes via the kink-candidate split search (O(N) candidates
// per output node). The unqualified version parallelizes over output nodes when
// built with OpenMP; serial::sup_convolve_pair is the reference loop.
GridFunction sup_convolve_pair(const GridFunction& f, const GridFunction& g,
                               std::size_t out_nodes);

// Aggregate revenue F on [sum lo, sum hi] as a left fold of pairwise
// sup-convolutions; intermediate grids use the final spacing.
GridFunction inf_convolution(const std::vector<GridFunction>& fs, std::size_t out_nodes);

// Least concave majorant of F, sampled back onto F's grid.
ConcaveGridFunction concave_hull(const GridFunction& F);

// conj(z) = max over grid nodes q of (F(q) - z q), sampled on a uniform z grid.
ConvexGridFunction conjugate(const GridFunction& F, double z_lo, double z_hi,
                             std::size_t z_nodes);

// Double transform of F with matching sign conventions; equals the concave
// hull of F at every point.
GridFunction biconjugate(const GridFunction& F);

// argmax_q { F_tilde(q) - z q } as an interval of grid abscissae (value scan,
// independent of the vertex-form route in FenchelConjugate::demand).
Interval demand_map(const ConcaveGridFunction& F_tilde, double z);

// Smallest grid node maximizing f(u) - z u (least-maximizer tie break).
double least_best_response(const GridFunction& f, double z);

struct ChatterTriple {
    double p1 = 0.0;
    double p2 = 0.0;
    double kappa = 1.0;
    double f_p1 = 0.0; // F at p1 (exact: hull touch point)
    double f_p2 = 0.0;
    bool degenerate = true; // F_tilde(p) == F(p): no chattering needed
};

// Mix decomposition p = kappa*p1 + (1-kappa)*p2 with
// F_tilde(p) = kappa*F(p1) + (1-kappa)*F(p2); p1, p2 are the endpoints of the
// affine bridge segment of F_tilde containing p.
ChatterTriple chatter_decompose(const GridFunction& F, const ConcaveGridFunction& F_tilde,
                                double p);

namespace serial {
GridFunction sup_convolve_pair(const GridFunction& f, const GridFunction& g,
                               std::size_t out_nodes);
ConvexGridFunction conjugate(const GridFunction& F, double z_lo, double z_hi,
                             std::size_t z_nodes);
} // namespace serial

} // namespace fishtax

#endif
