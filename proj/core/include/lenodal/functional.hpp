#ifndef LENODAL_FUNCTIONAL_HPP
#define LENODAL_FUNCTIONAL_HPP

#include <functional>

#include "lenodal/exponents.hpp"
#include "lenodal/grid.hpp"

namespace lenodal {

struct EnergyReport {
    double seminorm_qp = 0;    // integral of |Lap u|^{q'}
    double lp_norm_p = 0;      // integral of |u|^p
    double energy = 0;         // seminorm/q' - lp/p
    double nehari_defect = 0;  // seminorm - lp
    double quotient = 0;       // seminorm / lp^{q'/p}
};

EnergyReport energy(const Field& u, const Exponents& e);

/// Riesz representative of J'(u) in the quadrature-weighted inner product:
///   g = LapT W sigma(Lap u) / w - |u|^{p-2} u,
/// with sigma(a) = (a^2 + eps_reg^2)^{(q'-2)/2} a.  eps_reg = 0 gives the
/// exact derivative (sigma(0) = 0 since q' > 1).
Field gradient(const Field& u, const Exponents& e, double eps_reg = 0.0);

/// Unique t > 0 with t u on the discrete Nehari set; maximizer of J(t u).
double nehari_scale(const Field& u, const Exponents& e);

/// Tangent of the critical dilation family eps^{-N/p} u(x/eps) at eps = 1:
/// (N/p) u + x . grad u, centered differences with even reflection at the
/// reduced axes.  J is invariant along it in the continuum, so descent can
/// drift toward grid-scale concentration unless this mode is removed.
Field dilation_generator(const Field& u, const Exponents& e);

/// x -> eps^{-N/p} u((x - xi)/eps) sampled on the grid of u.  On reduced
/// grids only xi = 0 (the origin, always a fixed point) is supported.
Field rescale(const Field& u, const Exponents& e, double eps);

/// Same dilation applied to a closed-form radial-coordinate profile,
/// sampled on the target grid (fn takes the node coordinate tuple).
Field rescale(const std::function<double(const std::vector<double>&)>& fn, const Exponents& e,
              double eps, GridPtr grid);

struct MonotonicityGap {
    double lhs = 0;
    double rhs_bound = 0;
    double c0 = 0;
};

/// The elementary inequality behind the degenerate-operator compactness
/// argument: lhs = (|s|^{q'-2}s - |t|^{q'-2}t)(s - t) dominates
/// C0 |s-t|^{q'} (q' >= 2) or C0 |s-t|^2/(|s|^{q'}+|t|^{q'}+1)^{2-q'}
/// (1 < q' < 2).  C0 is certified by grid minimization of the ratio over
/// [-10,10]^2 with a 0.99 safety margin, cached per q'.
MonotonicityGap monotonicity_gap(double s, double t, double qp);

/// The certified constant itself (0.99 x grid minimum of the ratio).
double monotonicity_constant(double qp);

} // namespace lenodal

#endif
