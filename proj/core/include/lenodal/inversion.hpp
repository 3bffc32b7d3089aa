#ifndef LENODAL_INVERSION_HPP
#define LENODAL_INVERSION_HPP

#include "lenodal/exponents.hpp"
#include "lenodal/grid.hpp"

namespace lenodal {

/// v = -|Lap u|^{q'-2} Lap u, the companion unknown of the first-order
/// system behind the scalar equation.
Field second_component(const Field& u, const Exponents& e);

struct SystemResidual {
    double residual_1 = 0; // dual-norm defect of Lap v + |u|^{p-2}u, relative
    double residual_2 = 0; // dual-norm defect of Lap u + |v|^{q-2}v, relative
};

/// Residuals of the recovered pair (u, v) against the two system equations.
/// Each is normalized by the norm of its source term, so 0 means exact.
SystemResidual system_residual(const Field& u, const Field& v, const Exponents& e);

struct SystemPair {
    Field u, v;
    SystemResidual residuals;
};

/// Builds (u, second_component(u)) and evaluates both residuals.
SystemPair recover_system(const Field& u, const Exponents& e);

struct DecayFit {
    double exponent = 0;   // slope of log |shell average| vs log r
    double intercept = 0;
    double r_lo = 0, r_hi = 0;
    int shells = 0;
};

/// Least-squares power-law fit of the far-field decay of |u| over radial
/// shells in [r_lo, r_hi].  Shell averages below floor_frac of the peak
/// shell average are dropped before fitting.
DecayFit decay_exponent(const Field& u, double r_lo, double r_hi, int shells = 24,
                        double floor_frac = 1e-12);

} // namespace lenodal

#endif
