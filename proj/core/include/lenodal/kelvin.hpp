#ifndef LENODAL_KELVIN_HPP
#define LENODAL_KELVIN_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lenodal/exponents.hpp"

namespace lenodal {

/// Radial function sampled on a uniform annulus grid [a, b], r_i = a + i h.
struct AnnulusProfile {
    int N = 0;
    double a = 0, h = 0;
    Eigen::VectorXd values;

    double b() const { return a + h * static_cast<double>(values.size() - 1); }
    double r(Eigen::Index i) const { return a + h * static_cast<double>(i); }
};

using RadialFn = std::function<double(double)>;

AnnulusProfile sample_annulus(const RadialFn& u, int N, double a, double b, int n);

/// integral of |Lap u|^{q'} over the annulus, with Lap u = u'' + (N-1)/r u'
/// from second-order differences (one-sided at the ends).
double annulus_seminorm_qp(const AnnulusProfile& u, double qp);

double annulus_lp_norm_p(const AnnulusProfile& u, double p);

/// Inversion x -> x/|x|^2 pulled back to radial profiles:
/// (Ku)(r) = r^alpha u(1/r) on [1/b, 1/a], linear interpolation in r.
AnnulusProfile kelvin_transform(const AnnulusProfile& u, double alpha);

/// Same map applied to a closed form; exact, no interpolation.
RadialFn kelvin_transform(const RadialFn& u, double alpha);

struct KelvinReport {
    double alpha = 0;      // -2N/p
    double A = 0;          // alpha (N - 2 + alpha)
    double B = 0;          // (q' - 1)(alpha - 2)
    double constant_C = 0; // |A|^{q'-2} A B (B + N - 2), 0 when A = 0
    bool is_zero = false;
    double isometry_defect = -1; // < 0 when not evaluated
};

/// Closed-form invariance constant; the zero test is exact when the
/// exponents carry rationals.
KelvinReport kelvin_constant(const Exponents& e);

struct DefectProfile {
    RadialFn fn;
    double a = 0, b = 0; // integration annulus containing the support
    std::string name;
};

/// Bump at r = 1/2, bump at r = 1, and a wide spline-tapered plateau.
/// The plateau member is the family's non-invariance witness for generic
/// exponents; the bumps dominate the pure discretization error.
std::vector<DefectProfile> defect_test_family(bool include_plateau = true);

/// max over the family of |(‖K u‖_{q'} / ‖u‖_{q'})^{1/q'} - 1| with both
/// seminorms on n-node uniform annulus grids.
double isometry_defect(const Exponents& e, int n, const std::vector<DefectProfile>& family);
double isometry_defect(const Exponents& e, int n);

struct OperatorFit {
    double fitted_power = 0, predicted_power = 0;
    double fitted_C = 0, predicted_C = 0;
};

/// Applies the composite operator (laplacian, signed power q'-1, laplacian)
/// to r^alpha on an annulus and fits log|L u| against log r over the
/// interior window.
OperatorFit operator_power_fit(const Exponents& e, double a, double b, int n);

} // namespace lenodal

#endif
