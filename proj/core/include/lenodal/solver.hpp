#ifndef LENODAL_SOLVER_HPP
#define LENODAL_SOLVER_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lenodal/exponents.hpp"
#include "lenodal/functional.hpp"
#include "lenodal/grid.hpp"
#include "lenodal/symmetry.hpp"

namespace lenodal {

enum class SeedKind { biradial, radial, file };

struct SolveConfig {
    Exponents exponents;
    std::optional<SymmetrySpec> symmetry; // nullopt = plain radial problem

    GridKind grid_kind = GridKind::biradial_2d;
    double extent = 12.0;
    int resolution = 256;

    SeedKind seed = SeedKind::biradial;
    std::filesystem::path seed_file;

    double initial_step = 1.0;
    double backtrack = 0.5;
    int max_iterations = 2000;

    double energy_rel_tol = 1e-9;
    int energy_window = 50;
    double residual_tol = 1e-2;

    double eps_reg_start = 1e-2;
    double eps_reg_decay = 0.25;
    double eps_reg_floor = 1e-12;

    bool precondition = true;

    // hold the iterate's p-moment radius at a fixed gauge by periodic
    // interpolation (the critical scaling makes that mode energy-neutral,
    // so unpinned descent drifts toward grid-scale bubbles); 0 picks
    // sqrt(h * extent), balancing resolution against domain truncation
    bool pin_scale = true;
    double scale_gauge = 0.0;
};

void validate(const SolveConfig& cfg);

/// Reduced grid kind matching the dimension: biradial_2d for N = 4,
/// biradial_radial_3d for N > 4.
GridKind reduced_grid_kind(int N);

struct SolveResult {
    Field u;
    Field v; // recovered companion component
    EnergyReport report;
    std::vector<double> trace; // energy after each accepted step, monotone
                               // between scale renormalizations
    // Euler-Lagrange defect in the inverse-bilaplacian dual metric modulo
    // the dilation tangent, relative to the nonlinear source term in the
    // same metric, eps_reg = 0
    double residual = 0;
    bool sign_change = false;
    bool converged = false;
    int iterations = 0;
    std::string message;
};

/// Projected descent over the equivariant cone: each accepted iterate is
/// symmetrized and scaled back onto the discrete Nehari set, with the
/// concentration scale held at a fixed gauge (see pin_scale).
SolveResult minimize_equivariant(const SolveConfig& cfg);

/// Same descent on the 1d radial grid with a positive seed and no
/// symmetrization; used as the energy baseline.
SolveResult ground_state_radial(const SolveConfig& cfg);

/// Sequential solves along an exponent list, warm-starting each run from
/// the previous solution.  Per-run failures are recorded in the result,
/// not thrown.
std::vector<SolveResult> continuation_sweep(const SolveConfig& base,
                                            const std::vector<Exponents>& exponents);

} // namespace lenodal

#endif
