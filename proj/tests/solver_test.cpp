#include <doctest.h>

#include <cmath>

#include "lenodal/solver.hpp"

using namespace lenodal;

namespace {

SolveConfig base_config() {
    SolveConfig cfg;
    cfg.exponents = hyperbola_from_q(4, Rational(4));
    cfg.symmetry = make_spec(4, 1);
    cfg.grid_kind = GridKind::biradial_2d;
    cfg.extent = 8.0;
    cfg.resolution = 48;
    return cfg;
}

} // namespace

TEST_CASE("config validation rejects inconsistent setups") {
    SolveConfig cfg = base_config();
    CHECK_NOTHROW(validate(cfg));

    SolveConfig bad = cfg;
    bad.resolution = 0;
    CHECK_THROWS(validate(bad));

    bad = cfg;
    bad.extent = -1.0;
    CHECK_THROWS(validate(bad));

    bad = cfg;
    bad.grid_kind = GridKind::biradial_radial_3d; // wrong reduced dimension for N = 4
    CHECK_THROWS(validate(bad));

    bad = cfg;
    bad.symmetry = make_spec(8, 2);
    CHECK_THROWS(validate(bad)); // exponent record and symmetry disagree on N
}

TEST_CASE("reduced grid kinds by dimension") {
    CHECK(reduced_grid_kind(4) == GridKind::biradial_2d);
    CHECK(reduced_grid_kind(5) == GridKind::biradial_radial_3d);
    CHECK(reduced_grid_kind(8) == GridKind::biradial_radial_3d);
}

TEST_CASE("coarse sign-changing solve has the expected structure") {
    SolveConfig cfg = base_config();
    cfg.max_iterations = 600;
    cfg.residual_tol = 0.5; // coarse grid, coarse tolerance
    const SolveResult r = minimize_equivariant(cfg);

    CHECK(r.iterations > 0);
    CHECK(r.sign_change);
    CHECK(std::isfinite(r.report.energy));
    CHECK(r.report.energy > 0);
    // the Nehari constraint is enforced after every accepted step
    CHECK(std::abs(r.report.nehari_defect) <= 1e-9 * r.report.seminorm_qp);

    // antisymmetry under the coordinate swap is exact on the reduced grid
    const Grid& g = *r.u.grid;
    const int n = static_cast<int>(g.axes()[0].n);
    for (int a = 0; a < n; a += 7)
        for (int b = 0; b < n; b += 7) {
            const int ab[2] = {a, b}, ba[2] = {b, a};
            const double uab = r.u.values[static_cast<Eigen::Index>(g.flatten(ab))];
            const double uba = r.u.values[static_cast<Eigen::Index>(g.flatten(ba))];
            CHECK(uab == -uba);
        }
}

TEST_CASE("warm-started sweep returns one result per exponent point") {
    SolveConfig cfg = base_config();
    cfg.max_iterations = 120;
    cfg.resolution = 32;
    cfg.residual_tol = 1.0;
    const std::vector<Exponents> pts = {hyperbola_from_q(4, Rational(4)),
                                        hyperbola_from_q(4, Rational(9, 2))};
    const std::vector<SolveResult> rs = continuation_sweep(cfg, pts);
    REQUIRE(rs.size() == 2);
    for (const SolveResult& r : rs) {
        CHECK(r.iterations > 0);
        CHECK(std::isfinite(r.report.energy));
    }
}
