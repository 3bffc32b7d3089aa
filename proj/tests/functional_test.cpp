#include <doctest.h>

#include <cmath>
#include <random>

#include "lenodal/functional.hpp"

using namespace lenodal;

namespace {

Field random_field(GridPtr g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    Field f = make_field(g);
    for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values[i] = dist(rng);
    return f;
}

Exponents point_with_qp(double qp) {
    // q = q'/(q'-1); pick an N putting q above the subcritical threshold
    if (qp == 2.0) return hyperbola_from_q(5, Rational(2));
    if (qp == 1.5) return hyperbola_from_q(4, Rational(3));
    return hyperbola_from_q(4, Rational(4)); // q' = 4/3
}

} // namespace

TEST_CASE("energy report of an explicit field") {
    const Exponents e = hyperbola_from_q(4, Rational(4));
    GridPtr g = make_grid(GridKind::radial_1d, 4, 0, 10.0, 1000);
    Field f = sample(g, [](const std::vector<double>& x) {
        return std::exp(-x[0] * x[0]);
    });
    const EnergyReport r = energy(f, e);
    CHECK(r.seminorm_qp > 0);
    CHECK(r.lp_norm_p > 0);
    CHECK(r.energy == doctest::Approx(r.seminorm_qp / e.qp - r.lp_norm_p / e.p));
    CHECK(r.nehari_defect == doctest::Approx(r.seminorm_qp - r.lp_norm_p));
}

TEST_CASE("gradient matches finite differences of the energy") {
    for (double qp : {4.0 / 3.0, 1.5, 2.0}) {
        const Exponents e = point_with_qp(qp);
        const GridKind k =
            e.N == 4 ? GridKind::biradial_2d : GridKind::biradial_radial_3d;
        GridPtr g = make_grid(k, e.N, 1, 3.0, e.N == 4 ? 24 : 16);
        Field u = random_field(g, 42);
        u.grid = g;
        const Field gr = gradient(u, e, 0.0);
        const Eigen::VectorXd& w = g->weights();

        std::mt19937_64 rng(9 + static_cast<std::uint64_t>(10 * qp));
        std::normal_distribution<double> dist;
        int checked = 0;
        for (int k = 0; k < 20; ++k) {
            Field d = make_field(g);
            for (Eigen::Index i = 0; i < d.values.size(); ++i) d.values[i] = dist(rng);
            const double gd = (w.array() * gr.values.array() * d.values.array()).sum();

            const double h = 1e-6;
            Field up = u, dn = u;
            up.values += h * d.values;
            dn.values -= h * d.values;
            const double fd = (energy(up, e).energy - energy(dn, e).energy) / (2 * h);
            CHECK(std::abs(fd - gd) <= 1e-4 * std::max(std::abs(gd), 1.0));
            ++checked;
        }
        CHECK(checked == 20);
    }
}

TEST_CASE("nehari scaling lands on the constraint set") {
    const Exponents e = hyperbola_from_q(4, Rational(4));
    GridPtr g = make_grid(GridKind::biradial_2d, 4, 1, 4.0, 32);
    Field u = sample(g, [](const std::vector<double>& x) {
        return (x[0] * x[0] - x[1] * x[1]) * std::exp(-x[0] * x[0] - x[1] * x[1]);
    });
    const double t = nehari_scale(u, e);
    u.values *= t;
    const EnergyReport r = energy(u, e);
    CHECK(std::abs(r.nehari_defect) <= 1e-10 * r.seminorm_qp);
}

TEST_CASE("dilation generator is the scaling-family derivative") {
    const Exponents e = hyperbola_from_q(4, Rational(4));
    GridPtr g = make_grid(GridKind::radial_1d, 4, 0, 10.0, 1000);
    Field u = sample(g, [](const std::vector<double>& x) {
        return std::exp(-x[0] * x[0]);
    });
    const Field dg = dilation_generator(u, e);
    const double de = 1e-4;
    const Field up = rescale(u, e, 1.0 + de);
    const Field dn = rescale(u, e, 1.0 - de);
    // d/d eps at eps = 1 of the dilation orbit is -(N/p u + x . grad u)
    int checked = 0;
    for (int i = 20; i < 900; i += 37) {
        const double fd = (up.values[i] - dn.values[i]) / (2 * de);
        CHECK(fd == doctest::Approx(-dg.values[i]).epsilon(5e-3));
        ++checked;
    }
    CHECK(checked > 20);
}

TEST_CASE("rescale preserves the critical lp norm") {
    const Exponents e = hyperbola_from_q(4, Rational(4));
    GridPtr g = make_grid(GridKind::biradial_2d, 4, 1, 6.0, 96);
    Field u = sample(g, [](const std::vector<double>& x) {
        return (x[0] * x[0] - x[1] * x[1]) * std::exp(-x[0] * x[0] - x[1] * x[1]);
    });
    const double n0 = energy(u, e).lp_norm_p;
    const double n1 = energy(rescale(u, e, 1.3), e).lp_norm_p;
    CHECK(n1 == doctest::Approx(n0).epsilon(1e-2));
}

TEST_CASE("elementary monotonicity inequality") {
    // frozen grid-minimization values of the optimal constant
    const std::vector<std::pair<double, double>> oracle = {
        {1.2, 0.45526}, {1.5, 0.86603}, {2.0, 1.0}, {3.0, 0.5}, {4.0, 0.25}};
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> dist(-8.0, 8.0);
    for (const auto& [qp, c0] : oracle) {
        CHECK(monotonicity_constant(qp) == doctest::Approx(0.99 * c0).epsilon(0.02));
        for (int k = 0; k < 100000; ++k) {
            const double s = dist(rng), t = dist(rng);
            const MonotonicityGap gap = monotonicity_gap(s, t, qp);
            CHECK(gap.lhs >= gap.rhs_bound - 1e-12);
        }
    }
}
