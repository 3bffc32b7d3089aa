#include <doctest.h>

#include <array>
#include <cmath>

#include "lenodal/grid.hpp"
#include "lenodal/symmetry.hpp"

using namespace lenodal;

TEST_CASE("gamma element algebra") {
    GammaElement r{0.7, false}, f{0.0, true};
    CHECK(phi(r) == 1);
    CHECK(phi(f) == -1);

    const GammaElement rf = compose(f, r); // flip after rotation
    CHECK(rf.flip);

    const GammaElement id = compose(inverse(rf), rf);
    CHECK_FALSE(id.flip);
    CHECK(std::abs(std::remainder(id.theta, 2 * 3.14159265358979323846)) < 1e-12);
}

TEST_CASE("gamma action matches the matrix form") {
    GammaElement g{0.3, true};
    std::array<double, 4> z = {1.0, 0.5, -0.25, 2.0};
    std::array<double, 4> gz = z;
    lenodal::apply(g, gz);

    // flip sends (z1, z2) to (-conj z2, conj z1)
    std::array<double, 4> rz = z;
    lenodal::apply(GammaElement{0.3, false}, rz);
    CHECK(gz[0] == doctest::Approx(-rz[2]));
    CHECK(gz[1] == doctest::Approx(rz[3]));
    CHECK(gz[2] == doctest::Approx(rz[0]));
    CHECK(gz[3] == doctest::Approx(-rz[1]));
}

TEST_CASE("group homomorphism: acting by a composition equals acting twice") {
    const SymmetrySpec spec = make_spec(8, 2);
    GroupElement a, b;
    a.blocks = {GammaElement{0.4, false}, GammaElement{1.1, true}};
    b.blocks = {GammaElement{2.0, true}, GammaElement{-0.3, false}};
    a.lambda = SignedPermutation::identity(0);
    b.lambda = SignedPermutation::identity(0);

    std::array<double, 8> x = {0.3, -1.2, 0.8, 0.1, 1.5, -0.4, 0.6, 0.9};
    std::array<double, 8> ax{}, bax{}, cx{};
    act(spec, a, x, ax);
    act(spec, b, ax, bax);
    act(spec, compose(b, a), x, cx);
    for (int i = 0; i < 8; ++i) CHECK(bax[i] == doctest::Approx(cx[i]).epsilon(1e-12));
    CHECK(phi_value(compose(b, a)) == phi_value(a) * phi_value(b));
}

TEST_CASE("orbit dimension separates fixed points from free points") {
    const SymmetrySpec spec = make_spec(4, 1);
    std::array<double, 4> origin = {0, 0, 0, 0};
    std::array<double, 4> generic = {1.0, 0.2, 0.5, -0.3};
    CHECK(orbit_dimension(spec, origin) == 0);
    CHECK(orbit_dimension(spec, generic) > 0);
}

TEST_CASE("reduced coordinates") {
    std::array<double, 6> x = {3.0, 4.0, 0.0, 1.0, 2.0, -2.0};
    const ReducedPoint rp = reduce_coordinates(x, 6, 1);
    CHECK(rp.s == doctest::Approx(5.0));
    CHECK(rp.t == doctest::Approx(1.0));
    REQUIRE(rp.r.has_value());
    CHECK(*rp.r == doctest::Approx(std::sqrt(8.0)));
}

TEST_CASE("symmetrizer is an idempotent equivariant projector") {
    for (int N : {4, 5, 8}) {
        const SymmetrySpec spec = make_spec(N, 1);
        GridPtr g = make_grid(N == 4 ? GridKind::biradial_2d : GridKind::biradial_radial_3d,
                              N, 1, 2.0, 24);
        Field f = sample(g, [](const std::vector<double>& x) {
            double acc = 1.0;
            for (std::size_t a = 0; a < x.size(); ++a)
                acc += static_cast<double>(a + 1) * x[a] + 0.3 * x[a] * x[a];
            return acc;
        });
        const Field pf = symmetrize(f, spec);
        const Field ppf = symmetrize(pf, spec);
        CHECK(pf.meta.equivariant);
        CHECK((ppf.values - pf.values).cwiseAbs().maxCoeff() <= 1e-14 * pf.values.cwiseAbs().maxCoeff());

        // the reduced quotient acts by the (s,t) swap with a sign
        int mi[3] = {3, 11, 5};
        int mj[3] = {11, 3, 5};
        CHECK(pf.values[static_cast<Eigen::Index>(g->flatten(mi))] ==
              -pf.values[static_cast<Eigen::Index>(g->flatten(mj))]);
    }
}

TEST_CASE("symmetrizer commutes with the laplacian") {
    const SymmetrySpec spec = make_spec(4, 1);
    GridPtr g = make_grid(GridKind::biradial_2d, 4, 1, 3.0, 48);
    Field f = sample(g, [](const std::vector<double>& x) {
        return std::sin(x[0]) * std::exp(-x[1]);
    });
    const Field a = laplacian(symmetrize(f, spec));
    const Field b = symmetrize(laplacian(f), spec);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() <=
          1e-12 * a.values.cwiseAbs().maxCoeff());
}

TEST_CASE("structure conditions hold for the shipped groups") {
    for (int N : {4, 5, 8}) {
        for (int j : {1, 2}) {
            if (4 * j > N) continue;
            const SymmetrySpec spec = make_spec(N, j);
            const S1S2Report rep = verify_s1_s2(spec, 64, 11);
            CHECK(rep.s1_ok);
            CHECK(rep.s2_ok);
            CHECK(rep.phi_surjective);
            CHECK(rep.violations.empty());
        }
    }
}

TEST_CASE("distinctness witness at N = 8") {
    GridPtr g = make_grid(GridKind::cartesian, 8, 2, 1.5, 4);
    auto shape = [](const std::vector<double>& x) {
        double r2 = 0;
        for (double c : x) r2 += c * c;
        return std::exp(-r2);
    };
    Field u = sample(g, [&](const std::vector<double>& x) {
        return (x[0] * x[0] + x[1] * x[1] - x[2] * x[2] - x[3] * x[3]) * shape(x);
    });
    Field w = sample(g, [&](const std::vector<double>& x) {
        return (x[4] * x[4] + x[5] * x[5] - x[6] * x[6] - x[7] * x[7]) * shape(x);
    });
    const auto witness = distinctness_witness(u, 1, w, 2);
    REQUIRE(witness.has_value());
    CHECK(std::abs(w.values[static_cast<Eigen::Index>(*witness)]) > 1e-12);
}
