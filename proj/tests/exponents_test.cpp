#include <doctest.h>

#include <cmath>
#include <random>

#include "lenodal/exponents.hpp"

using namespace lenodal;

TEST_CASE("conjugate exponent") {
    CHECK(conjugate(2.0) == doctest::Approx(2.0));
    CHECK(conjugate(4.0) == doctest::Approx(4.0 / 3.0));
    CHECK(conjugate(Rational(3, 2)) == Rational(3));
    CHECK_THROWS_AS(conjugate(1.0), std::invalid_argument);
    CHECK_THROWS_AS(conjugate(Rational(1)), std::invalid_argument);
}

TEST_CASE("hyperbola completion from q") {
    const Exponents e = hyperbola_from_q(4, Rational(4));
    CHECK(e.N == 4);
    CHECK(e.p == doctest::Approx(4.0));
    CHECK(e.qp == doctest::Approx(4.0 / 3.0));
    CHECK(e.pp == doctest::Approx(4.0 / 3.0));
    CHECK(e.is_exact());
    CHECK(*e.p_exact == Rational(4));
    validate(e);
}

TEST_CASE("hyperbola completion from p matches from q") {
    const Exponents a = hyperbola_from_q(5, Rational(3));
    const Exponents b = hyperbola_from_p(5, *a.p_exact);
    CHECK(*b.q_exact == Rational(3));
    validate(b);
}

TEST_CASE("subcritical inputs are rejected") {
    // q must exceed N/(N-2)
    CHECK_THROWS_AS(hyperbola_from_q(4, Rational(2)), std::invalid_argument);
    CHECK_THROWS_AS(hyperbola_from_q(4, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(hyperbola_from_q(3, Rational(4)), std::invalid_argument);
}

TEST_CASE("special cases") {
    CHECK(special_case(hyperbola_from_q(4, Rational(4))) == SpecialCase::yamabe);
    CHECK(special_case(hyperbola_from_q(6, Rational(3))) == SpecialCase::yamabe);
    CHECK(special_case(hyperbola_from_q(5, Rational(2))) == SpecialCase::paneitz);
    CHECK(special_case(hyperbola_from_q(6, Rational(5, 2))) == SpecialCase::generic);
    CHECK(to_string(SpecialCase::paneitz) == "paneitz");
}

TEST_CASE("identities over random on-hyperbola points") {
    std::mt19937_64 rng(7);
    for (int N = 4; N <= 10; ++N) {
        std::uniform_int_distribution<long long> num(1, 400);
        for (int k = 0; k < 100; ++k) {
            const Rational q = Rational(N, N - 2) + Rational(num(rng), 16);
            const Exponents e = hyperbola_from_q(N, q);
            validate(e, 1e-12);
            // the difference identity separating q' and p
            CHECK(std::abs(1.0 / e.qp - 1.0 / e.p - 2.0 / N) <= 1e-12);
            CHECK(Rational(1) / *e.qp_exact - Rational(1) / *e.p_exact == Rational(2, N));
        }
    }
}
