#include "lenodal/exponents.hpp"

#include <cmath>
#include <sstream>

namespace lenodal {

namespace {

double as_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

void check_dimension(int N) {
    if (N < 4)
        throw std::invalid_argument("dimension N must be >= 4, got " + std::to_string(N));
}

void check_above_asymptote(int N, double value, const char* name) {
    const double asymptote = static_cast<double>(N) / (N - 2);
    if (!(value > asymptote)) {
        std::ostringstream os;
        os << name << " = " << value << " must exceed the hyperbola asymptote N/(N-2) = "
           << asymptote << " at N = " << N;
        throw std::invalid_argument(os.str());
    }
}

Exponents finish(int N, double p, double q) {
    Exponents e;
    e.N = N;
    e.p = p;
    e.q = q;
    e.qp = conjugate(q);
    e.pp = conjugate(p);
    validate(e);
    return e;
}

} // namespace

double conjugate(double r) {
    if (!(r > 1.0))
        throw std::invalid_argument("conjugate exponent needs r > 1, got " + std::to_string(r));
    return r / (r - 1.0);
}

Rational conjugate(const Rational& r) {
    if (r <= Rational(1))
        throw std::invalid_argument("conjugate exponent needs r > 1");
    return r / (r - Rational(1));
}

Exponents hyperbola_from_q(int N, double q) {
    check_dimension(N);
    check_above_asymptote(N, q, "q");
    // 1/p = (N-2)/N - 1/q
    const double inv_p = static_cast<double>(N - 2) / N - 1.0 / q;
    return finish(N, 1.0 / inv_p, q);
}

Exponents hyperbola_from_p(int N, double p) {
    check_dimension(N);
    check_above_asymptote(N, p, "p");
    const double inv_q = static_cast<double>(N - 2) / N - 1.0 / p;
    return finish(N, p, 1.0 / inv_q);
}

Exponents hyperbola_from_q(int N, const Rational& q) {
    check_dimension(N);
    check_above_asymptote(N, as_double(q), "q");
    const Rational inv_p = Rational(N - 2, N) - Rational(1) / q;
    const Rational p = Rational(1) / inv_p;
    Exponents e = finish(N, as_double(p), as_double(q));
    e.p_exact = p;
    e.q_exact = q;
    e.qp_exact = conjugate(q);
    e.pp_exact = conjugate(p);
    return e;
}

Exponents hyperbola_from_p(int N, const Rational& p) {
    check_dimension(N);
    check_above_asymptote(N, as_double(p), "p");
    const Rational inv_q = Rational(N - 2, N) - Rational(1) / p;
    const Rational q = Rational(1) / inv_q;
    Exponents e = finish(N, as_double(p), as_double(q));
    e.p_exact = p;
    e.q_exact = q;
    e.qp_exact = conjugate(q);
    e.pp_exact = conjugate(p);
    return e;
}

SpecialCase special_case(const Exponents& e) {
    if (e.is_exact()) {
        const Rational two_star(2 * e.N, e.N - 2);
        if (*e.p_exact == two_star && *e.q_exact == two_star) return SpecialCase::yamabe;
        if (*e.q_exact == Rational(2) && e.N >= 5) return SpecialCase::paneitz;
        return SpecialCase::generic;
    }
    const double two_star = 2.0 * e.N / (e.N - 2);
    const double tol = 1e-12;
    if (std::abs(e.p - two_star) < tol && std::abs(e.q - two_star) < tol)
        return SpecialCase::yamabe;
    if (std::abs(e.q - 2.0) < tol && e.N >= 5) return SpecialCase::paneitz;
    return SpecialCase::generic;
}

std::string to_string(SpecialCase c) {
    switch (c) {
        case SpecialCase::yamabe: return "yamabe";
        case SpecialCase::paneitz: return "paneitz";
        default: return "generic";
    }
}

void validate(const Exponents& e, double tol) {
    check_dimension(e.N);
    const double N = e.N;
    auto fail = [&](const char* what) {
        throw std::invalid_argument(std::string("exponent invariant violated: ") + what);
    };
    if (std::abs(1.0 / e.p + 1.0 / e.q - (N - 2.0) / N) > tol)
        fail("1/p + 1/q = (N-2)/N");
    if (std::abs(e.p - N * e.qp / (N - 2.0 * e.qp)) > tol * std::abs(e.p))
        fail("p = N q' / (N - 2 q')");
    if (std::abs(1.0 / e.qp - 1.0 / e.p - 2.0 / N) > tol)
        fail("1/q' - 1/p = 2/N");
    if ((e.qp < 2.0) != (e.q > 2.0) && e.q != 2.0)
        fail("q' < 2 iff q > 2");
    if (!(e.p > e.qp))
        fail("p > q'");
}

} // namespace lenodal
