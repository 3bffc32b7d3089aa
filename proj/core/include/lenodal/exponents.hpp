#ifndef LENODAL_EXPONENTS_HPP
#define LENODAL_EXPONENTS_HPP

#include <optional>
#include <stdexcept>
#include <string>

#include <boost/rational.hpp>

namespace lenodal {

using Rational = boost::rational<long long>;

/// Exponent tuple (N, p, q, q', p') on the critical hyperbola
/// 1/p + 1/q = (N-2)/N.  When constructed from a rational input the
/// exact values are kept alongside the doubles, so that exact zero
/// tests (the Kelvin zero locus) are not polluted by rounding.
struct Exponents {
    int N = 0;
    double p = 0, q = 0, qp = 0, pp = 0;

    std::optional<Rational> p_exact, q_exact, qp_exact, pp_exact;

    bool is_exact() const { return p_exact.has_value(); }
};

enum class SpecialCase { yamabe, paneitz, generic };

/// r -> r/(r-1).  Throws for r <= 1.
double conjugate(double r);
Rational conjugate(const Rational& r);

/// Completes the hyperbola record from N and one exponent.
/// Requires N >= 4 and the given exponent > N/(N-2).
Exponents hyperbola_from_p(int N, double p);
Exponents hyperbola_from_q(int N, double q);
Exponents hyperbola_from_p(int N, const Rational& p);
Exponents hyperbola_from_q(int N, const Rational& q);

/// yamabe iff p = q = 2N/(N-2); paneitz iff q = 2 (needs N >= 5).
SpecialCase special_case(const Exponents& e);

std::string to_string(SpecialCase c);

/// Checks all hyperbola identities to tol; throws std::invalid_argument
/// with the violated identity otherwise.
void validate(const Exponents& e, double tol = 1e-12);

} // namespace lenodal

#endif
