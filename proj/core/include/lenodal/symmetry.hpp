#ifndef LENODAL_SYMMETRY_HPP
#define LENODAL_SYMMETRY_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lenodal/grid.hpp"

namespace lenodal {

/// Element of the group generated by the diagonal circle action and the
/// flip (z1, z2) -> (-conj z2, conj z1) on C^2, in the canonical form
/// flip^f . R_theta (flip applied after the rotation).
struct GammaElement {
    double theta = 0;
    bool flip = false;
};

/// b after a.
GammaElement compose(const GammaElement& b, const GammaElement& a);
GammaElement inverse(const GammaElement& g);
int phi(const GammaElement& g); // -1 iff flip

/// Applies g to a block of 4 reals (z1, z2) = ((x0,x1),(x2,x3)).
void apply(const GammaElement& g, std::span<double, 4> z);

/// Signed permutation, out[i] = sign[i] * y[perm[i]].
struct SignedPermutation {
    std::vector<int> perm;
    std::vector<int> sign;
    static SignedPermutation identity(int m);
};

struct GroupElement {
    std::vector<GammaElement> blocks; // one per C^2 factor
    SignedPermutation lambda;         // acts on the trailing R^{N-4j}
};

int phi_value(const GroupElement& g);
GroupElement compose(const GroupElement& b, const GroupElement& a);

enum class LambdaKind { orthogonal, trivial };

struct SymmetrySpec {
    int N = 4;
    int j = 1;                // 0 = trivial group (negative control)
    LambdaKind lambda_kind = LambdaKind::trivial;
    int haar_samples = 16;    // theta nodes per circle for quadrature oracles
};

/// G_j = Gamma^j x Lambda_j with Lambda_j = O(N-4j) for j < floor(N/4),
/// trivial otherwise.
SymmetrySpec make_spec(int N, int j);

void validate(const SymmetrySpec& spec);

/// Applies a group element blockwise; x has length N.
void act(const SymmetrySpec& spec, const GroupElement& g, std::span<const double> x,
         std::span<double> out);

/// Rank of the span of action-generator tangent vectors at x; 0 iff the
/// connected part fixes x.
int orbit_dimension(const SymmetrySpec& spec, std::span<const double> x);

struct ReducedPoint {
    double s = 0, t = 0;
    std::optional<double> r;
};

ReducedPoint reduce_coordinates(std::span<const double> x, int N, int j = 1);

/// Discrete Haar average (1/n) sum phi(g) f(g x) over the grid-exact
/// sampled subgroup.  Reduced grids use the exact (s,t)-swap quotient;
/// cartesian grids use per-block quarter rotations and flips plus a
/// sampled Lambda subgroup.  Throws if the grid is not action-closed
/// (reports the first violating node).
Field symmetrize(const Field& f, const SymmetrySpec& spec);

struct S1S2Report {
    bool s1_ok = false;
    bool s2_ok = false;
    bool phi_surjective = false;
    std::vector<double> xi; // S2 witness
    std::vector<std::string> violations;
    int samples = 0;
};

S1S2Report verify_s1_s2(const SymmetrySpec& spec, int sample_count, std::uint64_t seed = 1);

/// Grid point certifying u != w for u phi_i-equivariant, w phi_j-equivariant,
/// i < j: applying the flip in block j fixes u but negates w.  Returns the
/// node index, or nullopt when w vanishes on all tested nodes.
std::optional<std::size_t> distinctness_witness(const Field& u, int i, const Field& w, int j,
                                                double tol = 1e-12);

} // namespace lenodal

#endif
