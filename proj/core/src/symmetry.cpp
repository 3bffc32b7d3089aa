#include "lenodal/symmetry.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace lenodal {

namespace {
constexpr double pi = std::numbers::pi;

double wrap_angle(double th) {
    th = std::fmod(th, 2.0 * pi);
    return th < 0 ? th + 2.0 * pi : th;
}
} // namespace

GammaElement compose(const GammaElement& b, const GammaElement& a) {
    // flip^fb R_tb . flip^fa R_ta, using R_t flip = flip R_{-t} and flip^2 = R_pi.
    GammaElement out;
    if (!a.flip) {
        out.theta = wrap_angle(a.theta + b.theta);
        out.flip = b.flip;
    } else if (!b.flip) {
        out.theta = wrap_angle(a.theta - b.theta);
        out.flip = true;
    } else {
        out.theta = wrap_angle(a.theta - b.theta + pi);
        out.flip = false;
    }
    return out;
}

GammaElement inverse(const GammaElement& g) {
    if (!g.flip) return {wrap_angle(-g.theta), false};
    // (flip R_t)^{-1} = R_{-t} flip^{-1} = flip R_{t + pi}... verify via compose identity
    return {wrap_angle(g.theta + pi), true};
}

int phi(const GammaElement& g) { return g.flip ? -1 : 1; }

void apply(const GammaElement& g, std::span<double, 4> z) {
    const double c = std::cos(g.theta), s = std::sin(g.theta);
    double x0 = c * z[0] - s * z[1];
    double x1 = s * z[0] + c * z[1];
    double x2 = c * z[2] - s * z[3];
    double x3 = s * z[2] + c * z[3];
    if (g.flip) {
        // (z1, z2) -> (-conj z2, conj z1)
        z[0] = -x2;
        z[1] = x3;
        z[2] = x0;
        z[3] = -x1;
    } else {
        z[0] = x0;
        z[1] = x1;
        z[2] = x2;
        z[3] = x3;
    }
}

SignedPermutation SignedPermutation::identity(int m) {
    SignedPermutation p;
    p.perm.resize(static_cast<std::size_t>(m));
    p.sign.assign(static_cast<std::size_t>(m), 1);
    for (int i = 0; i < m; ++i) p.perm[static_cast<std::size_t>(i)] = i;
    return p;
}

int phi_value(const GroupElement& g) {
    int v = 1;
    for (const auto& b : g.blocks) v *= phi(b);
    return v;
}

GroupElement compose(const GroupElement& b, const GroupElement& a) {
    if (b.blocks.size() != a.blocks.size() || b.lambda.perm.size() != a.lambda.perm.size())
        throw std::invalid_argument("group elements from different groups");
    GroupElement out;
    out.blocks.reserve(a.blocks.size());
    for (std::size_t i = 0; i < a.blocks.size(); ++i)
        out.blocks.push_back(compose(b.blocks[i], a.blocks[i]));
    const std::size_t m = a.lambda.perm.size();
    out.lambda.perm.resize(m);
    out.lambda.sign.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        // (b.a)(y)[i] = sign_b[i] * (a y)[perm_b[i]]
        const std::size_t k = static_cast<std::size_t>(b.lambda.perm[i]);
        out.lambda.perm[i] = a.lambda.perm[k];
        out.lambda.sign[i] = b.lambda.sign[i] * a.lambda.sign[k];
    }
    return out;
}

SymmetrySpec make_spec(int N, int j) {
    SymmetrySpec s;
    s.N = N;
    s.j = j;
    const int n = N / 4;
    s.lambda_kind = (j >= 1 && j < n) ? LambdaKind::orthogonal : LambdaKind::trivial;
    validate(s);
    return s;
}

void validate(const SymmetrySpec& spec) {
    if (spec.N < 4) throw std::invalid_argument("symmetry spec needs N >= 4");
    if (spec.j < 0 || 4 * spec.j > spec.N)
        throw std::invalid_argument("block count j must satisfy 0 <= j <= N/4");
    if (spec.lambda_kind == LambdaKind::orthogonal && spec.N - 4 * spec.j < 2)
        throw std::invalid_argument("orthogonal Lambda factor needs N - 4j >= 2");
}

void act(const SymmetrySpec& spec, const GroupElement& g, std::span<const double> x,
         std::span<double> out) {
    const int N = spec.N, j = spec.j, m = N - 4 * j;
    if (static_cast<int>(x.size()) != N || static_cast<int>(out.size()) != N)
        throw std::invalid_argument("point dimension mismatch");
    if (static_cast<int>(g.blocks.size()) != j ||
        static_cast<int>(g.lambda.perm.size()) != m)
        throw std::invalid_argument("group element does not match spec");
    for (int b = 0; b < j; ++b) {
        double z[4] = {x[4 * b + 0], x[4 * b + 1], x[4 * b + 2], x[4 * b + 3]};
        apply(g.blocks[static_cast<std::size_t>(b)], std::span<double, 4>(z));
        for (int k = 0; k < 4; ++k) out[4 * b + k] = z[k];
    }
    for (int i = 0; i < m; ++i)
        out[4 * j + i] = g.lambda.sign[static_cast<std::size_t>(i)] *
                         x[4 * j + g.lambda.perm[static_cast<std::size_t>(i)]];
}

int orbit_dimension(const SymmetrySpec& spec, std::span<const double> x) {
    const int N = spec.N, j = spec.j, m = N - 4 * j;
    if (static_cast<int>(x.size()) != N) throw std::invalid_argument("point dimension mismatch");
    std::vector<Eigen::VectorXd> tangents;
    for (int b = 0; b < j; ++b) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(N);
        v[4 * b + 0] = -x[4 * b + 1];
        v[4 * b + 1] = x[4 * b + 0];
        v[4 * b + 2] = -x[4 * b + 3];
        v[4 * b + 3] = x[4 * b + 2];
        if (v.norm() > 0) tangents.push_back(std::move(v));
    }
    if (spec.lambda_kind == LambdaKind::orthogonal) {
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b) {
                Eigen::VectorXd v = Eigen::VectorXd::Zero(N);
                v[4 * j + a] = -x[4 * j + b];
                v[4 * j + b] = x[4 * j + a];
                if (v.norm() > 0) tangents.push_back(std::move(v));
            }
    }
    if (tangents.empty()) return 0;
    Eigen::MatrixXd M(N, static_cast<Eigen::Index>(tangents.size()));
    for (std::size_t c = 0; c < tangents.size(); ++c) M.col(static_cast<Eigen::Index>(c)) = tangents[c];
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    qr.setThreshold(1e-10);
    return static_cast<int>(qr.rank());
}

ReducedPoint reduce_coordinates(std::span<const double> x, int N, int j) {
    if (j != 1) throw std::invalid_argument("reduced coordinates only support j = 1");
    if (static_cast<int>(x.size()) != N || N < 4)
        throw std::invalid_argument("point dimension mismatch");
    ReducedPoint p;
    p.s = std::hypot(x[0], x[1]);
    p.t = std::hypot(x[2], x[3]);
    if (N > 4) {
        double r2 = 0;
        for (int i = 4; i < N; ++i) r2 += x[i] * x[i];
        p.r = std::sqrt(r2);
    }
    return p;
}

namespace {

// A grid-exact sampled element of G_j on a cartesian grid, as a signed
// permutation of all N coordinates, together with its phi value.
struct SampledElement {
    SignedPermutation sp;
    int phi = 1;
};

SignedPermutation block_rotation_quarter(int k) {
    // rotation by k*pi/2 on (x0,x1) and (x2,x3)
    SignedPermutation p = SignedPermutation::identity(4);
    auto rot = [&](int a, int b) {
        switch (k & 3) {
            case 0: break;
            case 1: p.perm[a] = b; p.sign[a] = -1; p.perm[b] = a; p.sign[b] = 1; break;
            case 2: p.perm[a] = a; p.sign[a] = -1; p.perm[b] = b; p.sign[b] = -1; break;
            case 3: p.perm[a] = b; p.sign[a] = 1; p.perm[b] = a; p.sign[b] = -1; break;
        }
    };
    rot(0, 1);
    rot(2, 3);
    return p;
}

SignedPermutation block_flip() {
    // (z1, z2) -> (-conj z2, conj z1): (x0,x1,x2,x3) -> (-x2, x3, x0, -x1)
    SignedPermutation p;
    p.perm = {2, 3, 0, 1};
    p.sign = {-1, 1, 1, -1};
    return p;
}

SignedPermutation sp_compose(const SignedPermutation& b, const SignedPermutation& a) {
    const std::size_t m = a.perm.size();
    SignedPermutation out;
    out.perm.resize(m);
    out.sign.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        out.perm[i] = a.perm[static_cast<std::size_t>(b.perm[i])];
        out.sign[i] = b.sign[i] * a.sign[static_cast<std::size_t>(b.perm[i])];
    }
    return out;
}

std::vector<SignedPermutation> gamma_block_samples() {
    // rotation coset first (indices 0..3), flip coset second (4..7)
    std::vector<SignedPermutation> out;
    for (int k = 0; k < 4; ++k) out.push_back(block_rotation_quarter(k));
    for (int k = 0; k < 4; ++k) out.push_back(sp_compose(block_flip(), block_rotation_quarter(k)));
    return out;
}

std::vector<SignedPermutation> lambda_samples(const SymmetrySpec& spec) {
    const int m = spec.N - 4 * spec.j;
    std::vector<SignedPermutation> out{SignedPermutation::identity(m)};
    if (spec.lambda_kind == LambdaKind::orthogonal && m >= 4) {
        // the cyclic group generated by the flip acting on the first four
        // y-coordinates (a sampled subgroup of O(m))
        SignedPermutation f = SignedPermutation::identity(m);
        f.perm[0] = 2; f.sign[0] = -1;
        f.perm[1] = 3; f.sign[1] = 1;
        f.perm[2] = 0; f.sign[2] = 1;
        f.perm[3] = 1; f.sign[3] = -1;
        SignedPermutation g = f;
        for (int k = 0; k < 3; ++k) {
            out.push_back(g);
            g = sp_compose(f, g);
        }
    }
    return out;
}

// All grid-exact samples of G_j as whole-space signed permutations.
std::vector<SampledElement> cartesian_samples(const SymmetrySpec& spec) {
    const int N = spec.N, j = spec.j;
    const auto gamma = gamma_block_samples();
    const auto lam = lambda_samples(spec);
    std::vector<SampledElement> out;
    const std::size_t gcount = gamma.size();
    std::size_t total = lam.size();
    for (int b = 0; b < j; ++b) total *= gcount;
    out.reserve(total);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        SampledElement e;
        e.sp.perm.resize(static_cast<std::size_t>(N));
        e.sp.sign.resize(static_cast<std::size_t>(N));
        for (int b = 0; b < j; ++b) {
            const std::size_t gi = c % gcount;
            c /= gcount;
            const SignedPermutation& bp = gamma[gi];
            if (gi >= 4) e.phi = -e.phi; // flip coset entries
            for (int k = 0; k < 4; ++k) {
                e.sp.perm[static_cast<std::size_t>(4 * b + k)] = 4 * b + bp.perm[static_cast<std::size_t>(k)];
                e.sp.sign[static_cast<std::size_t>(4 * b + k)] = bp.sign[static_cast<std::size_t>(k)];
            }
        }
        const SignedPermutation& lp = lam[c];
        const int m = N - 4 * j;
        for (int k = 0; k < m; ++k) {
            e.sp.perm[static_cast<std::size_t>(4 * j + k)] = 4 * j + lp.perm[static_cast<std::size_t>(k)];
            e.sp.sign[static_cast<std::size_t>(4 * j + k)] = lp.sign[static_cast<std::size_t>(k)];
        }
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace

Field symmetrize(const Field& f, const SymmetrySpec& spec) {
    validate(spec);
    const Grid& g = *f.grid;
    Field out;
    out.grid = f.grid;
    out.meta = f.meta;
    out.meta.equivariant = true;
    out.meta.symmetry_tag = spec.j > 0 ? "G" + std::to_string(spec.j) : "trivial";

    if (g.kind() == GridKind::biradial_2d || g.kind() == GridKind::biradial_radial_3d) {
        if (spec.j != 1)
            throw std::invalid_argument("reduced grids support only j = 1");
        const auto& axes = g.axes();
        if (axes[0].n != axes[1].n || axes[0].h != axes[1].h) {
            std::ostringstream os;
            os << "grid not closed under (s,t)-swap: node 0 at (s,t) = (" << g.coord(0, 0)
               << ", " << g.coord(1, 0) << ") has no swap image";
            throw std::invalid_argument(os.str());
        }
        out.values.resize(f.values.size());
        std::vector<int> mi(static_cast<std::size_t>(g.axis_count()));
        for (std::size_t i = 0; i < g.size(); ++i) {
            g.unflatten(i, mi.data());
            std::swap(mi[0], mi[1]);
            const std::size_t sw = g.flatten(mi.data());
            out.values[static_cast<Eigen::Index>(i)] =
                0.5 * (f.values[static_cast<Eigen::Index>(i)] - f.values[static_cast<Eigen::Index>(sw)]);
        }
        return out;
    }

    if (g.kind() == GridKind::radial_1d)
        throw std::invalid_argument("cannot symmetrize a radial grid with a surjective phi");

    // cartesian
    if (g.dimension() != spec.N)
        throw std::invalid_argument("grid dimension does not match symmetry spec");
    const auto samples = cartesian_samples(spec);
    const int N = g.dimension();
    const std::uint32_t n = g.axes()[0].n;
    out.values = Eigen::VectorXd::Zero(f.values.size());
    std::vector<int> mi(static_cast<std::size_t>(N)), mo(static_cast<std::size_t>(N));
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.unflatten(i, mi.data());
        double acc = 0;
        for (const auto& e : samples) {
            for (int a = 0; a < N; ++a) {
                const int src = mi[static_cast<std::size_t>(e.sp.perm[static_cast<std::size_t>(a)])];
                mo[static_cast<std::size_t>(a)] =
                    e.sp.sign[static_cast<std::size_t>(a)] > 0 ? src : static_cast<int>(n) - 1 - src;
            }
            acc += e.phi * f.values[static_cast<Eigen::Index>(g.flatten(mo.data()))];
        }
        out.values[static_cast<Eigen::Index>(i)] = acc / static_cast<double>(samples.size());
    }
    return out;
}

namespace {

GroupElement random_element(const SymmetrySpec& spec, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ang(0.0, 2.0 * pi);
    std::bernoulli_distribution coin(0.5);
    GroupElement g;
    g.blocks.resize(static_cast<std::size_t>(spec.j));
    for (auto& b : g.blocks) {
        b.theta = ang(rng);
        b.flip = coin(rng);
    }
    const int m = spec.N - 4 * spec.j;
    g.lambda = SignedPermutation::identity(m);
    if (spec.lambda_kind == LambdaKind::orthogonal && m > 1) {
        for (int i = m - 1; i > 0; --i) {
            std::uniform_int_distribution<int> pick(0, i);
            std::swap(g.lambda.perm[static_cast<std::size_t>(i)],
                      g.lambda.perm[static_cast<std::size_t>(pick(rng))]);
        }
        int parity = 1;
        for (int i = 0; i < m; ++i) g.lambda.sign[static_cast<std::size_t>(i)] = coin(rng) ? 1 : -1;
        (void)parity; // signed permutations are all in O(m)
    }
    return g;
}

} // namespace

S1S2Report verify_s1_s2(const SymmetrySpec& spec, int sample_count, std::uint64_t seed) {
    validate(spec);
    S1S2Report rep;
    rep.samples = sample_count;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int N = spec.N;

    // (S1): random points either have a positive-dimensional orbit or are
    // exact fixed points of the sampled action.
    rep.s1_ok = true;
    std::vector<double> x(static_cast<std::size_t>(N)), gx(static_cast<std::size_t>(N));
    for (int s = 0; s < sample_count; ++s) {
        for (auto& c : x) c = gauss(rng);
        // exercise fixed-space points too
        if (s % 3 == 0)
            for (int k = 0; k < 4 * spec.j; ++k) x[static_cast<std::size_t>(k)] = 0;
        if (orbit_dimension(spec, x) > 0) continue;
        bool fixed = true;
        for (int t = 0; t < 8; ++t) {
            const GroupElement g = random_element(spec, rng);
            act(spec, g, x, gx);
            double d = 0;
            for (int k = 0; k < N; ++k) d = std::max(d, std::abs(gx[static_cast<std::size_t>(k)] - x[static_cast<std::size_t>(k)]));
            if (d > 1e-9) {
                fixed = false;
                break;
            }
        }
        if (!fixed) {
            rep.s1_ok = false;
            std::ostringstream os;
            os << "S1 violated: zero-dimensional orbit not a fixed point at sample " << s;
            rep.violations.push_back(os.str());
        }
    }

    // (S2): xi with one nonzero coordinate per block, so no flip-type
    // element (square = -1 on its block) can stabilize it; the sampled
    // stabilizer must lie in ker phi.
    rep.xi.assign(static_cast<std::size_t>(N), 0.0);
    for (int b = 0; b < spec.j; ++b) rep.xi[static_cast<std::size_t>(4 * b)] = 1.0;
    rep.s2_ok = true;
    rep.phi_surjective = spec.j > 0;
    if (spec.j == 0) rep.violations.push_back("phi is not surjective (trivial group)");
    for (int s = 0; s < sample_count; ++s) {
        GroupElement g = random_element(spec, rng);
        if (s % 4 == 0)
            for (auto& b : g.blocks) b.theta = 0; // hit the stabilizer often
        act(spec, g, rep.xi, gx);
        double d = 0;
        for (int k = 0; k < N; ++k) d = std::max(d, std::abs(gx[static_cast<std::size_t>(k)] - rep.xi[static_cast<std::size_t>(k)]));
        if (d <= 1e-9 && phi_value(g) != 1) {
            rep.s2_ok = false;
            rep.violations.push_back("S2 violated: stabilizer element with phi = -1");
        }
    }
    return rep;
}

std::optional<std::size_t> distinctness_witness(const Field& u, int i, const Field& w, int j,
                                                double tol) {
    if (i >= j) throw std::invalid_argument("distinctness witness needs i < j");
    if (!u.grid->compatible(*w.grid)) throw std::invalid_argument("incompatible grids");
    const Grid& g = *u.grid;
    if (g.kind() != GridKind::cartesian || g.dimension() < 4 * j)
        throw std::invalid_argument("witness search needs a cartesian grid with 4j <= N");

    // flip in block j as a signed node permutation
    const int N = g.dimension();
    const std::uint32_t n = g.axes()[0].n;
    const SignedPermutation f = block_flip();
    std::vector<int> mi(static_cast<std::size_t>(N)), mo(static_cast<std::size_t>(N));
    const double floor_w = tol * w.values.cwiseAbs().maxCoeff();

    std::optional<std::size_t> best;
    double best_mag = 0;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        const double wv = w.values[static_cast<Eigen::Index>(idx)];
        if (std::abs(wv) <= std::max(floor_w, tol)) continue;
        g.unflatten(idx, mi.data());
        mo = mi;
        const int base = 4 * (j - 1);
        for (int k = 0; k < 4; ++k) {
            const int src = mi[static_cast<std::size_t>(base + f.perm[static_cast<std::size_t>(k)])];
            mo[static_cast<std::size_t>(base + k)] = f.sign[static_cast<std::size_t>(k)] > 0
                                                         ? src
                                                         : static_cast<int>(n) - 1 - src;
        }
        const std::size_t fidx = g.flatten(mo.data());
        const double uv = u.values[static_cast<Eigen::Index>(idx)];
        const double ufv = u.values[static_cast<Eigen::Index>(fidx)];
        const double wfv = w.values[static_cast<Eigen::Index>(fidx)];
        // u is fixed by the flip, w is negated: the pair (idx, fidx) separates
        // u from w as soon as w is nonzero there.
        if (std::abs(ufv - uv) <= 1e-9 * (1 + std::abs(uv)) &&
            std::abs(wfv + wv) <= 1e-9 * (1 + std::abs(wv))) {
            if (std::abs(wv) > best_mag) {
                best_mag = std::abs(wv);
                best = (std::abs(uv - wv) > tol) ? idx : fidx;
            }
        }
    }
    return best;
}

} // namespace lenodal
