// End-to-end acceptance suite.  Each criterion prints exactly one line,
// "criterion k: pass ..." or "criterion k: FAIL ...", and the process exits
// nonzero if any fails.  Solver criteria load the shipped configs from
// LENODAL_CONFIG_DIR so the suite exercises the same files users run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "lenodal/config.hpp"
#include "lenodal/inversion.hpp"
#include "lenodal/kelvin.hpp"
#include "lenodal/solver.hpp"
#include "lenodal/symmetry.hpp"

using namespace lenodal;

namespace {

int failures = 0;

void report(int k, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s %s\n", k, ok ? "pass" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SolveConfig load_config(const std::string& name) {
    const ConfigTable t =
        ConfigTable::parse_file(std::string(LENODAL_CONFIG_DIR) + "/" + name);
    return solve_config_from(t);
}

double signed_pow(double a, double expo) {
    if (a == 0.0) return 0.0;
    return a > 0 ? std::pow(a, expo) : -std::pow(-a, expo);
}

// 1. hyperbola identities at random rational points, every N in 4..10
void criterion_1() {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<long long> num(1, 400);
    bool ok = true;
    double worst = 0;
    for (int N = 4; N <= 10 && ok; ++N) {
        const Rational q_min(N, N - 2);
        for (int k = 0; k < 100 && ok; ++k) {
            const Rational q = q_min + Rational(num(rng), 24);
            Exponents e;
            try {
                e = hyperbola_from_q(N, q);
                validate(e, 1e-12);
            } catch (const std::exception&) {
                ok = false;
                break;
            }
            const double gap = std::abs(1.0 / e.qp - 1.0 / e.p - 2.0 / N);
            worst = std::max(worst, gap);
            if (gap > 1e-12) ok = false;
            // exact rational form of the same identity
            if (e.is_exact() &&
                Rational(1) / *e.qp_exact - Rational(1) / *e.p_exact != Rational(2, N))
                ok = false;
        }
    }
    report(1, ok, "hyperbola identities, 700 rational points, worst gap " + fmt(worst));
}

// 2. Kelvin zero locus and isometry defect behavior under refinement
void criterion_2() {
    bool locus_ok = true;
    for (int N = 4; N <= 8 && locus_ok; ++N)
        for (int k = 1; k <= 50; ++k) {
            const Rational q = Rational(N, N - 2) + Rational(k, 4);
            const bool expect = q == Rational(2) || q == Rational(2 * N, N - 2);
            if (kelvin_constant(hyperbola_from_q(N, q)).is_zero != expect) {
                locus_ok = false;
                break;
            }
        }

    auto refine = [](const Exponents& e, double& coarse, double& fine) {
        coarse = isometry_defect(e, 8192);
        fine = isometry_defect(e, 32768);
    };
    double c1, f1, c2, f2;
    refine(hyperbola_from_q(5, Rational(2)), c1, f1);
    refine(hyperbola_from_q(6, Rational(3)), c2, f2);
    const bool inv_ok = f1 < c1 && f1 <= 1e-2 && f2 < c2 && f2 <= 1e-2;
    const double gen = isometry_defect(hyperbola_from_q(6, Rational(4)), 32768);
    const bool gen_ok = gen >= 0.05;

    report(2, locus_ok && inv_ok && gen_ok,
           "zero locus exact, invariant defects " + fmt(f1) + "/" + fmt(f2) +
               " decreasing, generic defect " + fmt(gen));
}

// 3. composite operator power law on pure powers at generic points
void criterion_3() {
    bool ok = true;
    double worst = 0;
    for (const Exponents& e : {hyperbola_from_q(6, Rational(4)),
                               hyperbola_from_q(5, Rational(7, 3)),
                               hyperbola_from_q(7, Rational(3))}) {
        const OperatorFit fit = operator_power_fit(e, 0.5, 2.0, 4096);
        const double rp = std::abs(fit.fitted_power - fit.predicted_power) /
                          std::abs(fit.predicted_power);
        const double rc =
            std::abs(fit.fitted_C - fit.predicted_C) / std::abs(fit.predicted_C);
        worst = std::max(worst, std::max(rp, rc));
        if (rp > 0.05 || rc > 0.05) ok = false;
    }
    report(3, ok, "operator power fits at three generic points, worst rel error " + fmt(worst));
}

// 4. radial baseline: converged, 5 percent of the closed-form 16 pi^2 / 3
SolveResult criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult r = ground_state_radial(load_config("n4_yamabe_ground.toml"));
    const double secs = seconds_since(t0);
    const double target = 16.0 * M_PI * M_PI / 3.0;
    const double rel = std::abs(r.report.energy - target) / target;
    const bool ok = r.converged && rel <= 0.05 && secs <= 120.0;
    report(4, ok, "radial energy " + fmt(r.report.energy) + " vs " + fmt(target) +
                      " (rel " + fmt(rel) + "), converged=" + (r.converged ? "1" : "0") +
                      ", " + fmt(secs) + "s");
    return r;
}

// 5. sign-changing equivariant solve with residual refinement
SolveResult criterion_5(const SolveResult& ground) {
    const auto t0 = std::chrono::steady_clock::now();
    SolveConfig cfg = load_config("n4_yamabe_signchanging.toml");
    const SolveResult r = minimize_equivariant(cfg);

    SolveConfig coarse_cfg = cfg;
    coarse_cfg.resolution = cfg.resolution / 2;
    coarse_cfg.residual_tol = 1.0; // run to the energy tolerance, compare residuals
    const SolveResult rc = minimize_equivariant(coarse_cfg);
    const double secs = seconds_since(t0);

    const double defect = std::abs(r.report.nehari_defect) / r.report.seminorm_qp;

    bool antisym = true;
    const Grid& g = *r.u.grid;
    const int n = static_cast<int>(g.axes()[0].n);
    for (int a = 0; a < n && antisym; ++a)
        for (int b = 0; b < n; ++b) {
            const int ab[2] = {a, b}, ba[2] = {b, a};
            if (r.u.values[static_cast<Eigen::Index>(g.flatten(ab))] !=
                -r.u.values[static_cast<Eigen::Index>(g.flatten(ba))]) {
                antisym = false;
                break;
            }
        }

    const bool v_changes = r.v.values.minCoeff() < 0 && r.v.values.maxCoeff() > 0;
    const double fine_res = system_residual(r.u, r.v, cfg.exponents).residual_1;
    const double coarse_res =
        system_residual(rc.u, rc.v, cfg.exponents).residual_1;
    const double factor = coarse_res / fine_res;

    const bool ok = r.converged && defect <= 1e-10 && antisym && r.sign_change &&
                    v_changes && r.report.energy >= 1.1 * ground.report.energy &&
                    factor >= 1.7 && secs <= 600.0;
    report(5, ok, "energy " + fmt(r.report.energy) + ", nehari defect " + fmt(defect) +
                      ", antisym=" + (antisym ? "1" : "0") +
                      ", sign change u/v=" + (r.sign_change ? "1" : "0") +
                      (v_changes ? "/1" : "/0") + ", residual factor " + fmt(factor) +
                      ", " + fmt(secs) + "s");
    return r;
}

// 6. domain independence: doubling R at fixed h moves the energy < 2 percent
void criterion_6(const SolveResult& base) {
    const auto t0 = std::chrono::steady_clock::now();
    SolveConfig cfg = load_config("n4_yamabe_signchanging.toml");
    cfg.extent *= 2.0;
    cfg.resolution *= 2;
    const SolveResult r = minimize_equivariant(cfg);
    const double secs = seconds_since(t0);
    const double rel =
        std::abs(r.report.energy - base.report.energy) / base.report.energy;
    const bool ok = r.converged && rel <= 0.02 && secs <= 1200.0;
    report(6, ok, "energies " + fmt(base.report.energy) + " / " + fmt(r.report.energy) +
                      " (rel " + fmt(rel) + "), " + fmt(secs) + "s");
}

// 7. companion component: |v|^{q-2} v = -Lap u nodewise, v equivariant
void criterion_7(const SolveResult& r, const Exponents& e, const SymmetrySpec& spec) {
    const Field lu = laplacian(r.u);
    const double scale = lu.values.cwiseAbs().maxCoeff();
    double worst = 0;
    for (Eigen::Index i = 0; i < r.v.values.size(); ++i)
        worst = std::max(worst,
                         std::abs(signed_pow(r.v.values[i], e.q - 1.0) + lu.values[i]));
    const bool nodewise = worst <= 1e-12 * scale;

    // the signed power q'-1 = 1/3 amplifies the last-bit swap asymmetry of
    // Lap u near its zero set, so "roundoff" for v means ~1e-12, not 1e-16
    const Field sv = symmetrize(r.v, spec);
    const double equiv =
        (sv.values - r.v.values).cwiseAbs().maxCoeff() / r.v.values.cwiseAbs().maxCoeff();
    const bool ok = nodewise && equiv <= 1e-10;
    report(7, ok, "nodewise defect " + fmt(worst / scale) + ", equivariance defect " +
                      fmt(equiv));
}

// 8. gradient against central differences of the energy
void criterion_8() {
    bool ok = true;
    double worst = 0;
    for (const Exponents& e : {hyperbola_from_q(4, Rational(4)),
                               hyperbola_from_q(4, Rational(3)),
                               hyperbola_from_q(5, Rational(2))}) {
        const GridKind k =
            e.N == 4 ? GridKind::biradial_2d : GridKind::biradial_radial_3d;
        GridPtr g = make_grid(k, e.N, 1, 3.0, e.N == 4 ? 24 : 16);
        std::mt19937_64 rng(7);
        std::normal_distribution<double> dist;
        Field u = make_field(g);
        for (Eigen::Index i = 0; i < u.values.size(); ++i) u.values[i] = dist(rng);
        const Field gr = gradient(u, e, 0.0);
        const Eigen::VectorXd& w = g->weights();
        for (int k = 0; k < 20; ++k) {
            Field d = make_field(g);
            for (Eigen::Index i = 0; i < d.values.size(); ++i) d.values[i] = dist(rng);
            const double gd = (w.array() * gr.values.array() * d.values.array()).sum();
            const double h = 1e-6;
            Field up = u, dn = u;
            up.values += h * d.values;
            dn.values -= h * d.values;
            const double fd = (energy(up, e).energy - energy(dn, e).energy) / (2 * h);
            const double rel = std::abs(fd - gd) / std::max(std::abs(gd), 1.0);
            worst = std::max(worst, rel);
            if (rel > 1e-4) ok = false;
        }
    }
    report(8, ok, "gradient vs finite differences, q' in {4/3, 3/2, 2}, worst rel " +
                      fmt(worst));
}

// 9. elementary monotonicity inequality against frozen optimal constants
void criterion_9() {
    const std::vector<std::pair<double, double>> oracle = {
        {1.2, 0.45526}, {1.5, 0.86603}, {2.0, 1.0}, {3.0, 0.5}, {4.0, 0.25}};
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    bool ok = true;
    double margin = 1e300;
    for (const auto& [qp, c0] : oracle) {
        for (int k = 0; k < 100000; ++k) {
            const double s = dist(rng), t = dist(rng);
            if (s == t) continue;
            const double lhs =
                (signed_pow(s, qp - 1.0) - signed_pow(t, qp - 1.0)) * (s - t);
            double rhs;
            if (qp >= 2.0)
                rhs = std::pow(std::abs(s - t), qp);
            else
                rhs = (s - t) * (s - t) /
                      std::pow(std::pow(std::abs(s), qp) + std::pow(std::abs(t), qp) + 1.0,
                               2.0 - qp);
            if (lhs < 0.99 * c0 * rhs - 1e-12) ok = false;
            if (rhs > 0) margin = std::min(margin, lhs / (c0 * rhs));
        }
    }
    report(9, ok, "500000 pairs over five q' values, smallest lhs/(C0 rhs) " + fmt(margin));
}

// 10. group action suite: algebra, commutation, axioms, distinctness
void criterion_10() {
    std::vector<std::string> problems;

    for (int N : {4, 5, 8})
        for (int j : {1, 2}) {
            if (4 * j > N) continue;
            const SymmetrySpec spec = make_spec(N, j);
            const S1S2Report rep = verify_s1_s2(spec, 200, 11);
            if (!rep.s1_ok) problems.push_back("S1 N=" + std::to_string(N));
            if (!rep.s2_ok) problems.push_back("S2 N=" + std::to_string(N));
            if (!rep.phi_surjective) problems.push_back("phi N=" + std::to_string(N));
        }

    // idempotence and Laplacian commutation on the reduced grid
    {
        const SymmetrySpec spec = make_spec(4, 1);
        GridPtr g = make_grid(GridKind::biradial_2d, 4, 1, 4.0, 48);
        Field f = sample(g, [](const std::vector<double>& x) {
            return x[0] * std::exp(-x[0] * x[0] - 0.5 * x[1] * x[1]);
        });
        const Field sf = symmetrize(f, spec);
        const Field ssf = symmetrize(sf, spec);
        if ((ssf.values - sf.values).cwiseAbs().maxCoeff() >
            1e-14 * sf.values.cwiseAbs().maxCoeff())
            problems.push_back("idempotence");
        const Field a = laplacian(symmetrize(f, spec));
        const Field b = symmetrize(laplacian(f), spec);
        if ((a.values - b.values).cwiseAbs().maxCoeff() >
            1e-11 * a.values.cwiseAbs().maxCoeff())
            problems.push_back("commutation");
    }

    // homomorphism property of the block action
    {
        const SymmetrySpec spec = make_spec(8, 2);
        std::mt19937_64 rng(5);
        std::normal_distribution<double> dist;
        GroupElement g1, g2;
        g1.blocks = {{0.7, true}, {2.1, false}};
        g2.blocks = {{-1.3, false}, {0.4, true}};
        g1.lambda = SignedPermutation::identity(0);
        g2.lambda = SignedPermutation::identity(0);
        for (int k = 0; k < 20; ++k) {
            std::vector<double> x(8), y(8), z(8);
            for (double& c : x) c = dist(rng);
            act(spec, g2, x, y);
            act(spec, g1, y, z); // g1 after g2
            std::vector<double> w(8);
            act(spec, compose(g1, g2), x, w);
            for (int i = 0; i < 8; ++i)
                if (std::abs(z[i] - w[i]) > 1e-12) {
                    problems.push_back("homomorphism");
                    k = 20;
                    break;
                }
            if (phi_value(compose(g1, g2)) != phi_value(g1) * phi_value(g2)) {
                problems.push_back("phi multiplicative");
                break;
            }
        }
    }

    // distinctness witness between the j = 1 and j = 2 equivariance types
    {
        GridPtr g = make_grid(GridKind::cartesian, 8, 2, 2.0, 4);
        auto r2 = [](const std::vector<double>& x) {
            double s = 0;
            for (double c : x) s += c * c;
            return s;
        };
        // u flips sign with block 1, w with block 2
        Field u = sample(g, [&](const std::vector<double>& x) {
            const double a = x[0] * x[0] + x[1] * x[1], b = x[2] * x[2] + x[3] * x[3];
            return (a - b) * std::exp(-r2(x));
        });
        Field w = sample(g, [&](const std::vector<double>& x) {
            const double a = x[4] * x[4] + x[5] * x[5], b = x[6] * x[6] + x[7] * x[7];
            return (a - b) * std::exp(-r2(x));
        });
        if (!distinctness_witness(u, 1, w, 2).has_value())
            problems.push_back("distinctness witness");
    }

    std::string detail = "action axioms, commutation and distinctness";
    if (!problems.empty()) {
        detail = "violations:";
        for (const std::string& p : problems) detail += " " + p;
    }
    report(10, problems.empty(), detail);
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    const SolveResult ground = criterion_4();
    const SolveResult sc = criterion_5(ground);
    criterion_6(sc);
    criterion_7(sc, hyperbola_from_q(4, Rational(4)), make_spec(4, 1));
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("%s\n", failures == 0 ? "all criteria passed" : "ACCEPTANCE FAILED");
    return failures == 0 ? 0 : 1;
}
