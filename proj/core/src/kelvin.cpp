#include "lenodal/kelvin.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include <Eigen/Dense>

#include "lenodal/grid.hpp"

namespace lenodal {

namespace {

inline double signed_pow(double a, double expo) {
    if (a == 0.0) return 0.0;
    return a > 0 ? std::pow(a, expo) : -std::pow(-a, expo);
}

// second-order differences, one-sided at the ends
Eigen::VectorXd diff1(const Eigen::VectorXd& v, double h) {
    const Eigen::Index n = v.size();
    Eigen::VectorXd d(n);
    for (Eigen::Index i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2 * h);
    d[0] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h);
    d[n - 1] = (3 * v[n - 1] - 4 * v[n - 2] + v[n - 3]) / (2 * h);
    return d;
}

Eigen::VectorXd radial_laplacian(const AnnulusProfile& u) {
    const Eigen::VectorXd d1 = diff1(u.values, u.h);
    const Eigen::VectorXd d2 = diff1(d1, u.h);
    Eigen::VectorXd lap(u.values.size());
    for (Eigen::Index i = 0; i < lap.size(); ++i)
        lap[i] = d2[i] + (u.N - 1) / u.r(i) * d1[i];
    return lap;
}

double trapezoid_weighted(const AnnulusProfile& u, const Eigen::VectorXd& f) {
    const double omega = unit_sphere_area(u.N);
    double acc = 0;
    for (Eigen::Index i = 0; i + 1 < f.size(); ++i) {
        const double g0 = f[i] * std::pow(u.r(i), u.N - 1);
        const double g1 = f[i + 1] * std::pow(u.r(i + 1), u.N - 1);
        acc += 0.5 * (g0 + g1) * u.h;
    }
    return omega * acc;
}

double smoothstep(double x) {
    auto f = [](double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; };
    const double a = f(x), b = f(1.0 - x);
    return a + b > 0 ? a / (a + b) : 0.0;
}

// cubic spline with zero end slopes through uniformly spaced knots
struct ClampedSpline {
    double x0, h;
    Eigen::VectorXd y, k; // values and first derivatives at the knots

    ClampedSpline(double x0_, double h_, Eigen::VectorXd y_) : x0(x0_), h(h_), y(std::move(y_)) {
        const Eigen::Index n = y.size();
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
        M(0, 0) = 1;
        M(n - 1, n - 1) = 1;
        for (Eigen::Index i = 1; i + 1 < n; ++i) {
            M(i, i - 1) = 1;
            M(i, i) = 4;
            M(i, i + 1) = 1;
            rhs[i] = 3 * (y[i + 1] - y[i - 1]) / h;
        }
        k = M.fullPivLu().solve(rhs);
    }

    double operator()(double x) const {
        const Eigen::Index n = y.size();
        double s = (x - x0) / h;
        Eigen::Index i = static_cast<Eigen::Index>(std::floor(s));
        i = std::max<Eigen::Index>(0, std::min(i, n - 2));
        const double t = s - static_cast<double>(i);
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
        const double h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t);
        const double h11 = t * t * (t - 1);
        return h00 * y[i] + h10 * h * k[i] + h01 * y[i + 1] + h11 * h * k[i + 1];
    }
};

} // namespace

AnnulusProfile sample_annulus(const RadialFn& u, int N, double a, double b, int n) {
    if (!(b > a) || !(a > 0)) throw std::invalid_argument("annulus needs 0 < a < b");
    if (n < 8) throw std::invalid_argument("annulus needs at least 8 nodes");
    AnnulusProfile p;
    p.N = N;
    p.a = a;
    p.h = (b - a) / (n - 1);
    p.values.resize(n);
    for (int i = 0; i < n; ++i) p.values[i] = u(p.r(i));
    return p;
}

double annulus_seminorm_qp(const AnnulusProfile& u, double qp) {
    const Eigen::VectorXd lap = radial_laplacian(u);
    return trapezoid_weighted(u, lap.array().abs().pow(qp).matrix());
}

double annulus_lp_norm_p(const AnnulusProfile& u, double p) {
    return trapezoid_weighted(u, u.values.array().abs().pow(p).matrix());
}

AnnulusProfile kelvin_transform(const AnnulusProfile& u, double alpha) {
    AnnulusProfile out;
    out.N = u.N;
    const double b = u.b();
    const int n = static_cast<int>(u.values.size());
    out.a = 1.0 / b;
    out.h = (1.0 / u.a - 1.0 / b) / (n - 1);
    out.values.resize(n);
    for (int i = 0; i < n; ++i) {
        const double rho = out.r(i);
        const double r = 1.0 / rho;
        double s = (r - u.a) / u.h;
        Eigen::Index k = static_cast<Eigen::Index>(std::floor(s));
        k = std::max<Eigen::Index>(0, std::min<Eigen::Index>(k, n - 2));
        const double t = s - static_cast<double>(k);
        out.values[i] = std::pow(rho, alpha) * ((1 - t) * u.values[k] + t * u.values[k + 1]);
    }
    return out;
}

RadialFn kelvin_transform(const RadialFn& u, double alpha) {
    return [u, alpha](double r) { return std::pow(r, alpha) * u(1.0 / r); };
}

KelvinReport kelvin_constant(const Exponents& e) {
    KelvinReport rep;
    rep.alpha = -2.0 * e.N / e.p;
    rep.A = rep.alpha * (e.N - 2 + rep.alpha);
    rep.B = (e.qp - 1.0) * (rep.alpha - 2.0);
    bool a_zero, locus_zero;
    if (e.is_exact()) {
        const Rational alpha_ex = Rational(-2 * e.N) / *e.p_exact;
        const Rational a_ex = alpha_ex * (alpha_ex + (e.N - 2));
        const Rational bn_ex = (*e.qp_exact - 1) * (alpha_ex - 2) + (e.N - 2);
        a_zero = a_ex == Rational(0);
        locus_zero = a_zero || bn_ex == Rational(0);
    } else {
        a_zero = std::abs(rep.A) < 1e-12;
        locus_zero = a_zero || std::abs(rep.B + e.N - 2) < 1e-12;
    }
    rep.is_zero = locus_zero;
    rep.constant_C = a_zero ? 0.0
                            : std::pow(std::abs(rep.A), e.qp - 2.0) * rep.A * rep.B *
                                  (rep.B + e.N - 2);
    return rep;
}

std::vector<DefectProfile> defect_test_family(bool include_plateau) {
    std::vector<DefectProfile> fam;

    auto bump = [](double c, double rho) {
        return [c, rho](double r) {
            const double x = (r - c) / rho;
            return std::abs(x) < 1 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0;
        };
    };
    fam.push_back({bump(0.5, 0.2), 0.27, 0.77, "bump-half"});
    fam.push_back({bump(1.0, 0.4), 0.54, 1.54, "bump-one"});

    if (include_plateau) {
        const double L = std::log(8.0);
        Eigen::VectorXd vals(8);
        vals << 1.0, 0.868, 0.661, 0.475, 0.312, 0.096, 0.013, 0.0;
        auto spline = std::make_shared<ClampedSpline>(0.0, L / 7.0, vals);
        fam.push_back({[spline, L](double r) {
                           if (r <= 0) return 0.0;
                           const double lr = std::log(r);
                           double down;
                           if (lr <= 0)
                               down = 1.0;
                           else if (lr >= L)
                               down = 0.0;
                           else
                               down = (*spline)(lr);
                           return smoothstep((r - 0.01) / 0.01) * down;
                       },
                       0.005, 8.16, "plateau"});
    }
    return fam;
}

double isometry_defect(const Exponents& e, int n, const std::vector<DefectProfile>& family) {
    const double alpha = -2.0 * e.N / e.p;
    double worst = -1;
    for (const DefectProfile& prof : family) {
        const AnnulusProfile u = sample_annulus(prof.fn, e.N, prof.a, prof.b, n);
        const double su = annulus_seminorm_qp(u, e.qp);
        if (!(su > 0)) continue;
        const RadialFn ui_fn = kelvin_transform(prof.fn, alpha);
        const AnnulusProfile ui = sample_annulus(ui_fn, e.N, 1.0 / prof.b, 1.0 / prof.a, n);
        const double sui = annulus_seminorm_qp(ui, e.qp);
        worst = std::max(worst, std::abs(std::pow(sui / su, 1.0 / e.qp) - 1.0));
    }
    if (worst < 0) throw std::invalid_argument("isometry_defect: degenerate test family");
    return worst;
}

double isometry_defect(const Exponents& e, int n) {
    return isometry_defect(e, n, defect_test_family());
}

OperatorFit operator_power_fit(const Exponents& e, double a, double b, int n) {
    const KelvinReport rep = kelvin_constant(e);
    AnnulusProfile u = sample_annulus([&](double r) { return std::pow(r, rep.alpha); }, e.N, a, b, n);
    AnnulusProfile z = u;
    z.values = radial_laplacian(u);
    for (Eigen::Index i = 0; i < z.values.size(); ++i)
        z.values[i] = signed_pow(z.values[i], e.qp - 1.0);
    const Eigen::VectorXd Lu = radial_laplacian(z);

    const double lo = a + 0.25 * (b - a), hi = b - 0.25 * (b - a);
    double sx = 0, sy = 0, sxx = 0, sxy = 0, sgn = 0;
    int m = 0;
    for (Eigen::Index i = 0; i < Lu.size(); ++i) {
        const double r = u.r(i);
        if (r < lo || r > hi || Lu[i] == 0.0) continue;
        const double X = std::log(r), Y = std::log(std::abs(Lu[i]));
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
        sgn += Lu[i] > 0 ? 1 : -1;
        ++m;
    }
    OperatorFit fit;
    fit.predicted_power = (e.qp - 1.0) * (rep.alpha - 2.0) - 2.0;
    fit.predicted_C = rep.constant_C;
    if (m < 3) return fit;
    const double dm = m;
    fit.fitted_power = (dm * sxy - sx * sy) / (dm * sxx - sx * sx);
    fit.fitted_C = (sgn >= 0 ? 1.0 : -1.0) * std::exp((sy - fit.fitted_power * sx) / dm);
    return fit;
}

} // namespace lenodal
