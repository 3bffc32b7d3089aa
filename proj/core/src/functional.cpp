#include "lenodal/functional.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

namespace lenodal {

namespace {

inline double signed_pow(double a, double expo) {
    // |a|^expo * sign(a), with 0 -> 0
    if (a == 0.0) return 0.0;
    return a > 0 ? std::pow(a, expo) : -std::pow(-a, expo);
}

inline double sigma(double a, double qp, double eps) {
    if (eps == 0.0) return signed_pow(a, qp - 1.0);
    return std::pow(a * a + eps * eps, 0.5 * (qp - 2.0)) * a;
}

} // namespace

EnergyReport energy(const Field& u, const Exponents& e) {
    const Eigen::VectorXd lap = u.grid->laplacian_matrix() * u.values;
    const Eigen::VectorXd& w = u.grid->weights();
    EnergyReport r;
    r.seminorm_qp = (w.array() * lap.array().abs().pow(e.qp)).sum();
    r.lp_norm_p = (w.array() * u.values.array().abs().pow(e.p)).sum();
    r.energy = r.seminorm_qp / e.qp - r.lp_norm_p / e.p;
    r.nehari_defect = r.seminorm_qp - r.lp_norm_p;
    r.quotient = r.lp_norm_p > 0 ? r.seminorm_qp / std::pow(r.lp_norm_p, e.qp / e.p) : 0.0;
    return r;
}

Field gradient(const Field& u, const Exponents& e, double eps_reg) {
    const Eigen::SparseMatrix<double>& A = u.grid->laplacian_matrix();
    const Eigen::VectorXd& w = u.grid->weights();
    Eigen::VectorXd lap = A * u.values;
    for (Eigen::Index i = 0; i < lap.size(); ++i) lap[i] = sigma(lap[i], e.qp, eps_reg);

    Field g;
    g.grid = u.grid;
    g.meta = u.meta;
    g.meta.equivariant = false;
    g.values = (A.transpose() * w.cwiseProduct(lap).eval()).cwiseQuotient(w);
    for (Eigen::Index i = 0; i < g.values.size(); ++i)
        g.values[i] -= signed_pow(u.values[i], e.p - 1.0);
    return g;
}

double nehari_scale(const Field& u, const Exponents& e) {
    const EnergyReport r = energy(u, e);
    if (!(r.seminorm_qp > 0) || !(r.lp_norm_p > 0))
        throw std::invalid_argument("nehari_scale needs a nonzero field");
    return std::pow(r.seminorm_qp / r.lp_norm_p, 1.0 / (e.p - e.qp));
}

Field dilation_generator(const Field& u, const Exponents& e) {
    const Grid& g = *u.grid;
    const int na = g.axis_count();
    Field out;
    out.grid = u.grid;
    out.meta = u.meta;
    out.values.resize(u.values.size());
    std::vector<int> mi(static_cast<std::size_t>(na));
    const double amp = static_cast<double>(g.dimension()) / e.p;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        g.unflatten(idx, mi.data());
        double acc = amp * u.values[static_cast<Eigen::Index>(idx)];
        for (int a = 0; a < na; ++a) {
            const Axis& ax = g.axes()[static_cast<std::size_t>(a)];
            const int i = mi[static_cast<std::size_t>(a)];
            const int n = static_cast<int>(ax.n);
            double up = 0, dn = 0;
            if (i + 1 < n) {
                mi[static_cast<std::size_t>(a)] = i + 1;
                up = u.values[static_cast<Eigen::Index>(g.flatten(mi.data()))];
            }
            if (i > 0) {
                mi[static_cast<std::size_t>(a)] = i - 1;
                dn = u.values[static_cast<Eigen::Index>(g.flatten(mi.data()))];
            } else if (g.is_reduced()) {
                dn = u.values[static_cast<Eigen::Index>(idx)]; // even reflection
            }
            mi[static_cast<std::size_t>(a)] = i;
            acc += g.coord(a, i) * (up - dn) / (2 * ax.h);
        }
        out.values[static_cast<Eigen::Index>(idx)] = acc;
    }
    return out;
}

namespace {

// multilinear interpolation with even reflection across reduced axes and
// zero extension beyond the outer boundary
double interpolate_reduced(const Field& u, const std::vector<double>& x) {
    const Grid& g = *u.grid;
    const int na = g.axis_count();
    std::vector<int> base(static_cast<std::size_t>(na));
    std::vector<double> frac(static_cast<std::size_t>(na));
    for (int a = 0; a < na; ++a) {
        const Axis& ax = g.axes()[static_cast<std::size_t>(a)];
        const double r = std::abs(x[static_cast<std::size_t>(a)]); // even in each reduced coord
        const double pos = r / ax.h - 0.5;
        base[static_cast<std::size_t>(a)] = static_cast<int>(std::floor(pos));
        frac[static_cast<std::size_t>(a)] = pos - std::floor(pos);
    }
    double acc = 0;
    std::vector<int> mi(static_cast<std::size_t>(na));
    for (int corner = 0; corner < (1 << na); ++corner) {
        double wgt = 1.0;
        bool outside = false;
        for (int a = 0; a < na; ++a) {
            const int off = (corner >> a) & 1;
            int i = base[static_cast<std::size_t>(a)] + off;
            wgt *= off ? frac[static_cast<std::size_t>(a)] : 1.0 - frac[static_cast<std::size_t>(a)];
            if (i < 0) i = 0; // mirror node across the axis
            if (i >= static_cast<int>(g.axes()[static_cast<std::size_t>(a)].n)) {
                outside = true; // clamped exterior
                break;
            }
            mi[static_cast<std::size_t>(a)] = i;
        }
        if (!outside && wgt != 0.0)
            acc += wgt * u.values[static_cast<Eigen::Index>(g.flatten(mi.data()))];
    }
    return acc;
}

} // namespace

Field rescale(const Field& u, const Exponents& e, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("rescale needs eps > 0");
    const Grid& g = *u.grid;
    if (!g.is_reduced())
        throw std::invalid_argument("field rescale supports reduced grids only");
    Field out = make_field(u.grid);
    out.meta = u.meta;
    const double amp = std::pow(eps, -static_cast<double>(g.dimension()) / e.p);
    std::vector<double> y;
    for (std::size_t i = 0; i < g.size(); ++i) {
        y = g.node(i);
        for (double& c : y) c /= eps;
        out.values[static_cast<Eigen::Index>(i)] = amp * interpolate_reduced(u, y);
    }
    return out;
}

Field rescale(const std::function<double(const std::vector<double>&)>& fn, const Exponents& e,
              double eps, GridPtr grid) {
    if (!(eps > 0)) throw std::invalid_argument("rescale needs eps > 0");
    const double amp = std::pow(eps, -static_cast<double>(grid->dimension()) / e.p);
    return sample(std::move(grid), [&](const std::vector<double>& x) {
        std::vector<double> y = x;
        for (double& c : y) c /= eps;
        return amp * fn(y);
    });
}

double monotonicity_constant(double qp) {
    if (!(qp > 1.0)) throw std::invalid_argument("monotonicity constant needs q' > 1");
    static std::mutex mu;
    static std::map<double, double> cache;
    {
        std::scoped_lock lock(mu);
        if (auto it = cache.find(qp); it != cache.end()) return it->second;
    }
    // grid minimization of the ratio over [-10,10]^2
    const int n = 1201;
    const double lim = 10.0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double s = -lim + 2.0 * lim * i / (n - 1);
        for (int k = 0; k < n; ++k) {
            const double t = -lim + 2.0 * lim * k / (n - 1);
            const double d = s - t;
            if (std::abs(d) < 1e-9) continue;
            const double lhs = (signed_pow(s, qp - 1.0) - signed_pow(t, qp - 1.0)) * d;
            double ratio;
            if (qp >= 2.0)
                ratio = lhs / std::pow(std::abs(d), qp);
            else
                ratio = lhs *
                        std::pow(std::pow(std::abs(s), qp) + std::pow(std::abs(t), qp) + 1.0,
                                 2.0 - qp) /
                        (d * d);
            best = std::min(best, ratio);
        }
    }
    const double c0 = 0.99 * best;
    std::scoped_lock lock(mu);
    cache[qp] = c0;
    return c0;
}

MonotonicityGap monotonicity_gap(double s, double t, double qp) {
    if (!(qp > 1.0)) throw std::invalid_argument("monotonicity_gap needs q' > 1");
    MonotonicityGap g;
    g.c0 = monotonicity_constant(qp);
    g.lhs = (signed_pow(s, qp - 1.0) - signed_pow(t, qp - 1.0)) * (s - t);
    const double d = std::abs(s - t);
    if (qp >= 2.0)
        g.rhs_bound = g.c0 * std::pow(d, qp);
    else
        g.rhs_bound = g.c0 * d * d /
                      std::pow(std::pow(std::abs(s), qp) + std::pow(std::abs(t), qp) + 1.0, 2.0 - qp);
    return g;
}

} // namespace lenodal
