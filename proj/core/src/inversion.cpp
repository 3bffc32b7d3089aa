#include "lenodal/inversion.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SparseLU>

namespace lenodal {

namespace {

inline double signed_pow(double a, double expo) {
    if (a == 0.0) return 0.0;
    return a > 0 ? std::pow(a, expo) : -std::pow(-a, expo);
}

} // namespace

Field second_component(const Field& u, const Exponents& e) {
    const Eigen::VectorXd lap = u.grid->laplacian_matrix() * u.values;
    Field v;
    v.grid = u.grid;
    v.meta = u.meta;
    v.values.resize(lap.size());
    for (Eigen::Index i = 0; i < lap.size(); ++i)
        v.values[i] = -signed_pow(lap[i], e.qp - 1.0);
    return v;
}

SystemResidual system_residual(const Field& u, const Field& v, const Exponents& e) {
    if (!u.grid->compatible(*v.grid))
        throw std::invalid_argument("system_residual needs matching grids");
    const Eigen::SparseMatrix<double>& A = u.grid->laplacian_matrix();
    const Eigen::VectorXd& w = u.grid->weights();

    // inverse-bilaplacian dual norm, as in the solver residual.  A strong
    // nodal norm is useless here for q' < 2: the power q' - 1 < 1 in v
    // amplifies stencil error near the zero set of the Laplacian of u
    // into a band whose strong defect grows under refinement, while its
    // dual-norm contribution vanishes.  K = A^T W A factors through A, so
    // Wf . K^{-1} Wf = |A^{-T} W f|^2 in the W^{-1} inner product.
    Eigen::SparseLU<Eigen::SparseMatrix<double>> alu;
    alu.compute(A);
    if (alu.info() != Eigen::Success)
        throw std::runtime_error("laplacian factorization failed");
    auto dual = [&](const Eigen::VectorXd& f) {
        const Eigen::VectorXd y = alu.transpose().solve(w.cwiseProduct(f).eval());
        return std::sqrt((y.array().square() / w.array()).sum());
    };

    Eigen::VectorXd src1(u.values.size());
    for (Eigen::Index i = 0; i < src1.size(); ++i)
        src1[i] = signed_pow(u.values[i], e.p - 1.0);
    const Eigen::VectorXd def1 = A * v.values + src1;

    Eigen::VectorXd src2(v.values.size());
    for (Eigen::Index i = 0; i < src2.size(); ++i)
        src2[i] = signed_pow(v.values[i], e.q - 1.0);
    const Eigen::VectorXd def2 = A * u.values + src2;

    SystemResidual r;
    const double n1 = dual(src1);
    const double n2 = dual(src2);
    r.residual_1 = n1 > 0 ? dual(def1) / n1 : 0.0;
    r.residual_2 = n2 > 0 ? dual(def2) / n2 : 0.0;
    return r;
}

SystemPair recover_system(const Field& u, const Exponents& e) {
    SystemPair pair;
    pair.u = u;
    pair.v = second_component(u, e);
    pair.residuals = system_residual(pair.u, pair.v, e);
    return pair;
}

DecayFit decay_exponent(const Field& u, double r_lo, double r_hi, int shells, double floor_frac) {
    if (!(r_hi > r_lo) || !(r_lo > 0)) throw std::invalid_argument("decay_exponent needs 0 < r_lo < r_hi");
    if (shells < 3) throw std::invalid_argument("decay_exponent needs at least 3 shells");
    const Grid& g = *u.grid;
    const double la = std::log(r_lo), lb = std::log(r_hi);

    std::vector<double> num(static_cast<std::size_t>(shells), 0.0),
        den(static_cast<std::size_t>(shells), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::vector<double> x = g.node(i);
        double r2 = 0;
        for (double c : x) r2 += c * c;
        const double r = std::sqrt(r2);
        if (r < r_lo || r > r_hi) continue;
        const int b = std::min(shells - 1,
                               static_cast<int>(shells * (std::log(r) - la) / (lb - la)));
        const double w = g.weights()[static_cast<Eigen::Index>(i)];
        num[static_cast<std::size_t>(b)] += w * std::abs(u.values[static_cast<Eigen::Index>(i)]);
        den[static_cast<std::size_t>(b)] += w;
    }

    std::vector<double> lr, lv;
    double peak = 0;
    for (int b = 0; b < shells; ++b)
        if (den[static_cast<std::size_t>(b)] > 0)
            peak = std::max(peak, num[static_cast<std::size_t>(b)] / den[static_cast<std::size_t>(b)]);
    for (int b = 0; b < shells; ++b) {
        const std::size_t sb = static_cast<std::size_t>(b);
        if (den[sb] <= 0) continue;
        const double avg = num[sb] / den[sb];
        if (avg <= floor_frac * peak) continue;
        lr.push_back(la + (b + 0.5) * (lb - la) / shells);
        lv.push_back(std::log(avg));
    }
    if (lr.size() < 3) throw std::runtime_error("decay_exponent: too few populated shells");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(lr.size());
    for (std::size_t k = 0; k < lr.size(); ++k) {
        sx += lr[k];
        sy += lv[k];
        sxx += lr[k] * lr[k];
        sxy += lr[k] * lv[k];
    }
    DecayFit fit;
    fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.exponent * sx) / n;
    fit.r_lo = r_lo;
    fit.r_hi = r_hi;
    fit.shells = static_cast<int>(lr.size());
    return fit;
}

} // namespace lenodal
