#include "lenodal/solver.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SparseLU>

#include "lenodal/field_io.hpp"
#include "lenodal/inversion.hpp"

namespace lenodal {

namespace {

inline double signed_pow(double a, double expo) {
    if (a == 0.0) return 0.0;
    return a > 0 ? std::pow(a, expo) : -std::pow(-a, expo);
}

Field seed_field(const SolveConfig& cfg, GridPtr grid) {
    const int j = cfg.symmetry ? cfg.symmetry->j : 1;
    switch (cfg.seed) {
    case SeedKind::file: {
        Field f = load_field(cfg.seed_file);
        if (!f.grid->compatible(*grid))
            throw std::invalid_argument("seed file grid incompatible with solve grid");
        f.grid = grid;
        return f;
    }
    case SeedKind::radial:
        return sample(grid, [](const std::vector<double>& x) {
            double r2 = 0;
            for (double c : x) r2 += c * c;
            return std::exp(-0.5 * r2);
        });
    case SeedKind::biradial:
    default:
        if (grid->kind() == GridKind::cartesian) {
            return sample(grid, [j](const std::vector<double>& x) {
                double amp = 1.0, r2 = 0;
                for (double c : x) r2 += c * c;
                for (int b = 0; b < j; ++b) {
                    const std::size_t o = 4 * static_cast<std::size_t>(b);
                    const double s2 = x[o] * x[o] + x[o + 1] * x[o + 1];
                    const double t2 = x[o + 2] * x[o + 2] + x[o + 3] * x[o + 3];
                    amp *= s2 - t2;
                }
                return amp * std::exp(-r2);
            });
        }
        return sample(grid, [](const std::vector<double>& x) {
            double r2 = 0;
            for (double c : x) r2 += c * c;
            return (x[0] * x[0] - x[1] * x[1]) * std::exp(-r2);
        });
    }
}

struct DescentOutcome {
    Field u;
    std::vector<double> trace;
    double residual = 0;
    bool converged = false;
    int iterations = 0;
    std::string message;
};

// Euler-Lagrange defect in the inverse-bilaplacian (dual) metric,
// relative to the source term in the same metric.  With drop_scale the
// dilation tangent is quotiented out (dual-metric projection): critical
// points are defined modulo the critical rescaling, which the lattice
// breaks only at discretization order.
//
// K = A^T W A factors through the second-order operator, so the dual
// pairing Wf . K^{-1} Wf is |A^{-T} W f|^2 in the W^{-1} inner product;
// only one sparse LU of A is ever needed.
double relative_residual(const Exponents& e, bool drop_scale, const Field& u,
                         Eigen::SparseLU<Eigen::SparseMatrix<double>>& alu) {
    const Eigen::VectorXd& w = u.grid->weights();
    const Field g = gradient(u, e, 0.0);
    auto dual_rep = [&](const Eigen::VectorXd& f) {
        return alu.transpose().solve(w.cwiseProduct(f).eval()).eval();
    };
    Eigen::VectorXd yg = dual_rep(g.values);
    if (drop_scale) {
        const Field df = dilation_generator(u, e);
        const Eigen::VectorXd yd = dual_rep(df.values);
        const double n2 = (yd.array().square() / w.array()).sum();
        if (n2 > 0) yg -= ((yg.array() * yd.array() / w.array()).sum() / n2) * yd;
    }
    Eigen::VectorXd s(u.values.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        s[i] = signed_pow(u.values[i], e.p - 1.0);
    const Eigen::VectorXd ys = dual_rep(s);
    const double num = std::sqrt((yg.array().square() / w.array()).sum());
    const double den = std::sqrt((ys.array().square() / w.array()).sum());
    return den > 0 ? num / den : num;
}

DescentOutcome run_descent(const SolveConfig& cfg, Field u) {
    const Exponents& e = cfg.exponents;
    const bool sym = cfg.symmetry.has_value() && u.grid->kind() != GridKind::radial_1d;
    auto project = [&](Field f) { return sym ? symmetrize(f, *cfg.symmetry) : std::move(f); };

    u = project(std::move(u));
    u.values *= nehari_scale(u, e);
    EnergyReport rep = energy(u, e);
    const double seed_lp = std::pow(rep.lp_norm_p, 1.0 / e.p);

    // p-moment radius, the scale coordinate held fixed by renormalization:
    // mu(u) = (int |x|^p |u|^p / int |u|^p)^{1/p}, so mu scales linearly
    // under the critical dilation while the |u|^p mass is invariant
    const bool pin = cfg.pin_scale && u.grid->is_reduced();
    Eigen::VectorXd wrp;
    auto moment = [&](const Field& f) {
        const auto up = f.values.array().abs().pow(e.p);
        return std::pow((wrp.array() * up).sum() /
                            (f.grid->weights().array() * up).sum(),
                        1.0 / e.p);
    };
    double mu0 = 0;
    if (pin) {
        wrp.resize(static_cast<Eigen::Index>(u.grid->size()));
        for (std::size_t i = 0; i < u.grid->size(); ++i) {
            double r2 = 0;
            for (double c : u.grid->node(i)) r2 += c * c;
            wrp[static_cast<Eigen::Index>(i)] =
                u.grid->weights()[static_cast<Eigen::Index>(i)] * std::pow(r2, 0.5 * e.p);
        }
        // default gauge balances resolution error (h/mu)^2 against domain
        // truncation (mu/R)^2; a warm seed already below it keeps its own
        const double h = u.grid->axes()[0].h;
        mu0 = cfg.scale_gauge > 0 ? cfg.scale_gauge
                                  : std::min(moment(u), std::sqrt(h * cfg.extent));
        const double mu = moment(u);
        if (std::abs(mu / mu0 - 1.0) > 0.05) {
            u = rescale(u, e, mu0 / mu);
            u = project(std::move(u));
            u.values *= nehari_scale(u, e);
            rep = energy(u, e);
        }
    }

    const Eigen::SparseMatrix<double>& A = u.grid->laplacian_matrix();
    const Eigen::VectorXd& w = u.grid->weights();

    // one factorization serves both the residual metric K = A^T W A and
    // the quasi-Newton metric A^T D A: each inverse factors through A
    Eigen::SparseLU<Eigen::SparseMatrix<double>> alu;
    alu.compute(A);
    if (alu.info() != Eigen::Success)
        throw std::runtime_error("laplacian factorization failed");

    DescentOutcome out;
    out.trace.push_back(rep.energy);

    double eps = e.qp == 2.0 ? 0.0 : cfg.eps_reg_start;
    double step = cfg.initial_step;
    int since_anneal = 0;
    const bool have_precond = cfg.precondition;

    // quasi-Newton diagonal, refreshed periodically: near the kink the
    // fresh coefficient (au^2 + eps^2)^{(q'-2)/2} degenerates along the
    // nodal band of Lap u, and a slightly stale metric steps through it
    const int refresh_period = 25;
    int since_refresh = refresh_period;
    Eigen::VectorXd Dvec;

    // stall detection by lack of improvement over the best energy seen:
    // a coarse margin drives the smoothing schedule, a fine one the final
    // convergence check; renormalization upticks cannot reset either
    double best_coarse = rep.energy;
    double best_fine = rep.energy;
    int best_coarse_it = 0;
    int best_fine_it = 0;

    // d = (A^T D A)^{-1} W g via transpose solve, diagonal scale, solve
    auto newton_dir = [&](const Eigen::VectorXd& Wg) {
        Eigen::VectorXd t = alu.transpose().solve(Wg);
        t.array() /= Dvec.array();
        return alu.solve(t).eval();
    };

    int it = 0;
    for (; it < cfg.max_iterations; ++it) {
        if (cfg.precondition && since_refresh >= refresh_period) {
            const Eigen::VectorXd au = A * u.values;
            Dvec.resize(au.size());
            for (Eigen::Index i = 0; i < au.size(); ++i)
                Dvec[i] = w[i] * std::pow(au[i] * au[i] + eps * eps, 0.5 * (e.qp - 2.0));
            since_refresh = 0;
        }
        ++since_refresh;

        Field g = gradient(u, e, eps);
        g = project(std::move(g));

        double eta = step;
        bool accepted = false;
        Field trial;
        EnergyReport trial_rep;
        // Newton-metric direction first, plain gradient as fallback
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            Eigen::VectorXd d;
            double gd = 0;
            if (attempt == 0 && have_precond) {
                d = newton_dir(w.cwiseProduct(g.values).eval());
                gd = (w.array() * g.values.array() * d.array()).sum();
            }
            if (!(gd > 0)) {
                if (attempt == 0 && have_precond) continue;
                d = g.values;
                gd = (w.array() * g.values.array() * d.array()).sum();
            }
            if (!(gd > 0)) break;

            eta = attempt == 0 ? step : cfg.initial_step;
            for (int bt = 0; bt < 60; ++bt) {
                trial = u;
                trial.values -= eta * d;
                trial = project(std::move(trial));
                EnergyReport raw = energy(trial, e);
                const bool collapsed =
                    !(raw.lp_norm_p > 0) || std::pow(raw.lp_norm_p, 1.0 / e.p) < 1e-8 * seed_lp;
                if (!collapsed) {
                    const double ts =
                        std::pow(raw.seminorm_qp / raw.lp_norm_p, 1.0 / (e.p - e.qp));
                    // scaling acts on the two terms by known powers
                    trial_rep.seminorm_qp = std::pow(ts, e.qp) * raw.seminorm_qp;
                    trial_rep.lp_norm_p = std::pow(ts, e.p) * raw.lp_norm_p;
                    trial_rep.energy =
                        trial_rep.seminorm_qp / e.qp - trial_rep.lp_norm_p / e.p;
                    trial_rep.nehari_defect = trial_rep.seminorm_qp - trial_rep.lp_norm_p;
                    trial_rep.quotient =
                        trial_rep.seminorm_qp / std::pow(trial_rep.lp_norm_p, e.qp / e.p);
                    if (trial_rep.energy < rep.energy - 1e-4 * eta * gd) {
                        trial.values *= ts;
                        accepted = true;
                        break;
                    }
                }
                eta *= cfg.backtrack;
            }
        }

        if (!accepted) {
            const double res = relative_residual(e, pin, u, alu);
            if (res < cfg.residual_tol) {
                out.converged = true;
                out.message = "converged";
                break;
            }
            if (eps > cfg.eps_reg_floor) {
                eps = std::max(eps * cfg.eps_reg_decay, cfg.eps_reg_floor);
                since_refresh = refresh_period;
                since_anneal = 0;
                step = cfg.initial_step;
                continue;
            }
            out.message = "line search exhausted";
            break;
        }
        ++since_anneal;

        u = trial;
        rep = trial_rep;
        out.trace.push_back(rep.energy);
        step = std::min(eta * 2.0, cfg.initial_step * 4.0);

        // undo dilation drift: interpolate back to the seed's moment
        // radius once the scale has moved by more than 5 percent
        if (pin) {
            const double mu = moment(u);
            if (std::abs(mu / mu0 - 1.0) > 0.05) {
                u = rescale(u, e, mu0 / mu);
                u = project(std::move(u));
                u.values *= nehari_scale(u, e);
                rep = energy(u, e);
                since_refresh = refresh_period;
                step = cfg.initial_step;
            }
        }

        if (rep.energy < best_coarse - 1e-6 * std::abs(best_coarse)) {
            best_coarse = rep.energy;
            best_coarse_it = it;
        }
        if (rep.energy < best_fine - cfg.energy_rel_tol * std::abs(best_fine)) {
            best_fine = rep.energy;
            best_fine_it = it;
        }

        const int win = cfg.energy_window;
        if (eps > cfg.eps_reg_floor) {
            // no coarse progress at this smoothing level: sharpen, since
            // the smoothed gradient no longer matches the true energy
            if (it - best_coarse_it > win && since_anneal > 10) {
                eps = std::max(eps * cfg.eps_reg_decay, cfg.eps_reg_floor);
                since_refresh = refresh_period;
                since_anneal = 0;
                step = cfg.initial_step;
            }
        } else if (it - best_fine_it > win) {
            const double res = relative_residual(e, pin, u, alu);
            if (res < cfg.residual_tol) {
                out.converged = true;
                out.message = "converged";
                break;
            }
            out.message = "energy stalled above residual tolerance";
            break;
        }
    }
    if (out.message.empty()) out.message = "iteration budget exhausted";
    out.iterations = it;
    out.residual = relative_residual(e, pin, u, alu);
    out.u = std::move(u);
    return out;
}

SolveResult finish(const SolveConfig& cfg, DescentOutcome&& d, const Field& seed) {
    SolveResult r;
    r.u = std::move(d.u);
    const Eigen::VectorXd& w = r.u.grid->weights();
    // -u solves too; pin the sign to the seed's positive lobe
    if ((w.array() * r.u.values.array() * seed.values.array()).sum() < 0) r.u.values = -r.u.values;
    r.v = second_component(r.u, cfg.exponents);
    r.report = energy(r.u, cfg.exponents);
    r.trace = std::move(d.trace);
    r.residual = d.residual;
    r.converged = d.converged;
    r.iterations = d.iterations;
    r.message = std::move(d.message);
    const double peak = r.u.values.cwiseAbs().maxCoeff();
    r.sign_change = r.u.values.maxCoeff() > 1e-10 * peak && r.u.values.minCoeff() < -1e-10 * peak;
    return r;
}

} // namespace

void validate(const SolveConfig& cfg) {
    validate(cfg.exponents);
    if (cfg.symmetry) {
        validate(*cfg.symmetry);
        if (cfg.symmetry->N != cfg.exponents.N)
            throw std::invalid_argument("symmetry spec and exponents disagree on N");
    }
    if (cfg.grid_kind == GridKind::biradial_2d && cfg.exponents.N != 4)
        throw std::invalid_argument("biradial_2d requires N = 4");
    if (cfg.grid_kind == GridKind::biradial_radial_3d && cfg.exponents.N <= 4)
        throw std::invalid_argument("biradial_radial_3d requires N > 4");
    if (!(cfg.extent > 0)) throw std::invalid_argument("extent must be positive");
    const int min_res = cfg.grid_kind == GridKind::cartesian ? 4 : 16;
    if (cfg.resolution < min_res) throw std::invalid_argument("resolution too small");
    if (!(cfg.initial_step > 0) || !(cfg.backtrack > 0) || cfg.backtrack >= 1)
        throw std::invalid_argument("bad step control");
    if (cfg.max_iterations < 1) throw std::invalid_argument("max_iterations must be positive");
    if (!(cfg.energy_rel_tol > 0) || !(cfg.residual_tol > 0) || cfg.energy_window < 1)
        throw std::invalid_argument("tolerances must be positive");
    if (!(cfg.eps_reg_start >= 0) || !(cfg.eps_reg_decay > 0) || cfg.eps_reg_decay >= 1 ||
        !(cfg.eps_reg_floor > 0))
        throw std::invalid_argument("bad regularization schedule");
}

GridKind reduced_grid_kind(int N) {
    if (N < 4) throw std::invalid_argument("need N >= 4");
    return N == 4 ? GridKind::biradial_2d : GridKind::biradial_radial_3d;
}

SolveResult minimize_equivariant(const SolveConfig& cfg) {
    validate(cfg);
    if (!cfg.symmetry) throw std::invalid_argument("minimize_equivariant needs a symmetry spec");
    GridPtr grid = make_grid(cfg.grid_kind, cfg.exponents.N, cfg.symmetry->j, cfg.extent,
                             cfg.resolution);
    Field seed = seed_field(cfg, grid);
    seed.meta.exponents = cfg.exponents;
    seed.meta.symmetry_tag = "G" + std::to_string(cfg.symmetry->j);
    SolveResult r = finish(cfg, run_descent(cfg, seed), seed);
    r.u.meta = seed.meta;
    r.u.meta.equivariant = true;
    r.v.meta = r.u.meta;
    return r;
}

SolveResult ground_state_radial(const SolveConfig& cfg) {
    validate(cfg);
    SolveConfig c = cfg;
    c.symmetry.reset();
    c.seed = SeedKind::radial;
    GridPtr grid = make_grid(GridKind::radial_1d, cfg.exponents.N, 0, cfg.extent, cfg.resolution);
    Field seed = seed_field(c, grid);
    seed.meta.exponents = cfg.exponents;
    seed.meta.symmetry_tag = "radial";
    SolveResult r = finish(c, run_descent(c, seed), seed);
    r.u.meta = seed.meta;
    r.v.meta = seed.meta;
    return r;
}

std::vector<SolveResult> continuation_sweep(const SolveConfig& base,
                                            const std::vector<Exponents>& exponents) {
    std::vector<SolveResult> out;
    std::optional<Field> warm;
    for (const Exponents& e : exponents) {
        SolveConfig cfg = base;
        cfg.exponents = e;
        try {
            validate(cfg);
            if (!cfg.symmetry) throw std::invalid_argument("sweep needs a symmetry spec");
            GridPtr grid = make_grid(cfg.grid_kind, e.N, cfg.symmetry->j, cfg.extent,
                                     cfg.resolution);
            Field seed = warm && warm->grid->compatible(*grid) ? *warm : seed_field(cfg, grid);
            seed.grid = grid;
            seed.meta.exponents = e;
            seed.meta.symmetry_tag = "G" + std::to_string(cfg.symmetry->j);
            SolveResult r = finish(cfg, run_descent(cfg, seed), seed);
            r.u.meta = seed.meta;
            r.u.meta.equivariant = true;
            r.v.meta = r.u.meta;
            if (r.converged) warm = r.u;
            out.push_back(std::move(r));
        } catch (const std::exception& ex) {
            SolveResult fail;
            fail.converged = false;
            fail.message = ex.what();
            out.push_back(std::move(fail));
        }
    }
    return out;
}

} // namespace lenodal
