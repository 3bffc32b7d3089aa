#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lenodal/config.hpp"
#include "lenodal/field_io.hpp"
#include "lenodal/inversion.hpp"
#include "lenodal/kelvin.hpp"
#include "lenodal/manifest.hpp"
#include "lenodal/solver.hpp"

namespace fs = std::filesystem;
using namespace lenodal;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kUsageError = 2;
constexpr int kNotConverged = 3;

std::string fmt(double v) {
    std::ostringstream ss;
    ss << std::setprecision(17) << v;
    return ss.str();
}

nlohmann::json metrics_json(const SolveResult& r) {
    nlohmann::json j;
    j["energy"] = r.report.energy;
    j["seminorm_qp"] = r.report.seminorm_qp;
    j["lp_norm_p"] = r.report.lp_norm_p;
    j["nehari_defect"] = r.report.nehari_defect;
    j["quotient"] = r.report.quotient;
    j["residual"] = r.residual;
    j["sign_change"] = r.sign_change;
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["message"] = r.message;
    if (r.u.grid) {
        const SystemResidual sys = system_residual(r.u, r.v, *r.u.meta.exponents);
        j["residual_1"] = sys.residual_1;
        j["residual_2"] = sys.residual_2;
    }
    return j;
}

int write_run(const SolveResult& r, const ConfigTable& table, const std::string& command,
              const fs::path& outdir, double wall_seconds) {
    fs::create_directories(outdir);
    save_field(r.u, outdir / "u.lefd");
    save_field(r.v, outdir / "v.lefd");

    {
        std::ofstream os(outdir / "metrics.json");
        os << metrics_json(r).dump(2) << "\n";
    }
    {
        std::ofstream os(outdir / "trace.csv");
        os << std::setprecision(17) << "iteration,energy\n";
        for (std::size_t i = 0; i < r.trace.size(); ++i) os << i << "," << r.trace[i] << "\n";
    }

    RunManifest m;
    m.command = command;
    m.config_snapshot = table.source_text();
    m.version = kVersion;
    m.wall_seconds = wall_seconds;
    for (const char* f : {"u.lefd", "u.lefd.json", "v.lefd", "v.lefd.json", "metrics.json",
                          "trace.csv"})
        m.outputs.emplace_back(f, sha256_file(outdir / f));
    m.checks.emplace_back("converged", r.converged);
    m.checks.emplace_back("sign_change", r.sign_change);
    save_manifest(m, outdir / "manifest.json");

    std::cout << "energy " << fmt(r.report.energy) << "\n"
              << "nehari_defect " << fmt(r.report.nehari_defect) << "\n"
              << "residual " << fmt(r.residual) << "\n"
              << "iterations " << r.iterations << "\n"
              << (r.converged ? "converged" : "not converged: " + r.message) << "\n";
    return r.converged ? 0 : kNotConverged;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

int cmd_validate(const fs::path& dir) {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };

    const std::vector<std::string> problems = verify_manifest(dir / "manifest.json");
    for (const std::string& p : problems) std::cout << "FAIL manifest: " << p << "\n";
    failures += static_cast<int>(problems.size());
    if (!problems.empty()) return 1;

    Field u = load_field(dir / "u.lefd");
    Field v = load_field(dir / "v.lefd");
    if (!u.meta.exponents) {
        std::cout << "FAIL metadata: no exponent record\n";
        return 1;
    }
    const Exponents& e = *u.meta.exponents;
    const EnergyReport rep = energy(u, e);

    nlohmann::json stored;
    std::ifstream(dir / "metrics.json") >> stored;
    check("energy matches stored metrics",
          std::abs(rep.energy - stored["energy"].get<double>()) <=
              1e-12 * std::max(1.0, std::abs(rep.energy)));
    check("nehari defect <= 1e-10 relative",
          std::abs(rep.nehari_defect) <= 1e-10 * rep.seminorm_qp);

    // conjugate identity: -|v|^{q-2} v reproduces the discrete laplacian of u
    const Field lap = laplacian(u);
    double worst = 0;
    for (Eigen::Index i = 0; i < v.values.size(); ++i) {
        const double w = v.values[i];
        const double back = -(w == 0.0 ? 0.0
                                       : (w > 0 ? std::pow(w, e.q - 1.0)
                                                : -std::pow(-w, e.q - 1.0)));
        worst = std::max(worst, std::abs(back - lap.values[i]));
    }
    check("conjugate identity to 1e-12", worst <= 1e-12 * std::max(1.0, max_abs(lap.values)));

    if (u.meta.equivariant && u.grid->is_reduced() && u.grid->kind() != GridKind::radial_1d) {
        int j = 1;
        if (u.meta.symmetry_tag.size() > 1 && u.meta.symmetry_tag[0] == 'G')
            j = std::stoi(u.meta.symmetry_tag.substr(1));
        const Field su = symmetrize(u, make_spec(u.grid->dimension(), j));
        check("equivariance fixed point",
              max_abs(su.values - u.values) <= 1e-12 * std::max(1.0, max_abs(u.values)));
    }
    return failures == 0 ? 0 : 1;
}

void print_kelvin_header() {
    std::cout << "q,p,alpha,A,B,C,is_zero\n";
}

void print_kelvin_row(const Exponents& e, const KelvinReport& r) {
    std::cout << fmt(e.q) << "," << fmt(e.p) << "," << fmt(r.alpha) << "," << fmt(r.A) << ","
              << fmt(r.B) << "," << fmt(r.constant_C) << "," << (r.is_zero ? "yes" : "no")
              << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equivariant solver for a fourth-order quasilinear problem on the critical "
                 "hyperbola"};
    app.require_subcommand(1);
    std::cout << std::setprecision(17);

    std::string config_path, out_dir = "run";
    auto* solve = app.add_subcommand("solve", "Run the equivariant minimization from a config");
    solve->add_option("config", config_path, "config file")->required();
    solve->add_option("-o,--out", out_dir, "output directory");

    auto* ground = app.add_subcommand("ground-state", "Run the radial baseline minimization");
    ground->add_option("config", config_path, "config file")->required();
    ground->add_option("-o,--out", out_dir, "output directory");

    std::string validate_dir;
    auto* valid = app.add_subcommand("validate", "Re-check a result directory");
    valid->add_option("dir", validate_dir, "result directory")->required();

    int kN = 5;
    std::string kq, kp;
    int kres = 32768;
    bool ksweep = false;
    auto* kel = app.add_subcommand("kelvin", "Inversion-invariance constant and defect");
    kel->add_option("--N", kN, "dimension")->required();
    kel->add_option("--q", kq, "exponent q (number or a/b)");
    kel->add_option("--p", kp, "exponent p (number or a/b)");
    kel->add_option("--resolution", kres, "annulus nodes for the defect");
    kel->add_flag("--sweep", ksweep, "zero-locus table over a q range");

    auto* sweep = app.add_subcommand("sweep", "Continuation along an exponent list");
    sweep->add_option("config", config_path, "config file")->required();
    sweep->add_option("-o,--out", out_dir, "output directory");

    int hN = 4;
    std::string hq, hp;
    auto* hyp = app.add_subcommand("hyperbola", "Print the full exponent record");
    hyp->add_option("--N", hN, "dimension")->required();
    hyp->add_option("--q", hq, "exponent q (number or a/b)");
    hyp->add_option("--p", hp, "exponent p (number or a/b)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed() || ground->parsed()) {
            const ConfigTable table = ConfigTable::parse_file(config_path);
            const SolveConfig cfg = solve_config_from(table);
            const auto t0 = std::chrono::steady_clock::now();
            const SolveResult r =
                solve->parsed() ? minimize_equivariant(cfg) : ground_state_radial(cfg);
            const double wall =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            return write_run(r, table, solve->parsed() ? "solve" : "ground-state", out_dir, wall);
        }

        if (valid->parsed()) return cmd_validate(validate_dir);

        if (kel->parsed()) {
            if (ksweep) {
                print_kelvin_header();
                const Rational base(kN, kN - 2); // q must exceed N/(N-2)
                for (int k = 1; k <= 50; ++k) {
                    const Rational q = base + Rational(k, 4);
                    const Exponents e = hyperbola_from_q(kN, q);
                    print_kelvin_row(e, kelvin_constant(e));
                }
                return 0;
            }
            if (kq.empty() == kp.empty()) {
                std::cerr << "kelvin needs exactly one of --q/--p (or --sweep)\n";
                return kUsageError;
            }
            const Rational r = parse_rational(kq.empty() ? kp : kq);
            const Exponents e = kq.empty() ? hyperbola_from_p(kN, r) : hyperbola_from_q(kN, r);
            KelvinReport rep = kelvin_constant(e);
            rep.isometry_defect = isometry_defect(e, kres);
            print_kelvin_header();
            print_kelvin_row(e, rep);
            std::cout << "isometry_defect " << fmt(rep.isometry_defect) << "\n";
            return 0;
        }

        if (sweep->parsed()) {
            const ConfigTable table = ConfigTable::parse_file(config_path);
            const SolveConfig base = solve_config_from(table);
            const std::vector<Exponents> list = sweep_exponents_from(table);
            if (list.empty()) {
                std::cerr << "sweep: empty exponent list\n";
                return kUsageError;
            }
            const std::vector<SolveResult> results = continuation_sweep(base, list);
            fs::create_directories(out_dir);
            std::ofstream csv(fs::path(out_dir) / "sweep.csv");
            csv << std::setprecision(17) << "q,p,energy,residual,converged,message\n";
            int ok = 0;
            for (std::size_t i = 0; i < results.size(); ++i) {
                const SolveResult& r = results[i];
                csv << list[i].q << "," << list[i].p << "," << r.report.energy << ","
                    << r.residual << "," << (r.converged ? 1 : 0) << ",\"" << r.message
                    << "\"\n";
                std::cout << "q=" << fmt(list[i].q) << " energy=" << fmt(r.report.energy)
                          << (r.converged ? " converged" : " FAILED: " + r.message) << "\n";
                if (r.converged) ++ok;
            }
            return ok > 0 ? 0 : kNotConverged;
        }

        if (hyp->parsed()) {
            if (hq.empty() == hp.empty()) {
                std::cerr << "hyperbola needs exactly one of --q/--p\n";
                return kUsageError;
            }
            const Rational r = parse_rational(hq.empty() ? hp : hq);
            const Exponents e = hq.empty() ? hyperbola_from_p(hN, r) : hyperbola_from_q(hN, r);
            validate(e);
            std::cout << "N " << e.N << "\np " << fmt(e.p) << "\nq " << fmt(e.q) << "\nq' "
                      << fmt(e.qp) << "\np' " << fmt(e.pp) << "\nclass "
                      << to_string(special_case(e)) << "\n";
            if (e.is_exact())
                std::cout << "p_exact " << e.p_exact->numerator() << "/"
                          << e.p_exact->denominator() << "\nq_exact " << e.q_exact->numerator()
                          << "/" << e.q_exact->denominator() << "\n";
            return 0;
        }
    } catch (const ConfigError& ex) {
        std::cerr << "config error";
        if (ex.line > 0) std::cerr << " (line " << ex.line << ")";
        std::cerr << ": " << ex.what() << "\n";
        return kUsageError;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "invalid input: " << ex.what() << "\n";
        return kUsageError;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return kUsageError;
}
