// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. argv[1] is the path to the CLI binary (used by the last
// criterion).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "numerov/numerov.hpp"

namespace fs = std::filesystem;
using namespace numerov;

namespace {

int g_failures = 0;

void report(int id, const std::string& what, bool ok, const std::string& detail) {
    std::printf("%s | criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", id, what.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

void run(int id, const std::string& what, const std::function<std::pair<bool, std::string>()>& fn) {
    try {
        const auto [ok, detail] = fn();
        report(id, what, ok, detail);
    } catch (const std::exception& e) {
        report(id, what, false, std::string("exception: ") + e.what());
    }
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

int run_cli(const std::string& cli, const std::string& args) {
    const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

SolveResult solve_harmonic_six() {
    const auto model = PotentialModel::harmonic();
    const Grid grid(-10.0, 10.0, 0.01);
    ScanConfig scan;
    scan.delta_e = default_delta_e(model, grid);
    scan.n_states = 6;
    return solve_states(model, grid, scan);
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";

    SolveResult harmonic_six;

    run(1, "harmonic spectrum eps = n + 1/2, each within 1e-3", [&] {
        harmonic_six = solve_harmonic_six();
        if (harmonic_six.states.size() != 6) return std::make_pair(false, std::string("missing states"));
        std::string detail;
        bool ok = true;
        for (std::size_t k = 0; k < 6; ++k) {
            const double want = 0.5 + static_cast<double>(k);
            const double err = std::abs(harmonic_six.states[k].eps.eps - want);
            ok = ok && err <= 1e-3;
            detail += (k ? ", " : "eps = ") + std::to_string(harmonic_six.states[k].eps.eps);
        }
        return std::make_pair(ok, detail);
    });

    run(2, "hydrogen l=1 levels: 3% of -13.6/n^2 eV, 0.15 eV of reference numerics", [&] {
        const auto model = PotentialModel::hydrogen_radial(1);
        const Grid grid(0.004, 80.0, 0.004);
        ScanConfig scan;
        scan.delta_e = default_delta_e(model, grid);
        scan.n_states = 3;
        const auto solved = solve_states(model, grid, scan);
        if (solved.states.size() != 3) return std::make_pair(false, std::string("missing states"));
        const double reference_numeric[3] = {-3.47, -1.54, -0.83};
        bool ok = true;
        std::string detail = "E_eV =";
        for (std::size_t k = 0; k < 3; ++k) {
            const double analytic = -kRydbergEv / std::pow(static_cast<double>(k) + 2.0, 2);
            const double got = eps_to_ev(solved.states[k].eps);
            ok = ok && std::abs(got - analytic) <= 0.03 * std::abs(analytic);
            ok = ok && std::abs(got - reference_numeric[k]) <= 0.15;
            detail += " " + std::to_string(got);
        }
        return std::make_pair(ok, detail);
    });

    run(3, "generalized step reduces to the standard step within 2 ULP (1e4 samples)", [&] {
        std::mt19937_64 rng(424242);
        std::uniform_real_distribution<double> psi(-10.0, 10.0);
        std::uniform_real_distribution<double> coeff(-50.0, 50.0);
        std::uniform_real_distribution<double> step(1e-3, 0.5);
        for (int i = 0; i < 10000; ++i) {
            const StepTriple t{psi(rng), psi(rng), step(rng), 2};
            const double s0 = coeff(rng), s1 = coeff(rng), s2 = coeff(rng);
            const double a = numerov_step(t, {s0, s1, s2});
            const double b = numerov_step_general(t, {0.0, 0.0, s0, s1, s2});
            const double scale = std::max(std::abs(a), std::abs(b));
            if (std::abs(a - b) > 2.0 * std::numeric_limits<double>::epsilon() * scale) {
                return std::make_pair(false, "diverged at sample " + std::to_string(i));
            }
        }
        return std::make_pair(true, std::string());
    });

    run(4, "eigenvalue error ratio err(0.08)/err(0.04) >= 8 (fourth order)", [&] {
        const auto model = PotentialModel::harmonic();
        ScanConfig scan;
        scan.delta_e = 0.05;
        scan.eps_tol = 1e-12;
        scan.g_tol = 1e-13;
        const double e1 =
            refine_bisection(model, Grid(-10.0, 10.0, 0.08), {0.4, 0.6}, scan).eps.eps;
        const double e2 =
            refine_bisection(model, Grid(-10.0, 10.0, 0.04), {0.4, 0.6}, scan).eps.eps;
        const double ratio = std::abs(e1 - 0.5) / std::abs(e2 - 0.5);
        return std::make_pair(ratio >= 8.0, "ratio = " + std::to_string(ratio));
    });

    run(5, "node theorem: six harmonic states carry node counts 0..5", [&] {
        if (harmonic_six.states.size() != 6) return std::make_pair(false, std::string("no spectrum"));
        for (std::size_t k = 0; k < 6; ++k) {
            if (count_nodes(harmonic_six.states[k].psi) != k) {
                return std::make_pair(false, "state " + std::to_string(k) + " has " +
                                                 std::to_string(count_nodes(harmonic_six.states[k].psi)) +
                                                 " nodes");
            }
        }
        return std::make_pair(true, std::string());
    });

    run(6, "propagation oracles: sine within 1e-8, sinc within 1e-7", [&] {
        // psi'' = -psi across [0, pi/2]: 157 uniform steps of ~0.01
        const int n_sine = 157;
        const double d = (M_PI / 2.0) / n_sine;
        double prev = 0.0, cur = std::sin(d);
        for (int i = 2; i <= n_sine; ++i) {
            const double next = numerov_step({prev, cur, d, static_cast<std::size_t>(i)},
                                             {1.0, 1.0, 1.0});
            prev = cur;
            cur = next;
        }
        const double sine_err = std::abs(cur - 1.0);

        // y'' = -(2/x) y' - y across [1, 3]: y = sin(x)/x
        const auto y = [](double v) { return std::sin(v) / v; };
        const double dg = 0.001;
        const int n_sinc = 2000;
        double gprev = y(1.0), gcur = y(1.0 + dg);
        for (int i = 2; i <= n_sinc; ++i) {
            const double x = 1.0 + (i - 1) * dg;
            const GeneralizedCoeffs coeffs{2.0 / x, -2.0 / (x * x), 1.0, 1.0, 1.0};
            const double next =
                numerov_step_general({gprev, gcur, dg, static_cast<std::size_t>(i)}, coeffs);
            gprev = gcur;
            gcur = next;
        }
        const double sinc_err = std::abs(gcur - y(3.0));
        const bool ok = sine_err <= 1e-8 && sinc_err <= 1e-7;
        return std::make_pair(ok, "sine err = " + sci(sine_err) +
                                      ", sinc err = " + sci(sinc_err));
    });

    run(7, "hydrogen accidental degeneracy: eps(l=0, 1 node) ~ eps(l=1, 0 nodes)", [&] {
        const Grid grid(0.004, 40.0, 0.004);

        const auto l0 = PotentialModel::hydrogen_radial(0);
        ScanConfig scan0;
        scan0.delta_e = default_delta_e(l0, grid);
        scan0.n_states = 2;
        const auto solved0 = solve_states(l0, grid, scan0);

        const auto l1 = PotentialModel::hydrogen_radial(1);
        ScanConfig scan1;
        scan1.delta_e = default_delta_e(l1, grid);
        scan1.n_states = 1;
        const auto solved1 = solve_states(l1, grid, scan1);

        double eps0 = 0.0, eps1 = 0.0;
        bool found0 = false, found1 = false;
        for (const auto& s : solved0.states) {
            if (s.index == 1) {
                eps0 = s.eps.eps;
                found0 = true;
            }
        }
        for (const auto& s : solved1.states) {
            if (s.index == 0) {
                eps1 = s.eps.eps;
                found1 = true;
            }
        }
        if (!found0 || !found1) return std::make_pair(false, std::string("states not labeled"));
        const double diff = std::abs(eps0 - eps1);
        return std::make_pair(diff <= 5e-3, "eps(l=0,n=1) = " + std::to_string(eps0) +
                                                ", eps(l=1,n=0) = " + std::to_string(eps1) +
                                                ", diff = " + std::to_string(diff));
    });

    run(8, "mismatch invariant under seed scaling x10 (1e-10 relative)", [&] {
        const auto model = PotentialModel::harmonic();
        const Grid grid(-10.0, 10.0, 0.01);
        ShootingConfig s1;
        s1.seed_left = s1.seed_right = 1e-6;
        ShootingConfig s2;
        s2.seed_left = s2.seed_right = 1e-5;
        const double g1 = mismatch(model, {0.7}, grid, s1).mismatch;
        const double g2 = mismatch(model, {0.7}, grid, s2).mismatch;
        const double rel = std::abs(g1 - g2) / std::abs(g1);
        return std::make_pair(rel <= 1e-10, "relative difference = " + sci(rel));
    });

    run(9, "CLI determinism and exit codes", [&] {
        if (cli.empty()) return std::make_pair(false, std::string("CLI path not supplied"));
        const fs::path dir = fs::temp_directory_path() / "numerov-acceptance";
        fs::remove_all(dir);
        fs::create_directories(dir);

        const fs::path cfg = dir / "run.conf";
        const fs::path out = dir / "out";
        {
            std::ofstream c(cfg);
            c << "problem = harmonic\na = -6\nb = 6\ndelta = 0.01\nn_states = 3\n";
        }
        // output directory and svg suppression exercised as CLI overrides
        const std::string cmd =
            "solve --config " + cfg.string() + " --out-dir " + out.string() + " --no-svg";

        if (run_cli(cli, cmd) != 0) {
            return std::make_pair(false, std::string("first run did not exit 0"));
        }
        if (fs::exists(out / "spectrum.svg")) {
            return std::make_pair(false, std::string("--no-svg still wrote spectrum.svg"));
        }
        const std::string tsv1 = slurp(out / "eigenvalues.tsv");
        const std::string csv1 = slurp(out / "wavefunctions.csv");
        if (run_cli(cli, cmd) != 0) {
            return std::make_pair(false, std::string("second run did not exit 0"));
        }
        if (slurp(out / "eigenvalues.tsv") != tsv1 || slurp(out / "wavefunctions.csv") != csv1) {
            return std::make_pair(false, std::string("outputs differ between identical runs"));
        }

        const fs::path bad = dir / "bad.conf";
        std::ofstream(bad) << "problem = harmonic\nnstates = 3\n"; // unknown key
        if (run_cli(cli, "solve --config " + bad.string()) != 2) {
            return std::make_pair(false, std::string("config error did not exit 2"));
        }

        const fs::path narrow = dir / "narrow.conf";
        std::ofstream(narrow) << "problem = harmonic\na = -2\nb = 2\ndelta = 0.01\n"
                              << "n_states = 6\nemit_svg = false\nout_dir = "
                              << (dir / "narrow-out").string() << "\n";
        if (run_cli(cli, "solve --config " + narrow.string()) != 3) {
            return std::make_pair(false, std::string("convergence failure did not exit 3"));
        }

        fs::remove_all(dir);
        return std::make_pair(true, std::string());
    });

    std::printf("%d of 9 criteria passed\n", 9 - g_failures);
    return g_failures;
}
