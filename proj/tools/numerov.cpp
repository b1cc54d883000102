// Bound-state solver front end: reads a key = value config, runs the
// two-sided shooting solver and writes eigenvalue/wavefunction tables
// plus an optional spectrum plot.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "numerov/numerov.hpp"

namespace {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw numerov::IoError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void print_report(const numerov::RunReport& report, const numerov::SolveConfig& cfg) {
    const bool hydrogen = cfg.problem == numerov::Problem::Hydrogen;
    if (hydrogen) {
        std::printf("%-6s %-16s %-12s %-12s %s\n", "state", "eps", "E_eV", "g_final", "iters");
    } else {
        std::printf("%-6s %-16s %-12s %s\n", "state", "eps", "g_final", "iters");
    }
    for (const numerov::StateSummary& s : report.solutions) {
        if (!s.ok) {
            std::printf("%-6zu FAILED: %s\n", s.index, s.error.c_str());
            continue;
        }
        if (hydrogen) {
            std::printf("%-6zu %-16.10g %-12.6g %-12.3g %d\n", s.index, s.eps, *s.e_ev,
                        s.g_final, s.iters);
        } else {
            std::printf("%-6zu %-16.10g %-12.3g %d\n", s.index, s.eps, s.g_final, s.iters);
        }
    }
    for (const std::string& w : report.warnings) {
        std::printf("warning: %s\n", w.c_str());
    }
    std::printf("solved in %lld ms; outputs in %s\n", report.timing_ms, cfg.out_dir.c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerov bound-state eigensolver"};
    app.require_subcommand(1);

    CLI::App* solve = app.add_subcommand("solve", "solve for bound states");
    std::string config_path;
    std::string problem;
    std::string out_dir;
    long long n_states = -1;
    long long l = -1;
    double delta = 0.0;
    bool svg = false;
    bool no_svg = false;
    solve->add_option("--config", config_path, "key = value config file");
    solve->add_option("--problem", problem, "harmonic, hydrogen or custom");
    solve->add_option("--n-states", n_states, "number of states to solve");
    solve->add_option("--l", l, "angular momentum (hydrogen)");
    solve->add_option("--delta", delta, "grid step");
    solve->add_option("--out-dir", out_dir, "output directory");
    solve->add_flag("--svg", svg, "write spectrum.svg");
    solve->add_flag("--no-svg", no_svg, "suppress spectrum.svg");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::vector<numerov::ConfigEntry> entries;
        if (!config_path.empty()) {
            entries = numerov::tokenize_config(read_text_file(config_path));
        }
        // command-line overrides append after the file and win
        if (!problem.empty()) entries.push_back({"problem", problem, 0});
        if (n_states >= 0) entries.push_back({"n_states", std::to_string(n_states), 0});
        if (l >= 0) entries.push_back({"l", std::to_string(l), 0});
        if (delta > 0.0) entries.push_back({"delta", numerov::format_double(delta), 0});
        if (!out_dir.empty()) entries.push_back({"out_dir", out_dir, 0});
        if (svg) entries.push_back({"emit_svg", "true", 0});
        if (no_svg) entries.push_back({"emit_svg", "false", 0});

        const numerov::SolveConfig cfg = numerov::build_config(entries);
        const numerov::RunReport report = numerov::run_solve(cfg);
        print_report(report, cfg);
        return report.all_converged ? 0 : 3;
    } catch (const numerov::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const numerov::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const numerov::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
