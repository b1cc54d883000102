#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "numerov/eigensolver.hpp"
#include "numerov/errors.hpp"
#include "numerov/grid.hpp"
#include "numerov/potentials.hpp"

namespace numerov {

/// Invalid or inconsistent configuration; names the key and config line.
class ConfigError : public Error {
public:
    ConfigError(std::string key_, int line_, const std::string& what)
        : Error("config error (key '" + key_ + "'" +
                (line_ > 0 ? ", line " + std::to_string(line_) : "") + "): " + what),
          key(std::move(key_)), line(line_) {}

    std::string key;
    int line;
};

/// Filesystem failure while reading inputs or writing outputs.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

enum class Problem { Harmonic, Hydrogen, Custom };

/// A fully resolved solver run: problem, domain, tolerances, output options.
struct SolveConfig {
    Problem problem = Problem::Harmonic;
    double a = -10.0;
    double b = 10.0;
    double delta = 0.01;
    int l = 0;
    std::size_t n_states = 1;
    std::optional<double> delta_e; // absent: well depth / 2000 (1e-4 floor)
    double eps_tol = 1e-9;
    double g_tol = 1e-6;
    std::string out_dir = ".";
    bool emit_svg = true;
    std::optional<std::string> potential_file;

    bool operator==(const SolveConfig&) const = default;
};

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct ConfigEntry {
    std::string key;
    std::string value;
    int line; // 0 for synthesized entries (CLI overrides)
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline double parse_number(const ConfigEntry& e) {
    double value = 0.0;
    const char* begin = e.value.data();
    const char* end = begin + e.value.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(value)) {
        throw ConfigError(e.key, e.line, "'" + e.value + "' is not a finite number");
    }
    return value;
}

inline long long parse_integer(const ConfigEntry& e) {
    long long value = 0;
    const char* begin = e.value.data();
    const char* end = begin + e.value.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ConfigError(e.key, e.line, "'" + e.value + "' is not an integer");
    }
    return value;
}

inline bool parse_bool(const ConfigEntry& e) {
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    throw ConfigError(e.key, e.line, "'" + e.value + "' is not 'true' or 'false'");
}

} // namespace detail

/// Splits `key = value` lines; '#' starts a comment, blank lines are skipped.
inline std::vector<ConfigEntry> tokenize_config(const std::string& text) {
    std::vector<ConfigEntry> entries;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = detail::trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(stripped, lineno, "expected 'key = value'");
        }
        const std::string key = detail::trim(stripped.substr(0, eq));
        const std::string value = detail::trim(stripped.substr(eq + 1));
        if (key.empty()) throw ConfigError("", lineno, "empty key");
        if (value.empty()) throw ConfigError(key, lineno, "empty value");
        entries.push_back({key, value, lineno});
    }
    return entries;
}

/// Resolves entries (later entries win) into a validated SolveConfig with
/// per-problem domain defaults applied.
inline SolveConfig build_config(const std::vector<ConfigEntry>& entries) {
    // last occurrence of each key wins, like the CLI overrides that append
    auto find = [&entries](const std::string& key) -> const ConfigEntry* {
        const ConfigEntry* hit = nullptr;
        for (const ConfigEntry& e : entries) {
            if (e.key == key) hit = &e;
        }
        return hit;
    };

    static const std::vector<std::string> known = {
        "problem", "a",       "b",       "delta",   "l",        "n_states",
        "delta_e", "eps_tol", "g_tol",   "out_dir", "emit_svg", "potential_file"};
    for (const ConfigEntry& e : entries) {
        if (std::find(known.begin(), known.end(), e.key) == known.end()) {
            throw ConfigError(e.key, e.line, "unknown key");
        }
    }

    const ConfigEntry* problem = find("problem");
    if (!problem) throw ConfigError("problem", 0, "missing required key");

    SolveConfig cfg;
    if (problem->value == "harmonic") {
        cfg.problem = Problem::Harmonic;
        cfg.a = -10.0;
        cfg.b = 10.0;
        cfg.delta = 0.01;
    } else if (problem->value == "hydrogen") {
        cfg.problem = Problem::Hydrogen;
        cfg.delta = 0.004;
        cfg.a = cfg.delta;
        cfg.b = 80.0;
    } else if (problem->value == "custom") {
        cfg.problem = Problem::Custom;
    } else {
        throw ConfigError("problem", problem->line,
                          "'" + problem->value + "' is not harmonic, hydrogen or custom");
    }

    if (const ConfigEntry* e = find("delta")) {
        cfg.delta = detail::parse_number(*e);
        if (cfg.problem == Problem::Hydrogen && !find("a")) cfg.a = cfg.delta;
    }
    if (const ConfigEntry* e = find("a")) cfg.a = detail::parse_number(*e);
    if (const ConfigEntry* e = find("b")) cfg.b = detail::parse_number(*e);
    if (cfg.problem == Problem::Custom) {
        for (const char* key : {"a", "b", "delta"}) {
            if (!find(key)) {
                throw ConfigError(key, 0, "missing required key (custom potentials set the domain)");
            }
        }
    }

    if (const ConfigEntry* e = find("l")) {
        const long long l = detail::parse_integer(*e);
        if (l < 0 || l > 10) throw ConfigError("l", e->line, "l must be in [0, 10]");
        cfg.l = static_cast<int>(l);
    }
    if (const ConfigEntry* e = find("n_states")) {
        const long long n = detail::parse_integer(*e);
        if (n < 1 || n > 64) throw ConfigError("n_states", e->line, "n_states must be in [1, 64]");
        cfg.n_states = static_cast<std::size_t>(n);
    }
    if (const ConfigEntry* e = find("delta_e")) {
        const double v = detail::parse_number(*e);
        if (!(v > 0.0)) throw ConfigError("delta_e", e->line, "delta_e must be > 0");
        cfg.delta_e = v;
    }
    if (const ConfigEntry* e = find("eps_tol")) {
        const double v = detail::parse_number(*e);
        if (!(v >= 1e-13)) throw ConfigError("eps_tol", e->line, "eps_tol must be >= 1e-13");
        cfg.eps_tol = v;
    }
    if (const ConfigEntry* e = find("g_tol")) {
        const double v = detail::parse_number(*e);
        if (!(v > 0.0)) throw ConfigError("g_tol", e->line, "g_tol must be > 0");
        cfg.g_tol = v;
    }
    if (const ConfigEntry* e = find("out_dir")) cfg.out_dir = e->value;
    if (const ConfigEntry* e = find("emit_svg")) cfg.emit_svg = detail::parse_bool(*e);
    if (const ConfigEntry* e = find("potential_file")) cfg.potential_file = e->value;

    if (!(cfg.delta > 0.0)) throw ConfigError("delta", 0, "delta must be > 0");
    if (!(cfg.b > cfg.a)) throw ConfigError("b", 0, "b must exceed a");
    const double steps = (cfg.b - cfg.a) / cfg.delta;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
        throw ConfigError("delta", 0, "(b - a) / delta must be an integer step count");
    }
    if (cfg.problem == Problem::Hydrogen && !(cfg.a > 0.0)) {
        throw ConfigError("a", 0, "a must be > 0 (Coulomb singularity at x = 0)");
    }
    if (cfg.problem == Problem::Custom && !cfg.potential_file) {
        throw ConfigError("potential_file", 0, "missing required key for custom potentials");
    }
    return cfg;
}

inline SolveConfig parse_config(const std::string& text) {
    return build_config(tokenize_config(text));
}

/// Inverse of parse_config: emits every field that differs from a freshly
/// parsed default, so parse_config(serialize_config(cfg)) == cfg.
inline std::string serialize_config(const SolveConfig& cfg) {
    std::ostringstream out;
    switch (cfg.problem) {
    case Problem::Harmonic: out << "problem = harmonic\n"; break;
    case Problem::Hydrogen: out << "problem = hydrogen\n"; break;
    case Problem::Custom: out << "problem = custom\n"; break;
    }
    out << "a = " << format_double(cfg.a) << "\n";
    out << "b = " << format_double(cfg.b) << "\n";
    out << "delta = " << format_double(cfg.delta) << "\n";
    if (cfg.l != 0) out << "l = " << cfg.l << "\n";
    out << "n_states = " << cfg.n_states << "\n";
    if (cfg.delta_e) out << "delta_e = " << format_double(*cfg.delta_e) << "\n";
    out << "eps_tol = " << format_double(cfg.eps_tol) << "\n";
    out << "g_tol = " << format_double(cfg.g_tol) << "\n";
    out << "out_dir = " << cfg.out_dir << "\n";
    out << "emit_svg = " << (cfg.emit_svg ? "true" : "false") << "\n";
    if (cfg.potential_file) out << "potential_file = " << *cfg.potential_file << "\n";
    return out.str();
}

/// Per-state outcome for the run report. One entry per requested state;
/// failed states carry the error text instead of a solution.
struct StateSummary {
    bool ok = false;
    std::size_t index = 0;
    double eps = 0.0;
    std::optional<double> e_ev;
    double g_final = 0.0;
    int iters = 0;
    std::string error;
};

struct RunReport {
    std::vector<StateSummary> solutions;
    std::vector<std::string> warnings;
    long long timing_ms = 0;
    bool all_converged = false;
};

namespace detail {

inline PotentialModel make_model(const SolveConfig& cfg) {
    switch (cfg.problem) {
    case Problem::Harmonic:
        return PotentialModel::harmonic();
    case Problem::Hydrogen:
        return PotentialModel::hydrogen_radial(cfg.l);
    case Problem::Custom: {
        std::ifstream in(*cfg.potential_file);
        if (!in) throw IoError("cannot open potential file '" + *cfg.potential_file + "'");
        std::vector<TableSample> samples;
        try {
            samples = read_potential_table(in);
            return PotentialModel::custom_table(std::move(samples));
        } catch (const DomainError& e) {
            throw ConfigError("potential_file", 0, e.what());
        }
    }
    }
    throw Error("unreachable problem kind");
}

inline Grid make_grid(const SolveConfig& cfg) { return Grid(cfg.a, cfg.b, cfg.delta); }

} // namespace detail

/// Writes eigenvalues.tsv, wavefunctions.csv and (optionally) spectrum.svg
/// into cfg.out_dir.
void write_outputs(const RunReport& report, const std::vector<EigenSolution>& solutions,
                   const SolveConfig& cfg);

/// Builds the model and grid, runs the solver, writes output files and
/// returns the per-state report. Solver failures land in the report;
/// configuration and I/O problems throw.
inline RunReport run_solve(const SolveConfig& cfg) {
    const PotentialModel model = detail::make_model(cfg);
    const Grid grid = detail::make_grid(cfg);
    try {
        model.validate_domain(grid);
    } catch (const DomainError& e) {
        throw ConfigError("a", 0, e.what());
    }

    ScanConfig scan;
    scan.delta_e = cfg.delta_e ? *cfg.delta_e : default_delta_e(model, grid);
    scan.eps_tol = cfg.eps_tol;
    scan.g_tol = cfg.g_tol;
    scan.n_states = cfg.n_states;

    const auto t0 = std::chrono::steady_clock::now();
    SolveResult solved;
    std::string failure;
    try {
        solved = solve_states(model, grid, scan);
    } catch (const PartialSpectrum& e) {
        solved = e.partial;
        failure = e.what();
    }
    const auto t1 = std::chrono::steady_clock::now();

    RunReport report;
    report.timing_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    report.warnings = solved.warnings;
    const bool hydrogen = cfg.problem == Problem::Hydrogen;
    for (const EigenSolution& sol : solved.states) {
        StateSummary s;
        s.ok = true;
        s.index = sol.index;
        s.eps = sol.eps.eps;
        if (hydrogen) s.e_ev = eps_to_ev(sol.eps);
        s.g_final = sol.g_final;
        s.iters = sol.bisect_iters;
        report.solutions.push_back(std::move(s));
    }
    for (std::size_t k = solved.states.size(); k < cfg.n_states; ++k) {
        StateSummary s;
        s.index = k;
        s.error = failure.empty() ? "not solved" : failure;
        report.solutions.push_back(std::move(s));
    }
    report.all_converged = solved.states.size() == cfg.n_states;

    write_outputs(report, solved.states, cfg);
    return report;
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

inline std::string render_eigenvalues_tsv(const std::vector<EigenSolution>& solutions,
                                          bool hydrogen) {
    std::ostringstream out;
    out << (hydrogen ? "index\teps\tE_eV\tg_final\titers\n" : "index\teps\tg_final\titers\n");
    for (const EigenSolution& sol : solutions) {
        out << sol.index << '\t' << format_double(sol.eps.eps);
        if (hydrogen) out << '\t' << format_double(eps_to_ev(sol.eps));
        out << '\t' << format_double(sol.g_final) << '\t' << sol.bisect_iters << '\n';
    }
    return out.str();
}

inline std::string render_wavefunctions_csv(const std::vector<EigenSolution>& solutions,
                                            const Grid& grid) {
    std::ostringstream out;
    out << "x";
    for (std::size_t k = 0; k < solutions.size(); ++k) out << ",psi" << k;
    out << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out << format_double(grid.x(i));
        for (const EigenSolution& sol : solutions) out << ',' << format_double(sol.psi[i]);
        out << '\n';
    }
    return out.str();
}

// Spectrum figure: the potential curve with each normalized eigenfunction
// drawn at the height of its energy.
inline std::string render_spectrum_svg(const std::vector<EigenSolution>& solutions,
                                       const PotentialModel& model, const Grid& grid) {
    constexpr double kWidth = 900.0;
    constexpr double kHeight = 600.0;
    constexpr double kMargin = 50.0;

    double eps_lo = 0.0;
    double eps_hi = 1.0;
    if (!solutions.empty()) {
        eps_lo = solutions.front().eps.eps;
        eps_hi = solutions.back().eps.eps;
    }
    double spacing = solutions.size() > 1
                         ? (eps_hi - eps_lo) / static_cast<double>(solutions.size() - 1)
                         : std::max(1.0, std::abs(eps_hi));
    const double v_min = potential_minimum(model, grid).second;
    const double y_lo = std::max(v_min, eps_lo - spacing) - 0.25 * spacing;
    const double y_hi = eps_hi + 1.25 * spacing;

    const auto px = [&](double x) {
        return kMargin + (x - grid.a()) / (grid.b() - grid.a()) * (kWidth - 2.0 * kMargin);
    };
    const auto py = [&](double y) {
        return kHeight - kMargin - (y - y_lo) / (y_hi - y_lo) * (kHeight - 2.0 * kMargin);
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 900 600\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"900\" height=\"600\" fill=\"white\"/>\n";

    const std::size_t stride = std::max<std::size_t>(1, grid.size() / 1200);

    // potential, clipped to the viewport energy range
    out << "<polyline fill=\"none\" stroke=\"#cc0000\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < grid.size(); i += stride) {
        const double v = model.potential(grid.x(i));
        if (!std::isfinite(v)) continue;
        const double clipped = std::min(std::max(v, y_lo), y_hi);
        out << format_double(px(grid.x(i))) << ',' << format_double(py(clipped)) << ' ';
    }
    out << "\"/>\n";

    static const char* kColors[] = {"#1f4e99", "#2a7f2a", "#8033aa", "#aa7722",
                                    "#2299aa", "#aa3366"};
    for (std::size_t k = 0; k < solutions.size(); ++k) {
        const EigenSolution& sol = solutions[k];
        double peak = 0.0;
        for (double v : sol.psi) peak = std::max(peak, std::abs(v));
        const double amp = peak > 0.0 ? 0.4 * spacing / peak : 0.0;
        out << "<polyline fill=\"none\" stroke=\"" << kColors[k % 6]
            << "\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < grid.size(); i += stride) {
            const double y = sol.eps.eps + amp * sol.psi[i];
            out << format_double(px(grid.x(i))) << ',' << format_double(py(y)) << ' ';
        }
        out << "\"/>\n";
        out << "<text x=\"" << format_double(kWidth - kMargin + 4.0) << "\" y=\""
            << format_double(py(sol.eps.eps)) << "\" font-size=\"11\">n=" << sol.index
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace detail

inline void write_outputs(const RunReport& report, const std::vector<EigenSolution>& solutions,
                          const SolveConfig& cfg) {
    namespace fs = std::filesystem;
    const fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

    const Grid grid = detail::make_grid(cfg);
    const bool hydrogen = cfg.problem == Problem::Hydrogen;
    (void)report; // summaries go to stdout; files carry only solved states
    detail::write_file(dir / "eigenvalues.tsv",
                       detail::render_eigenvalues_tsv(solutions, hydrogen));
    detail::write_file(dir / "wavefunctions.csv",
                       detail::render_wavefunctions_csv(solutions, grid));
    if (cfg.emit_svg) {
        const PotentialModel model = detail::make_model(cfg);
        detail::write_file(dir / "spectrum.svg",
                           detail::render_spectrum_svg(solutions, model, grid));
    }
}

} // namespace numerov
