#pragma once
// Batch front end: run configuration (JSON file plus flag overrides) and the
// symbol / spectrum / verify commands. Exit codes: 0 ran or passed,
// 1 verification failure or numerical error, 2 usage or configuration error.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "whs/discretize.hpp"
#include "whs/kernels.hpp"
#include "whs/linalg.hpp"
#include "whs/report.hpp"
#include "whs/specfun.hpp"
#include "whs/spectra.hpp"
#include "whs/verify.hpp"

namespace whs {

inline constexpr int exit_ok = 0;
inline constexpr int exit_fail = 1;
inline constexpr int exit_usage = 2;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Output could not be written; reported as a configuration problem.
class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    double alpha = 0.0;
    std::string kernel = "power";
    std::string weight = "power";
    bool weight_explicit = false; // a weight was named, so rational(a0,ainf,b0,binf) must not replace it
    std::vector<LadderStep> ladder = default_ladder();
    std::optional<double> delta;
    std::optional<double> interior_margin;
    std::filesystem::path out = ".";
    std::vector<CheckId> checks = all_checks();
    std::vector<Family> families = default_families();
};

// ---------------------------------------------------------------------------
// Formatting and files
// ---------------------------------------------------------------------------

inline std::string format_g17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string format_short(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

/// Write through a temporary file in the same directory, then rename.
inline void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw OutputError("cannot write " + tmp.string());
        f << content;
        f.flush();
        if (!f) throw OutputError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw OutputError("cannot rename into " + path.string());
    }
}

inline void prepare_output_dir(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw OutputError("cannot create output directory " + dir.string());
}

inline std::string eigenvalue_file_name(const LadderStep& s)
{
    return "eigs_R" + format_short(s.R) + "_N" + std::to_string(s.N) + ".csv";
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// "name" or "name(p1,p2,...)".
struct BuiltinChoice {
    std::string name;
    std::vector<double> params;
};

inline BuiltinChoice parse_builtin(const std::string& text)
{
    BuiltinChoice c;
    const auto open = text.find('(');
    if (open == std::string::npos) {
        c.name = text;
        return c;
    }
    if (text.back() != ')') throw ConfigError("malformed parameter list in '" + text + "'");
    c.name = text.substr(0, open);
    std::stringstream ss(text.substr(open + 1, text.size() - open - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            c.params.push_back(std::stod(item, &used));
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("bad number '" + item + "' in '" + text + "'");
        }
    }
    return c;
}

struct ResolvedOperator {
    KernelSpec kernel;
    WeightSpec weight;
    std::string kernel_label;
    std::string weight_label;
};

inline ResolvedOperator resolve_operator(const RunConfig& cfg)
{
    const Alpha alpha{cfg.alpha};
    const auto k = parse_builtin(cfg.kernel);
    const auto w = parse_builtin(cfg.weight);
    std::optional<KernelSpec> kernel;
    std::optional<WeightSpec> weight;
    std::string weight_label = cfg.weight;

    if (k.name == "power" && k.params.empty()) {
        kernel = power_kernel(alpha);
    } else if (k.name == "carleman" && k.params.empty()) {
        if (cfg.alpha != 0.0) throw ConfigError("the carleman kernel needs alpha = 0");
        kernel = carleman_kernel();
    } else if (k.name == "rational" && (k.params.size() == 2 || k.params.size() == 4)) {
        const double b0 = k.params.size() == 4 ? k.params[2] : 1.0;
        const double bi = k.params.size() == 4 ? k.params[3] : 1.0;
        auto fam = rational_test_family(alpha, k.params[0], k.params[1], b0, bi);
        kernel = fam.first;
        if (k.params.size() == 4 && !cfg.weight_explicit) {
            weight = fam.second;
            weight_label = "rational(" + format_short(b0) + "," + format_short(bi) + ")";
        }
    } else {
        throw ConfigError("unknown kernel '" + cfg.kernel + "' (power, carleman, rational(a0,ainf), "
                          "rational(a0,ainf,b0,binf))");
    }

    if (!weight) {
        if (w.name == "power" && w.params.empty())
            weight = power_weight(alpha);
        else if (w.name == "rational" && w.params.size() == 2)
            weight = rational_test_family(alpha, 1.0, 1.0, w.params[0], w.params[1]).second;
        else
            throw ConfigError("unknown weight '" + cfg.weight + "' (power, rational(b0,binf))");
    }
    return {*kernel, *weight, cfg.kernel, weight_label};
}

inline void validate_config(const RunConfig& cfg)
{
    if (!(cfg.alpha > -0.5) || !std::isfinite(cfg.alpha)) throw ConfigError("alpha must be a finite number > -0.5");
    try {
        validate_ladder(cfg.ladder);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("ladder: ") + e.what());
    }
    if (cfg.delta && !(*cfg.delta > 0.0)) throw ConfigError("delta must be positive");
    if (cfg.interior_margin && !(*cfg.interior_margin > 0.0)) throw ConfigError("margin must be positive");
    if (cfg.checks.empty()) throw ConfigError("no checks selected");
}

inline std::vector<CheckId> parse_checks(const std::vector<std::string>& names)
{
    std::vector<CheckId> out;
    for (const auto& n : names) {
        if (n == "all") return all_checks();
        const auto id = parse_check(n);
        if (!id) throw ConfigError("unknown check '" + n + "'");
        out.push_back(*id);
    }
    return out;
}

inline LadderStep ladder_step_from_json(const Json& j)
{
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number_unsigned())
        return {j[0].get<double>(), j[1].get<std::size_t>()};
    if (j.is_object() && j.contains("R") && j.contains("N") && j.at("R").is_number() && j.at("N").is_number_unsigned())
        return {j.at("R").get<double>(), j.at("N").get<std::size_t>()};
    throw ConfigError("ladder entries must be [R, N] or {\"R\": R, \"N\": N}");
}

/// Apply a JSON configuration document on top of cfg. Unknown keys are errors.
inline void apply_config_json(RunConfig& cfg, const Json& j)
{
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "alpha") {
                cfg.alpha = value.get<double>();
            } else if (key == "kernel") {
                cfg.kernel = value.get<std::string>();
            } else if (key == "weight") {
                cfg.weight = value.get<std::string>();
                cfg.weight_explicit = true;
            } else if (key == "ladder") {
                cfg.ladder.clear();
                for (const auto& s : value) cfg.ladder.push_back(ladder_step_from_json(s));
            } else if (key == "delta") {
                cfg.delta = value.get<double>();
            } else if (key == "margin" || key == "interior_margin") {
                cfg.interior_margin = value.get<double>();
            } else if (key == "out" || key == "output_dir") {
                cfg.out = value.get<std::string>();
            } else if (key == "checks") {
                cfg.checks = parse_checks(value.get<std::vector<std::string>>());
            } else if (key == "families") {
                cfg.families.clear();
                for (const auto& f : value) {
                    const auto v = f.get<std::vector<double>>();
                    if (v.size() != 4) throw ConfigError("families entries must be [a0, a_inf, b0, b_inf]");
                    cfg.families.push_back({v[0], v[1], v[2], v[3]});
                }
            } else {
                throw ConfigError("unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

inline RunConfig load_config_file(const std::filesystem::path& path)
{
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config " + path.string());
    Json j;
    try {
        j = Json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    RunConfig cfg;
    apply_config_json(cfg, j);
    return cfg;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

/// symbol.csv: the Mellin symbol from the Gamma formula and by quadrature, xi in [-5, 5] step 0.1.
inline std::string symbol_csv(Alpha alpha)
{
    std::string out = "xi,sigma_gamma,sigma_quadrature,abs_diff\n";
    for (int k = -50; k <= 50; ++k) {
        const double xi = k / 10.0;
        const double g = mellin_symbol(alpha, xi);
        const double q = symbol_by_quadrature(alpha, xi);
        out += format_g17(xi) + "," + format_g17(g) + "," + format_g17(q) + "," + format_g17(std::abs(g - q)) + "\n";
    }
    return out;
}

inline int cmd_symbol(const RunConfig& cfg, std::ostream& log)
{
    validate_config(cfg);
    prepare_output_dir(cfg.out);
    write_atomic(cfg.out / "symbol.csv", symbol_csv(Alpha{cfg.alpha}));
    log << "wrote " << (cfg.out / "symbol.csv").string() << "\n";
    return exit_ok;
}

inline SpectrumRun run_spectrum(const RunConfig& cfg)
{
    validate_config(cfg);
    const Alpha alpha{cfg.alpha};
    const auto op = resolve_operator(cfg);

    SpectrumRun run;
    run.alpha = cfg.alpha;
    run.kernel = op.kernel_label;
    run.weight = op.weight_label;
    run.a0 = op.kernel.a0;
    run.a_inf = op.kernel.a_inf;
    run.b0 = op.weight.b0;
    run.b_inf = op.weight.b_inf;
    run.hypothesis = hypothesis_check(op.kernel, op.weight);
    run.predicted = predict(alpha, run.a0, run.a_inf, run.b0, run.b_inf);
    if (run.predicted.intervals.empty()) throw ConfigError("the predicted spectrum is empty for this kernel and weight");
    run.delta = cfg.delta.value_or(default_delta(run.predicted));
    run.interior_margin = cfg.interior_margin.value_or(default_interior_margin(run.predicted));

    for (const auto& s : cfg.ladder) {
        const auto m = assemble_wHa(op.kernel, op.weight, make_grid(s.R, s.N));
        run.steps.push_back({s, analyze(eigenvalues(m.entries), run.predicted, run.delta, run.interior_margin),
                             eigenvalue_file_name(s)});
    }
    return run;
}

inline std::string eigenvalue_csv(const std::vector<double>& eigs)
{
    std::string out;
    for (double e : eigs) out += format_g17(e) + "\n";
    return out;
}

inline int cmd_spectrum(const RunConfig& cfg, std::ostream& log)
{
    validate_config(cfg);
    prepare_output_dir(cfg.out);
    const auto run = run_spectrum(cfg);
    for (const auto& s : run.steps) write_atomic(cfg.out / s.eigenvalue_file, eigenvalue_csv(s.report.eigenvalues));
    const Json doc = to_json(run);
    const auto errs = validate_spectral_report(doc);
    if (!errs.empty()) throw std::logic_error("spectral report violates its schema: " + errs.front());
    write_atomic(cfg.out / "spectral_report.json", doc.dump(2) + "\n");
    if (!run.hypothesis.ok) log << "warning: kernel/weight hypotheses not confirmed numerically\n";
    for (const auto& s : run.steps)
        log << "R=" << s.step.R << " N=" << s.step.N << " max_gap=" << s.report.fill_max_gap
            << " outliers=" << s.report.outliers.size() << " hausdorff=" << s.report.hausdorff << "\n";
    return exit_ok;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& log)
{
    validate_config(cfg);
    prepare_output_dir(cfg.out);
    const auto rep = run_suite(Alpha{cfg.alpha}, cfg.ladder, cfg.checks, cfg.families);
    const Json doc = to_json(rep);
    const auto errs = validate_verification_report(doc);
    if (!errs.empty()) throw std::logic_error("verification report violates its schema: " + errs.front());
    write_atomic(cfg.out / "verification_report.json", doc.dump(2) + "\n");
    for (const auto& c : rep.checks) log << (c.pass ? "pass " : "FAIL ") << c.name << "\n";
    log << "verdict: " << (rep.pass ? "pass" : "fail") << "\n";
    return rep.pass ? exit_ok : exit_fail;
}

// ---------------------------------------------------------------------------
// Argument parsing
// ---------------------------------------------------------------------------

struct CliOverrides {
    std::string config;
    std::optional<double> alpha, R, delta, margin;
    std::optional<std::size_t> N;
    std::optional<std::string> kernel, weight, out;
    std::vector<std::string> checks;
};

inline void add_common_options(CLI::App* cmd, CliOverrides& o)
{
    cmd->add_option("--config", o.config, "JSON configuration file");
    cmd->add_option("--alpha", o.alpha, "alpha > -0.5");
    cmd->add_option("--R", o.R, "log half-width of a single-step ladder");
    cmd->add_option("--N", o.N, "node count of a single-step ladder (even)");
    cmd->add_option("--kernel", o.kernel, "power | carleman | rational(a0,ainf) | rational(a0,ainf,b0,binf)");
    cmd->add_option("--weight", o.weight, "power | rational(b0,binf)");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--delta", o.delta, "outlier distance (default 0.05 of the largest endpoint)");
    cmd->add_option("--margin", o.margin, "interior margin (default 0.1 of the largest endpoint)");
    cmd->add_option("--checks", o.checks, "comma separated check names, or all")->delimiter(',');
}

inline RunConfig build_config(const CliOverrides& o)
{
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_config_file(o.config);
    if (o.alpha) cfg.alpha = *o.alpha;
    if (o.kernel) cfg.kernel = *o.kernel;
    if (o.weight) {
        cfg.weight = *o.weight;
        cfg.weight_explicit = true;
    }
    if (o.out) cfg.out = *o.out;
    if (o.delta) cfg.delta = *o.delta;
    if (o.margin) cfg.interior_margin = *o.margin;
    if (!o.checks.empty()) cfg.checks = parse_checks(o.checks);
    if (o.R || o.N) {
        const LadderStep base = cfg.ladder.empty() ? LadderStep{8.0, 400} : cfg.ladder.front();
        cfg.ladder = {{o.R.value_or(base.R), o.N.value_or(base.N)}};
    }
    return cfg;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& log = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Spectral laboratory for weighted Hankel operators"};
    app.require_subcommand(1);
    CliOverrides o;
    auto* symbol = app.add_subcommand("symbol", "tabulate the Mellin symbol (symbol.csv)");
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and spectral report along the ladder");
    auto* verify = app.add_subcommand("verify", "run the verification suite (verification_report.json)");
    for (auto* cmd : {symbol, spectrum, verify}) add_common_options(cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, log, err);
        return exit_ok;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, log, err);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        app.exit(e, log, err);
        return exit_usage;
    }

    try {
        const RunConfig cfg = build_config(o);
        if (symbol->parsed()) return cmd_symbol(cfg, log);
        if (spectrum->parsed()) return cmd_spectrum(cfg, log);
        return cmd_verify(cfg, log);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_usage;
    } catch (const OutputError& e) {
        err << "output error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::domain_error& e) {
        err << "config error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_fail;
    }
}

} // namespace whs
