#pragma once
// JSON form of spectral and verification reports, plus structural validators
// for both documents.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

#include "whs/spectra.hpp"
#include "whs/verify.hpp"

namespace whs {

using Json = nlohmann::ordered_json;

struct SpectrumStep {
    LadderStep step;
    SpectralReport report;
    std::string eigenvalue_file;
};

/// Everything a spectrum run produces besides the eigenvalue files.
struct SpectrumRun {
    double alpha = 0.0;
    std::string kernel;
    std::string weight;
    double a0 = 0.0, a_inf = 0.0, b0 = 0.0, b_inf = 0.0;
    HypothesisReport hypothesis;
    PredictedSpectrum predicted;
    double delta = 0.0;
    double interior_margin = 0.0;
    std::vector<SpectrumStep> steps;
};

inline Json predicted_to_json(const PredictedSpectrum& p)
{
    Json arr = Json::array();
    for (const auto& iv : p.intervals)
        arr.push_back({{"lo", iv.lo}, {"hi", iv.hi}, {"multiplicity", iv.multiplicity}, {"origin", to_string(iv.origin)}});
    return arr;
}

inline Json hypothesis_to_json(const HypothesisReport& h)
{
    Json d = Json::array();
    for (const auto& c : h.derivatives)
        d.push_back({{"end", to_string(c.end)}, {"order", c.order}, {"bounded", c.bounded},
                     {"growth_ratio", c.growth_ratio}});
    Json wi = Json::array();
    for (const auto& c : h.weight_integrals) wi.push_back({{"end", to_string(c.end)}, {"values", c.values}, {"cauchy", c.cauchy}});
    return {{"ok", h.ok},
            {"kernel_zero_ok", h.kernel_zero_ok},
            {"kernel_inf_ok", h.kernel_inf_ok},
            {"weight_ok", h.weight_ok},
            {"limit_estimate_zero", h.limit_estimate_zero},
            {"limit_estimate_inf", h.limit_estimate_inf},
            {"weight_sup", h.weight_sup},
            {"derivatives", d},
            {"weight_integrals", wi},
            {"failures", h.failures}};
}

inline Json to_json(const SpectrumRun& run)
{
    Json steps = Json::array();
    for (const auto& s : run.steps) {
        Json counting = Json::array();
        for (const auto& row : s.report.counting_table)
            counting.push_back({{"lambda", row.lambda}, {"count", row.count}, {"predicted_multiplicity", row.predicted_multiplicity}});
        steps.push_back({{"R", s.step.R},
                         {"N", s.step.N},
                         {"max_gap", s.report.fill_max_gap},
                         {"outliers", s.report.outliers},
                         {"hausdorff", s.report.hausdorff},
                         {"hypothesis_ok", run.hypothesis.ok},
                         {"eig_min", s.report.eigenvalues.front()},
                         {"eig_max", s.report.eigenvalues.back()},
                         {"eigenvalue_file", s.eigenvalue_file},
                         {"counting_table", counting}});
    }
    return {{"alpha", run.alpha},
            {"family",
             {{"kernel", run.kernel}, {"weight", run.weight}, {"a0", run.a0}, {"a_inf", run.a_inf}, {"b0", run.b0},
              {"b_inf", run.b_inf}}},
            {"predicted", predicted_to_json(run.predicted)},
            {"delta", run.delta},
            {"interior_margin", run.interior_margin},
            {"hypothesis", hypothesis_to_json(run.hypothesis)},
            {"steps", steps}};
}

inline Json to_json(const VerificationReport& rep)
{
    Json ladder = Json::array();
    for (const auto& s : rep.ladder) ladder.push_back({{"R", s.R}, {"N", s.N}});
    Json families = Json::array();
    for (const auto& f : rep.families)
        families.push_back({{"a0", f.a0}, {"a_inf", f.a_inf}, {"b0", f.b0}, {"b_inf", f.b_inf}});
    Json checks = Json::array();
    for (const auto& c : rep.checks) {
        Json grids = Json::array();
        Json metrics = Json::array();
        for (const auto& g : c.grids) {
            grids.push_back({{"R", g.step.R}, {"N", g.step.N}});
            Json m = Json::object();
            for (const auto& v : g.values) m[v.name] = v.value;
            metrics.push_back(std::move(m));
        }
        Json summary = Json::object();
        for (const auto& v : c.summary) summary[v.name] = v.value;
        checks.push_back({{"name", c.name},
                          {"anchor", c.anchor},
                          {"threshold", c.threshold},
                          {"grids", grids},
                          {"metrics", metrics},
                          {"summary", summary},
                          {"notes", c.notes},
                          {"verdict", c.pass ? "pass" : "fail"}});
    }
    return {{"alpha", rep.alpha},
            {"ladder", ladder},
            {"families", families},
            {"checks", checks},
            {"verdict", rep.pass ? "pass" : "fail"}};
}

namespace detail {
inline void require(std::vector<std::string>& errs, bool cond, const std::string& what)
{
    if (!cond) errs.push_back(what);
}

inline bool is_num(const Json& j, const char* key) { return j.contains(key) && j.at(key).is_number(); }
} // namespace detail

/// Structural check of spectral_report.json; returns the list of violations.
inline std::vector<std::string> validate_spectral_report(const Json& j)
{
    using detail::is_num;
    using detail::require;
    std::vector<std::string> errs;
    if (!j.is_object()) return {"document is not an object"};
    require(errs, is_num(j, "alpha"), "alpha: number required");
    require(errs, j.contains("family") && j.at("family").is_object(), "family: object required");
    if (!j.contains("predicted") || !j.at("predicted").is_array()) {
        errs.push_back("predicted: array required");
    } else {
        for (const auto& p : j.at("predicted")) {
            require(errs, p.is_object() && is_num(p, "lo") && is_num(p, "hi"), "predicted[]: lo/hi numbers required");
            require(errs, p.is_object() && p.contains("multiplicity") && p.at("multiplicity").is_number_integer() &&
                              p.at("multiplicity").get<long>() > 0,
                    "predicted[]: positive integer multiplicity required");
            if (is_num(p, "lo") && is_num(p, "hi"))
                require(errs, p.at("lo").get<double>() <= p.at("hi").get<double>(), "predicted[]: lo > hi");
        }
    }
    if (!j.contains("steps") || !j.at("steps").is_array()) {
        errs.push_back("steps: array required");
    } else {
        for (const auto& s : j.at("steps")) {
            require(errs, s.is_object(), "steps[]: object required");
            if (!s.is_object()) continue;
            require(errs, is_num(s, "R"), "steps[]: R number required");
            require(errs, s.contains("N") && s.at("N").is_number_integer(), "steps[]: N integer required");
            require(errs, is_num(s, "max_gap"), "steps[]: max_gap number required");
            require(errs, is_num(s, "hausdorff"), "steps[]: hausdorff number required");
            require(errs, s.contains("hypothesis_ok") && s.at("hypothesis_ok").is_boolean(),
                    "steps[]: hypothesis_ok boolean required");
            bool numbers = s.contains("outliers") && s.at("outliers").is_array();
            if (numbers)
                for (const auto& o : s.at("outliers")) numbers = numbers && o.is_number();
            require(errs, numbers, "steps[]: outliers must be an array of numbers");
        }
    }
    return errs;
}

/// Structural check of verification_report.json.
inline std::vector<std::string> validate_verification_report(const Json& j)
{
    using detail::require;
    std::vector<std::string> errs;
    if (!j.is_object()) return {"document is not an object"};
    auto verdict_ok = [](const Json& v) { return v.is_string() && (v == "pass" || v == "fail"); };
    require(errs, j.contains("verdict") && verdict_ok(j.at("verdict")), "verdict: \"pass\" or \"fail\" required");
    if (!j.contains("checks") || !j.at("checks").is_array()) {
        errs.push_back("checks: array required");
        return errs;
    }
    for (const auto& c : j.at("checks")) {
        require(errs, c.is_object(), "checks[]: object required");
        if (!c.is_object()) continue;
        require(errs, c.contains("name") && c.at("name").is_string(), "checks[]: name string required");
        require(errs, c.contains("anchor") && c.at("anchor").is_string() && !c.at("anchor").get<std::string>().empty(),
                "checks[]: non-empty anchor required");
        require(errs, c.contains("grids") && c.at("grids").is_array(), "checks[]: grids array required");
        require(errs, c.contains("metrics") && c.at("metrics").is_array(), "checks[]: metrics array required");
        if (c.contains("grids") && c.contains("metrics") && c.at("grids").is_array() && c.at("metrics").is_array())
            require(errs, c.at("grids").size() == c.at("metrics").size(), "checks[]: one metrics entry per grid");
        require(errs, c.contains("verdict") && verdict_ok(c.at("verdict")), "checks[]: verdict required");
    }
    return errs;
}

} // namespace whs
