#pragma once
// Verification suite: identity residuals, exact similarities, Hilbert-Schmidt
// and Schatten diagnostics, the trace-class decomposition residual and the
// spectral surrogates, each run along a refinement ladder of grids.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "whs/discretize.hpp"
#include "whs/kernels.hpp"
#include "whs/linalg.hpp"
#include "whs/quadrature.hpp"
#include "whs/specfun.hpp"
#include "whs/spectra.hpp"

namespace whs {

struct LadderStep {
    double R;
    std::size_t N;
    friend bool operator==(const LadderStep&, const LadderStep&) = default;
};

inline std::vector<LadderStep> default_ladder() { return {{6.0, 200}, {8.0, 400}, {10.0, 800}}; }

/// Asymptotic constants (a0, a_inf, b0, b_inf) of a rational test family.
struct Family {
    double a0;
    double a_inf;
    double b0;
    double b_inf;

    [[nodiscard]] std::string label() const
    {
        std::ostringstream os;
        os << "(" << a0 << "," << a_inf << "," << b0 << "," << b_inf << ")";
        return os.str();
    }
    friend bool operator==(const Family&, const Family&) = default;
};

inline std::vector<Family> default_families()
{
    return {{1, 1, 1, 1}, {1, 0, 1, 1}, {0, 1, 1, 1}, {1, -1, 1, 1}, {2, 1, 1, 2}};
}

enum class CheckId { factorisation, persymmetry, kernel_split, hilbert_schmidt, pushforward, schatten, decomposition, spectra };

inline const std::vector<CheckId>& all_checks()
{
    static const std::vector<CheckId> ids{CheckId::factorisation, CheckId::persymmetry,     CheckId::kernel_split,
                                          CheckId::hilbert_schmidt, CheckId::pushforward, CheckId::schatten,
                                          CheckId::decomposition, CheckId::spectra};
    return ids;
}

inline const char* to_string(CheckId id)
{
    switch (id) {
    case CheckId::factorisation: return "factorisation";
    case CheckId::persymmetry: return "persymmetry";
    case CheckId::kernel_split: return "kernel_split";
    case CheckId::hilbert_schmidt: return "hilbert_schmidt";
    case CheckId::pushforward: return "pushforward";
    case CheckId::schatten: return "schatten";
    case CheckId::decomposition: return "decomposition";
    default: return "spectra";
    }
}

inline std::optional<CheckId> parse_check(const std::string& name)
{
    for (CheckId id : all_checks())
        if (name == to_string(id)) return id;
    return std::nullopt;
}

/// The mathematical statement each check mirrors.
inline const char* check_anchor(CheckId id)
{
    switch (id) {
    case CheckId::factorisation: return "A_alpha = L_alpha^2";
    case CheckId::persymmetry: return "U 1_inf A_alpha 1_inf U* = 1_0 A_alpha 1_0 with (Uf)(t) = f(1/t)/t";
    case CheckId::kernel_split:
        return "phi_0 + phi_inf = t^(-1-2alpha); L 1_inf L = w H(phi_0) w and L 1_0 L = w H(phi_inf) w";
    case CheckId::hilbert_schmidt: return "||u L_alpha||_HS^2 = 2^(-1-2alpha) int |u(t)|^2 dt/t";
    case CheckId::pushforward: return "U_+ 1_inf L 1_inf U_+* = H(psi_+) and U_- 1_0 L 1_0 U_-* = H(psi_-)";
    case CheckId::schatten: return "1_0 L 1_0, 1_inf L 1_inf and 1_0 A_alpha 1_inf are trace class";
    case CheckId::decomposition:
        return "w H(a) w = a0 v(1_0 L 1_inf L 1_0)v + a_inf v(1_inf L 1_0 L 1_inf)v + T with T trace class";
    default:
        return "a.c. spectrum [0, pi_alpha a0 b0^2] U [0, pi_alpha a_inf b_inf^2]; blocks carry multiplicity one";
    }
}

struct Metric {
    std::string name;
    double value;
};

struct GridMetrics {
    LadderStep step;
    std::vector<Metric> values;

    [[nodiscard]] std::optional<double> get(const std::string& name) const
    {
        for (const auto& m : values)
            if (m.name == name) return m.value;
        return std::nullopt;
    }
};

struct CheckRecord {
    std::string name;
    std::string anchor;
    std::string threshold;
    std::vector<GridMetrics> grids;
    std::vector<Metric> summary; // ladder-independent values
    std::vector<std::string> notes;
    bool pass = false;
};

struct VerificationReport {
    double alpha = 0.0;
    std::vector<LadderStep> ladder;
    std::vector<Family> families;
    std::vector<CheckRecord> checks;
    bool pass = false;

    [[nodiscard]] const CheckRecord* find(const std::string& name) const
    {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

// ---------------------------------------------------------------------------
// Thresholds
// ---------------------------------------------------------------------------

inline constexpr double factorisation_cap = 1e-2;
inline constexpr double exact_similarity_tol = 1e-11;
inline constexpr double fixed_point_tol = 1e-13;
inline constexpr double split_tol = 1e-11;
inline constexpr double composition_cap = 1e-2;
inline constexpr double hs_rel_tol = 0.02;
inline constexpr double hs_divergence_ratio = 1.3;
inline constexpr double pushforward_eig_tol = 1e-6;
inline constexpr double pushforward_entry_tol = 1e-12;
inline constexpr double schatten_ratio_cap = 1e-6;
inline constexpr double nuclear_growth_cap = 1.10;
inline constexpr long counting_cap = 8;

// ---------------------------------------------------------------------------
// Building blocks, also used directly by the acceptance tests
// ---------------------------------------------------------------------------

/// ||u L_alpha||_HS^2 with u acting on the output variable. Rows live on the
/// grid, the integration variable on grid.widened().
template <class Function>
double hs_norm_squared(Alpha alpha, const Function& u, const GridPtr& grid)
{
    const auto wide = std::make_shared<const Grid>(grid->widened());
    const OperatorMatrix l = assemble_L(alpha, grid, wide);
    double sum = 0.0;
    for (std::size_t i = 0; i < l.rows(); ++i) {
        const double ui = u(grid->nodes()[i]);
        double row = 0.0;
        for (double x : l.entries.row(i)) row += x * x;
        sum += ui * ui * row;
    }
    return sum;
}

/// 2^{-1-2alpha} int |u|^2 dt/t by the grid quadrature.
template <class Function>
double hs_prediction(Alpha alpha, const Function& u, const Grid& grid)
{
    const double c = std::pow(2.0, -1.0 - 2.0 * alpha.value());
    return c * quad_integral([&](double t) { const double x = u(t); return x * x / t; }, grid);
}

/// v(t) = t^{-alpha} w(t) of a rational family.
inline std::function<double(double)> family_multiplier(const Family& f)
{
    return [f](double t) { return (f.b0 + f.b_inf * t) / (1.0 + t); };
}

/// The residual T of the trace-class decomposition of w H(a) w at matrix level.
inline Matrix decomposition_residual(const Matrix& wha, const LCompositions& comp, const Family& f)
{
    const GridPtr& grid = comp.l.row_grid;
    const auto v = family_multiplier(f);
    const auto z = indicator_diagonal(*grid, Side::zero);
    const auto inf = indicator_diagonal(*grid, Side::infinity);
    std::vector<double> vz(grid->size()), vi(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const double vv = v(grid->nodes()[i]);
        vz[i] = vv * z[i];
        vi[i] = vv * inf[i];
    }
    Matrix t = wha;
    t -= f.a0 * scale_cols(scale_rows(comp.l_inf_l.entries, vz), vz);
    t -= f.a_inf * scale_cols(scale_rows(comp.l_zero_l.entries, vi), vi);
    return t;
}

/// Window of the counting comparison, scaled with the top of the spectrum.
inline std::vector<double> counting_window(Alpha alpha)
{
    const double top = pi_alpha(alpha);
    const double pi = std::acos(-1.0);
    std::vector<double> grid;
    for (int k = 0; k <= 25; ++k) grid.push_back(top * (0.3 + 0.1 * k) / pi);
    return grid;
}

namespace detail {

inline bool strictly_decreasing(const std::vector<double>& v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

inline bool non_increasing(const std::vector<double>& v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] <= v[i - 1])) return false;
    return true;
}

inline bool bounded_growth(const std::vector<double>& v, double factor)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] <= factor * v[i - 1])) return false;
    return true;
}

inline bool all_at_most(const std::vector<double>& v, double cap)
{
    return std::all_of(v.begin(), v.end(), [cap](double x) { return x <= cap; });
}

inline double max_abs_eig_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

/// Matrices shared by several checks on one grid, built on first use.
class StepCache {
public:
    StepCache(Alpha alpha, LadderStep step)
        : alpha_(alpha), step_(step), grid_(make_grid(step.R, step.N)), zero_(make_mask(grid_, Side::zero)),
          inf_(make_mask(grid_, Side::infinity))
    {
    }

    [[nodiscard]] const GridPtr& grid() const { return grid_; }
    [[nodiscard]] const ProjectionMask& zero() const { return zero_; }
    [[nodiscard]] const ProjectionMask& inf() const { return inf_; }
    [[nodiscard]] LadderStep step() const { return step_; }

    const OperatorMatrix& A()
    {
        if (!a_) a_ = assemble_A(alpha_, grid_);
        return *a_;
    }
    const std::vector<double>& eig_A()
    {
        if (!eig_a_) eig_a_ = eigenvalues(A().entries);
        return *eig_a_;
    }
    double norm_A()
    {
        const auto& e = eig_A();
        return std::max(std::abs(e.front()), std::abs(e.back()));
    }
    const LCompositions& comp()
    {
        if (!comp_) comp_ = compose_L(alpha_, grid_);
        return *comp_;
    }
    const OperatorMatrix& wha(const Family& f)
    {
        for (auto& [fam, m] : wha_)
            if (fam == f) return m;
        auto [k, w] = rational_test_family(alpha_, f.a0, f.a_inf, f.b0, f.b_inf);
        wha_.emplace_back(f, assemble_wHa(k, w, grid_));
        return wha_.back().second;
    }

private:
    Alpha alpha_;
    LadderStep step_;
    GridPtr grid_;
    ProjectionMask zero_, inf_;
    std::optional<OperatorMatrix> a_;
    std::optional<std::vector<double>> eig_a_;
    std::optional<LCompositions> comp_;
    std::deque<std::pair<Family, OperatorMatrix>> wha_; // stable references
};

struct SuiteContext {
    Alpha alpha;
    std::vector<Family> families;
    std::vector<std::unique_ptr<StepCache>> steps;
};

inline std::vector<double> column(const CheckRecord& rec, const std::string& name)
{
    std::vector<double> out;
    for (const auto& g : rec.grids) out.push_back(g.get(name).value_or(std::numeric_limits<double>::quiet_NaN()));
    return out;
}

inline void check_factorisation(SuiteContext& ctx, CheckRecord& rec)
{
    rec.threshold = "relative operator-norm residual <= 1e-2 at every step and strictly decreasing";
    for (auto& s : ctx.steps) {
        const double na = s->norm_A();
        const double wide = op_norm(s->comp().l_squared.entries - s->A().entries) / na;
        const Matrix& l = s->comp().l.entries;
        const double same = op_norm(l * l - s->A().entries) / na;
        rec.grids.push_back({s->step(), {{"residual", wide}, {"residual_same_grid", same}}});
    }
    const auto r = column(rec, "residual");
    rec.pass = all_at_most(r, factorisation_cap) && strictly_decreasing(r);
}

inline void check_persymmetry(SuiteContext& ctx, CheckRecord& rec)
{
    rec.threshold = "block eigenvalue difference <= 1e-11 ||A||; inversion fixed point <= 1e-13 max|A|";
    bool ok = true;
    for (auto& s : ctx.steps) {
        const auto& a = s->A();
        const auto e0 = eigenvalues(project(a, s->zero(), s->zero()).entries);
        const auto ei = eigenvalues(project(a, s->inf(), s->inf()).entries);
        const double diff = max_abs_eig_diff(e0, ei) / s->norm_A();
        const double fixed = max_abs_diff(inversion_conjugate(a).entries, a.entries) / max_abs(a.entries);
        rec.grids.push_back({s->step(), {{"block_eigen_diff", diff}, {"inversion_fixed_point", fixed}}});
        ok = ok && diff <= exact_similarity_tol && fixed <= fixed_point_tol;
    }
    rec.pass = ok;
}

inline void check_kernel_split(SuiteContext& ctx, CheckRecord& rec)
{
    rec.threshold = "entrywise split <= 1e-11 max|A|; composition residuals <= 1e-2 and strictly decreasing";
    bool split_ok = true;
    for (auto& s : ctx.steps) {
        const auto h0 = assemble_model_hankel(ModelKernel::phi0, ctx.alpha, s->grid());
        const auto hi = assemble_model_hankel(ModelKernel::phi_inf, ctx.alpha, s->grid());
        const double split = max_abs_diff(h0.entries + hi.entries, s->A().entries) / max_abs(s->A().entries);
        const double na = s->norm_A();
        const double c0 = op_norm(h0.entries - s->comp().l_inf_l.entries) / na;
        const double ci = op_norm(hi.entries - s->comp().l_zero_l.entries) / na;
        rec.grids.push_back(
            {s->step(), {{"split_entrywise", split}, {"composition_phi0", c0}, {"composition_phi_inf", ci}}});
        split_ok = split_ok && split <= split_tol;
    }
    const auto c0 = column(rec, "composition_phi0");
    const auto ci = column(rec, "composition_phi_inf");
    rec.pass = split_ok && all_at_most(c0, composition_cap) && all_at_most(ci, composition_cap) &&
               strictly_decreasing(c0) && strictly_decreasing(ci);
}

inline void check_hilbert_schmidt(SuiteContext& ctx, CheckRecord& rec)
{
    rec.threshold = "relative error <= 2% per test function; ||1 L||_HS^2 ratio (2R vs R) >= 1.3";
    const double e = std::exp(1.0);
    const std::vector<std::pair<std::string, std::function<double(double)>>> battery{
        {"indicator_1_e", [e](double t) { return (t >= 1.0 && t <= e) ? 1.0 : 0.0; }},
        {"gaussian_log", [](double t) { const double x = std::log(t); return std::exp(-x * x); }},
        {"t_exp", [](double t) { return t * std::exp(-t); }},
    };
    bool ok = true;
    for (auto& s : ctx.steps) {
        GridMetrics gm{s->step(), {}};
        for (const auto& [name, u] : battery) {
            const double lhs = hs_norm_squared(ctx.alpha, u, s->grid());
            const double rhs = hs_prediction(ctx.alpha, u, *s->grid());
            const double rel = std::abs(lhs / rhs - 1.0);
            gm.values.push_back({name + "_rel_error", rel});
            ok = ok && rel <= hs_rel_tol;
        }
        rec.grids.push_back(std::move(gm));
    }
    // u = 1 is not square integrable against dt/t: the norm must keep growing.
    const LadderStep first = ctx.steps.front()->step();
    const auto one = [](double) { return 1.0; };
    const double small = hs_norm_squared(ctx.alpha, one, make_grid(first.R, first.N));
    const double large = hs_norm_squared(ctx.alpha, one, make_grid(2.0 * first.R, 2 * first.N));
    rec.summary = {{"constant_R", first.R}, {"constant_norm_sq_R", small}, {"constant_norm_sq_2R", large},
                   {"constant_ratio", large / small}};
    rec.pass = ok && large / small >= hs_divergence_ratio;
}

inline void check_pushforward(SuiteContext& ctx, CheckRecord& rec)
{
    rec.threshold = "eigenvalue difference <= 1e-6; conjugated block vs H(psi) entrywise <= 1e-12 max|H|";
    bool ok = true;
    for (auto& s : ctx.steps) {
        GridMetrics gm{s->step(), {}};
        for (Side side : {Side::infinity, Side::zero}) {
            const auto& mask = side == Side::zero ? s->zero() : s->inf();
            const auto block = project(s->comp().l, mask, mask);
            const auto h = log_pushforward_hankel(side, ctx.alpha, s->grid());
            const double eig_diff = max_abs_eig_diff(eigenvalues(block.entries), eigenvalues(h.entries));
            const Matrix u = pushforward_unitary(*s->grid(), side);
            const Matrix conj = u * block.entries * u.transposed();
            const double entry = max_abs_diff(conj, h.entries) / max_abs(h.entries);
            const std::string tag = side == Side::zero ? "minus" : "plus";
            gm.values.push_back({"eigen_diff_" + tag, eig_diff});
            gm.values.push_back({"entrywise_" + tag, entry});
            ok = ok && eig_diff <= pushforward_eig_tol && entry <= pushforward_entry_tol;
        }
        rec.grids.push_back(std::move(gm));
    }
    rec.pass = ok;
}

inline void check_schatten(SuiteContext& ctx, CheckRecord& rec)
{
    rec.threshold = "L blocks super_polynomial; sigma_10/sigma_1 < 1e-6 for 1_0 L 1_0; cross block of A: nuclear "
                    "growth <= 10%";
    bool ok = true;
    for (auto& s : ctx.steps) {
        GridMetrics gm{s->step(), {}};
        for (Side side : {Side::zero, Side::infinity}) {
            const auto& mask = side == Side::zero ? s->zero() : s->inf();
            const auto sv = singular_values(project(s->comp().l, mask, mask).entries);
            const auto diag = schatten_diagnostic(sv, 1e-9);
            const double ratio = sv.size() >= 10 && sv[0] > 0.0 ? sv[9] / sv[0] : 1.0;
            const std::string tag = side == Side::zero ? "L00" : "Lii";
            gm.values.push_back({tag + "_sigma10_over_sigma1", ratio});
            gm.values.push_back({tag + "_super_polynomial", diag.verdict == SchattenVerdict::super_polynomial ? 1.0 : 0.0});
            gm.values.push_back({tag + "_p_fit", diag.p_fit});
            ok = ok && diag.verdict == SchattenVerdict::super_polynomial;
            if (side == Side::zero) ok = ok && ratio < schatten_ratio_cap;
        }
        const auto cross = singular_values(project(s->A(), s->zero(), s->inf()).entries);
        double nuc = 0.0;
        for (double x : cross) nuc += x;
        gm.values.push_back({"A0i_nuclear", nuc});
        gm.values.push_back({"A0i_p_fit", schatten_diagnostic(cross, 1e-9).p_fit});
        rec.grids.push_back(std::move(gm));
    }
    rec.pass = ok && bounded_growth(column(rec, "A0i_nuclear"), nuclear_growth_cap);
}

inline void check_decomposition(SuiteContext& ctx, CheckRecord& rec)
{
    rec.threshold = "nuclear norm of T grows by at most 10% per ladder step, for every family";
    for (auto& s : ctx.steps) {
        GridMetrics gm{s->step(), {}};
        for (const auto& f : ctx.families) {
            const Matrix t = decomposition_residual(s->wha(f).entries, s->comp(), f);
            gm.values.push_back({"nuclear" + f.label(), nuclear_norm(t)});
        }
        rec.grids.push_back(std::move(gm));
    }
    bool ok = true;
    for (const auto& f : ctx.families) ok = ok && bounded_growth(column(rec, "nuclear" + f.label()), nuclear_growth_cap);
    rec.pass = ok;
}

/// Returns the outlier count.
inline std::size_t add_analysis(GridMetrics& gm, const std::string& tag, const std::vector<double>& eigs,
                                const PredictedSpectrum& pred)
{
    const auto rep = analyze(eigs, pred, default_delta(pred), default_interior_margin(pred));
    gm.values.push_back({tag + "_outliers", static_cast<double>(rep.outliers.size())});
    gm.values.push_back({tag + "_max_gap", rep.fill_max_gap});
    gm.values.push_back({tag + "_hausdorff", rep.hausdorff});
    gm.values.push_back({tag + "_eig_min", rep.eigenvalues.front()});
    gm.values.push_back({tag + "_eig_max", rep.eigenvalues.back()});
    return rep.outliers.size();
}

inline void check_spectra(SuiteContext& ctx, CheckRecord& rec)
{
    rec.threshold = "zero delta-outliers for A_alpha and its blocks; outlier count non-increasing for weighted "
                    "operators; A_alpha Hausdorff non-increasing; counting discrepancy <= 8";
    rec.notes.push_back("fill gaps and counting for block and family operators are surrogate evidence only");
    const auto model = predict(ctx.alpha, 1, 1, 1, 1);
    const auto half = predict(ctx.alpha, 1, 0, 1, 0);
    const auto window = counting_window(ctx.alpha);
    std::size_t model_outliers = 0;
    std::vector<std::string> weighted_tags;
    long counting = 0;
    for (auto& s : ctx.steps) {
        GridMetrics gm{s->step(), {}};
        model_outliers += add_analysis(gm, "A", s->eig_A(), model);

        const auto& a = s->A();
        const auto c = counting_compare(s->eig_A(), eigenvalues(project(a, s->zero(), s->zero()).entries),
                                        eigenvalues(project(a, s->inf(), s->inf()).entries), window);
        gm.values.push_back({"A_counting_sup_discrepancy", static_cast<double>(c.sup_discrepancy)});
        counting = std::max(counting, c.sup_discrepancy);

        const auto& comp = s->comp();
        const auto b0 = project(comp.l_inf_l, s->zero(), s->zero());
        const auto bi = project(comp.l_zero_l, s->inf(), s->inf());
        model_outliers += add_analysis(gm, "block_0", eigenvalues(b0.entries), half);
        model_outliers += add_analysis(gm, "block_inf", eigenvalues(bi.entries), half);

        for (const auto& f : ctx.families) {
            const std::string tag = f.label();
            const auto v = family_multiplier(f);
            const auto pred0 = predict(ctx.alpha, 1, 0, f.b0, 0);
            const auto predi = predict(ctx.alpha, 0, 1, 0, f.b_inf);
            const auto pred = predict(ctx.alpha, f.a0, f.a_inf, f.b0, f.b_inf);
            if (!pred0.intervals.empty())
                add_analysis(gm, "vblock_0" + tag, eigenvalues(multiply_both_sides(b0, v).entries), pred0);
            if (!predi.intervals.empty())
                add_analysis(gm, "vblock_inf" + tag, eigenvalues(multiply_both_sides(bi, v).entries), predi);
            if (!pred.intervals.empty()) add_analysis(gm, "wHa" + tag, eigenvalues(s->wha(f).entries), pred);
            if (s == ctx.steps.front())
                for (const char* op : {"vblock_0", "vblock_inf", "wHa"})
                    if (gm.get(op + tag + "_outliers")) weighted_tags.push_back(op + tag);
        }
        rec.grids.push_back(std::move(gm));
    }
    // Weighted operators may carry finitely many eigenvalues outside their
    // a.c. interval; only their number has to stay put under refinement.
    bool weighted_ok = true;
    double weighted_outliers = 0.0;
    for (const auto& tag : weighted_tags) {
        const auto col = column(rec, tag + "_outliers");
        weighted_ok = weighted_ok && non_increasing(col);
        weighted_outliers = std::max(weighted_outliers, col.back());
    }
    rec.summary = {{"model_outliers", static_cast<double>(model_outliers)},
                   {"weighted_outliers_final", weighted_outliers},
                   {"max_counting_discrepancy", static_cast<double>(counting)}};
    rec.pass = model_outliers == 0 && weighted_ok && non_increasing(column(rec, "A_hausdorff")) &&
               counting <= counting_cap;
}

} // namespace detail

inline void validate_ladder(const std::vector<LadderStep>& ladder)
{
    if (ladder.empty()) throw std::invalid_argument("ladder must not be empty");
    for (const auto& s : ladder) Grid(s.R, s.N); // throws on invalid steps
    for (std::size_t i = 1; i < ladder.size(); ++i)
        if (!(ladder[i].R >= ladder[i - 1].R && ladder[i].N > ladder[i - 1].N))
            throw std::invalid_argument("ladder must increase: N strictly, R non-decreasing");
}

/// Runs the selected checks along the ladder. A check that throws is
/// recorded as failed with the error text; the remaining checks still run.
inline VerificationReport run_suite(Alpha alpha, const std::vector<LadderStep>& ladder,
                                    const std::vector<CheckId>& checks,
                                    const std::vector<Family>& families = default_families())
{
    validate_ladder(ladder);
    detail::SuiteContext ctx{alpha, families, {}};
    for (const auto& s : ladder) ctx.steps.push_back(std::make_unique<detail::StepCache>(alpha, s));

    VerificationReport rep;
    rep.alpha = alpha.value();
    rep.ladder = ladder;
    rep.families = families;
    rep.pass = true;
    for (CheckId id : all_checks()) {
        if (std::find(checks.begin(), checks.end(), id) == checks.end()) continue;
        CheckRecord rec;
        rec.name = to_string(id);
        rec.anchor = check_anchor(id);
        try {
            switch (id) {
            case CheckId::factorisation: detail::check_factorisation(ctx, rec); break;
            case CheckId::persymmetry: detail::check_persymmetry(ctx, rec); break;
            case CheckId::kernel_split: detail::check_kernel_split(ctx, rec); break;
            case CheckId::hilbert_schmidt: detail::check_hilbert_schmidt(ctx, rec); break;
            case CheckId::pushforward: detail::check_pushforward(ctx, rec); break;
            case CheckId::schatten: detail::check_schatten(ctx, rec); break;
            case CheckId::decomposition: detail::check_decomposition(ctx, rec); break;
            case CheckId::spectra: detail::check_spectra(ctx, rec); break;
            }
        } catch (const std::exception& e) {
            rec.pass = false;
            rec.notes.push_back(std::string("error: ") + e.what());
        }
        rep.pass = rep.pass && rec.pass;
        rep.checks.push_back(std::move(rec));
    }
    return rep;
}

} // namespace whs
