#pragma once
// Predicted absolutely continuous spectra and the desk-scale surrogates used to
// compare them with eigenvalues of truncated discretisations: interval fill,
// delta-outliers, one-sided Hausdorff distance, counting functions and
// singular-value decay diagnostics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "whs/specfun.hpp"

namespace whs {

enum class IntervalOrigin { zero_end, infinity_end, both };

inline const char* to_string(IntervalOrigin o)
{
    switch (o) {
    case IntervalOrigin::zero_end: return "zero_end";
    case IntervalOrigin::infinity_end: return "infinity_end";
    default: return "both";
    }
}

struct PredictedInterval {
    double lo;
    double hi;
    int multiplicity;
    IntervalOrigin origin;
};

/// Union of intervals [0, c] (or [c, 0] for c < 0), one per end of the
/// half-line. Degenerate intervals are dropped; coinciding ones merge with
/// multiplicity two.
struct PredictedSpectrum {
    std::vector<PredictedInterval> intervals;

    [[nodiscard]] double max_endpoint_magnitude() const noexcept
    {
        double m = 0.0;
        for (const auto& iv : intervals) m = std::max({m, std::abs(iv.lo), std::abs(iv.hi)});
        return m;
    }

    [[nodiscard]] double distance(double lambda) const noexcept
    {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& iv : intervals) d = std::min(d, std::max({iv.lo - lambda, 0.0, lambda - iv.hi}));
        return d;
    }

    /// Number of intervals (with multiplicity) containing lambda.
    [[nodiscard]] int multiplicity_at(double lambda) const noexcept
    {
        int m = 0;
        for (const auto& iv : intervals)
            if (iv.lo <= lambda && lambda <= iv.hi) m += iv.multiplicity;
        return m;
    }
};

inline PredictedSpectrum predict(Alpha alpha, double a0, double a_inf, double b0, double b_inf)
{
    const double pa = pi_alpha(alpha);
    const double c0 = pa * a0 * b0 * b0;
    const double ci = pa * a_inf * b_inf * b_inf;
    PredictedSpectrum p;
    auto interval = [](double c, IntervalOrigin o) { return PredictedInterval{std::min(0.0, c), std::max(0.0, c), 1, o}; };
    if (c0 != 0.0 && c0 == ci) {
        p.intervals.push_back(interval(c0, IntervalOrigin::both));
        p.intervals.back().multiplicity = 2;
        return p;
    }
    if (c0 != 0.0) p.intervals.push_back(interval(c0, IntervalOrigin::zero_end));
    if (ci != 0.0) p.intervals.push_back(interval(ci, IntervalOrigin::infinity_end));
    return p;
}

struct CountingRow {
    double lambda;
    std::size_t count;  // eigenvalues beyond lambda, away from 0
    int predicted_multiplicity;
};

struct SpectralReport {
    std::vector<double> eigenvalues; // ascending
    PredictedSpectrum predicted;
    double delta = 0.0;
    double interior_margin = 0.0;
    double fill_max_gap = 0.0;
    std::vector<double> outliers;
    double hausdorff = 0.0;
    std::vector<CountingRow> counting_table;
};

/// Default tolerances: delta = 0.05, margin = 0.1 of the largest predicted endpoint magnitude.
inline double default_delta(const PredictedSpectrum& p) { return 0.05 * p.max_endpoint_magnitude(); }
inline double default_interior_margin(const PredictedSpectrum& p) { return 0.1 * p.max_endpoint_magnitude(); }

/// #{lambda_k > lambda} for lambda >= 0 and #{lambda_k < lambda} for lambda < 0.
inline std::size_t count_beyond(const std::vector<double>& sorted, double lambda)
{
    if (lambda >= 0.0)
        return static_cast<std::size_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), lambda));
    return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), lambda) - sorted.begin());
}

namespace detail {
inline double distance_to_set(const std::vector<double>& sorted, double x)
{
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
    double d = std::numeric_limits<double>::infinity();
    if (it != sorted.end()) d = std::min(d, *it - x);
    if (it != sorted.begin()) d = std::min(d, x - *(it - 1));
    return d;
}
} // namespace detail

/// Compare eigenvalues with a predicted spectrum.
///  * fill_max_gap: largest gap between consecutive eigenvalues inside each
///    interval shrunk by interior_margin at both ends (the shrunk width if
///    fewer than two eigenvalues fall inside);
///  * outliers: eigenvalues further than delta from the prediction;
///  * hausdorff: sup over the shrunk intervals of the distance to the nearest eigenvalue.
inline SpectralReport analyze(std::vector<double> eigs, const PredictedSpectrum& predicted, double delta,
                              double interior_margin)
{
    if (eigs.empty()) throw std::invalid_argument("analyze: empty eigenvalue list");
    if (!(delta > 0.0) || !(interior_margin > 0.0))
        throw std::invalid_argument("analyze: delta and interior margin must be positive");
    std::sort(eigs.begin(), eigs.end());

    SpectralReport rep;
    rep.predicted = predicted;
    rep.delta = delta;
    rep.interior_margin = interior_margin;

    for (double e : eigs)
        if (predicted.distance(e) > delta) rep.outliers.push_back(e);

    for (const auto& iv : predicted.intervals) {
        const double lo = iv.lo + interior_margin;
        const double hi = iv.hi - interior_margin;
        if (!(lo < hi)) continue;
        const auto first = std::lower_bound(eigs.begin(), eigs.end(), lo);
        const auto last = std::upper_bound(eigs.begin(), eigs.end(), hi);
        double gap = 0.0;
        if (last - first < 2) {
            gap = hi - lo;
        } else {
            for (auto it = first + 1; it != last; ++it) gap = std::max(gap, *it - *(it - 1));
        }
        rep.fill_max_gap = std::max(rep.fill_max_gap, gap);

        // The distance to the eigenvalue set is piecewise linear on [lo, hi];
        // its maximum sits at an endpoint or at a midpoint between neighbours.
        double h = std::max(detail::distance_to_set(eigs, lo), detail::distance_to_set(eigs, hi));
        for (auto it = first; it != last && it + 1 != eigs.end(); ++it) {
            const double mid = 0.5 * (*it + *(it + 1));
            if (mid >= lo && mid <= hi) h = std::max(h, detail::distance_to_set(eigs, mid));
        }
        if (first != eigs.begin() && first != eigs.end()) {
            const double mid = 0.5 * (*(first - 1) + *first);
            if (mid >= lo && mid <= hi) h = std::max(h, detail::distance_to_set(eigs, mid));
        }
        rep.hausdorff = std::max(rep.hausdorff, h);
    }

    const double top = predicted.max_endpoint_magnitude();
    if (top > 0.0) {
        for (int k = -20; k <= 20; ++k) {
            if (k == 0) continue;
            const double lambda = top * k / 20.0;
            rep.counting_table.push_back({lambda, count_beyond(eigs, lambda), predicted.multiplicity_at(lambda)});
        }
    }
    rep.eigenvalues = std::move(eigs);
    return rep;
}

struct CountingComparisonRow {
    double lambda;
    std::size_t full;
    std::size_t block_zero;
    std::size_t block_inf;
    long discrepancy; // full - (block_zero + block_inf)
};

struct CountingComparison {
    std::vector<CountingComparisonRow> rows;
    long sup_discrepancy = 0;
};

/// Counting functions of an operator and of its two diagonal blocks.
inline CountingComparison counting_compare(std::vector<double> full, std::vector<double> block_zero,
                                           std::vector<double> block_inf, const std::vector<double>& lambda_grid)
{
    std::sort(full.begin(), full.end());
    std::sort(block_zero.begin(), block_zero.end());
    std::sort(block_inf.begin(), block_inf.end());
    CountingComparison out;
    for (double lambda : lambda_grid) {
        CountingComparisonRow r{lambda, count_beyond(full, lambda), count_beyond(block_zero, lambda),
                                count_beyond(block_inf, lambda), 0};
        r.discrepancy = static_cast<long>(r.full) - static_cast<long>(r.block_zero + r.block_inf);
        out.sup_discrepancy = std::max(out.sup_discrepancy, std::abs(r.discrepancy));
        out.rows.push_back(r);
    }
    return out;
}

enum class SchattenVerdict { super_polynomial, polynomial, non_summable_suspect, insufficient_data };

inline const char* to_string(SchattenVerdict v)
{
    switch (v) {
    case SchattenVerdict::super_polynomial: return "super_polynomial";
    case SchattenVerdict::polynomial: return "polynomial";
    case SchattenVerdict::non_summable_suspect: return "non_summable_suspect";
    default: return "insufficient_data";
    }
}

struct SchattenDiagnostic {
    double p_fit = 0.0;      // slope of ln sigma_k against ln k
    double slope_head = 0.0; // same slope over the first half of the samples
    double slope_tail = 0.0; // and over the second half
    std::size_t used = 0;    // values above the floor
    std::vector<double> nuclear_partial;
    SchattenVerdict verdict = SchattenVerdict::insufficient_data;
};

namespace detail {
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y, std::size_t from, std::size_t to)
{
    const double n = static_cast<double>(to - from);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = from; i < to; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = from; i < to; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}
} // namespace detail

/// Decay of a descending singular value sequence. Only values above
/// relative_floor * sigma_1 are fitted. Decision rule: fewer than 5 usable
/// values -> insufficient_data; head and tail slopes differing by more than 1
/// (concave log-log profile) -> super_polynomial; p_fit >= -1 ->
/// non_summable_suspect; otherwise polynomial.
inline SchattenDiagnostic schatten_diagnostic(const std::vector<double>& sigma, double relative_floor)
{
    if (!std::is_sorted(sigma.begin(), sigma.end(), std::greater<>()))
        throw std::invalid_argument("schatten_diagnostic: singular values must be descending");
    SchattenDiagnostic d;
    double running = 0.0;
    for (double s : sigma) {
        running += s;
        d.nuclear_partial.push_back(running);
    }
    if (sigma.empty() || !(sigma.front() > 0.0)) return d;
    const double cutoff = relative_floor * sigma.front();
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < sigma.size() && sigma[k] > cutoff; ++k) {
        lx.push_back(std::log(static_cast<double>(k + 1)));
        ly.push_back(std::log(sigma[k]));
    }
    d.used = lx.size();
    if (d.used < 5) return d;
    d.p_fit = detail::ls_slope(lx, ly, 0, d.used);
    const std::size_t mid = d.used / 2;
    d.slope_head = detail::ls_slope(lx, ly, 0, mid + 1);
    d.slope_tail = detail::ls_slope(lx, ly, mid, d.used);
    if (std::abs(d.slope_head - d.slope_tail) > 1.0)
        d.verdict = SchattenVerdict::super_polynomial;
    else if (d.p_fit >= -1.0)
        d.verdict = SchattenVerdict::non_summable_suspect;
    else
        d.verdict = SchattenVerdict::polynomial;
    return d;
}

} // namespace whs
