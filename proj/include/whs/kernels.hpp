#pragma once
// Kernel and weight specifications for weighted Hankel operators
// (w H(a) w)(t) = int w(t) a(t+s) w(s) f(s) ds, the built-in kernels of the
// power-weighted operator A_alpha and its square root L_alpha, and a numerical
// checker for the asymptotic hypotheses on (a, w).

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "whs/specfun.hpp"

namespace whs {

/// Real kernel a(t) with t^{1+2alpha} a(t) -> a0 (t -> 0) and -> a_inf (t -> inf).
struct KernelSpec {
    Alpha alpha;
    std::function<double(double)> eval;
    double a0 = 0.0;
    double a_inf = 0.0;
    double epsilon = 1.0; // regularity margin of the asymptotics
    std::string name;
};

/// Real weight w(t) with t^{-alpha} w(t) -> b0 (t -> 0) and -> b_inf (t -> inf).
/// Complex weights are not supported; only |b|^2 enters the predictions.
struct WeightSpec {
    Alpha alpha;
    std::function<double(double)> eval;
    double b0 = 0.0;
    double b_inf = 0.0;
    std::string name;
};

/// s^a t^a (s+t)^{-1-2a}; the Carleman kernel 1/(s+t) at a = 0.
struct PowerHankelKernel {
    double a;
    double operator()(double s, double t) const { return std::pow(s * t, a) * std::pow(s + t, -1.0 - 2.0 * a); }
};

/// t^a s^a e^{-st} / sqrt(Gamma(1+2a)); its operator squares to A_alpha.
struct LaplaceKernel {
    double a;
    double norm;
    double operator()(double s, double t) const { return norm * std::pow(s * t, a) * std::exp(-s * t); }
};

inline PowerHankelKernel kernel_A(Alpha alpha) { return {alpha.value()}; }

inline LaplaceKernel kernel_L(Alpha alpha)
{
    return {alpha.value(), std::exp(-0.5 * ln_gamma(1.0 + 2.0 * alpha.value()))};
}

/// w(t) a(t+s) w(s); symmetric because w is real.
struct WeightedHankelKernel {
    std::function<double(double)> a;
    std::function<double(double)> w;
    double operator()(double s, double t) const { return w(t) * a(t + s) * w(s); }
};

inline WeightedHankelKernel weighted_hankel_kernel(const KernelSpec& a, const WeightSpec& w)
{
    if (!(a.alpha == w.alpha)) throw std::invalid_argument("weighted_hankel_kernel: kernel and weight alpha differ");
    return {a.eval, w.eval};
}

inline KernelSpec power_kernel(Alpha alpha)
{
    const double p = -1.0 - 2.0 * alpha.value();
    return {alpha, [p](double t) { return std::pow(t, p); }, 1.0, 1.0, 1.0, "power"};
}

/// a(t) = 1/t; satisfies the hypotheses only for alpha = 0.
inline KernelSpec carleman_kernel()
{
    return {Alpha{0.0}, [](double t) { return 1.0 / t; }, 1.0, 1.0, 1.0, "carleman"};
}

inline WeightSpec power_weight(Alpha alpha)
{
    const double a = alpha.value();
    return {alpha, [a](double t) { return std::pow(t, a); }, 1.0, 1.0, "power"};
}

/// Concrete family satisfying the hypotheses with epsilon = 1:
///   a(t) = (a0 + a_inf t) / ((1+t) t^{1+2alpha}),  w(t) = t^alpha (b0 + b_inf t) / (1+t).
/// (1,1,1,1) reproduces A_alpha exactly.
inline std::pair<KernelSpec, WeightSpec> rational_test_family(Alpha alpha, double a0, double a_inf, double b0,
                                                              double b_inf)
{
    const double p = -1.0 - 2.0 * alpha.value();
    const double q = alpha.value();
    KernelSpec kernel{alpha,
                      [=](double t) { return (a0 + a_inf * t) / (1.0 + t) * std::pow(t, p); },
                      a0,
                      a_inf,
                      1.0,
                      "rational"};
    WeightSpec weight{alpha, [=](double t) { return std::pow(t, q) * ((b0 + b_inf * t) / (1.0 + t)); }, b0, b_inf,
                      "rational"};
    return {std::move(kernel), std::move(weight)};
}

// ---------------------------------------------------------------------------
// Hypothesis checker
// ---------------------------------------------------------------------------

enum class End { zero, infinity };

inline const char* to_string(End e) { return e == End::zero ? "zero" : "infinity"; }

/// Samples of t^m |d^m/dt^m (t^{1+2alpha} a(t) - a_end)| t^{-/+ epsilon} at
/// t = 2^{-k} (zero end) or 2^{k} (infinity end).
struct DerivativeCheck {
    End end;
    int order;
    std::vector<double> t;
    std::vector<double> values;
    std::vector<bool> resolved; // false where the difference quotient sits at round-off level
    double growth_ratio = 0.0; // max over the outer half of the samples / max over the inner half
    bool bounded = false;
};

/// int |t^{-2alpha} w(t)^2 - b^2| dt / t over nested truncations.
struct WeightIntegralCheck {
    End end;
    std::vector<int> truncation_k; // integration range (2^{-k}, 1) or (1, 2^{k})
    std::vector<double> values;
    bool cauchy = false;
};

struct HypothesisReport {
    std::vector<DerivativeCheck> derivatives;
    std::vector<WeightIntegralCheck> weight_integrals;
    double limit_estimate_zero = 0.0; // t^{1+2alpha} a(t) at the smallest sample
    double limit_estimate_inf = 0.0;
    double weight_sup = 0.0; // sup of |t^{-alpha} w(t)| on the samples
    bool weight_bounded = false;
    std::vector<std::string> failures; // sample points where evaluation failed
    bool kernel_zero_ok = false;       // decay condition at t -> 0
    bool kernel_inf_ok = false;        // decay condition at t -> inf
    bool weight_ok = false;
    bool ok = false;
};

namespace detail {

inline constexpr int hypothesis_k_min = 5;
inline constexpr int hypothesis_k_max = 30;
inline constexpr double log_fd_step = 1e-2;
inline constexpr double bounded_ratio = 10.0;

/// Samples run from the interior towards the end; unresolved ones count as 0.
/// Bounded means the outer half never exceeds bounded_ratio times the inner half.
inline bool bounded_samples(DerivativeCheck& c)
{
    const std::size_t n = c.values.size();
    double inner = 0.0, outer = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = c.resolved[i] ? c.values[i] : 0.0;
        (2 * i < n ? inner : outer) = std::max(2 * i < n ? inner : outer, v);
    }
    if (outer == 0.0) {
        c.growth_ratio = 0.0;
        return true;
    }
    c.growth_ratio = inner > 0.0 ? outer / inner : INFINITY;
    return c.growth_ratio <= bounded_ratio;
}

} // namespace detail

/// Numerical check of the hypotheses on (a, w): bounded scaled derivatives
/// (m = 0, 1, 2) of t^{1+2alpha} a(t) - a_{0/inf} at both ends, boundedness of
/// t^{-alpha} w, and convergence of the two weight integrals. Derivatives are
/// central differences in x = ln t (step 1e-2); "bounded" means the samples
/// nearest the end are at most 10 times the inner ones.
inline HypothesisReport hypothesis_check(const KernelSpec& a, const WeightSpec& w)
{
    HypothesisReport rep;
    const double alpha = a.alpha.value();
    const double pw = 1.0 + 2.0 * alpha;
    const double eps_mach = 2.220446049250313e-16;
    const double h = detail::log_fd_step;

    auto record_failure = [&](const std::string& what, double t) {
        rep.failures.push_back(what + " at t=" + std::to_string(t));
    };

    // Scaled kernel t^{1+2alpha} a(t) as a function of x = ln t.
    auto scaled = [&](double x) { return std::exp(pw * x) * a.eval(std::exp(x)); };

    for (End end : {End::zero, End::infinity}) {
        const double target = end == End::zero ? a.a0 : a.a_inf;
        const double sign = end == End::zero ? -1.0 : 1.0;
        for (int order = 0; order <= 2; ++order) {
            DerivativeCheck c{end, order, {}, {}, {}, 0.0, false};
            for (int k = detail::hypothesis_k_min; k <= detail::hypothesis_k_max; ++k) {
                const double x = sign * k * std::log(2.0);
                const double t = std::exp(x);
                const double fm = scaled(x - h), f0 = scaled(x), fp = scaled(x + h);
                if (!std::isfinite(fm) || !std::isfinite(f0) || !std::isfinite(fp)) {
                    record_failure("kernel evaluation failed", t);
                    continue;
                }
                // exp/pow lose about |x| ulps of relative accuracy at x = ln t
                const double magnitude = (std::abs(f0) + std::abs(target) + 1.0) * (1.0 + pw * std::abs(x));
                double value = 0.0, noise = 0.0;
                const double d1 = (fp - fm) / (2.0 * h);
                const double d2 = (fp - 2.0 * f0 + fm) / (h * h);
                switch (order) {
                case 0:
                    value = std::abs(f0 - target);
                    noise = 4.0 * eps_mach * magnitude;
                    break;
                case 1:
                    value = std::abs(d1); // = t |f'(t)|
                    noise = 4.0 * eps_mach * magnitude / h;
                    break;
                default:
                    value = std::abs(d2 - d1); // = t^2 |f''(t)|
                    noise = 8.0 * eps_mach * magnitude / (h * h);
                    break;
                }
                // t^{-eps} near zero, t^{+eps} near infinity.
                const double weight = std::exp(sign * a.epsilon * x);
                c.t.push_back(t);
                c.values.push_back(value * weight);
                c.resolved.push_back(value > noise);
            }
            c.bounded = !c.values.empty() && detail::bounded_samples(c);
            rep.derivatives.push_back(std::move(c));
        }
    }
    rep.limit_estimate_zero = scaled(-detail::hypothesis_k_max * std::log(2.0));
    rep.limit_estimate_inf = scaled(detail::hypothesis_k_max * std::log(2.0));

    auto all_bounded = [&](End end) {
        return std::all_of(rep.derivatives.begin(), rep.derivatives.end(),
                           [&](const DerivativeCheck& c) { return c.end != end || c.bounded; });
    };
    rep.kernel_zero_ok = all_bounded(End::zero);
    rep.kernel_inf_ok = all_bounded(End::infinity);

    // Weight: v(t) = t^{-alpha} w(t).
    auto v_of_x = [&](double x) { return std::exp(-alpha * x) * w.eval(std::exp(x)); };
    rep.weight_sup = 0.0;
    bool weight_finite = true;
    for (int k = -detail::hypothesis_k_max; k <= detail::hypothesis_k_max; ++k) {
        const double v = v_of_x(k * std::log(2.0));
        if (!std::isfinite(v)) {
            record_failure("weight evaluation failed", std::exp(k * std::log(2.0)));
            weight_finite = false;
            continue;
        }
        rep.weight_sup = std::max(rep.weight_sup, std::abs(v));
    }
    rep.weight_bounded = weight_finite;

    constexpr double dx = 1e-2;
    for (End end : {End::zero, End::infinity}) {
        const double b = end == End::zero ? w.b0 : w.b_inf;
        const double sign = end == End::zero ? -1.0 : 1.0;
        WeightIntegralCheck c{end, {10, 20, 30}, {}, false};
        for (int k : c.truncation_k) {
            const double length = k * std::log(2.0);
            const auto cells = static_cast<long>(std::ceil(length / dx));
            const double step = length / static_cast<double>(cells);
            double sum = 0.0;
            for (long i = 0; i < cells; ++i) {
                const double x = sign * (static_cast<double>(i) + 0.5) * step;
                const double v = v_of_x(x);
                if (!std::isfinite(v)) {
                    sum = NAN;
                    break;
                }
                sum += std::abs(v * v - b * b) * step;
            }
            c.values.push_back(sum);
        }
        const double d1 = c.values[1] - c.values[0];
        const double d2 = c.values[2] - c.values[1];
        const double scale = std::max(1.0, c.values[2]);
        c.cauchy = std::isfinite(c.values[2]) && d2 <= 1e-3 * scale && (d2 <= d1 || d1 <= 1e-12 * scale);
        rep.weight_integrals.push_back(std::move(c));
    }
    rep.weight_ok = rep.weight_bounded && rep.weight_integrals[0].cauchy && rep.weight_integrals[1].cauchy;
    rep.ok = rep.kernel_zero_ok && rep.kernel_inf_ok && rep.weight_ok && a.alpha == w.alpha;
    return rep;
}

} // namespace whs
