#pragma once
// Special functions for weighted Hankel operators: log-Gamma on the positive
// axis and on vertical lines, regularised incomplete Gamma, the Mellin symbol
// of the power-weighted operator and the model kernels phi_0, phi_inf, psi_+-.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace whs {

/// Weight exponent of the operator family; every construction needs alpha > -1/2.
class Alpha {
public:
    explicit Alpha(double value) : value_(value)
    {
        if (!(value > -0.5) || !std::isfinite(value))
            throw std::domain_error("alpha must be a finite number > -1/2, got " + std::to_string(value));
    }
    [[nodiscard]] double value() const noexcept { return value_; }
    friend bool operator==(Alpha, Alpha) = default;

private:
    double value_;
};

/// Numerical quadrature did not reach its target accuracy.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double estimate)
        : std::runtime_error(what + " (error estimate " + std::to_string(estimate) + ")"), estimate_(estimate) {}
    [[nodiscard]] double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

/// Series or continued fraction exceeded its iteration cap.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double reached)
        : std::runtime_error(what + " (reached " + std::to_string(reached) + ")"), reached_(reached) {}
    [[nodiscard]] double reached() const noexcept { return reached_; }

private:
    double reached_;
};

namespace detail {

// Lanczos approximation, g = 7, n = 9.
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_coef{
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// log Gamma(z) for Re z >= 1/2 (principal branch irrelevant: callers use the real part).
inline std::complex<double> lanczos_log_gamma(std::complex<double> z)
{
    z -= 1.0;
    std::complex<double> sum = lanczos_coef[0];
    for (std::size_t i = 1; i < lanczos_coef.size(); ++i)
        sum += lanczos_coef[i] / (z + static_cast<double>(i));
    const std::complex<double> t = z + lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

inline double lanczos_log_gamma(double x)
{
    x -= 1.0;
    double sum = lanczos_coef[0];
    for (std::size_t i = 1; i < lanczos_coef.size(); ++i)
        sum += lanczos_coef[i] / (x + static_cast<double>(i));
    const double t = x + lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(sum);
}

inline constexpr int incgamma_max_iter = 500;
inline constexpr double incgamma_rel_tol = 1e-14;

// P(s,t) by its power series; valid (and used) for t < s + 1.
inline double incgamma_series(double s, double t, double log_gamma_s)
{
    double ap = s;
    double del = 1.0 / s;
    double sum = del;
    for (int n = 0; n < incgamma_max_iter; ++n) {
        ap += 1.0;
        del *= t / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * incgamma_rel_tol)
            return sum * std::exp(-t + s * std::log(t) - log_gamma_s);
    }
    throw ConvergenceError("incomplete gamma series did not converge", std::abs(del / sum));
}

// Q(s,t) by the modified Lentz continued fraction; used for t >= s + 1.
inline double incgamma_continued_fraction(double s, double t, double log_gamma_s)
{
    constexpr double tiny = 1e-300;
    double b = t + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= incgamma_max_iter; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < incgamma_rel_tol)
            return std::exp(-t + s * std::log(t) - log_gamma_s) * h;
    }
    throw ConvergenceError("incomplete gamma continued fraction did not converge", h);
}

inline void require_incgamma_domain(double s, double t)
{
    if (!(s > 0.0)) throw std::domain_error("incomplete gamma: s must be > 0");
    if (!(t >= 0.0)) throw std::domain_error("incomplete gamma: t must be >= 0");
}

} // namespace detail

/// ln Gamma(x) for x > 0. Absolute error below 1e-12 on [0.05, 200].
inline double ln_gamma(double x)
{
    if (!(x > 0.0)) throw std::domain_error("ln_gamma: argument must be > 0");
    if (x < 0.5) return detail::lanczos_log_gamma(x + 1.0) - std::log(x);
    return detail::lanczos_log_gamma(x);
}

/// ln|Gamma(1/2 + alpha + i xi)|, evaluated through complex log-Gamma.
inline double ln_gamma_abs_on_line(Alpha alpha, double xi)
{
    // Evaluated at |xi| so evenness holds bit for bit.
    std::complex<double> z{0.5 + alpha.value(), std::abs(xi)};
    std::complex<double> shift{0.0, 0.0};
    while (z.real() < 0.5) {
        shift += std::log(z);
        z += 1.0;
    }
    return (detail::lanczos_log_gamma(z) - shift).real();
}

/// |Gamma(1/2 + alpha + i xi)|^2.
inline double gamma_abs_sq(Alpha alpha, double xi)
{
    return std::exp(2.0 * ln_gamma_abs_on_line(alpha, xi));
}

/// Top of the spectrum of the power-weighted operator: Gamma(1/2+alpha)^2 / Gamma(1+2alpha).
inline double pi_alpha(Alpha alpha)
{
    const double a = alpha.value();
    return std::exp(2.0 * ln_gamma(0.5 + a) - ln_gamma(1.0 + 2.0 * a));
}

/// Multiplier of the power-weighted operator after Mellin transform,
/// |Gamma(1/2+alpha+i xi)|^2 / Gamma(1+2alpha).
inline double mellin_symbol(Alpha alpha, double xi)
{
    return std::exp(2.0 * ln_gamma_abs_on_line(alpha, xi) - ln_gamma(1.0 + 2.0 * alpha.value()));
}

struct QuadratureResult {
    double value;
    double error_estimate;
};

/// Mellin symbol computed directly as the integral
///   int_0^inf s^a (1+s)^(-1-2a) s^(-1/2 + i xi) ds
/// after s = e^x, by the trapezoid rule on [-L, L]. Independent of the
/// Gamma-function route. Error estimate = |T(h) - T(2h)|.
inline QuadratureResult symbol_by_quadrature_estimate(Alpha alpha, double xi)
{
    const double a = alpha.value();
    const double decay = a + 0.5;
    // exp(-decay * L) below ~2e-16.
    const double half_width = std::max(40.0, 36.0 / decay);
    const double step_cap = 2.0 * std::numbers::pi / (20.0 * std::max(std::abs(xi), 1.0));
    const double h0 = std::min(0.05, step_cap);
    const long half_count = 2 * static_cast<long>(std::ceil(half_width / (2.0 * h0)));
    const double h = half_width / static_cast<double>(half_count);

    // Integrand in x is even, so the imaginary part cancels on the symmetric grid.
    auto integrand = [&](double x) {
        const double ax = std::abs(x);
        // e^{decay x} (1+e^x)^{-1-2a} written in the overflow-free form for |x|.
        return std::exp(-decay * ax - (1.0 + 2.0 * a) * std::log1p(std::exp(-ax)));
    };
    double re_fine = 0.0, im_fine = 0.0, re_coarse = 0.0, im_coarse = 0.0;
    for (long k = -half_count; k <= half_count; ++k) {
        const double x = static_cast<double>(k) * h;
        const double endpoint = (k == -half_count || k == half_count) ? 0.5 : 1.0;
        const double f = endpoint * integrand(x);
        const double c = std::cos(xi * x), s = std::sin(xi * x);
        re_fine += f * c;
        im_fine += f * s;
        if (k % 2 == 0) {
            re_coarse += f * c;
            im_coarse += f * s;
        }
    }
    const double fine = std::hypot(re_fine, im_fine) * h;
    const double coarse = std::hypot(re_coarse, im_coarse) * 2.0 * h;
    return {fine, std::abs(fine - coarse)};
}

inline double symbol_by_quadrature(Alpha alpha, double xi)
{
    const auto r = symbol_by_quadrature_estimate(alpha, xi);
    if (!(r.error_estimate <= 1e-10 * std::max(1.0, r.value)))
        throw QuadratureError("symbol quadrature did not converge", r.error_estimate);
    return r.value;
}

/// Regularised lower incomplete Gamma P(s, t).
inline double reg_gamma_lower(double s, double t)
{
    detail::require_incgamma_domain(s, t);
    if (t == 0.0) return 0.0;
    const double lg = ln_gamma(s);
    if (t < s + 1.0) return detail::incgamma_series(s, t, lg);
    return 1.0 - detail::incgamma_continued_fraction(s, t, lg);
}

/// Regularised upper incomplete Gamma Q(s, t).
inline double reg_gamma_upper(double s, double t)
{
    detail::require_incgamma_domain(s, t);
    if (t == 0.0) return 1.0;
    const double lg = ln_gamma(s);
    if (t < s + 1.0) return 1.0 - detail::incgamma_series(s, t, lg);
    return detail::incgamma_continued_fraction(s, t, lg);
}

namespace detail {
inline void require_positive_t(double t)
{
    if (!(t > 0.0)) throw std::domain_error("model kernel: t must be > 0");
}
} // namespace detail

/// phi_0(t) = Gamma(1+2a)^{-1} int_1^inf x^{2a} e^{-xt} dx = t^{-1-2a} Q(1+2a, t).
inline double phi0(Alpha alpha, double t)
{
    detail::require_positive_t(t);
    const double s = 1.0 + 2.0 * alpha.value();
    return std::pow(t, -s) * reg_gamma_upper(s, t);
}

/// phi_inf(t) = Gamma(1+2a)^{-1} int_0^1 x^{2a} e^{-xt} dx = t^{-1-2a} P(1+2a, t).
inline double phi_inf(Alpha alpha, double t)
{
    detail::require_positive_t(t);
    const double s = 1.0 + 2.0 * alpha.value();
    return std::pow(t, -s) * reg_gamma_lower(s, t);
}

/// psi_+(t) = e^{t(a+1/2)} exp(-e^t), kernel of the Hankel operator obtained
/// from the (1, inf) block of L_alpha under x = ln t.
inline double psi_plus(Alpha alpha, double t)
{
    return std::exp(t * (alpha.value() + 0.5) - std::exp(t));
}

/// psi_-(t) = e^{-t(a+1/2)} exp(-e^{-t}), the (0, 1) counterpart under x = -ln t.
inline double psi_minus(Alpha alpha, double t)
{
    return std::exp(-t * (alpha.value() + 0.5) - std::exp(-t));
}

} // namespace whs
