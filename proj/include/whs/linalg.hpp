#pragma once
// Dense symmetric eigensolvers, singular values and the operator, Frobenius
// and nuclear norms.
//
// Two self-contained solvers are provided:
//  * cyclic Jacobi rotations (small matrices, reference route);
//  * Householder tridiagonalisation followed by implicit QL (large matrices).
// sym_eigen picks one automatically; tests cross-check the two.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "whs/matrix.hpp"
#include "whs/specfun.hpp"

namespace whs {

enum class EigenMethod { automatic, jacobi, tridiagonal_ql };

struct EigenDecomposition {
    std::vector<double> eigenvalues;   // ascending
    std::optional<Matrix> eigenvectors; // column k belongs to eigenvalues[k]
    double residual_bound = 0.0;
};

inline double frobenius_norm(const Matrix& m) noexcept
{
    double s = 0.0;
    for (double v : m.values()) s += v * v;
    return std::sqrt(s);
}

namespace detail {

inline constexpr int jacobi_max_sweeps = 30;
inline constexpr double jacobi_tolerance = 1e-13;
inline constexpr int ql_max_iter = 30;
inline constexpr std::size_t jacobi_size_limit = 96;

inline double off_diagonal_norm(const Matrix& a)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

inline void sort_ascending(std::vector<double>& d, std::optional<Matrix>& v)
{
    const std::size_t n = d.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    std::vector<double> sorted(n);
    for (std::size_t k = 0; k < n; ++k) sorted[k] = d[order[k]];
    d = std::move(sorted);
    if (v) {
        Matrix w(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) w(i, k) = (*v)(i, order[k]);
        v = std::move(w);
    }
}

inline EigenDecomposition jacobi(const Matrix& m, bool want_vectors)
{
    const std::size_t n = m.rows();
    Matrix a = m;
    std::optional<Matrix> v;
    if (want_vectors) v = Matrix::identity(n);
    const double scale = frobenius_norm(m);
    const double target = jacobi_tolerance * scale;

    double off = off_diagonal_norm(a);
    int sweep = 0;
    while (off > target) {
        if (sweep++ == jacobi_max_sweeps)
            throw ConvergenceError("Jacobi eigensolver exceeded sweep cap; off-diagonal norm", off);
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t r = 0; r < n; ++r) {
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p) = c * arp - s * arq;
                    a(r, q) = s * arp + c * arq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double apr = a(p, r);
                    const double aqr = a(q, r);
                    a(p, r) = c * apr - s * aqr;
                    a(q, r) = s * apr + c * aqr;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                if (v) {
                    for (std::size_t r = 0; r < n; ++r) {
                        const double vrp = (*v)(r, p);
                        const double vrq = (*v)(r, q);
                        (*v)(r, p) = c * vrp - s * vrq;
                        (*v)(r, q) = s * vrp + c * vrq;
                    }
                }
            }
        }
        off = off_diagonal_norm(a);
    }

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = a(i, i);
    out.eigenvectors = std::move(v);
    sort_ascending(out.eigenvalues, out.eigenvectors);
    out.residual_bound = scale > 0.0 ? off / scale : 0.0;
    return out;
}

// Householder reduction to tridiagonal form (EISPACK tred2 ordering).
// On return d holds the diagonal, e the subdiagonal in e[1..n-1], and v the
// accumulated orthogonal transformation when want_vectors is set.
inline void tridiagonalise(Matrix& v, std::vector<double>& d, std::vector<double>& e, bool want_vectors)
{
    const std::size_t n = v.rows();
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

    for (std::size_t i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (std::size_t j = 0; j < i; ++j) {
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
                v(j, i) = 0.0;
            }
        } else {
            for (std::size_t k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                v(j, i) = f;
                g = e[j] + v(j, j) * f;
                for (std::size_t k = j + 1; k < i; ++k) {
                    g += v(k, j) * d[k];
                    e[k] += v(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (std::size_t k = j; k < i; ++k) v(k, j) -= (f * e[k] + g * d[k]);
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    // The diagonal entries of the reduced matrix sit on v's diagonal; the
    // accumulation below never touches v(i,i) before reading it.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        v(n - 1, i) = v(i, i);
        if (!want_vectors) continue;
        v(i, i) = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
            for (std::size_t j = 0; j <= i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
                for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
            }
        }
        for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        d[j] = v(n - 1, j);
        v(n - 1, j) = 0.0;
    }
    v(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

// Implicit QL on the symmetric tridiagonal (d, e) (EISPACK tql2 ordering).
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, Matrix* v)
{
    const std::size_t n = d.size();
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    double f = 0.0;
    double tst1 = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n) {
            if (std::abs(e[m]) <= eps * tst1) break;
            ++m;
        }
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > ql_max_iter)
                    throw ConvergenceError("QL eigensolver exceeded iteration cap; off-diagonal entry", e[l]);
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t ii = m; ii-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[ii];
                    h = c * p;
                    r = std::hypot(p, e[ii]);
                    e[ii + 1] = s * r;
                    s = e[ii] / r;
                    c = p / r;
                    p = c * d[ii] - s * g;
                    d[ii + 1] = h + s * (c * g + s * d[ii]);
                    if (v) {
                        for (std::size_t k = 0; k < n; ++k) {
                            h = (*v)(k, ii + 1);
                            (*v)(k, ii + 1) = s * (*v)(k, ii) + c * h;
                            (*v)(k, ii) = c * (*v)(k, ii) - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

inline EigenDecomposition householder_ql(const Matrix& m, bool want_vectors)
{
    const std::size_t n = m.rows();
    Matrix v = m;
    std::vector<double> d, e;
    tridiagonalise(v, d, e, want_vectors);
    tridiagonal_ql(d, e, want_vectors ? &v : nullptr);

    EigenDecomposition out;
    out.eigenvalues = std::move(d);
    if (want_vectors) out.eigenvectors = std::move(v);
    sort_ascending(out.eigenvalues, out.eigenvectors);
    out.residual_bound = std::numeric_limits<double>::epsilon() * static_cast<double>(n);
    return out;
}

} // namespace detail

/// max_k ||M v_k - lambda_k v_k||_2 / ||M||_F.
inline double eigen_residual(const Matrix& m, const EigenDecomposition& eig)
{
    if (!eig.eigenvectors) throw std::invalid_argument("eigen_residual: decomposition has no eigenvectors");
    const Matrix& v = *eig.eigenvectors;
    const std::size_t n = m.rows();
    const double scale = frobenius_norm(m);
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double mv = 0.0;
            for (std::size_t j = 0; j < n; ++j) mv += m(i, j) * v(j, k);
            const double r = mv - eig.eigenvalues[k] * v(i, k);
            s += r * r;
        }
        worst = std::max(worst, std::sqrt(s));
    }
    return scale > 0.0 ? worst / scale : worst;
}

/// Eigen-decomposition of a real symmetric matrix. Eigenvalues ascending.
inline EigenDecomposition sym_eigen(const Matrix& m, bool want_vectors = false,
                                    EigenMethod method = EigenMethod::automatic)
{
    if (!m.square()) throw std::invalid_argument("sym_eigen: matrix is not square");
    if (!all_finite(m)) throw std::invalid_argument("sym_eigen: matrix has non-finite entries");
    if (asymmetry(m) > 1e-12 * max_abs(m)) throw std::invalid_argument("sym_eigen: matrix is not symmetric");
    if (m.rows() == 0) return {};

    if (method == EigenMethod::automatic)
        method = m.rows() <= detail::jacobi_size_limit ? EigenMethod::jacobi : EigenMethod::tridiagonal_ql;
    EigenDecomposition out =
        method == EigenMethod::jacobi ? detail::jacobi(m, want_vectors) : detail::householder_ql(m, want_vectors);
    if (want_vectors) out.residual_bound = std::max(out.residual_bound, eigen_residual(m, out));
    return out;
}

inline std::vector<double> eigenvalues(const Matrix& m) { return sym_eigen(m, false).eigenvalues; }

/// Singular values in descending order, min(rows, cols) of them.
/// Square symmetric input uses |eigenvalues| directly; anything else goes
/// through the Gram matrix, whose values below reliable_floor() carry no
/// relative accuracy.
inline std::vector<double> singular_values(const Matrix& m)
{
    std::vector<double> sv;
    if (m.rows() == 0 || m.cols() == 0) return sv;
    if (m.square() && asymmetry(m) <= 1e-14 * max_abs(m)) {
        sv = eigenvalues(m);
        for (double& s : sv) s = std::abs(s);
    } else {
        const Matrix mt = m.transposed();
        const Matrix gram = m.rows() >= m.cols() ? mt * m : m * mt;
        // Round-off can leave the product a few ulps from symmetric.
        Matrix sym = gram;
        for (std::size_t i = 0; i < sym.rows(); ++i)
            for (std::size_t j = i + 1; j < sym.cols(); ++j) sym(i, j) = sym(j, i) = 0.5 * (gram(i, j) + gram(j, i));
        sv = eigenvalues(sym);
        for (double& s : sv) s = std::sqrt(std::max(0.0, s));
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

/// Values below this are reported but flagged as unreliable.
inline double reliable_floor(const std::vector<double>& sv) noexcept
{
    return sv.empty() ? 0.0 : 1e-9 * sv.front();
}

inline double op_norm(const Matrix& m)
{
    const auto sv = singular_values(m);
    return sv.empty() ? 0.0 : sv.front();
}

inline double nuclear_norm(const Matrix& m)
{
    const auto sv = singular_values(m);
    return std::accumulate(sv.begin(), sv.end(), 0.0);
}

/// Frobenius norm recomputed from singular values (cross-check of frobenius_norm).
inline double frobenius_from_singular(const std::vector<double>& sv) noexcept
{
    double s = 0.0;
    for (double x : sv) s += x * x;
    return std::sqrt(s);
}

} // namespace whs
