#pragma once
// Logarithmic midpoint grids on [e^-R, e^R] and symmetric Nystrom assembly.

#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "whs/matrix.hpp"

namespace whs {

/// Open log-uniform grid: x_i = -R + (i - 1/2) h, h = 2R/N, t_i = e^{x_i},
/// w_i = h t_i. No node sits at t = 1 and t_i t_{N+1-i} = 1.
class Grid {
public:
    Grid(double half_width, std::size_t count) : half_width_(half_width), count_(count)
    {
        if (!(half_width > 0.0) || !std::isfinite(half_width))
            throw std::invalid_argument("grid half-width R must be a finite positive number");
        if (count < 2 || count % 2 != 0) throw std::invalid_argument("grid node count N must be even and >= 2");
        step_ = 2.0 * half_width / static_cast<double>(count);
        log_nodes_.resize(count);
        const std::size_t half = count / 2;
        // Upper half mirrors the lower half exactly, so x_{N+1-i} = -x_i bit for bit.
        for (std::size_t i = 0; i < half; ++i) {
            const double x = -half_width + (static_cast<double>(i) + 0.5) * step_;
            log_nodes_[i] = x;
            log_nodes_[count - 1 - i] = -x;
        }
        nodes_.resize(count);
        weights_.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
            nodes_[i] = std::exp(log_nodes_[i]);
            weights_[i] = step_ * nodes_[i];
        }
    }

    [[nodiscard]] double half_width() const noexcept { return half_width_; }
    [[nodiscard]] std::size_t size() const noexcept { return count_; }
    [[nodiscard]] double step() const noexcept { return step_; }
    [[nodiscard]] const std::vector<double>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
    [[nodiscard]] const std::vector<double>& log_nodes() const noexcept { return log_nodes_; }

    /// Nested grid with the same step and twice the log-half-width. Its middle
    /// N nodes coincide with this grid's nodes. Used for the variable that an
    /// operator integrates over, so compositions and Hilbert-Schmidt sums are
    /// not cut off at the edge of the working window.
    [[nodiscard]] Grid widened() const { return Grid(2.0 * half_width_, 2 * count_); }

    [[nodiscard]] std::string label() const
    {
        std::ostringstream os;
        os << "R=" << half_width_ << ",N=" << count_;
        return os.str();
    }

    friend bool operator==(const Grid& a, const Grid& b)
    {
        return a.half_width_ == b.half_width_ && a.count_ == b.count_;
    }

private:
    double half_width_;
    std::size_t count_;
    double step_ = 0.0;
    std::vector<double> log_nodes_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(double half_width, std::size_t count)
{
    return std::make_shared<const Grid>(half_width, count);
}

/// A kernel returned a non-finite value at a node pair.
class KernelEvaluationError : public std::runtime_error {
public:
    KernelEvaluationError(double s, double t)
        : std::runtime_error(describe(s, t)), s_(s), t_(t) {}
    [[nodiscard]] double s() const noexcept { return s_; }
    [[nodiscard]] double t() const noexcept { return t_; }

private:
    static std::string describe(double s, double t)
    {
        std::ostringstream os;
        os.precision(17);
        os << "kernel evaluation failed at (s, t) = (" << s << ", " << t << ")";
        return os.str();
    }
    double s_, t_;
};

/// Dense Nystrom matrix of an integral operator. Rows live on row_grid,
/// columns on col_grid; row_index/col_index map matrix positions back to
/// grid nodes (blocks produced by projections keep their own index maps).
struct OperatorMatrix {
    GridPtr row_grid;
    GridPtr col_grid;
    std::vector<std::size_t> row_index;
    std::vector<std::size_t> col_index;
    Matrix entries;
    std::string provenance;

    [[nodiscard]] std::size_t rows() const noexcept { return entries.rows(); }
    [[nodiscard]] std::size_t cols() const noexcept { return entries.cols(); }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return entries(i, j); }

    [[nodiscard]] bool full_square() const noexcept
    {
        return row_grid && col_grid && *row_grid == *col_grid && rows() == row_grid->size() &&
               cols() == col_grid->size();
    }
};

namespace detail {
inline std::vector<std::size_t> iota_index(std::size_t n)
{
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}
} // namespace detail

/// entries(i, j) = sqrt(w_i w_j) K(t_i, t_j) on one grid. K must be
/// symmetric; each unordered pair is evaluated once, so the result is
/// exactly symmetric.
template <class Kernel>
OperatorMatrix nystrom(const Kernel& kernel, const GridPtr& grid, std::string provenance)
{
    const std::size_t n = grid->size();
    const auto& t = grid->nodes();
    const auto& w = grid->weights();
    std::vector<double> sw(n);
    for (std::size_t i = 0; i < n; ++i) sw[i] = std::sqrt(w[i]);

    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double k = kernel(t[i], t[j]);
            if (!std::isfinite(k)) throw KernelEvaluationError(t[i], t[j]);
            m(i, j) = m(j, i) = sw[i] * sw[j] * k;
        }
    }
    return {grid, grid, detail::iota_index(n), detail::iota_index(n), std::move(m), std::move(provenance)};
}

/// Rectangular Nystrom block: rows on row_grid, columns on col_grid.
template <class Kernel>
OperatorMatrix nystrom(const Kernel& kernel, const GridPtr& row_grid, const GridPtr& col_grid, std::string provenance)
{
    const auto& tr = row_grid->nodes();
    const auto& tc = col_grid->nodes();
    const auto& wr = row_grid->weights();
    const auto& wc = col_grid->weights();
    Matrix m(tr.size(), tc.size());
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double si = std::sqrt(wr[i]);
        for (std::size_t j = 0; j < tc.size(); ++j) {
            const double k = kernel(tr[i], tc[j]);
            if (!std::isfinite(k)) throw KernelEvaluationError(tr[i], tc[j]);
            m(i, j) = si * std::sqrt(wc[j]) * k;
        }
    }
    return {row_grid, col_grid, detail::iota_index(tr.size()), detail::iota_index(tc.size()), std::move(m),
            std::move(provenance)};
}

/// Trapezoid-in-log approximation of int_{e^-R}^{e^R} f(t) dt = sum_i w_i f(t_i).
template <class Function>
double quad_integral(const Function& f, const Grid& grid)
{
    const auto& t = grid.nodes();
    const auto& w = grid.weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) sum += w[i] * f(t[i]);
    return sum;
}

} // namespace whs
