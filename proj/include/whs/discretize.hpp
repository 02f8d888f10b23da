#pragma once
// Assembly of the operator expressions used to analyse weighted Hankel
// operators: A_alpha, L_alpha, w H(a) w, the projections onto (0,1) and
// (1,inf), the inversion unitary (Uf)(t) = f(1/t)/t, the log-pushforwards
// U_+- and the model kernels phi_0, phi_inf.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "whs/kernels.hpp"
#include "whs/linalg.hpp"
#include "whs/quadrature.hpp"
#include "whs/specfun.hpp"

namespace whs {

enum class Side { zero, infinity };

inline const char* to_string(Side s) { return s == Side::zero ? "zero" : "infinity"; }

/// Node indices of a grid with t_i < 1 (zero) or t_i > 1 (infinity).
struct ProjectionMask {
    GridPtr grid;
    Side side;
    std::vector<std::size_t> indices;
};

inline ProjectionMask make_mask(const GridPtr& grid, Side side)
{
    ProjectionMask m{grid, side, {}};
    const auto& t = grid->nodes();
    for (std::size_t i = 0; i < t.size(); ++i)
        if ((side == Side::zero) == (t[i] < 1.0)) m.indices.push_back(i);
    return m;
}

/// 0/1 diagonal of the characteristic function of (0,1) or (1,inf) on a grid.
inline std::vector<double> indicator_diagonal(const Grid& grid, Side side)
{
    std::vector<double> d(grid.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = ((side == Side::zero) == (grid.nodes()[i] < 1.0)) ? 1.0 : 0.0;
    return d;
}

inline OperatorMatrix assemble_A(Alpha alpha, const GridPtr& grid)
{
    return nystrom(kernel_A(alpha), grid, "A_alpha");
}

inline OperatorMatrix assemble_L(Alpha alpha, const GridPtr& grid)
{
    return nystrom(kernel_L(alpha), grid, "L_alpha");
}

/// L_alpha from functions on col_grid to functions on row_grid.
inline OperatorMatrix assemble_L(Alpha alpha, const GridPtr& row_grid, const GridPtr& col_grid)
{
    return nystrom(kernel_L(alpha), row_grid, col_grid, "L_alpha");
}

inline OperatorMatrix assemble_wHa(const KernelSpec& a, const WeightSpec& w, const GridPtr& grid)
{
    return nystrom(weighted_hankel_kernel(a, w), grid, "wH(a)w[" + a.name + "," + w.name + "]");
}

namespace detail {
inline std::vector<std::size_t> positions_of(const std::vector<std::size_t>& index_map,
                                             const std::vector<std::size_t>& wanted)
{
    std::unordered_map<std::size_t, std::size_t> where;
    for (std::size_t p = 0; p < index_map.size(); ++p) where.emplace(index_map[p], p);
    std::vector<std::size_t> pos;
    pos.reserve(wanted.size());
    for (std::size_t node : wanted) {
        const auto it = where.find(node);
        if (it == where.end()) throw std::invalid_argument("project: mask selects nodes outside the matrix");
        pos.push_back(it->second);
    }
    return pos;
}
} // namespace detail

/// Block rows(left) x cols(right). The block carries the node indices it came from.
inline OperatorMatrix project(const OperatorMatrix& m, const ProjectionMask& left, const ProjectionMask& right)
{
    if (!left.grid || !right.grid || !(*left.grid == *m.row_grid) || !(*right.grid == *m.col_grid))
        throw std::invalid_argument("project: mask and matrix live on different grids");
    const auto rows = detail::positions_of(m.row_index, left.indices);
    const auto cols = detail::positions_of(m.col_index, right.indices);
    Matrix block(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) block(i, j) = m.entries(rows[i], cols[j]);
    return {m.row_grid,
            m.col_grid,
            left.indices,
            right.indices,
            std::move(block),
            std::string("1_") + to_string(left.side) + " " + m.provenance + " 1_" + to_string(right.side)};
}

/// Conjugation by (Uf)(t) = f(1/t)/t: on the symmetric log grid this reverses
/// both indices.
inline OperatorMatrix inversion_conjugate(const OperatorMatrix& m)
{
    if (!m.full_square()) throw std::invalid_argument("inversion_conjugate: needs a full square operator matrix");
    const std::size_t n = m.rows();
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = m.entries(n - 1 - i, n - 1 - j);
    return {m.row_grid, m.col_grid, m.row_index, m.col_index, std::move(out), "U " + m.provenance + " U*"};
}

/// Grid nodes on one side in the order of increasing x = |ln t|.
inline std::vector<std::size_t> pushforward_order(const Grid& grid, Side side)
{
    const std::size_t n = grid.size();
    std::vector<std::size_t> idx;
    idx.reserve(n / 2);
    if (side == Side::infinity)
        for (std::size_t i = n / 2; i < n; ++i) idx.push_back(i);
    else
        for (std::size_t i = n / 2; i-- > 0;) idx.push_back(i);
    return idx;
}

/// Discrete U_+ (side infinity, x = ln t) or U_- (side zero, x = -ln t) in
/// sqrt-weight coordinates: maps the block vector (sqrt(w_i) f(t_i)) to
/// (sqrt(h) (U f)(x_k)). Rows follow pushforward_order, columns follow the
/// block's ascending node order.
inline Matrix pushforward_unitary(const Grid& grid, Side side)
{
    const auto order = pushforward_order(grid, side);
    const auto mask_first = side == Side::zero ? std::size_t{0} : grid.size() / 2;
    const double sqrt_h = std::sqrt(grid.step());
    Matrix u(order.size(), order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        const std::size_t node = order[k];
        const double x = std::abs(grid.log_nodes()[node]);
        const double jac = side == Side::infinity ? std::exp(0.5 * x) : std::exp(-0.5 * x);
        u(k, node - mask_first) = sqrt_h * jac / std::sqrt(grid.weights()[node]);
    }
    return u;
}

/// Nystrom matrix of the Hankel operator H(c psi_+-) on the uniform x-grid
/// {|ln t_i|} of one side, c = Gamma(1+2alpha)^{-1/2}. Equals the conjugated
/// block U_+- (1 L 1) U_+-^* of L_alpha.
inline OperatorMatrix log_pushforward_hankel(Side side, Alpha alpha, const GridPtr& grid)
{
    const auto order = pushforward_order(*grid, side);
    const double h = grid->step();
    const double c = std::exp(-0.5 * ln_gamma(1.0 + 2.0 * alpha.value()));
    const std::size_t n = order.size();
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = std::abs(grid->log_nodes()[order[k]]);
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double psi =
                side == Side::infinity ? psi_plus(alpha, x[i] + x[j]) : psi_minus(alpha, x[i] + x[j]);
            m(i, j) = m(j, i) = h * c * psi;
        }
    }
    return {grid, grid, order, order, std::move(m), side == Side::infinity ? "H(psi_+)" : "H(psi_-)"};
}

enum class ModelKernel { phi0, phi_inf };

/// Nystrom matrix of w_alpha H(phi) w_alpha, kernel s^a t^a phi(s+t).
inline OperatorMatrix assemble_model_hankel(ModelKernel which, Alpha alpha, const GridPtr& grid)
{
    const double a = alpha.value();
    auto kernel = [=](double s, double t) {
        const double phi = which == ModelKernel::phi0 ? phi0(alpha, s + t) : phi_inf(alpha, s + t);
        return std::pow(s * t, a) * phi;
    };
    return nystrom(kernel, grid, which == ModelKernel::phi0 ? "w H(phi_0) w" : "w H(phi_inf) w");
}

namespace detail {
inline double dot(const double* a, const double* b, std::size_t n) noexcept
{
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        s0 += a[k] * b[k];
        s1 += a[k + 1] * b[k + 1];
        s2 += a[k + 2] * b[k + 2];
        s3 += a[k + 3] * b[k + 3];
    }
    for (; k < n; ++k) s0 += a[k] * b[k];
    return (s0 + s1) + (s2 + s3);
}
} // namespace detail

/// B diag(d) B^T, assembled over unordered pairs so the result is exactly symmetric.
inline Matrix weighted_gram(const Matrix& b, std::span<const double> d)
{
    if (d.size() != b.cols()) throw std::invalid_argument("weighted_gram: size mismatch");
    std::vector<std::size_t> active;
    for (std::size_t k = 0; k < d.size(); ++k)
        if (d[k] != 0.0) active.push_back(k);
    const std::size_t n = b.rows();
    const std::size_t m = active.size();
    Matrix plain(n, m), scaled(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < m; ++c) {
            plain(i, c) = b(i, active[c]);
            scaled(i, c) = b(i, active[c]) * d[active[c]];
        }
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* si = scaled.row(i).data();
        for (std::size_t j = i; j < n; ++j) out(i, j) = out(j, i) = detail::dot(si, plain.row(j).data(), m);
    }
    return out;
}

/// Quadrature approximations of L_alpha^2, L_alpha 1_0 L_alpha and
/// L_alpha 1_inf L_alpha on a grid. The inner (integration) variable runs over
/// grid.widened(), so the compositions approximate the operator products on
/// L^2(R_+) rather than the products of truncated operators.
struct LCompositions {
    OperatorMatrix l;          // L_alpha on the grid
    OperatorMatrix l_squared;  // L 1 L
    OperatorMatrix l_zero_l;   // L 1_0 L
    OperatorMatrix l_inf_l;    // L 1_inf L
};

inline LCompositions compose_L(Alpha alpha, const GridPtr& grid)
{
    const auto wide = std::make_shared<const Grid>(grid->widened());
    const OperatorMatrix outer = assemble_L(alpha, grid, wide);
    const auto zero = indicator_diagonal(*wide, Side::zero);
    const auto inf = indicator_diagonal(*wide, Side::infinity);
    Matrix lz = weighted_gram(outer.entries, zero);
    Matrix li = weighted_gram(outer.entries, inf);
    Matrix ll = lz + li;
    auto wrap = [&](Matrix m, const char* name) {
        return OperatorMatrix{grid, grid, detail::iota_index(grid->size()), detail::iota_index(grid->size()),
                              std::move(m), name};
    };
    return {assemble_L(alpha, grid), wrap(std::move(ll), "L L"), wrap(std::move(lz), "L 1_zero L"),
            wrap(std::move(li), "L 1_infinity L")};
}

/// diag(v) M diag(v) for a real multiplier v sampled at the matrix nodes.
template <class Function>
OperatorMatrix multiply_both_sides(const OperatorMatrix& m, const Function& v)
{
    std::vector<double> dr(m.rows()), dc(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) dr[i] = v(m.row_grid->nodes()[m.row_index[i]]);
    for (std::size_t j = 0; j < m.cols(); ++j) dc[j] = v(m.col_grid->nodes()[m.col_index[j]]);
    OperatorMatrix out = m;
    out.entries = scale_cols(scale_rows(m.entries, dr), dc);
    out.provenance = "v " + m.provenance + " v";
    return out;
}

} // namespace whs
