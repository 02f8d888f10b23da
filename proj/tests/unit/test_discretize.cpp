#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "whs/discretize.hpp"
#include "whs/linalg.hpp"

using namespace whs;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double max_eig_diff(std::vector<double> a, std::vector<double> b)
{
    REQUIRE(a.size() == b.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

} // namespace

TEST_CASE("projection masks split the grid at t = 1")
{
    const auto g = make_grid(4.0, 40);
    const auto z = make_mask(g, Side::zero);
    const auto i = make_mask(g, Side::infinity);
    CHECK(z.indices.size() == 20);
    CHECK(i.indices.size() == 20);
    for (auto k : z.indices) CHECK(g->nodes()[k] < 1.0);
    for (auto k : i.indices) CHECK(g->nodes()[k] > 1.0);
    const auto d = indicator_diagonal(*g, Side::zero);
    CHECK(std::count(d.begin(), d.end(), 1.0) == 20);
}

TEST_CASE("projection of A_alpha")
{
    const auto g = make_grid(5.0, 60);
    const auto a = assemble_A(Alpha{0.3}, g);
    const auto z = make_mask(g, Side::zero);
    const auto inf = make_mask(g, Side::infinity);
    const auto b00 = project(a, z, z);
    const auto b0i = project(a, z, inf);
    CHECK(b00.rows() == 30);
    CHECK(b0i.cols() == 30);
    CHECK(b00(0, 0) == a(0, 0));
    CHECK(b0i(0, 0) == a(0, 30));

    SECTION("the two diagonal blocks are exactly similar")
    {
        const auto e0 = eigenvalues(b00.entries);
        const auto ei = eigenvalues(project(a, inf, inf).entries);
        CHECK(max_eig_diff(e0, ei) <= 1e-10 * op_norm(a.entries));
    }
    SECTION("projections compose")
    {
        const auto again = project(b00, z, z);
        CHECK(max_abs_diff(again.entries, b00.entries) == 0.0);
    }
}

TEST_CASE("inversion conjugation")
{
    const auto g = make_grid(4.0, 40);
    for (double al : {0.0, 0.5, 1.0}) {
        const auto a = assemble_A(Alpha{al}, g);
        CHECK(max_abs_diff(inversion_conjugate(a).entries, a.entries) <= 1e-13 * max_abs(a.entries));
        const auto l = assemble_L(Alpha{al}, g);
        CHECK(max_abs_diff(inversion_conjugate(inversion_conjugate(l)).entries, l.entries) == 0.0);
        // L_alpha is not invariant: its kernel has no inversion symmetry
        CHECK(max_abs_diff(inversion_conjugate(l).entries, l.entries) > 1e-2 * max_abs(l.entries));
    }
    const auto wide = std::make_shared<const Grid>(g->widened());
    CHECK_THROWS_AS(inversion_conjugate(assemble_L(Alpha{0.0}, g, wide)), std::invalid_argument);
}

TEST_CASE("pushforward to the half line in log variable")
{
    const auto g = make_grid(6.0, 120);
    for (double al : {0.0, 0.5}) {
        const auto l = assemble_L(Alpha{al}, g);
        for (Side side : {Side::zero, Side::infinity}) {
            const auto mask = make_mask(g, side);
            const auto block = project(l, mask, mask);
            const auto h = log_pushforward_hankel(side, Alpha{al}, g);
            const Matrix u = pushforward_unitary(*g, side);
            CHECK(max_abs_diff(u * u.transposed(), Matrix::identity(u.rows())) <= 1e-14);
            CHECK(max_eig_diff(eigenvalues(block.entries), eigenvalues(h.entries)) <= 1e-8);
            CHECK(max_abs_diff(u * block.entries * u.transposed(), h.entries) <= 1e-12 * max_abs(h.entries));
        }
    }
}

TEST_CASE("model Hankel split")
{
    const auto g = make_grid(5.0, 80);
    for (double al : {-0.25, 0.0, 0.5, 1.0}) {
        const auto a = assemble_A(Alpha{al}, g);
        const auto h0 = assemble_model_hankel(ModelKernel::phi0, Alpha{al}, g);
        const auto hi = assemble_model_hankel(ModelKernel::phi_inf, Alpha{al}, g);
        CHECK(max_abs_diff(h0.entries + hi.entries, a.entries) <= 1e-12 * max_abs(a.entries));
        for (double v : h0.entries.values()) CHECK(v > 0.0);
    }
}

TEST_CASE("assemble_A at N = 2")
{
    const auto g = make_grid(1.0, 2);
    const auto a = assemble_A(Alpha{0.0}, g);
    // w_i K(t_i, t_i) = t_i / (2 t_i) = 1/2 on both nodes
    CHECK_THAT(a(0, 0), WithinAbs(0.5, 1e-15));
    CHECK_THAT(a(1, 1), WithinAbs(0.5, 1e-15));
    CHECK_THAT(a(0, 1), WithinRel(1.0 / (2.0 * std::cosh(0.5)), 1e-15));
}

TEST_CASE("weighted Gram matrix")
{
    Matrix b(3, 4);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j) b(i, j) = std::sin(1.0 + 3.0 * i + j);
    const std::vector<double> d{1.0, 0.0, 2.0, -0.5};
    const Matrix g = weighted_gram(b, d);
    CHECK(asymmetry(g) == 0.0);
    const Matrix oracle = scale_cols(b, d) * b.transposed();
    CHECK(max_abs_diff(g, oracle) <= 1e-14);
    CHECK_THROWS_AS(weighted_gram(b, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("L compositions")
{
    const auto g = make_grid(6.0, 120);
    const auto c = compose_L(Alpha{0.0}, g);
    CHECK(max_abs_diff(c.l_zero_l.entries + c.l_inf_l.entries, c.l_squared.entries) <= 1e-14);
    const double na = op_norm(assemble_A(Alpha{0.0}, g).entries);
    CHECK(op_norm(c.l_squared.entries - assemble_A(Alpha{0.0}, g).entries) <= 1e-2 * na);
}

TEST_CASE("weighted Hankel family (1,1,1,1) equals A_alpha")
{
    const auto g = make_grid(5.0, 60);
    for (double al : {0.0, 0.5, 1.0}) {
        const auto [k, w] = rational_test_family(Alpha{al}, 1.0, 1.0, 1.0, 1.0);
        const auto a = assemble_A(Alpha{al}, g);
        CHECK(max_abs_diff(assemble_wHa(k, w, g).entries, a.entries) <= 1e-14 * max_abs(a.entries));
    }
}

TEST_CASE("multiply_both_sides")
{
    const auto g = make_grid(3.0, 20);
    const auto a = assemble_A(Alpha{0.0}, g);
    const auto m = multiply_both_sides(a, [](double t) { return 1.0 + t; });
    const auto& t = g->nodes();
    CHECK_THAT(m(2, 7), WithinRel((1 + t[2]) * a(2, 7) * (1 + t[7]), 1e-15));
    CHECK(asymmetry(m.entries) <= 1e-15 * max_abs(m.entries));
}
