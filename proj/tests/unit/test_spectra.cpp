#include <catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "whs/discretize.hpp"
#include "whs/linalg.hpp"
#include "whs/spectra.hpp"

using namespace whs;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double pi = std::numbers::pi;

std::vector<double> uniform(double lo, double hi, int n)
{
    std::vector<double> v;
    for (int k = 0; k <= n; ++k) v.push_back(lo + (hi - lo) * k / n);
    return v;
}

std::vector<std::pair<double, double>> sorted_intervals(const PredictedSpectrum& p)
{
    std::vector<std::pair<double, double>> out;
    for (const auto& iv : p.intervals) out.emplace_back(iv.lo, iv.hi);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("predict examples")
{
    SECTION("(0; 1,1,1,1) is [0, pi] with multiplicity two")
    {
        const auto p = predict(Alpha{0.0}, 1, 1, 1, 1);
        REQUIRE(p.intervals.size() == 1);
        CHECK(p.intervals[0].lo == 0.0);
        CHECK_THAT(p.intervals[0].hi, WithinAbs(pi, 1e-12));
        CHECK(p.intervals[0].multiplicity == 2);
        CHECK(p.intervals[0].origin == IntervalOrigin::both);
        CHECK(p.multiplicity_at(1.0) == 2);
    }
    SECTION("(0.5; 1,0,1,1) drops the degenerate interval")
    {
        const auto p = predict(Alpha{0.5}, 1, 0, 1, 1);
        REQUIRE(p.intervals.size() == 1);
        CHECK(p.intervals[0].lo == 0.0);
        CHECK_THAT(p.intervals[0].hi, WithinAbs(1.0, 1e-12));
        CHECK(p.intervals[0].multiplicity == 1);
        CHECK(p.intervals[0].origin == IntervalOrigin::zero_end);
    }
    SECTION("(0; 1,-1,1,1) orients the negative interval")
    {
        const auto p = predict(Alpha{0.0}, 1, -1, 1, 1);
        const auto iv = sorted_intervals(p);
        REQUIRE(iv.size() == 2);
        CHECK_THAT(iv[0].first, WithinAbs(-pi, 1e-12));
        CHECK(iv[0].second == 0.0);
        CHECK(iv[1].first == 0.0);
        CHECK_THAT(iv[1].second, WithinAbs(pi, 1e-12));
        CHECK(p.multiplicity_at(-1.0) == 1);
    }
    SECTION("(0; 0,1,1,1) keeps only the infinity end")
    {
        const auto p = predict(Alpha{0.0}, 0, 1, 1, 1);
        REQUIRE(p.intervals.size() == 1);
        CHECK(p.intervals[0].origin == IntervalOrigin::infinity_end);
    }
    CHECK(predict(Alpha{0.0}, 0, 0, 1, 1).intervals.empty());
    CHECK(predict(Alpha{0.0}, 1, 1, 0, 0).intervals.empty());
}

TEST_CASE("predict properties")
{
    for (double a : {-0.25, 0.0, 0.5, 1.0, 2.0}) {
        const auto p = predict(Alpha{a}, 1, 1, 1, 1);
        CHECK(std::abs(p.intervals.at(0).hi - pi_alpha(Alpha{a})) <= 1e-12);
        for (auto [a0, ai, b0, bi] : {std::array{1.0, 2.0, 1.0, 1.0}, {2.0, 1.0, 1.0, 2.0}, {1.0, -1.0, 0.5, 1.0},
                                      {0.0, 3.0, 1.0, -1.0}, {1.0, 1.0, 1.0, 1.0}}) {
            const auto p1 = predict(Alpha{a}, a0, ai, b0, bi);
            const auto p2 = predict(Alpha{a}, ai, a0, bi, b0);
            CHECK(sorted_intervals(p1) == sorted_intervals(p2));
            for (const auto& iv : p1.intervals) {
                CHECK((iv.lo == 0.0 || iv.hi == 0.0));
                CHECK(iv.lo < iv.hi);
            }
        }
    }
}

TEST_CASE("analyze examples")
{
    const auto p = predict(Alpha{0.0}, 1, 1, 1, 1);
    SECTION("uniform fill")
    {
        const auto eigs = uniform(0.0, pi, 100);
        const auto r = analyze(eigs, p, 0.05, 0.1);
        CHECK(r.outliers.empty());
        CHECK_THAT(r.fill_max_gap, WithinAbs(pi / 100, 1e-12));
        CHECK(r.hausdorff <= pi / 200 + 1e-12);
        CHECK(r.counting_table.size() == 40);
    }
    SECTION("single outlier")
    {
        const auto r = analyze({5.0}, p, 0.1, 0.1);
        REQUIRE(r.outliers.size() == 1);
        CHECK(r.outliers[0] == 5.0);
        CHECK_THAT(r.fill_max_gap, WithinAbs(pi - 0.2, 1e-12));
    }
    SECTION("preconditions")
    {
        CHECK_THROWS_AS(analyze({}, p, 0.1, 0.1), std::invalid_argument);
        CHECK_THROWS_AS(analyze({1.0}, p, 0.0, 0.1), std::invalid_argument);
        CHECK_THROWS_AS(analyze({1.0}, p, 0.1, -1.0), std::invalid_argument);
    }
    SECTION("outliers stay off the fattened prediction")
    {
        const std::vector<double> eigs{-1.0, -0.04, 0.0, 1.0, 3.17, 3.3, 10.0};
        const auto r = analyze(eigs, p, 0.05, 0.1);
        for (double o : r.outliers) CHECK(p.distance(o) > 0.05);
        CHECK(r.outliers == std::vector<double>{-1.0, 3.3, 10.0});
    }
}

TEST_CASE("analyze is monotone in delta")
{
    const auto p = predict(Alpha{0.0}, 1, -1, 1, 1);
    const std::vector<double> eigs{-4.0, -3.3, -1.0, 0.0, 0.5, 3.2, 3.5, 4.5, 7.0};
    std::size_t prev = eigs.size() + 1;
    for (double d = 0.01; d < 5.0; d *= 1.5) {
        const auto n = analyze(eigs, p, d, 0.1).outliers.size();
        CHECK(n <= prev);
        prev = n;
    }
}

TEST_CASE("analyze on A_0 at (10, 800)")
{
    const auto eigs = eigenvalues(assemble_A(Alpha{0.0}, make_grid(10.0, 800)).entries);
    const auto p = predict(Alpha{0.0}, 1, 1, 1, 1);
    const auto r = analyze(eigs, p, default_delta(p), default_interior_margin(p));
    INFO("fill_max_gap " << r.fill_max_gap << " hausdorff " << r.hausdorff);
    CHECK(r.outliers.empty());
    CHECK(r.fill_max_gap <= 0.1);
    CHECK(r.hausdorff <= 0.1);
}

TEST_CASE("fill and hausdorff of A_alpha improve along the ladder")
{
    for (double a : {0.0, 0.5, 1.0}) {
        const auto p = predict(Alpha{a}, 1, 1, 1, 1);
        double gap = INFINITY, haus = INFINITY;
        for (auto [R, N] : {std::pair{6.0, 200}, {8.0, 400}, {10.0, 800}}) {
            const auto r = analyze(eigenvalues(assemble_A(Alpha{a}, make_grid(R, N)).entries), p, default_delta(p),
                                   default_interior_margin(p));
            INFO("alpha " << a << " R " << R);
            CHECK(r.outliers.empty());
            CHECK(r.fill_max_gap < gap);
            CHECK(r.hausdorff < haus);
            gap = r.fill_max_gap;
            haus = r.hausdorff;
        }
    }
}

TEST_CASE("count_beyond")
{
    const std::vector<double> s{-3.0, -1.0, 0.0, 0.5, 2.0, 2.0, 4.0};
    CHECK(count_beyond(s, 1.0) == 3);
    CHECK(count_beyond(s, 2.0) == 1);
    CHECK(count_beyond(s, -0.5) == 2);
    CHECK(count_beyond(s, -1.0) == 1);
    CHECK(count_beyond(s, 10.0) == 0);
}

TEST_CASE("counting_compare")
{
    const auto grid = uniform(0.3, 2.8, 25);
    const auto g = make_grid(6.0, 200);
    const auto a = assemble_A(Alpha{0.0}, g);
    const auto z = make_mask(g, Side::zero);
    const auto i = make_mask(g, Side::infinity);
    const auto e0 = eigenvalues(project(a, z, z).entries);
    const auto ei = eigenvalues(project(a, i, i).entries);

    SECTION("similar blocks count alike")
    {
        const auto c = counting_compare(e0, e0, ei, grid);
        for (const auto& row : c.rows) CHECK(row.block_zero == row.block_inf);
    }
    SECTION("disjoint union has zero discrepancy")
    {
        std::vector<double> full = e0;
        full.insert(full.end(), ei.begin(), ei.end());
        const auto c = counting_compare(full, e0, ei, grid);
        CHECK(c.sup_discrepancy == 0);
        CHECK(c.rows.size() == grid.size());
    }
    SECTION("coupled operator stays within a bounded discrepancy along the ladder")
    {
        for (auto [R, N] : {std::pair{6.0, 200}, {8.0, 400}, {10.0, 800}}) {
            const auto gg = make_grid(R, N);
            const auto aa = assemble_A(Alpha{0.0}, gg);
            const auto zz = make_mask(gg, Side::zero);
            const auto ii = make_mask(gg, Side::infinity);
            const auto c = counting_compare(eigenvalues(aa.entries), eigenvalues(project(aa, zz, zz).entries),
                                            eigenvalues(project(aa, ii, ii).entries), grid);
            CHECK(c.sup_discrepancy <= 8);
        }
    }
}

TEST_CASE("schatten diagnostic")
{
    SECTION("geometric decay")
    {
        std::vector<double> s;
        for (int k = 1; k <= 40; ++k) s.push_back(std::pow(2.0, -k));
        const auto d = schatten_diagnostic(s, 1e-14);
        CHECK(d.verdict == SchattenVerdict::super_polynomial);
        CHECK(d.used == 40);
        CHECK_THAT(d.nuclear_partial.back(), WithinAbs(1.0 - std::pow(2.0, -40), 1e-15));
    }
    SECTION("k^-2")
    {
        std::vector<double> s;
        for (int k = 1; k <= 200; ++k) s.push_back(1.0 / (static_cast<double>(k) * k));
        const auto d = schatten_diagnostic(s, 1e-12);
        CHECK(d.verdict == SchattenVerdict::polynomial);
        CHECK_THAT(d.p_fit, WithinAbs(-2.0, 1e-10));
    }
    SECTION("k^-1/2 is flagged")
    {
        std::vector<double> s;
        for (int k = 1; k <= 200; ++k) s.push_back(1.0 / std::sqrt(static_cast<double>(k)));
        CHECK(schatten_diagnostic(s, 1e-12).verdict == SchattenVerdict::non_summable_suspect);
    }
    SECTION("too few values")
    {
        CHECK(schatten_diagnostic({1.0, 0.5, 0.25, 1e-20}, 1e-9).verdict == SchattenVerdict::insufficient_data);
        CHECK(schatten_diagnostic({}, 1e-9).verdict == SchattenVerdict::insufficient_data);
    }
    CHECK_THROWS_AS(schatten_diagnostic({1.0, 2.0}, 1e-9), std::invalid_argument);
    SECTION("diagonal block of L_0 at (8, 400)")
    {
        const auto g = make_grid(8.0, 400);
        const auto z = make_mask(g, Side::zero);
        const auto s = singular_values(project(assemble_L(Alpha{0.0}, g), z, z).entries);
        const auto d = schatten_diagnostic(s, 1e-9);
        CHECK(d.verdict == SchattenVerdict::super_polynomial);
    }
}
