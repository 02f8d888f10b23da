#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <unistd.h>

#include "whs/cli.hpp"

using namespace whs;
namespace fs = std::filesystem;
using Catch::Matchers::WithinAbs;

namespace {

class TempDir {
public:
    explicit TempDir(const std::string& tag)
        : path_(fs::temp_directory_path() / ("whs_test_" + tag + "_" + std::to_string(::getpid())))
    {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    [[nodiscard]] const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

int run(std::vector<std::string> args, std::string* out = nullptr)
{
    args.insert(args.begin(), "whs_cli");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream log, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), log, err);
    if (out) *out = log.str() + err.str();
    return code;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> read_symbol_rows(const fs::path& p)
{
    std::ifstream f(p);
    std::string line;
    std::getline(f, line);
    REQUIRE(line == "xi,sigma_gamma,sigma_quadrature,abs_diff");
    std::vector<std::vector<double>> rows;
    while (std::getline(f, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        REQUIRE(row.size() == 4);
        rows.push_back(row);
    }
    return rows;
}

} // namespace

TEST_CASE("symbol command")
{
    TempDir dir("symbol");
    SECTION("alpha = 0")
    {
        REQUIRE(run({"symbol", "--alpha", "0", "--out", dir.path().string()}) == exit_ok);
        const auto rows = read_symbol_rows(dir.path() / "symbol.csv");
        REQUIRE(rows.size() == 101);
        const auto& mid = rows[50];
        CHECK(mid[0] == 0.0);
        CHECK_THAT(mid[1], WithinAbs(std::numbers::pi, 1e-12));
        CHECK(mid[3] <= 1e-8);
        for (std::size_t k = 0; k < rows.size(); ++k) {
            CHECK(rows[k][1] == rows[100 - k][1]);
            CHECK(rows[k][3] <= 1e-8);
        }
    }
    SECTION("alpha = 0.5")
    {
        REQUIRE(run({"symbol", "--alpha", "0.5", "--out", dir.path().string()}) == exit_ok);
        const auto rows = read_symbol_rows(dir.path() / "symbol.csv");
        CHECK_THAT(rows[50][1], WithinAbs(1.0, 1e-12));
        CHECK_THAT(rows[60][0], WithinAbs(1.0, 1e-15));
    }
}

TEST_CASE("spectrum command")
{
    TempDir dir("spectrum");
    const auto report = [&] { return Json::parse(slurp(dir.path() / "spectral_report.json")); };

    SECTION("carleman at (8, 400)")
    {
        REQUIRE(run({"spectrum", "--kernel", "carleman", "--R", "8", "--N", "400", "--out", dir.path().string()}) ==
                exit_ok);
        const auto j = report();
        CHECK(validate_spectral_report(j).empty());
        REQUIRE(j["predicted"].size() == 1);
        CHECK(j["predicted"][0]["lo"] == 0.0);
        CHECK_THAT(j["predicted"][0]["hi"].get<double>(), WithinAbs(std::numbers::pi, 1e-12));
        CHECK(j["predicted"][0]["multiplicity"] == 2);
        REQUIRE(j["steps"].size() == 1);
        CHECK(j["steps"][0]["outliers"].empty());
        CHECK(j["steps"][0]["hypothesis_ok"] == true);
        std::ifstream eigs(dir.path() / "eigs_R8_N400.csv");
        std::size_t lines = 0;
        double prev = -INFINITY, x = 0.0;
        while (eigs >> x) {
            CHECK(x >= prev);
            prev = x;
            ++lines;
        }
        CHECK(lines == 400);
    }
    SECTION("family (0,1,1,1): one interval from the infinity end")
    {
        REQUIRE(run({"spectrum", "--kernel", "rational(0,1,1,1)", "--R", "6", "--N", "200", "--out",
                     dir.path().string()}) == exit_ok);
        const auto j = report();
        REQUIRE(j["predicted"].size() == 1);
        CHECK(j["predicted"][0]["origin"] == "infinity_end");
        CHECK(j["predicted"][0]["multiplicity"] == 1);
        CHECK_THAT(j["predicted"][0]["hi"].get<double>(), WithinAbs(std::numbers::pi, 1e-12));
    }
    SECTION("family (1,-1,1,1): [-pi, pi] with negative eigenvalues")
    {
        REQUIRE(run({"spectrum", "--kernel", "rational(1,-1,1,1)", "--R", "6", "--N", "200", "--out",
                     dir.path().string()}) == exit_ok);
        const auto j = report();
        REQUIRE(j["predicted"].size() == 2);
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& p : j["predicted"]) {
            lo = std::min(lo, p["lo"].get<double>());
            hi = std::max(hi, p["hi"].get<double>());
        }
        CHECK_THAT(lo, WithinAbs(-std::numbers::pi, 1e-12));
        CHECK_THAT(hi, WithinAbs(std::numbers::pi, 1e-12));
        CHECK(j["steps"][0]["eig_min"].get<double>() < -1.0);
    }
    SECTION("explicit rational weight")
    {
        std::string log;
        REQUIRE(run({"spectrum", "--kernel", "power", "--weight", "rational(1,2)", "--alpha", "0.5", "--R", "4", "--N",
                     "60", "--out", dir.path().string()},
                    &log) == exit_ok);
        CHECK(report()["steps"][0]["hypothesis_ok"].is_boolean());
    }
    SECTION("empty prediction is a configuration error")
    {
        CHECK(run({"spectrum", "--kernel", "rational(0,0)", "--out", dir.path().string()}) == exit_usage);
    }
    SECTION("carleman needs alpha = 0")
    {
        CHECK(run({"spectrum", "--kernel", "carleman", "--alpha", "0.5", "--out", dir.path().string()}) == exit_usage);
    }
}

TEST_CASE("report validators reject malformed documents")
{
    CHECK_FALSE(validate_spectral_report(Json::array()).empty());
    Json j = {{"alpha", 0.0},
              {"family", Json::object()},
              {"predicted", {{{"lo", 0.0}, {"hi", 1.0}, {"multiplicity", 0}}}},
              {"steps", {{{"R", 8.0}, {"N", 400}, {"max_gap", 0.1}, {"hausdorff", 0.1}, {"hypothesis_ok", true},
                          {"outliers", {"x"}}}}}};
    const auto errs = validate_spectral_report(j);
    CHECK(errs.size() == 2);
    j["predicted"][0]["multiplicity"] = 1;
    j["steps"][0]["outliers"] = Json::array({1.5});
    CHECK(validate_spectral_report(j).empty());

    Json v = {{"verdict", "maybe"}, {"checks", {{{"name", "x"}, {"anchor", ""}, {"grids", Json::array()},
                                                 {"metrics", Json::array({1})}, {"verdict", "pass"}}}}};
    CHECK(validate_verification_report(v).size() == 3);
}

TEST_CASE("verify command")
{
    TempDir dir("verify");
    SECTION("alpha = -0.5 is rejected")
    {
        CHECK(run({"verify", "--alpha", "-0.5", "--out", dir.path().string()}) == exit_usage);
        CHECK_FALSE(fs::exists(dir.path() / "verification_report.json"));
    }
    SECTION("single coarse step is deterministic")
    {
        const auto a = dir.path() / "a";
        const auto b = dir.path() / "b";
        const int ca = run({"verify", "--R", "4", "--N", "50", "--out", a.string()});
        const int cb = run({"verify", "--R", "4", "--N", "50", "--out", b.string()});
        CHECK(ca == cb);
        CHECK((ca == exit_ok || ca == exit_fail));
        CHECK(slurp(a / "verification_report.json") == slurp(b / "verification_report.json"));
        const auto j = Json::parse(slurp(a / "verification_report.json"));
        CHECK(validate_verification_report(j).empty());
        CHECK(j["ladder"].size() == 1);
        CHECK((j["verdict"] == "pass") == (ca == exit_ok));
    }
    SECTION("unwritable output directory")
    {
        std::ofstream(dir.path() / "file") << "x";
        CHECK(run({"verify", "--checks", "persymmetry", "--out", (dir.path() / "file" / "sub").string()}) == exit_usage);
    }
    SECTION("check selection and config file")
    {
        const auto cfg = dir.path() / "cfg.json";
        std::ofstream(cfg) << R"({"alpha": 0.5, "ladder": [[6, 200], {"R": 8, "N": 400}], "checks": ["persymmetry", "pushforward"]})";
        REQUIRE(run({"verify", "--config", cfg.string(), "--out", dir.path().string()}) == exit_ok);
        const auto j = Json::parse(slurp(dir.path() / "verification_report.json"));
        CHECK(j["alpha"] == 0.5);
        CHECK(j["ladder"].size() == 2);
        REQUIRE(j["checks"].size() == 2);
        CHECK(j["checks"][0]["name"] == "persymmetry");
        CHECK(j["checks"][1]["name"] == "pushforward");
        // flags win over the file
        REQUIRE(run({"verify", "--config", cfg.string(), "--alpha", "0", "--checks", "persymmetry", "--out",
                     dir.path().string()}) == exit_ok);
        const auto k = Json::parse(slurp(dir.path() / "verification_report.json"));
        CHECK(k["alpha"] == 0.0);
        CHECK(k["checks"].size() == 1);
    }
    SECTION("configuration errors")
    {
        const auto cfg = dir.path() / "bad.json";
        std::ofstream(cfg) << R"({"alpha": 0, "colour": "blue"})";
        CHECK(run({"verify", "--config", cfg.string(), "--out", dir.path().string()}) == exit_usage);
        CHECK(run({"verify", "--config", (dir.path() / "missing.json").string()}) == exit_usage);
        CHECK(run({"verify", "--checks", "bogus", "--out", dir.path().string()}) == exit_usage);
        CHECK(run({"verify", "--N", "51", "--out", dir.path().string()}) == exit_usage);
        CHECK(run({"verify", "--delta", "-1", "--out", dir.path().string()}) == exit_usage);
        CHECK(run({"frobnicate"}) == exit_usage);
        CHECK(run({}) == exit_usage);
        CHECK(run({"verify", "--no-such-flag"}) == exit_usage);
        CHECK(run({"--help"}) == exit_ok);
    }
}

TEST_CASE("verify defaults at alpha = 0 pass")
{
    TempDir dir("defaults");
    std::string log;
    CHECK(run({"verify", "--out", dir.path().string()}, &log) == exit_ok);
    INFO(log);
    const auto j = Json::parse(slurp(dir.path() / "verification_report.json"));
    CHECK(j["verdict"] == "pass");
    CHECK(j["checks"].size() == 8);
}

TEST_CASE("formatting helpers")
{
    CHECK(format_g17(0.1) == "0.10000000000000001");
    CHECK(format_g17(-2.0) == "-2");
    CHECK(eigenvalue_file_name({8.0, 400}) == "eigs_R8_N400.csv");
    CHECK(eigenvalue_file_name({6.5, 200}) == "eigs_R6.5_N200.csv");
    CHECK(parse_builtin("rational(1, -2.5)").params == std::vector<double>{1.0, -2.5});
    CHECK_THROWS_AS(parse_builtin("rational(1,x)"), ConfigError);
    CHECK_THROWS_AS(parse_builtin("rational(1,2"), ConfigError);
}
