#include <doctest.h>

#include "regcalc/config.hpp"
#include "regcalc/runner.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace regcalc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("regcalc_unit_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("config parsing") {
    const auto c = Config::parse("# comment\n\nrun.command = qv\n  grid.n=64 \nrun.seed=3\nrun.seed=4\n");
    CHECK(*c.get("run.command") == "qv");
    CHECK(*c.get("grid.n") == "64");
    CHECK(*c.get("run.seed") == "4");
    CHECK_FALSE(c.get("grid.T").has_value());
    CHECK_THROWS_AS(Config::parse("no equals sign"), ConfigError);
    CHECK_THROWS_AS(Config::parse("nosection=1"), ConfigError);
    CHECK_THROWS_AS(Config::load("/nonexistent/regcalc.ini"), ConfigError);
}

TEST_CASE("resolution fills defaults and rejects unknown keys") {
    CHECK_THROWS_WITH_AS(resolve(Config{}), "missing required key 'run.command'", ConfigError);
    auto c = Config::parse("run.command=qv\n");
    const auto r = resolve(c);
    CHECK(r.str("grid.n") == "1024");
    CHECK(r.counts("est.eps_ladder") == std::vector<std::size_t>{64, 32, 16, 8, 4, 2});
    c.set("kolmo.dim", "3");
    CHECK_THROWS_AS(resolve(c), ConfigError);
    CHECK_THROWS_AS(resolve(Config::parse("run.command=fly\n")), ConfigError);
    CHECK_THROWS_AS(resolve(Config::parse("run.command=qv\nrun.seed=-1\n")), ConfigError);
    CHECK_THROWS_AS(resolve(Config::parse("run.command=qv\ngrid.n=abc\n")).count("grid.n"), ConfigError);
}

TEST_CASE("numbers are parsed strictly") {
    CHECK(parse_real(" 2.5 ", "x") == 2.5);
    CHECK_THROWS_AS(parse_real("2.5x", "x"), ConfigError);
    CHECK(parse_integer("-7", "x") == -7);
    CHECK_THROWS_AS(parse_integer("7.0", "x"), ConfigError);
}

TEST_CASE("run maps failures onto exit codes") {
    std::ostringstream log;
    CHECK(run(Config{}, log) == kExitValidation);
    auto bad = Config::parse("run.command=qv\ngrid.n=1\n");
    bad.set("run.out", scratch("bad").string());
    CHECK(run(bad, log) == kExitValidation);
}

TEST_CASE("a run can be replayed from its manifest") {
    const auto first = scratch("first"), second = scratch("second");
    auto c = Config::parse("run.command=qv\ngrid.n=128\nest.paths=5\nrun.seed=12\n");
    c.set("run.out", first.string());
    std::ostringstream log;
    REQUIRE(run(c, log) == kExitOk);
    REQUIRE(fs::exists(first / "manifest.ini"));
    REQUIRE(fs::exists(first / "qv.csv"));
    CHECK(fs::exists(first / "plot_qv.py"));

    auto again = Config::load((first / "manifest.ini").string());
    again.set("run.out", second.string());
    REQUIRE(run(again, log) == kExitOk);
    CHECK(slurp(first / "qv.csv") == slurp(second / "qv.csv"));
    const auto csv = slurp(first / "qv.csv");
    CHECK(csv.rfind("eps,t,estimate,stderr\n", 0) == 0);
}
