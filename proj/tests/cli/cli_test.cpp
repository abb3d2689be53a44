#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "xsect/cli/commands.hpp"
#include "xsect/cli/config.hpp"
#include "xsect/cli/expression.hpp"
#include "xsect/forms/scenario.hpp"

using namespace xsect;
using namespace xsect::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = XSECT_FIXTURE_DIR;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("xsect_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

RunOptions options(const std::string& fixture, const fs::path& out) {
  RunOptions o;
  o.config = kFixtures / fixture;
  o.outDir = out;
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path writeText(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

int runBinary(const std::string& args) {
  const std::string cmd = std::string(XSECT_BINARY) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

double wrapDiff(double a, double b) {
  const double d = a - b;
  return std::abs(d - std::round(d));
}

}  // namespace

TEST_CASE("expression parser") {
  const forms::Point p{0.25, 0.5, 0.75};
  CHECK(Expression::parse("1 + 2*3")(p) == 7.0);
  CHECK(Expression::parse("(1 + 2)*3")(p) == 9.0);
  CHECK(Expression::parse("8/4/2")(p) == 1.0);
  CHECK(Expression::parse("2 - 3 - 4")(p) == -5.0);
  CHECK(Expression::parse("-x*-y")(p) == 0.125);
  CHECK(Expression::parse("--2")(p) == 2.0);
  CHECK(Expression::parse("z")(p) == 0.75);
  CHECK(Expression::parse("1e-2 + .5")(p) == doctest::Approx(0.51));
  CHECK(Expression::parse("sin(2*pi*x)")(p) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(Expression::parse(" cos( pi ) ")(p) == doctest::Approx(-1.0));
  CHECK(Expression::parse("0.5 + 0.05*sin(2*pi*x)")(p) == doctest::Approx(0.55));

  auto column = [](const std::string& text) {
    try {
      Expression::parse(text);
    } catch (const ExpressionError& e) {
      return e.column();
    }
    return 0;
  };
  CHECK(column("1 +") == 4);
  CHECK(column("x * w") == 5);
  CHECK(column("sin x") == 5);
  CHECK(column("(1 + 2") == 7);
  CHECK(column("1 2") == 3);
  CHECK(column("") == 1);
  CHECK(column("tan(x)") == 1);
  CHECK_THROWS_WITH_AS(Expression::parse("2 ^ 3"), doctest::Contains("column 3"), ExpressionError);
}

TEST_CASE("config loading") {
  const fs::path dir = scratch("config");

  SUBCASE("fixtures build the expected scenarios") {
    const auto c = loadConfig(kFixtures / "fixtureC_scaled.json");
    CHECK(c.dim == 3);
    CHECK(c.effectiveResolution() == 64);
    CHECK(c.metric.kind == MetricSpec::Kind::Diagonal);
    auto small = c;
    small.resolution = 8;
    const auto s = buildScenario(small);
    CHECK(s.metric.entry(5, 2, 2) == doctest::Approx(4.0 * std::numbers::pi * std::numbers::pi));
    CHECK(forms::validateScenario(s).ok());

    const auto b = loadConfig(kFixtures / "fixtureB.json");
    CHECK(b.effectiveSeeds() == 32);
    CHECK(b.pipeline.jacobianCheck);
  }

  SUBCASE("syntax errors carry line and column") {
    const auto p = writeText(dir, "bad.json", "{\n  \"domain\": {\"dim\": 2,}\n}\n");
    CHECK_THROWS_WITH_AS(loadConfig(p), doctest::Contains("bad.json:2:"), ConfigError);
  }

  SUBCASE("schema errors carry the JSON pointer") {
    const auto unknown = writeText(dir, "unknown.json", R"j({"vector_field": ["1", "0"], "metrc": "flat"})j");
    CHECK_THROWS_WITH_AS(loadConfig(unknown), doctest::Contains("/metrc: unknown key"), ConfigError);
    const auto expr = writeText(dir, "expr.json", R"j({"vector_field": ["1", "sin(2*pi*q)"]})j");
    CHECK_THROWS_WITH_AS(loadConfig(expr), doctest::Contains("/vector_field/1: unknown identifier 'q' at column 10"),
                         ConfigError);
    const auto count = writeText(dir, "count.json", R"j({"domain": {"dim": 3}, "vector_field": ["1", "0"]})j");
    CHECK_THROWS_WITH_AS(loadConfig(count), doctest::Contains("expected 3 entries"), ConfigError);
    const auto odd = writeText(dir, "odd.json", R"j({"domain": {"resolution": 15}, "vector_field": ["1", "0"]})j");
    CHECK_THROWS_WITH_AS(loadConfig(odd), doctest::Contains("/domain/resolution"), ConfigError);
    const auto hint = writeText(dir, "hint.json", R"j({"vector_field": ["1", "0"], "pipeline": {"class_hint": [1]}})j");
    CHECK_THROWS_WITH_AS(loadConfig(hint), doctest::Contains("/pipeline/class_hint"), ConfigError);
  }

  SUBCASE("data files round trip exactly") {
    auto c = loadConfig(kFixtures / "random_spd.json");
    c.resolution = 16;
    const auto s = buildScenario(c);
    writeScenarioConfig(s, dir / "copy.json", c.pipeline);
    const auto back = buildScenario(loadConfig(dir / "copy.json"));
    for (std::size_t p = 0; p < s.domain().size(); ++p) {
      for (int i = 0; i < 2; ++i) {
        CHECK(back.x[i][p] == s.x[i][p]);
        for (int j = 0; j < 2; ++j) CHECK(back.metric.entry(p, i, j) == s.metric.entry(p, i, j));
      }
      CHECK(back.omega.component(0)[p] == s.omega.component(0)[p]);
    }
    auto wrong = loadConfig(dir / "copy.json");
    wrong.resolution = 32;
    CHECK_THROWS_WITH_AS(buildScenario(wrong), doctest::Contains("expected 4096 values"), ConfigError);
  }

  SUBCASE("class hint flag") {
    CHECK(parseClassHint("1,0") == std::vector<long long>{1, 0});
    CHECK(parseClassHint("2,-1,3") == std::vector<long long>{2, -1, 3});
    CHECK_THROWS_AS(parseClassHint("1"), ConfigError);
    CHECK_THROWS_AS(parseClassHint("1,x"), ConfigError);
    CHECK_THROWS_AS(parseClassHint("1,,2"), ConfigError);
  }
}

TEST_CASE("check command") {
  const fs::path out = scratch("check");
  {
    const auto r = cmdCheck(options("fixtureA.json", out));
    CHECK(r.exitCode == 0);
    CHECK(r.report["criterion"]["margin"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.report["verdict"] == "PASS");
  }
  {
    const auto r = cmdCheck(options("fixtureB.json", out));
    CHECK(r.exitCode == 0);
    CHECK(std::abs(r.report["criterion"]["margin"].get<double>() - 0.88834) <= 1e-4);
    CHECK(r.report["harmonicity"]["closed"] == true);
  }
  {
    const auto r = cmdCheck(options("fixtureC_scaled.json", out));
    CHECK(r.exitCode == 2);
    CHECK(std::abs(r.report["criterion"]["margin"].get<double>()) <= 1e-6);
    CHECK(r.report["verdict"] == "FAIL");
  }
  {
    const auto r = cmdCheck(options("invalid_volume.json", out));
    CHECK(r.exitCode == 3);
    CHECK(r.report["verdict"] == "INVALID_SCENARIO");
    CHECK(r.report["validation"]["ok"] == false);
    CHECK_FALSE(r.report.contains("criterion"));
  }
  {
    const fs::path bad = writeText(out, "bad.json", "{\"vector_field\": [\"1\", \"2 *\"]}");
    std::ostringstream o, e;
    RunOptions opt;
    opt.config = bad;
    opt.outDir = out;
    CHECK(runCommand("check", opt, o, e) == 64);
    CHECK(e.str().find("/vector_field/1") != std::string::npos);
    CHECK(e.str().find("column 4") != std::string::npos);
    CHECK(o.str().empty());
  }
}

TEST_CASE("section command") {
  SUBCASE("fixture B") {
    const fs::path out = scratch("section_b");
    const auto r = cmdSection(options("fixtureB.json", out));
    CHECK(r.exitCode == 0);
    CHECK(r.report["verdict"] == "SECTION_FOUND_CRITERION_PASS");
    const auto& pm = r.report["poincare"];
    CHECK(pm["seeds"].get<int>() > 0);
    CHECK(pm["tau_min"].get<double>() > 0.0);
    CHECK(pm["tau_max"].get<double>() >= pm["tau_mean"].get<double>());
    CHECK(pm["invariant_measure"]["passed"] == true);
    CHECK(pm["jacobian"]["max_deviation"].get<double>() <= 1e-5);
    CHECK(r.report["section"]["honda"]["passed"] == true);
    CHECK(r.report["positivity"]["min_pairing"].get<double>() == doctest::Approx(1.225).epsilon(1e-9));
    CHECK(fs::exists(out / "section_samples.csv"));
    CHECK(slurp(out / "poincare.csv").rfind("seed_x,seed_y,tau,image_x,image_y\n", 0) == 0);
    CHECK(slurp(out / "section_samples.csv").rfind("x,y,F_residual,nx,ny\n", 0) == 0);
  }

  SUBCASE("fixture C-flat has no section") {
    const fs::path out = scratch("section_c");
    const auto r = cmdSection(options("fixtureC_flat.json", out));
    CHECK(r.exitCode == 4);
    CHECK(r.report["verdict"] == "NO_SECTION_CONSTRUCTED");
    CHECK(r.report["positivity"]["omega_sup_norm"].get<double>() <= 1e-8);
    CHECK(r.report["positivity"]["min_pairing"].get<double>() <= 1e-8);
    CHECK_FALSE(fs::exists(out / "poincare.csv"));
  }

  SUBCASE("fixture A with class hint (1, 0) returns to the seed") {
    const fs::path out = scratch("section_a");
    auto o = options("fixtureA.json", out);
    o.classHint = std::vector<long long>{1, 0};
    o.seeds = 16;
    o.resolution = 32;
    const auto r = cmdSection(o);
    CHECK(r.exitCode == 0);
    CHECK(r.report["periods"]["from_hint"] == true);
    std::istringstream rows(slurp(out / "poincare.csv"));
    std::string line;
    std::getline(rows, line);
    int count = 0;
    while (std::getline(rows, line)) {
      double sx, sy, tau, ix, iy;
      char c;
      std::istringstream(line) >> sx >> c >> sy >> c >> tau >> c >> ix >> c >> iy;
      CHECK(wrapDiff(iy, sy) <= 1e-9);
      CHECK(tau == doctest::Approx(1.0).epsilon(1e-9));
      ++count;
    }
    CHECK(count == 16);
  }

  SUBCASE("invalid scenario") {
    const auto r = cmdSection(options("invalid_volume.json", scratch("section_invalid")));
    CHECK(r.exitCode == 3);
    CHECK(r.report["verdict"] == "INVALID_SCENARIO");
  }
}

TEST_CASE("suspend command") {
  SUBCASE("rotation 0.25, unit roof") {
    const auto r = cmdSuspend(options("suspension_rotation.json", scratch("susp_rot")));
    CHECK(r.exitCode == 0);
    CHECK(r.report["round_trip"]["map_error"].get<double>() <= 1e-6);
  }
  SUBCASE("rotation 0.25, roof 1 + 0.1 cos 2 pi y") {
    const fs::path out = scratch("susp_roof");
    const auto r = cmdSuspend(options("suspension_roof.json", out));
    CHECK(r.exitCode == 0);
    CHECK(r.report["round_trip"]["map_error"].get<double>() <= 1e-5);
    CHECK(r.report["round_trip"]["tau_error"].get<double>() <= 1e-5);
    CHECK(fs::exists(out / "suspended.json"));
    CHECK(fs::exists(out / "suspended_metric.dat"));
    CHECK(r.report["verdict"] == "SECTION_FOUND_CRITERION_PASS");
  }
  SUBCASE("identity base, roof 2") {
    const auto r = cmdSuspend(options("suspension_identity.json", scratch("susp_id")));
    CHECK(r.exitCode == 0);
    CHECK(std::abs(r.report["poincare"]["tau_min"].get<double>() - 2.0) <= 1e-8);
    CHECK(std::abs(r.report["poincare"]["tau_max"].get<double>() - 2.0) <= 1e-8);
  }
  SUBCASE("non-translation base maps are rejected") {
    const fs::path out = scratch("susp_bad");
    const auto p = writeText(out, "bad.json",
                             R"j({"domain": {"resolution": 16}, "suspension": {"base_map": ["y + 0.1*sin(2*pi*y)"], "roof": "1"}})j");
    std::ostringstream o, e;
    RunOptions opt;
    opt.config = p;
    opt.outDir = out;
    CHECK(runCommand("suspend", opt, o, e) == 1);
    CHECK(e.str().find("base map must be a translation") != std::string::npos);
  }
}

TEST_CASE("identities command") {
  SUBCASE("flat torus") {
    const auto r = cmdIdentities(options("flat_2d.json", scratch("id_flat")));
    CHECK(r.exitCode == 0);
    CHECK(r.report["passed"] == true);
    CHECK(r.report["random_forms"] == 100);
  }
  SUBCASE("random SPD metric field") {
    const auto r = cmdIdentities(options("random_spd.json", scratch("id_spd")));
    CHECK(r.exitCode == 0);
    for (const auto& id : r.report["identities"]) {
      if (id["name"] == "star_star_sign" || id["name"] == "star_isometry") {
        CHECK(id["residual"].get<double>() <= 1e-9);
        CHECK(id["samples"].get<int>() > 0);
      }
    }
  }
  SUBCASE("fixture B norm chain") {
    auto o = options("fixtureB.json", scratch("id_b"));
    const auto r = cmdIdentities(o);
    CHECK(r.exitCode == 0);
    for (const auto& id : r.report["identities"])
      if (id["name"] == "norm_chain_scenario") CHECK(id["residual"].get<double>() <= 1e-8);
  }
}

TEST_CASE("executable exit codes and determinism") {
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  const std::string cfg = (kFixtures / "fixtureB.json").string();
  CHECK(runBinary("section --config " + cfg + " --out " + a.string()) == 0);
  CHECK(runBinary("section --config " + cfg + " --out " + b.string()) == 0);
  for (const char* f : {"report.json", "section_samples.csv", "poincare.csv"}) {
    CAPTURE(f);
    const std::string x = slurp(a / f);
    CHECK_FALSE(x.empty());
    CHECK(x == slurp(b / f));
  }

  CHECK(runBinary("check --config " + (kFixtures / "fixtureA.json").string() + " --out " + a.string()) == 0);
  CHECK(runBinary("check --config " + (kFixtures / "fixtureC_scaled.json").string() + " --out " + a.string()) == 2);
  CHECK(runBinary("check --config " + (kFixtures / "invalid_volume.json").string() + " --out " + a.string()) == 3);
  CHECK(runBinary("section --config " + (kFixtures / "fixtureC_scaled.json").string() + " --out " + a.string()) == 4);
  CHECK(runBinary("check --config " + (a / "missing.json").string()) == 64);
  CHECK(runBinary("check") == 64);
  CHECK(runBinary("check --config " + cfg + " --class-hint 1") == 64);
  CHECK(runBinary("section --config " + (kFixtures / "fixtureA.json").string() +
                  " --class-hint 1,0 --resolution 32 --seeds 8 --out " + a.string()) == 0);
}
