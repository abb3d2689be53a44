#include "xsect/cli/commands.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <fstream>
#include <sstream>

#include "xsect/cli/config.hpp"
#include "xsect/cli/identities.hpp"
#include "xsect/criterion/criterion.hpp"
#include "xsect/criterion/honda.hpp"
#include "xsect/forms/operators.hpp"
#include "xsect/projection/homotopy.hpp"
#include "xsect/section/circle_map.hpp"
#include "xsect/section/export.hpp"
#include "xsect/section/periods.hpp"
#include "xsect/section/poincare.hpp"
#include "xsect/section/suspension.hpp"

namespace xsect::cli {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kSectionPass = "SECTION_FOUND_CRITERION_PASS";
constexpr const char* kSectionInconclusive = "SECTION_FOUND_CRITERION_INCONCLUSIVE";
constexpr const char* kNoSection = "NO_SECTION_CONSTRUCTED";
constexpr const char* kInvalid = "INVALID_SCENARIO";

ordered_json point(const forms::Point& p, int dim) {
  ordered_json j = ordered_json::array();
  for (int i = 0; i < dim; ++i) j.push_back(p[i]);
  return j;
}

ScenarioConfig loadWithOverrides(const RunOptions& o) {
  ScenarioConfig c = loadConfig(o.config);
  if (o.resolution) {
    if (*o.resolution < 8 || *o.resolution % 2 != 0) throw ConfigError("--resolution must be even and at least 8");
    c.resolution = *o.resolution;
  }
  if (o.seeds) {
    if (*o.seeds < 1) throw ConfigError("--seeds must be positive");
    c.pipeline.seeds = *o.seeds;
  }
  if (o.classHint) {
    if (o.classHint->size() != static_cast<std::size_t>(c.dim))
      throw ConfigError("--class-hint needs " + std::to_string(c.dim) + " entries");
    c.pipeline.classHint = o.classHint;
  }
  return c;
}

ordered_json header(const char* command, const ScenarioConfig& c) {
  ordered_json j;
  j["command"] = command;
  j["config"] = c.source.filename().string();
  j["scenario"] = {{"dim", c.dim}, {"resolution", c.effectiveResolution()}};
  return j;
}

ordered_json validationJson(const forms::ValidationReport& v) {
  ordered_json checks = ordered_json::array();
  for (const auto& c : v.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"residual", c.residual}});
  return {{"ok", v.ok()}, {"checks", checks}};
}

ordered_json criterionJson(const criterion::CriterionReport& r) {
  return {{"m_squared", r.mSquared},
          {"delta_norm", r.deltaNorm},
          {"d_flat_norm", r.dFlatNorm},
          {"margin", r.margin},
          {"guard_band", r.guardBand},
          {"verdict", criterion::verdictName(r.verdict)},
          {"norm_chain_residual", r.normChainResidual}};
}

ordered_json harmonicityJson(const criterion::HarmonicityReport& h) {
  return {{"closed_norm", h.closedNorm}, {"coclosed_norm", h.coclosedNorm}, {"tol", h.tol},
          {"closed", h.closed},          {"coclosed", h.coclosed},          {"harmonic", h.harmonic}};
}

/// Builds the scenario; a metric that is not positive definite is reported as
/// an invalid scenario rather than a configuration error.
std::optional<forms::Scenario> scenarioOrInvalid(const ScenarioConfig& c, ordered_json& report, int& exitCode) {
  try {
    return buildScenario(c);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    report["validation"] = {{"ok", false}, {"error", e.what()}};
    report["verdict"] = kInvalid;
    exitCode = exit_code::invalidScenario;
    return std::nullopt;
  }
}

struct SectionRun {
  int exitCode = exit_code::ok;
  std::optional<section::CircleMapResult> map;
  std::optional<section::CrossSection> section;
  std::optional<section::PoincareData> poincare;
};

void writeFile(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw Error(path.string() + ": cannot write");
  body(out);
}

/// Criterion, closed form, rationalization, section and return map. Fills
/// `report` stage by stage; the first failing stage sets the verdict.
SectionRun runSectionPipeline(const forms::Scenario& s, const ScenarioConfig& c, const fs::path& outDir,
                              ordered_json& report) {
  SectionRun run;
  const int n = s.dim();
  const auto validation = forms::validateScenario(s);
  report["validation"] = validationJson(validation);
  if (!validation.ok()) {
    report["verdict"] = kInvalid;
    run.exitCode = exit_code::invalidScenario;
    return run;
  }
  const auto crit = criterion::checkCriterion(s);
  report["criterion"] = criterionJson(crit);
  report["harmonicity"] = harmonicityJson(criterion::harmonicityCertificate(s));

  auto noSection = [&](const std::string& why) {
    report["failure"] = why;
    report["verdict"] = kNoSection;
    run.exitCode = exit_code::noSection;
    return run;
  };

  const auto cert = criterion::buildClosedOneForm(s);
  ordered_json pos;
  pos["accepted"] = cert.accepted;
  pos["min_pairing"] = cert.minPairing;
  pos["worst_point"] = point(cert.worstPoint, n);
  pos["distance"] = cert.distance;
  pos["d_bound"] = cert.approximation.dBound;
  pos["lower_bound_check"] = cert.lowerBoundCheck;
  pos["pointwise_chain_bound"] = cert.pointwiseChainBound;
  pos["omega_sup_norm"] = forms::supNorm(cert.omega, s.metric);
  pos["omega_max_coefficient"] = cert.omega.maxAbsCoefficient();
  pos["harmonic_part"] = cert.approximation.harmonicPart;
  report["positivity"] = pos;
  if (!cert.accepted) return noSection(cert.failure.empty() ? "closed form not positive on X" : cert.failure);

  try {
    section::RationalizeOptions ro;
    ro.qMax = c.pipeline.qMax;
    ro.classHint = c.pipeline.classHint;
    ro.positivityMargin = s.tol.positivityMargin;
    const double budget = c.pipeline.budget.value_or(0.5 * cert.minPairing);
    const auto pd = section::rationalizePeriods(cert.omega, s.x, budget, ro);
    report["periods"] = {{"c", pd.c},
                         {"k", pd.k},
                         {"q", pd.q},
                         {"scale", pd.scale},
                         {"from_hint", pd.fromHint},
                         {"perturbation_pairing_sup", pd.perturbationPairingSup},
                         {"budget", pd.budget},
                         {"min_pairing", pd.minPairing}};

    run.map = section::circleMap(cert.omega, pd, s.x);
    const auto& f = run.map->map;
    report["circle_map"] = {{"transversality_margin", run.map->transversalityMargin},
                            {"form_residual", run.map->formResidual}};

    run.section = section::extractSection(f, s.domain());
    const auto honda = criterion::hondaCheck(run.section->samples, s);
    report["section"] = {{"sample_count", run.section->samples.size()},
                         {"transversality_margin", run.section->transversalityMargin},
                         {"max_residual", run.section->maxResidual},
                         {"honda", {{"min", honda.minValue},
                                    {"max", honda.maxValue},
                                    {"min_abs", honda.minAbsValue},
                                    {"threshold", honda.threshold},
                                    {"uniform_sign", honda.uniformSign},
                                    {"passed", honda.passed}}}};
    if (!honda.passed) return noSection("section is not transverse to X");

    const auto seeds = section::sectionSeeds(f, c.effectiveSeeds());
    const section::FlowField flow(s.x);
    run.poincare = section::poincareMap(seeds, flow, f, 0.0, run.map->transversalityMargin);
    const auto& pdm = *run.poincare;
    double tmin = pdm.returnTimes.front(), tmax = tmin, sum = 0.0;
    for (double t : pdm.returnTimes) {
      tmin = std::min(tmin, t);
      tmax = std::max(tmax, t);
      sum += t;
    }
    ordered_json pj;
    pj["seeds"] = pdm.seeds.size();
    pj["tau_min"] = tmin;
    pj["tau_max"] = tmax;
    pj["tau_mean"] = sum / static_cast<double>(pdm.returnTimes.size());
    pj["max_event_residual"] = pdm.stats.maxEventResidual;
    pj["min_rate"] = pdm.stats.minRate;
    pj["step"] = pdm.stats.step;
    pj["total_steps"] = pdm.stats.totalSteps;
    pj["max_steps"] = pdm.stats.maxSteps;
    const auto inv = section::invariantMeasureCheck(pdm, s, 16, c.pipeline.rngSeed);
    if (inv.applicable) {
      pj["invariant_measure"] = {{"arcs", inv.arcs},
                                 {"max_difference", inv.maxDifference},
                                 {"tolerance", inv.tolerance},
                                 {"passed", inv.passed}};
    } else {
      pj["invariant_measure"] = {{"applicable", false}};
    }
    if (c.pipeline.jacobianCheck) {
      const auto jac = section::flowJacobianCheck(s, n == 2 ? 16 : 6);
      pj["jacobian"] = {{"seeds", jac.seeds}, {"time", jac.time}, {"max_deviation", jac.maxDeviation}};
    }
    report["poincare"] = pj;
  } catch (const Error& e) {
    return noSection(e.what());
  }

  fs::create_directories(outDir);
  writeFile(outDir / c.output.sectionCsv,
            [&](std::ostream& o) { section::writeSectionCsv(o, *run.section, run.map->map, n); });
  writeFile(outDir / c.output.poincareCsv, [&](std::ostream& o) { section::writePoincareCsv(o, *run.poincare, n); });
  report["artifacts"] = {{"section_csv", c.output.sectionCsv}, {"poincare_csv", c.output.poincareCsv}};
  report["verdict"] = crit.verdict == criterion::Verdict::Pass ? kSectionPass : kSectionInconclusive;
  return run;
}

double wrapDiff(double a, double b) {
  const double d = a - b;
  return std::abs(d - std::round(d));
}

}  // namespace

std::vector<long long> parseClassHint(const std::string& text) {
  std::vector<long long> k;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (item.empty() || used != item.size()) throw ConfigError("--class-hint: malformed entry '" + item + "'");
    k.push_back(v);
  }
  if (k.size() < 2 || k.size() > 3) throw ConfigError("--class-hint expects 2 or 3 comma-separated integers");
  return k;
}

CommandResult cmdCheck(const RunOptions& o) {
  const ScenarioConfig c = loadWithOverrides(o);
  if (c.suspension) throw ConfigError(c.source.string() + ": check needs a flow, not a suspension");
  CommandResult r;
  r.reportFile = c.output.report;
  r.report = header("check", c);
  const auto s = scenarioOrInvalid(c, r.report, r.exitCode);
  if (!s) return r;
  const auto validation = forms::validateScenario(*s);
  r.report["validation"] = validationJson(validation);
  if (!validation.ok()) {
    r.report["verdict"] = kInvalid;
    r.exitCode = exit_code::invalidScenario;
    return r;
  }
  const auto crit = criterion::checkCriterion(*s);
  r.report["criterion"] = criterionJson(crit);
  r.report["harmonicity"] = harmonicityJson(criterion::harmonicityCertificate(*s));
  r.report["verdict"] = criterion::verdictName(crit.verdict);
  r.exitCode = crit.verdict == criterion::Verdict::Pass ? exit_code::ok : exit_code::criterionFail;
  return r;
}

CommandResult cmdSection(const RunOptions& o) {
  const ScenarioConfig c = loadWithOverrides(o);
  if (c.suspension) throw ConfigError(c.source.string() + ": use the suspend command for a suspension config");
  CommandResult r;
  r.reportFile = c.output.report;
  r.report = header("section", c);
  const auto s = scenarioOrInvalid(c, r.report, r.exitCode);
  if (!s) return r;
  r.exitCode = runSectionPipeline(*s, c, o.outDir, r.report).exitCode;
  return r;
}

CommandResult cmdSuspend(const RunOptions& o) {
  ScenarioConfig c = loadWithOverrides(o);
  if (!c.suspension) throw ConfigError(c.source.string() + ": suspend needs a suspension block");
  const int n = c.dim;
  const int m = n - 1;
  CommandResult r;
  r.reportFile = c.output.report;
  r.report = header("suspend", c);

  const auto spec = suspensionSpec(*c.suspension);
  const auto susp = section::suspend(spec, c.effectiveResolution());

  // The section x = 0 recovers the base map unless a class is configured.
  PipelineSpec pipeline = c.pipeline;
  if (!pipeline.classHint) {
    pipeline.classHint = std::vector<long long>(static_cast<std::size_t>(n), 0);
    (*pipeline.classHint)[0] = 1;
  }
  fs::create_directories(o.outDir);
  const fs::path suspended = o.outDir / "suspended.json";
  writeScenarioConfig(susp.scenario, suspended, pipeline);

  ScenarioConfig sc = loadConfig(suspended);
  sc.output = c.output;
  const forms::Scenario s = buildScenario(sc);
  ordered_json sr;
  sr["translation"] = susp.translation;
  sr["config"] = suspended.filename().string();
  r.report["suspension"] = sr;

  const SectionRun run = runSectionPipeline(s, sc, o.outDir, r.report);
  r.exitCode = run.exitCode;
  if (!run.poincare) return r;

  // Round trip against the base map and the roof integrated along the orbit.
  const auto gl = projection::Quadrature::gaussLegendre(64);
  double mapError = 0.0, tauError = 0.0;
  const auto& pd = *run.poincare;
  for (std::size_t i = 0; i < pd.seeds.size(); ++i) {
    forms::Point y{0.0, 0.0, 0.0};
    for (int a = 0; a < m; ++a) y[a] = pd.seeds[i][a + 1];
    const forms::Point expected = spec.baseMap(y);
    for (int a = 0; a < m; ++a) mapError = std::max(mapError, wrapDiff(pd.images[i][a + 1], expected[a]));
    double oracle = 0.0;
    for (int q = 0; q < gl.size(); ++q) {
      forms::Point yt = y;
      for (int a = 0; a < m; ++a) yt[a] += susp.translation[a] * gl.nodes[q];
      oracle += gl.weights[q] * spec.roof(yt);
    }
    tauError = std::max(tauError, std::abs(pd.returnTimes[i] - oracle));
  }
  r.report["round_trip"] = {{"map_error", mapError}, {"tau_error", tauError}, {"tau_oracle_nodes", gl.size()}};
  return r;
}

CommandResult cmdIdentities(const RunOptions& o) {
  const ScenarioConfig c = loadWithOverrides(o);
  if (c.suspension) throw ConfigError(c.source.string() + ": identities needs a flow, not a suspension");
  CommandResult r;
  r.reportFile = c.output.report;
  r.report = header("identities", c);
  const forms::Scenario s = buildScenario(c);
  const auto suite = runIdentitySuite(s, c.pipeline.randomForms, c.pipeline.rngSeed);
  ordered_json results = ordered_json::array();
  for (const auto& id : suite.results)
    results.push_back({{"name", id.name},
                       {"samples", id.samples},
                       {"residual", id.residual},
                       {"tolerance", id.tolerance},
                       {"passed", id.passed}});
  r.report["random_forms"] = suite.randomForms;
  r.report["identities"] = results;
  r.report["passed"] = suite.passed();
  r.exitCode = suite.passed() ? exit_code::ok : exit_code::failure;
  return r;
}

int runCommand(const std::string& command, const RunOptions& options, std::ostream& out, std::ostream& err) {
  CommandResult result;
  try {
    if (command == "check") result = cmdCheck(options);
    else if (command == "section") result = cmdSection(options);
    else if (command == "suspend") result = cmdSuspend(options);
    else if (command == "identities") result = cmdIdentities(options);
    else throw ConfigError("unknown command '" + command + "'");
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::failure;
  }
  const std::string text = result.report.dump(2) + "\n";
  out << text;
  fs::create_directories(options.outDir);
  writeFile(options.outDir / result.reportFile, [&](std::ostream& o) { o << text; });
  return result.exitCode;
}

}  // namespace xsect::cli
