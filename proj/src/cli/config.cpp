#include "xsect/cli/config.hpp"

#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "xsect/forms/operators.hpp"
#include "xsect/forms/random.hpp"

namespace xsect::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

/// Object view that rejects unknown keys and reports errors by JSON pointer.
class Node {
 public:
  Node(const json& j, std::string pointer, const fs::path& source)
      : j_(j), pointer_(std::move(pointer)), source_(source) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(source_.string() + ": " + (pointer_.empty() ? "/" : pointer_) + ": " + msg);
  }

  const json& raw() const { return j_; }
  const std::string& pointer() const { return pointer_; }

  void requireObject(std::initializer_list<const char*> allowed) const {
    if (!j_.is_object()) fail("expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j_.items()) {
      if (!ok.count(key)) child(key).fail("unknown key");
    }
  }

  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }
  Node child(const std::string& key) const { return Node(j_.at(key), pointer_ + "/" + key, source_); }
  Node element(std::size_t i) const { return Node(j_.at(i), pointer_ + "/" + std::to_string(i), source_); }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }

  long long integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<long long>();
  }

  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }

  bool boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }

  Expression expression() const {
    std::string text;
    if (j_.is_number()) {
      std::ostringstream os;
      os << std::setprecision(17) << j_.get<double>();
      text = os.str();
    } else {
      text = string();
    }
    try {
      return Expression::parse(text);
    } catch (const ExpressionError& e) {
      fail(e.what());
    }
  }

  std::vector<Expression> expressions(std::size_t count) const {
    if (!j_.is_array()) fail("expected an array of " + std::to_string(count) + " expressions");
    if (j_.size() != count) fail("expected " + std::to_string(count) + " entries, got " + std::to_string(j_.size()));
    std::vector<Expression> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(element(i).expression());
    return out;
  }

  fs::path path() const {
    const fs::path p(string());
    return p.is_absolute() ? p : source_.parent_path() / p;
  }

 private:
  const json& j_;
  std::string pointer_;
  const fs::path& source_;
};

std::string location(const std::string& text, std::size_t byte) {
  int line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return std::to_string(line) + ":" + std::to_string(column);
}

void parseMetric(const Node& n, ScenarioConfig& c) {
  if (n.raw().is_string()) {
    if (n.string() != "flat") n.fail("expected \"flat\" or an object");
    c.metric.kind = MetricSpec::Kind::Flat;
    return;
  }
  n.requireObject({"diagonal", "random_spd", "data_file"});
  if (n.raw().size() != 1) n.fail("expected exactly one of diagonal, random_spd, data_file");
  if (n.has("diagonal")) {
    c.metric.kind = MetricSpec::Kind::Diagonal;
    c.metric.diagonal = n.child("diagonal").expressions(static_cast<std::size_t>(c.dim));
  } else if (n.has("random_spd")) {
    const Node r = n.child("random_spd");
    r.requireObject({"seed", "strength"});
    c.metric.kind = MetricSpec::Kind::RandomSpd;
    if (r.has("seed")) c.metric.seed = static_cast<std::uint64_t>(r.child("seed").integer());
    if (r.has("strength")) c.metric.strength = r.child("strength").number();
  } else {
    c.metric.kind = MetricSpec::Kind::DataFile;
    c.metric.dataFile = n.child("data_file").path();
  }
}

void parseVectorField(const Node& n, ScenarioConfig& c) {
  if (n.raw().is_array()) {
    c.vectorField.kind = VectorFieldSpec::Kind::Expressions;
    c.vectorField.components = n.expressions(static_cast<std::size_t>(c.dim));
    return;
  }
  n.requireObject({"data_file"});
  if (!n.has("data_file")) n.fail("expected an array of expressions or {\"data_file\": ...}");
  c.vectorField.kind = VectorFieldSpec::Kind::DataFile;
  c.vectorField.dataFile = n.child("data_file").path();
}

void parseVolume(const Node& n, ScenarioConfig& c) {
  if (n.raw().is_string() && n.string() == "riemannian") {
    c.volume.kind = VolumeSpec::Kind::Riemannian;
    return;
  }
  if (n.raw().is_object()) {
    n.requireObject({"coefficient", "data_file"});
    if (n.raw().size() != 1) n.fail("expected exactly one of coefficient, data_file");
    if (n.has("coefficient")) {
      c.volume.kind = VolumeSpec::Kind::Coefficient;
      c.volume.coefficient = n.child("coefficient").expression();
    } else {
      c.volume.kind = VolumeSpec::Kind::DataFile;
      c.volume.dataFile = n.child("data_file").path();
    }
    return;
  }
  n.fail("expected \"riemannian\" or an object");
}

void parseTolerances(const Node& n, forms::Tolerances& t) {
  n.requireObject({"identity", "closedness", "positivity_margin"});
  if (n.has("identity")) t.identityTol = n.child("identity").number();
  if (n.has("closedness")) t.closednessTol = n.child("closedness").number();
  if (n.has("positivity_margin")) t.positivityMargin = n.child("positivity_margin").number();
}

std::vector<long long> parseClassHint(const Node& n, int dim) {
  if (!n.raw().is_array() || n.raw().size() != static_cast<std::size_t>(dim))
    n.fail("expected " + std::to_string(dim) + " integers");
  std::vector<long long> k;
  for (std::size_t i = 0; i < n.raw().size(); ++i) k.push_back(n.element(i).integer());
  return k;
}

void parsePipeline(const Node& n, ScenarioConfig& c) {
  n.requireObject({"class_hint", "budget", "q_max", "seeds", "rng_seed", "random_forms", "jacobian_check"});
  auto& p = c.pipeline;
  if (n.has("class_hint")) p.classHint = parseClassHint(n.child("class_hint"), c.dim);
  if (n.has("budget")) p.budget = n.child("budget").number();
  if (n.has("q_max")) p.qMax = n.child("q_max").integer();
  if (n.has("seeds")) {
    const long long s = n.child("seeds").integer();
    if (s < 1) n.child("seeds").fail("must be positive");
    p.seeds = static_cast<int>(s);
  }
  if (n.has("rng_seed")) p.rngSeed = static_cast<std::uint64_t>(n.child("rng_seed").integer());
  if (n.has("random_forms")) p.randomForms = static_cast<int>(n.child("random_forms").integer());
  if (n.has("jacobian_check")) p.jacobianCheck = n.child("jacobian_check").boolean();
}

void parseOutput(const Node& n, OutputSpec& o) {
  n.requireObject({"report", "section_csv", "poincare_csv"});
  if (n.has("report")) o.report = n.child("report").string();
  if (n.has("section_csv")) o.sectionCsv = n.child("section_csv").string();
  if (n.has("poincare_csv")) o.poincareCsv = n.child("poincare_csv").string();
}

std::vector<double> readNumbers(const fs::path& path, std::size_t expected) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open data file");
  std::vector<double> values;
  values.reserve(expected);
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string token;
    while (ls >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size())
        throw ConfigError(path.string() + ":" + std::to_string(lineNo) + ": malformed number '" + token + "'");
      values.push_back(v);
    }
  }
  if (values.size() != expected)
    throw ConfigError(path.string() + ": expected " + std::to_string(expected) + " values for the configured grid, got " +
                      std::to_string(values.size()));
  return values;
}

void writeNumbers(const fs::path& path, const std::string& header, std::size_t perPoint,
                  const std::function<double(std::size_t, std::size_t)>& value, std::size_t points) {
  std::ofstream out(path);
  if (!out) throw Error(path.string() + ": cannot write");
  out << "# " << header << '\n' << std::setprecision(17);
  for (std::size_t p = 0; p < points; ++p) {
    for (std::size_t i = 0; i < perPoint; ++i) out << (i == 0 ? "" : " ") << value(p, i);
    out << '\n';
  }
}

}  // namespace

ScenarioConfig parseConfig(const std::string& text, const fs::path& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    if (const auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ConfigError(source.string() + ":" + location(text, e.byte) + ": " + msg);
  }
  const Node root(j, "", source);
  root.requireObject({"domain", "metric", "vector_field", "volume_form", "random_scenario", "tolerances", "pipeline",
                      "output", "suspension"});

  ScenarioConfig c;
  c.source = source;
  const bool suspension = root.has("suspension");
  if (root.has("domain")) {
    const Node d = root.child("domain");
    d.requireObject({"dim", "resolution"});
    if (d.has("dim")) {
      if (suspension) d.child("dim").fail("the dimension of a suspension follows from its base");
      const long long dim = d.child("dim").integer();
      if (dim != 2 && dim != 3) d.child("dim").fail("must be 2 or 3");
      c.dim = static_cast<int>(dim);
    }
    if (d.has("resolution")) {
      const long long r = d.child("resolution").integer();
      if (r < 8 || r % 2 != 0) d.child("resolution").fail("must be even and at least 8");
      c.resolution = static_cast<int>(r);
    }
  }

  if (suspension) {
    for (const char* key : {"metric", "vector_field", "volume_form", "random_scenario"})
      if (root.has(key)) root.child(key).fail("not allowed together with suspension");
    const Node s = root.child("suspension");
    s.requireObject({"base_dim", "base_map", "roof"});
    SuspensionConfig sc;
    if (s.has("base_dim")) {
      const long long m = s.child("base_dim").integer();
      if (m != 1 && m != 2) s.child("base_dim").fail("must be 1 or 2");
      sc.baseDim = static_cast<int>(m);
    }
    if (!s.has("base_map")) s.fail("missing base_map");
    if (!s.has("roof")) s.fail("missing roof");
    sc.baseMap = s.child("base_map").expressions(static_cast<std::size_t>(sc.baseDim));
    sc.roof = s.child("roof").expression();
    c.dim = sc.baseDim + 1;
    c.suspension = std::move(sc);
  } else if (root.has("random_scenario")) {
    for (const char* key : {"metric", "vector_field", "volume_form"})
      if (root.has(key)) root.child(key).fail("not allowed together with random_scenario");
    const Node r = root.child("random_scenario");
    r.requireObject({"seed", "metric_strength", "perturbation"});
    RandomScenarioSpec rs;
    if (r.has("seed")) rs.seed = static_cast<std::uint64_t>(r.child("seed").integer());
    if (r.has("metric_strength")) rs.metricStrength = r.child("metric_strength").number();
    if (r.has("perturbation")) rs.perturbation = r.child("perturbation").number();
    c.random = rs;
  } else {
    if (!root.has("vector_field")) root.fail("missing vector_field");
    if (root.has("metric")) parseMetric(root.child("metric"), c);
    parseVectorField(root.child("vector_field"), c);
    if (root.has("volume_form")) parseVolume(root.child("volume_form"), c);
  }

  if (root.has("tolerances")) parseTolerances(root.child("tolerances"), c.tolerances);
  if (root.has("pipeline")) parsePipeline(root.child("pipeline"), c);
  if (root.has("output")) parseOutput(root.child("output"), c.output);
  return c;
}

ScenarioConfig loadConfig(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot read config");
  std::ostringstream text;
  text << in.rdbuf();
  return parseConfig(text.str(), path);
}

forms::Scenario buildScenario(const ScenarioConfig& c) {
  if (c.suspension) throw ConfigError(c.source.string() + ": a suspension config describes a base map, not a flow");
  const int n = c.dim;
  const int r = c.effectiveResolution();
  const forms::TorusDomain domain(n, {r, r, n == 3 ? r : 1});
  const std::size_t size = domain.size();

  if (c.random) {
    std::mt19937_64 rng(c.random->seed);
    forms::Scenario s = forms::randomScenario(domain, rng, c.random->metricStrength, c.random->perturbation);
    s.tol = c.tolerances;
    return s;
  }

  std::optional<forms::MetricField> g;
  switch (c.metric.kind) {
    case MetricSpec::Kind::Flat:
      g = forms::MetricField::flat(domain);
      break;
    case MetricSpec::Kind::Diagonal:
      g = forms::MetricField::fromFunction(domain, [&](const forms::Point& p) {
        forms::SmallMatrix m = forms::SmallMatrix::Zero(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = c.metric.diagonal[i](p);
        return m;
      });
      break;
    case MetricSpec::Kind::RandomSpd: {
      std::mt19937_64 rng(c.metric.seed);
      g = forms::randomSpdMetric(domain, rng, 2, c.metric.strength);
      break;
    }
    case MetricSpec::Kind::DataFile:
      g = forms::MetricField(domain, readNumbers(c.metric.dataFile, size * n * n));
      break;
  }
  g->checkPositiveDefinite();

  std::optional<forms::VectorField> x;
  if (c.vectorField.kind == VectorFieldSpec::Kind::Expressions) {
    x = forms::VectorField::fromFunction(domain, [&](const forms::Point& p) {
      forms::Point v{0.0, 0.0, 0.0};
      for (int i = 0; i < n; ++i) v[i] = c.vectorField.components[i](p);
      return v;
    });
  } else {
    const auto values = readNumbers(c.vectorField.dataFile, size * n);
    std::vector<forms::ScalarField> comps;
    for (int i = 0; i < n; ++i) {
      forms::ScalarField f(domain);
      for (std::size_t p = 0; p < size; ++p) f[p] = values[p * n + i];
      comps.push_back(std::move(f));
    }
    x = forms::VectorField(std::move(comps));
  }

  forms::KForm omega(domain, n);
  switch (c.volume.kind) {
    case VolumeSpec::Kind::Riemannian:
      omega = forms::riemannianVolume(*g);
      break;
    case VolumeSpec::Kind::Coefficient:
      omega.component(0) = forms::ScalarField::fromFunction(domain, *c.volume.coefficient);
      break;
    case VolumeSpec::Kind::DataFile:
      omega.component(0) = forms::ScalarField(domain, readNumbers(c.volume.dataFile, size));
      break;
  }
  return forms::Scenario{std::move(*g), std::move(*x), std::move(omega), c.tolerances};
}

section::SuspensionSpec suspensionSpec(const SuspensionConfig& config) {
  section::SuspensionSpec spec;
  spec.baseDim = config.baseDim;
  // Base coordinates are called y (and z), matching their axes after suspension.
  auto lift = [](const forms::Point& y) { return forms::Point{0.0, y[0], y[1]}; };
  spec.baseMap = [map = config.baseMap, lift](const forms::Point& y) {
    forms::Point out{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < map.size(); ++i) out[i] = map[i](lift(y));
    return out;
  };
  spec.roof = [roof = *config.roof, lift](const forms::Point& y) { return roof(lift(y)); };
  return spec;
}

void writeScenarioConfig(const forms::Scenario& s, const fs::path& configPath, const PipelineSpec& pipeline) {
  const int n = s.dim();
  const std::size_t size = s.domain().size();
  const std::string stem = configPath.stem().string();
  const fs::path dir = configPath.parent_path();
  const std::string metricFile = stem + "_metric.dat";
  const std::string fieldFile = stem + "_field.dat";
  const std::string volumeFile = stem + "_volume.dat";

  writeNumbers(dir / metricFile, "metric entries g_ij per grid point, row-major, axis 0 slowest", n * n,
               [&](std::size_t p, std::size_t i) { return s.metric.entry(p, static_cast<int>(i) / n, static_cast<int>(i) % n); },
               size);
  writeNumbers(dir / fieldFile, "vector field components per grid point", n,
               [&](std::size_t p, std::size_t i) { return s.x[static_cast<int>(i)][p]; }, size);
  writeNumbers(dir / volumeFile, "volume form coefficient per grid point", 1,
               [&](std::size_t p, std::size_t) { return s.omega.component(0)[p]; }, size);

  nlohmann::ordered_json j;
  j["domain"] = {{"dim", n}, {"resolution", s.domain().resolution(0)}};
  j["metric"] = {{"data_file", metricFile}};
  j["vector_field"] = {{"data_file", fieldFile}};
  j["volume_form"] = {{"data_file", volumeFile}};
  j["tolerances"] = {{"identity", s.tol.identityTol},
                     {"closedness", s.tol.closednessTol},
                     {"positivity_margin", s.tol.positivityMargin}};
  nlohmann::ordered_json p;
  if (pipeline.classHint) p["class_hint"] = *pipeline.classHint;
  if (pipeline.budget) p["budget"] = *pipeline.budget;
  p["q_max"] = pipeline.qMax;
  if (pipeline.seeds > 0) p["seeds"] = pipeline.seeds;
  p["rng_seed"] = pipeline.rngSeed;
  p["random_forms"] = pipeline.randomForms;
  p["jacobian_check"] = pipeline.jacobianCheck;
  j["pipeline"] = p;

  std::ofstream out(configPath);
  if (!out) throw Error(configPath.string() + ": cannot write");
  out << j.dump(2) << '\n';
}

}  // namespace xsect::cli
