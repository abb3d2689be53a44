#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "xsect/cli/expression.hpp"
#include "xsect/forms/scenario.hpp"
#include "xsect/section/suspension.hpp"

namespace xsect::cli {

/// Malformed or inconsistent configuration. The message starts with
/// "<file>:<line>:<column>:" for syntax errors and "<file>: <json pointer>:"
/// otherwise.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

struct MetricSpec {
  enum class Kind { Flat, Diagonal, RandomSpd, DataFile } kind = Kind::Flat;
  std::vector<Expression> diagonal;
  std::uint64_t seed = 1;
  double strength = 0.3;
  std::filesystem::path dataFile;
};

struct VectorFieldSpec {
  enum class Kind { Expressions, DataFile } kind = Kind::Expressions;
  std::vector<Expression> components;
  std::filesystem::path dataFile;
};

struct VolumeSpec {
  enum class Kind { Riemannian, Coefficient, DataFile } kind = Kind::Riemannian;
  std::optional<Expression> coefficient;
  std::filesystem::path dataFile;
};

/// Valid scenario drawn at random on a random SPD metric.
struct RandomScenarioSpec {
  std::uint64_t seed = 1;
  double metricStrength = 0.3;
  double perturbation = 0.05;
};

struct PipelineSpec {
  std::optional<std::vector<long long>> classHint;
  std::optional<double> budget;  ///< default: half the minimum pairing
  long long qMax = 1'000'000;
  int seeds = 0;                 ///< per axis; 0 selects 32 (n = 2) or 8 (n = 3)
  std::uint64_t rngSeed = 1;
  int randomForms = 100;
  bool jacobianCheck = false;
};

struct OutputSpec {
  std::string report = "report.json";
  std::string sectionCsv = "section_samples.csv";
  std::string poincareCsv = "poincare.csv";
};

struct SuspensionConfig {
  int baseDim = 1;
  std::vector<Expression> baseMap;  ///< in the base coordinates y (and z)
  std::optional<Expression> roof;
};

struct ScenarioConfig {
  std::filesystem::path source;
  int dim = 2;
  int resolution = 0;  ///< 0 selects 128 (n = 2) or 64 (n = 3)
  MetricSpec metric;
  VectorFieldSpec vectorField;
  VolumeSpec volume;
  std::optional<RandomScenarioSpec> random;
  forms::Tolerances tolerances;
  PipelineSpec pipeline;
  OutputSpec output;
  std::optional<SuspensionConfig> suspension;

  int effectiveResolution() const { return resolution > 0 ? resolution : (dim == 2 ? 128 : 64); }
  int effectiveSeeds() const { return pipeline.seeds > 0 ? pipeline.seeds : (dim == 2 ? 32 : 8); }
};

ScenarioConfig parseConfig(const std::string& text, const std::filesystem::path& source);
ScenarioConfig loadConfig(const std::filesystem::path& path);

/// Samples the configured fields on the grid. Data files must match the
/// grid size exactly.
forms::Scenario buildScenario(const ScenarioConfig& config);

/// Base map and roof as callables for the suspension module.
section::SuspensionSpec suspensionSpec(const SuspensionConfig& config);

/// Writes `s` as a configuration with data-file fields next to `configPath`.
/// Data files are named after the config stem.
void writeScenarioConfig(const forms::Scenario& s, const std::filesystem::path& configPath,
                         const PipelineSpec& pipeline);

}  // namespace xsect::cli
