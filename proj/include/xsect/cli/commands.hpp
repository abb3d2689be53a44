#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace xsect::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int criterionFail = 2;
inline constexpr int invalidScenario = 3;
inline constexpr int noSection = 4;
inline constexpr int usage = 64;
}  // namespace exit_code

struct RunOptions {
  std::filesystem::path config;
  std::filesystem::path outDir = ".";
  std::optional<int> resolution;
  std::optional<int> seeds;
  std::optional<std::vector<long long>> classHint;
};

struct CommandResult {
  int exitCode = 0;
  nlohmann::ordered_json report;
  std::string reportFile = "report.json";
};

CommandResult cmdCheck(const RunOptions& options);
CommandResult cmdSection(const RunOptions& options);
CommandResult cmdSuspend(const RunOptions& options);
CommandResult cmdIdentities(const RunOptions& options);

/// Runs a command by name, writes the report to `out` and to the output
/// directory, and maps configuration errors to exit code 64 with the message
/// on `err`.
int runCommand(const std::string& command, const RunOptions& options, std::ostream& out, std::ostream& err);

/// Parses "k1,k2[,k3]".
std::vector<long long> parseClassHint(const std::string& text);

}  // namespace xsect::cli
