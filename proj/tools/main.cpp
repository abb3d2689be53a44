#include <iostream>

#include <CLI11.hpp>

#include "xsect/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace xsect::cli;
  CLI::App app{"Closed 1-form criterion and cross sections for flows on flat tori"};
  app.require_subcommand(1);

  RunOptions options;
  std::string outDir = ".";
  int resolution = 0;
  int seeds = 0;
  std::string classHint;

  auto addCommon = [&](CLI::App* cmd) {
    cmd->add_option("--config", options.config, "scenario config (JSON)")->required();
    cmd->add_option("--out", outDir, "output directory for the report and CSVs");
    cmd->add_option("--resolution", resolution, "grid points per axis, overriding the config");
    cmd->add_option("--seeds", seeds, "section seeds per axis");
    cmd->add_option("--class-hint", classHint, "integral class \"k1,k2[,k3]\"");
  };
  for (const char* name : {"check", "section", "suspend", "identities"}) {
    addCommon(app.add_subcommand(name));
  }
  app.get_subcommand("check")->description("validate the scenario and evaluate the criterion");
  app.get_subcommand("section")->description("build the closed form, cross section and return map");
  app.get_subcommand("suspend")->description("suspend a base translation under a roof and recover it");
  app.get_subcommand("identities")->description("run the identity suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code::usage;
  }

  options.outDir = outDir;
  if (resolution != 0) options.resolution = resolution;
  if (seeds != 0) options.seeds = seeds;
  try {
    if (!classHint.empty()) options.classHint = parseClassHint(classHint);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code::usage;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return runCommand(command, options, std::cout, std::cerr);
}
