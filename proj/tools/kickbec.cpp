// kickbec: command-line front end for the kicked-ring condensate laboratory.
//
//   kickbec simulate --config run.ini --out results/
//   kickbec scan     --config sweep.ini --workers 4 --engine map
//   kickbec predict  --config predict.ini
//   kickbec recipes list
//   kickbec recipes run fig1a --out results/fig1a
//
// Exit codes: 0 success, 1 invalid config or empty range, 2 simulation
// stopped at the non-condensate cutoff (partial data still written).

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kickbec/commands.hpp"
#include "kickbec/config.hpp"

#ifndef KICKBEC_RECIPE_DIR
#define KICKBEC_RECIPE_DIR "docs/recipes"
#endif

namespace fs = std::filesystem;
using namespace kickbec;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  int workers = 0;
  std::string engine;
  std::string recipe;
  std::string recipes_dir = KICKBEC_RECIPE_DIR;
};

void apply_overrides(RunConfig& config, const Options& opt) {
  if (!opt.out_dir.empty()) config.out_dir = opt.out_dir;
  if (opt.workers > 0) config.workers = opt.workers;
  if (!opt.engine.empty()) apply_setting(config, "engine", opt.engine, 0);
}

int dispatch(const std::string& command, const RunConfig& config) {
  if (command == "simulate") return cmd_simulate(config, config.out_dir);
  if (command == "scan") return cmd_scan(config, config.out_dir);
  return cmd_predict(config, config.out_dir);
}

int run_command(const std::string& command, const Options& opt) {
  RunConfig config = load_config(opt.config_path);
  apply_overrides(config, opt);
  return dispatch(command, config);
}

std::vector<fs::path> recipe_files(const std::string& dir) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".ini") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

// first comment line of a recipe
std::string recipe_summary(const fs::path& p) {
  std::ifstream f(p);
  std::string line;
  while (std::getline(f, line)) {
    if (line.rfind("#", 0) == 0) {
      const auto b = line.find_first_not_of("# ");
      return b == std::string::npos ? std::string() : line.substr(b);
    }
  }
  return {};
}

int recipes_list(const Options& opt) {
  const auto files = recipe_files(opt.recipes_dir);
  if (files.empty()) {
    std::cerr << "no recipes found in " << opt.recipes_dir << "\n";
    return kExitInvalidConfig;
  }
  for (const auto& p : files) std::cout << p.stem().string() << "\t" << recipe_summary(p) << "\n";
  return kExitOk;
}

int recipes_run(const Options& opt) {
  const fs::path path = fs::path(opt.recipes_dir) / (opt.recipe + ".ini");
  if (!fs::exists(path)) {
    std::cerr << "unknown recipe '" << opt.recipe << "' (try: kickbec recipes list)\n";
    return kExitInvalidConfig;
  }
  RunConfig config = load_config(path.string());
  if (config.command.empty()) throw ConfigError(0, "command", "recipe does not name a command");
  Options o = opt;
  if (o.out_dir.empty()) o.out_dir = (fs::path("recipes-out") / opt.recipe).string();
  apply_overrides(config, o);
  return dispatch(config.command, config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kicked condensate on a ring: GPE, Bogoliubov and perturbative engines"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opt.config_path, "key = value config file");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--workers", opt.workers, "concurrent sweep points")->check(CLI::PositiveNumber);
    sub->add_option("--engine", opt.engine, "full|map|closed")->check(CLI::IsMember({"full", "map", "closed"}));
  };

  auto* simulate = app.add_subcommand("simulate", "time series after every kick -> timeseries.csv");
  add_common(simulate, true);
  auto* scan = app.add_subcommand("scan", "parameter sweep -> sweep.csv, windows.csv");
  add_common(scan, true);
  auto* predict = app.add_subcommand("predict", "resonance conditions -> resonances.csv");
  add_common(predict, true);

  auto* recipes = app.add_subcommand("recipes", "figure-reproduction recipes");
  recipes->require_subcommand(1);
  recipes->add_option("--recipes-dir", opt.recipes_dir, "directory holding *.ini recipes");
  auto* list = recipes->add_subcommand("list", "list available recipes");
  auto* run = recipes->add_subcommand("run", "run a recipe by name");
  run->add_option("name", opt.recipe, "recipe name")->required();
  add_common(run, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }

  try {
    if (*simulate) return run_command("simulate", opt);
    if (*scan) return run_command("scan", opt);
    if (*predict) return run_command("predict", opt);
    if (*list) return recipes_list(opt);
    if (*run) return recipes_run(opt);
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  }
  return kExitOk;
}
