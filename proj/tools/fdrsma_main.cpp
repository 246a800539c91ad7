#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fdrsma/analytic.hpp"
#include "fdrsma/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitOracle = 4;
constexpr int kExitSchema = 5;

int env_workers() {
  const char* v = std::getenv("FDRSMA_WORKERS");
  if (v == nullptr) return 0;
  return std::atoi(v);
}

// "lo:hi:step" or a comma-separated list.
std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> grid;
  if (s.find(':') != std::string::npos) {
    double lo = 0, hi = 0, step = 0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0) {
      throw fdrsma::ConfigError("grid must be lo:hi:step or v1,v2,...");
    }
    for (int i = 0;; ++i) {
      const double v = lo + i * step;
      if (v > hi + 1e-12) break;
      grid.push_back(v);
    }
  } else {
    std::size_t pos = 0;
    while (pos < s.size()) {
      std::size_t next = s.find(',', pos);
      if (next == std::string::npos) next = s.size();
      const std::string tok = s.substr(pos, next - pos);
      if (!tok.empty()) grid.push_back(std::stod(tok));
      pos = next + 1;
    }
  }
  return grid;
}

std::string variant_path(const std::string& out, const std::string& label) {
  const std::size_t dot = out.rfind('.');
  if (dot == std::string::npos || out.find('/', dot) != std::string::npos) {
    return out + "." + label;
  }
  return out.substr(0, dot) + "." + label + out.substr(dot);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outage and throughput evaluation for full-duplex rate-splitting networks"};
  app.require_subcommand(1);

  std::string scenario_path, out_path = "-", grid_spec, var_name = "p_bs_dbm";
  std::vector<std::string> mode_names{"analytic", "mc_marginal"};
  std::vector<std::string> output_names{"op"};
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 12345;
  bool couple_powers = false;

  CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write CSV");
  sweep->add_option("--scenario", scenario_path, "Scenario file (defaults to built-in reference)");
  sweep->add_option("--var", var_name, "Sweep variable")->capture_default_str();
  sweep->add_option("--grid", grid_spec, "Grid as lo:hi:step or comma list")->required();
  sweep->add_option("--mode", mode_names, "Evaluation modes")->capture_default_str();
  sweep->add_option("--output", output_names, "Outputs (op, throughput)")->capture_default_str();
  sweep->add_option("--trials", trials, "Monte Carlo trials per point")->capture_default_str();
  sweep->add_option("--seed", seed, "Monte Carlo seed")->capture_default_str();
  sweep->add_flag("--couple-powers", couple_powers, "Drive uplink powers with the BS power");
  sweep->add_option("--out", out_path, "Output CSV path ('-' = stdout)")->capture_default_str();

  std::string csv_path;
  double abs_floor = 5e-4;
  CLI::App* compare = app.add_subcommand("compare", "Check MC columns against analytic columns");
  compare->add_option("csv", csv_path, "CSV produced by sweep/recipe")->required();
  compare->add_option("--floor", abs_floor, "Absolute tolerance floor")->capture_default_str();

  std::string recipe_name;
  CLI::App* recipe = app.add_subcommand("recipe", "Run a canned figure recipe");
  recipe->add_option("name", recipe_name, "Recipe name (fig2..fig7)")->required();
  recipe->add_option("--scenario", scenario_path, "Base scenario file");
  recipe->add_option("--trials", trials, "Monte Carlo trials per point")->capture_default_str();
  recipe->add_option("--seed", seed, "Monte Carlo seed")->capture_default_str();
  recipe->add_option("--out", out_path, "Output CSV path; variants get a label suffix")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    fdrsma::McSettings mc;
    mc.trials = trials;
    mc.seed = seed;
    mc.workers = env_workers();

    if (sweep->parsed()) {
      fdrsma::SystemConfig base;
      if (!scenario_path.empty()) base = fdrsma::load_scenario(scenario_path);
      fdrsma::SweepSpec spec;
      spec.variable = fdrsma::sweep_variable_from_string(var_name);
      spec.grid = parse_grid(grid_spec);
      spec.couple_powers = couple_powers;
      spec.modes.clear();
      for (const auto& m : mode_names) spec.modes.push_back(fdrsma::sweep_mode_from_string(m));
      spec.outputs.clear();
      for (const auto& o : output_names) {
        spec.outputs.push_back(fdrsma::sweep_output_from_string(o));
      }
      if (out_path == "-") {
        fdrsma::run_sweep(base, spec, mc, std::cout);
      } else {
        fdrsma::run_sweep_to_file(base, spec, mc, out_path);
      }
      return kExitOk;
    }

    if (compare->parsed()) {
      std::ifstream in(csv_path);
      if (!in) throw fdrsma::IoError("cannot open CSV: " + csv_path);
      const fdrsma::CompareResult res = fdrsma::compare_report(in, abs_floor, std::cout);
      return res.all_pass() ? kExitOk : kExitFail;
    }

    if (recipe->parsed()) {
      fdrsma::SystemConfig base;
      if (!scenario_path.empty()) base = fdrsma::load_scenario(scenario_path);
      const auto jobs = fdrsma::figure_recipe(recipe_name, base);
      for (const auto& job : jobs) {
        const std::string path =
            jobs.size() == 1 ? out_path : variant_path(out_path, job.label);
        fdrsma::run_sweep_to_file(job.scenario, job.sweep, mc, path);
        std::cout << job.label << " -> " << path << "\n";
      }
      return kExitOk;
    }
  } catch (const fdrsma::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const fdrsma::OracleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOracle;
  } catch (const fdrsma::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fdrsma::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
