#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdrsma/montecarlo.hpp"
#include "fdrsma/scenario.hpp"

namespace fdrsma {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SweepVariable { PBsDbm, PUDbm, ThetaSic, DeltaSi, Beta, Zeta };
enum class SweepMode { Analytic, McMarginal, McJoint, Oracle, Noma, Hd };
enum class SweepOutput { Op, Throughput };

struct SweepSpec {
  SweepVariable variable = SweepVariable::PBsDbm;
  std::vector<double> grid;
  std::vector<SweepOutput> outputs{SweepOutput::Op};
  std::vector<SweepMode> modes{SweepMode::Analytic};
  // When sweeping the BS power, drive the uplink powers with the same value
  // (single transmit-power axis).
  bool couple_powers = false;
};

const char* to_string(SweepVariable v);
const char* to_string(SweepMode m);
const char* to_string(SweepOutput o);
SweepVariable sweep_variable_from_string(const std::string& s);
SweepMode sweep_mode_from_string(const std::string& s);
SweepOutput sweep_output_from_string(const std::string& s);

// Flat key/value scenario files: `key = value` lines, '#' comments, lists as
// comma-separated values or repeated keys, "inf" accepted for the beta fields.
SystemConfig load_scenario(const std::string& path);
SystemConfig parse_scenario(std::istream& in, const std::string& origin);
void write_scenario(const SystemConfig& cfg, std::ostream& out);

// Validates grid and scenario, evaluates every (grid value x user x metric x
// mode) cell and writes CSV rows in grid order with the schema
//   sweep_var,value,user,metric,mode,estimate,stderr,trials,seed
// Deterministic for a fixed seed.
void run_sweep(const SystemConfig& base, const SweepSpec& spec, const McSettings& mc,
               std::ostream& out);
void run_sweep_to_file(const SystemConfig& base, const SweepSpec& spec, const McSettings& mc,
                       const std::string& out_path);

// One canned figure job: a labelled scenario variant plus its sweep.
struct RecipeJob {
  std::string label;
  SystemConfig scenario;
  SweepSpec sweep;
};

// Canned sweeps reproducing the reference figures (fig2..fig7). Throws
// ConfigError on an unknown name.
std::vector<RecipeJob> figure_recipe(const std::string& name, const SystemConfig& base);
std::vector<std::string> recipe_names();

struct CompareResult {
  int rows_compared = 0;
  int failures = 0;
  double worst_gap = 0.0;
  std::string worst_key;
  bool all_pass() const { return failures == 0; }
};

// Per (value, user, metric): PASS iff |analytic - mc| <= max(3 * stderr,
// abs_floor) for every MC mode present. Throws SchemaError when the CSV does
// not carry the run_sweep schema.
CompareResult compare_report(std::istream& csv, double abs_floor, std::ostream& log);

}  // namespace fdrsma
