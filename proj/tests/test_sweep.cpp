#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fdrsma/sweep.hpp"

using namespace fdrsma;

namespace {

McSettings quick_mc(std::uint64_t trials = 20'000) {
  McSettings s;
  s.trials = trials;
  s.seed = 99;
  return s;
}

SweepSpec small_power_spec() {
  SweepSpec spec;
  spec.variable = SweepVariable::PBsDbm;
  spec.grid = {10.0, 20.0, 30.0};
  spec.couple_powers = true;
  spec.outputs = {SweepOutput::Op};
  spec.modes = {SweepMode::Analytic, SweepMode::McMarginal};
  return spec;
}

}  // namespace

TEST_CASE("scenario files: round trip, lists, comments, inf sentinel") {
  std::stringstream file;
  file << "# reference layout with overrides\n";
  file << "p_bs_dbm = 12.5\n";
  file << "beta_d = inf\n";
  file << "alpha_private = 0.15, 0.35\n";
  file << "rate_common = 0.45\n";
  file << "rate_common = 0.5\n";  // repeated key appends
  file << "m_cci = 4\n";
  const SystemConfig cfg = parse_scenario(file, "test");
  CHECK(cfg.p_bs_dbm == 12.5);
  CHECK(std::isinf(cfg.beta_d));
  CHECK(cfg.alpha_private[1] == 0.35);
  CHECK(cfg.rate_common[0] == 0.45);
  CHECK(cfg.rate_common[1] == 0.5);
  CHECK(cfg.m_cci == 4);
  CHECK_NOTHROW(validate_config(cfg));

  std::stringstream out;
  write_scenario(cfg, out);
  std::stringstream in2(out.str());
  const SystemConfig cfg2 = parse_scenario(in2, "round-trip");
  CHECK(cfg2.p_bs_dbm == cfg.p_bs_dbm);
  CHECK(std::isinf(cfg2.beta_d));
  CHECK(cfg2.m_cci == 4);

  std::stringstream bad("frobnicate = 1\n");
  CHECK_THROWS_AS(parse_scenario(bad, "bad"), ConfigError);
  std::stringstream bad2("p_bs_dbm ten\n");
  CHECK_THROWS_AS(parse_scenario(bad2, "bad2"), ConfigError);
}

TEST_CASE("run_sweep validates its spec") {
  const SystemConfig base;
  std::ostringstream out;
  SweepSpec spec = small_power_spec();
  spec.grid.clear();
  CHECK_THROWS_WITH_AS(run_sweep(base, spec, quick_mc(), out), doctest::Contains("grid empty"),
                       ConfigError);
  spec = small_power_spec();
  spec.grid = {10.0, 10.0};
  CHECK_THROWS_AS(run_sweep(base, spec, quick_mc(), out), ConfigError);
  spec = small_power_spec();
  spec.modes.clear();
  CHECK_THROWS_AS(run_sweep(base, spec, quick_mc(), out), ConfigError);
}

TEST_CASE("run_sweep output is byte-identical across repeats and worker counts") {
  const SystemConfig base;
  SweepSpec spec = small_power_spec();
  McSettings mc = quick_mc();

  std::ostringstream a;
  mc.workers = 1;
  run_sweep(base, spec, mc, a);
  std::ostringstream b;
  mc.workers = 3;
  run_sweep(base, spec, mc, b);
  CHECK(a.str() == b.str());
  std::ostringstream c;
  mc.workers = 0;
  run_sweep(base, spec, mc, c);
  CHECK(a.str() == c.str());
}

TEST_CASE("CSV rows stay inside probability bounds and carry the schema") {
  const SystemConfig base;
  SweepSpec spec = small_power_spec();
  spec.outputs = {SweepOutput::Op, SweepOutput::Throughput};
  std::ostringstream out;
  run_sweep(base, spec, quick_mc(), out);

  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "sweep_var,value,user,metric,mode,estimate,stderr,trials,seed");
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream ls(line);
    std::string col;
    std::vector<std::string> cols;
    while (std::getline(ls, col, ',')) cols.push_back(col);
    REQUIRE(cols.size() == 9);
    const double est = std::stod(cols[5]);
    const double se = std::stod(cols[6]);
    CHECK(se >= 0.0);
    if (cols[3] == "op") {
      CHECK(est >= 0.0);
      CHECK(est <= 1.0);
    }
  }
  // 3 grid points x 2 modes x (4 op rows + 5 throughput rows)
  CHECK(rows == 3 * 2 * 9);
}

TEST_CASE("compare_report passes an honest sweep and flags a corrupted one") {
  const SystemConfig base;
  SweepSpec spec = small_power_spec();
  McSettings mc = quick_mc(100'000);
  std::ostringstream out;
  run_sweep(base, spec, mc, out);

  std::istringstream in(out.str());
  std::ostringstream log;
  const CompareResult res = compare_report(in, 2e-3, log);
  CHECK(res.rows_compared > 0);
  CHECK(res.all_pass());

  // corrupt one analytic estimate
  std::string csv = out.str();
  std::istringstream lines(csv);
  std::string corrupted, line;
  bool done = false;
  while (std::getline(lines, line)) {
    if (!done && line.find("analytic") != std::string::npos) {
      const auto pos = line.find(",analytic,");
      corrupted += line.substr(0, pos) + ",analytic,0.77,0,0,99\n";
      done = true;
    } else {
      corrupted += line + "\n";
    }
  }
  std::istringstream in2(corrupted);
  std::ostringstream log2;
  const CompareResult res2 = compare_report(in2, 2e-3, log2);
  CHECK(res2.failures > 0);

  std::istringstream junk("not,a,sweep\n1,2,3\n");
  std::ostringstream log3;
  CHECK_THROWS_AS(compare_report(junk, 2e-3, log3), SchemaError);
}

TEST_CASE("figure recipes carry the documented shapes") {
  const SystemConfig base;
  const auto fig2 = figure_recipe("fig2", base);
  REQUIRE(fig2.size() == 2);
  CHECK(fig2[0].sweep.variable == SweepVariable::PBsDbm);
  CHECK(fig2[0].sweep.couple_powers);
  CHECK(fig2[0].scenario.theta_sic == 0.0);
  CHECK(fig2[0].scenario.beta_d == 0.8);
  CHECK(std::isinf(fig2[1].scenario.beta_d));
  CHECK(fig2[0].sweep.grid.front() == 0.0);
  CHECK(fig2[0].sweep.grid.back() == 30.0);

  const auto fig3 = figure_recipe("fig3", base);
  REQUIRE(fig3.size() == 1);
  CHECK(fig3[0].scenario.delta_si == 0.0);
  CHECK_FALSE(fig3[0].scenario.cci_enabled);

  const auto fig4 = figure_recipe("fig4", base);
  REQUIRE(fig4.size() == 3);
  CHECK(fig4[0].sweep.variable == SweepVariable::Zeta);
  CHECK(fig4[0].sweep.grid.size() == 101);
  CHECK(fig4[2].scenario.theta_sic == doctest::Approx(0.1));

  const auto fig5 = figure_recipe("fig5", base);
  REQUIRE(fig5.size() == 4);
  CHECK(std::isinf(fig5[0].scenario.beta_d));
  CHECK(fig5[3].scenario.theta_sic == doctest::Approx(0.2));

  const auto fig6 = figure_recipe("fig6", base);
  REQUIRE(fig6.size() == 2);
  CHECK(fig6[0].scenario.beta_d == doctest::Approx(0.6));
  bool has_noma = false;
  for (SweepMode m : fig6[0].sweep.modes) has_noma = has_noma || m == SweepMode::Noma;
  CHECK(has_noma);

  const auto fig7 = figure_recipe("fig7", base);
  REQUIRE(fig7.size() == 1);
  bool has_hd = false;
  for (SweepMode m : fig7[0].sweep.modes) has_hd = has_hd || m == SweepMode::Hd;
  CHECK(has_hd);

  CHECK_THROWS_AS(figure_recipe("fig9", base), ConfigError);
}

TEST_CASE("oracle mode matches analytic mode inside a sweep") {
  const SystemConfig base;
  SweepSpec spec;
  spec.variable = SweepVariable::PBsDbm;
  spec.grid = {20.0};
  spec.couple_powers = true;
  spec.outputs = {SweepOutput::Op};
  spec.modes = {SweepMode::Analytic, SweepMode::Oracle};
  std::ostringstream out;
  run_sweep(base, spec, quick_mc(), out);

  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);  // header
  std::map<std::string, double> analytic, oracle;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> cols;
    std::string col;
    while (std::getline(ls, col, ',')) cols.push_back(col);
    if (cols[4] == "analytic") analytic[cols[2]] = std::stod(cols[5]);
    if (cols[4] == "oracle") oracle[cols[2]] = std::stod(cols[5]);
  }
  REQUIRE(analytic.size() == 4);
  REQUIRE(oracle.size() == 4);
  for (const auto& [user, v] : analytic) {
    CHECK(std::fabs(v - oracle[user]) <= 1e-6 * std::max({v, oracle[user], 1e-9}));
  }
}
