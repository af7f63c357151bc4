#include "doctest.h"

#include <stdexcept>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>

#include <unistd.h>

#include "uavfl/app/commands.hpp"
#include "uavfl/app/csv.hpp"
#include "uavfl/app/errors.hpp"
#include "uavfl/app/run_config.hpp"
#include "uavfl/model/config.hpp"

using namespace uavfl;
using namespace uavfl::app;
namespace fs = std::filesystem;

TEST_CASE("csv round trip") {
  CsvTable t{{"a", "b,c", "d\"e"}, {{"1", "x\ny", ""}, {format_double(0.1), format_double(-1e-300), "\"q\""}}};
  CHECK(parse_csv(to_csv(t)) == t);
  CHECK(std::stod(format_double(0.1)) == 0.1);
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(2.0) == "2");
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), IoError);
  CHECK_THROWS_AS(parse_csv("a\n\"open\n"), IoError);
  CHECK(parse_csv("h1,h2\r\n1,2\r\n") == CsvTable{{"h1", "h2"}, {{"1", "2"}}});

  const fs::path dir = fs::temp_directory_path() / ("uavfl_csv_" + std::to_string(::getpid()));
  write_csv(dir / "sub" / "t.csv", t);
  CHECK(read_csv(dir / "sub" / "t.csv") == t);
  CHECK_THROWS_AS(read_csv(dir / "missing.csv"), IoError);
  fs::remove_all(dir);
}

TEST_CASE("config parsing") {
  const auto def = parse_run_config("");
  CHECK(def.seed == 1);
  CHECK(def.system.n_users == model::SystemConfig{}.n_users);

  const auto c = parse_run_config(
      "[run]\nseed = 9\ntiming = off\n[system]\nn_users = 3\n[fl]\nepochs = 4\n[zkfed]\nnorm_bound = 2.5\n");
  CHECK(c.seed == 9);
  CHECK(!c.timing);
  CHECK(c.system.n_users == 3);
  CHECK(c.fl.epochs == 4);
  CHECK(c.fl.seed == 9);
  CHECK(!c.fl.timing);
  CHECK(c.fl.policy.norm_bound == 2.5);

  CHECK_THROWS_AS(parse_run_config("[system]\nn_userz = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[nowhere]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[system]\nn_users = three\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[system]\naltitude_m = -5\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[twin]\ndeviation_max = 1.0\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[attack]\nsource_label = 7\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[run]\ntiming = maybe\n"), ConfigError);
  CHECK_THROWS_AS(load_run_config("/nonexistent/uavfl.ini"), IoError);

  ::setenv(std::string(kOutputDirEnv).c_str(), "/tmp/uavfl_env_out", 1);
  CHECK(parse_run_config("[run]\noutput_dir = elsewhere\n").output_dir == "/tmp/uavfl_env_out");
  ::unsetenv(std::string(kOutputDirEnv).c_str());
  CHECK(parse_run_config("[run]\noutput_dir = elsewhere\n").output_dir == "elsewhere");
}

TEST_CASE("baseline names") {
  CHECK(parse_baseline("none") == Baseline::kNone);
  CHECK(parse_baseline("fixed-traj") == Baseline::kFixedTrajectory);
  CHECK(parse_baseline("fixed-alloc") == Baseline::kFixedAllocation);
  CHECK_THROWS_AS(parse_baseline("joint"), ConfigError);
}

TEST_CASE("optimize tables") {
  auto cfg = parse_run_config("[system]\nn_users = 2\n");
  const auto o = run_optimize(cfg, Baseline::kFixedTrajectory, true);
  const auto traj = trajectory_table(o);
  REQUIRE(traj.rows.size() == cfg.system.k_slots);
  const auto line = model::straight_line_trajectory(cfg.system);
  for (std::size_t k = 0; k < traj.rows.size(); ++k) {
    CHECK(std::stod(traj.rows[k][1]) == line.waypoints[k].x);
    CHECK(std::stod(traj.rows[k][2]) == line.waypoints[k].y);
  }
  CHECK(parse_csv(to_csv(traj)) == traj);
  const auto trace = energy_trace_table(o.result.trace, false);
  CHECK(trace.header.front() == "outer_iter");
  for (const auto& r : trace.rows) CHECK(r.back() == "0");
  // Exact compensation: the realized round matches the plan.
  CHECK(o.realized_report.total_energy_j == doctest::Approx(o.planned_report.total_energy_j).epsilon(1e-9));
}

TEST_CASE("simulate and bench") {
  auto cfg = parse_run_config("[fl]\nepochs = 0\n");
  const auto none = run_simulate(cfg, true, true, false);
  CHECK(none.empty());
  const auto t = fl_metrics_table(none);
  CHECK(t.rows.empty());
  CHECK(t.header == std::vector<std::string>{"epoch", "protected", "accuracy", "loss", "asr", "rejected_ids",
                                             "payload_bytes", "overhead_bytes", "proof_gen_ms", "proof_verify_ms"});

  auto b = parse_run_config("[bench]\nrounds = 0\n");
  const std::vector<std::size_t> dims{10, 1000};
  try {
    run_bench_zk(b, dims);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("no rounds") != std::string::npos);
  }
  b.bench.rounds = 2;
  b.bench.clients = 2;
  const auto rows = run_bench_zk(b, dims);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].overhead_bytes == rows[1].overhead_bytes);
  CHECK(rows[1].payload_bytes == 4000);
  CHECK(rows[1].verify_ms_mean <= rows[1].gen_ms_mean);
  const auto ot = overhead_table(rows);
  CHECK(parse_csv(to_csv(ot)) == ot);
}
