#include "CLI11.hpp"

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "uavfl/app/commands.hpp"
#include "uavfl/app/errors.hpp"
#include "uavfl/fl/idx.hpp"
#include "uavfl/sca/barrier_solver.hpp"
#include "uavfl/sca/bcd.hpp"

namespace {

using namespace uavfl;

// One line per failure on stderr: "uavfl: error kind=<kind>: <message>".
int fail(const char* kind, const std::string& msg, int code) {
  std::cerr << "uavfl: error kind=" << kind << ": " << msg << '\n';
  return code;
}

template <class F>
int guarded(F&& body) {
  try {
    body();
    return app::kExitOk;
  } catch (const app::ConfigError& e) {
    return fail("config", e.what(), app::kExitConfig);
  } catch (const sca::BcdError& e) {
    return fail("solver", e.what(), app::kExitSolver);
  } catch (const sca::SolverError& e) {
    return fail("solver", e.what(), app::kExitSolver);
  } catch (const app::IoError& e) {
    return fail("io", e.what(), app::kExitIo);
  } catch (const fl::IdxError& e) {
    return fail("io", e.what(), app::kExitIo);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), app::kExitFailure);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"UAV-assisted federated learning co-simulator"};
  cli.require_subcommand(1);

  std::string config;
  std::string baseline = "none";
  bool no_dt = false;
  auto* opt = cli.add_subcommand("optimize", "energy minimization: trajectory, powers and CPU frequencies");
  opt->add_option("config", config, "INI config file")->required();
  opt->add_option("--baseline", baseline, "none | fixed-traj | fixed-alloc");
  opt->add_flag("--no-dt", no_dt, "plan without twin deviation feedback");

  bool want_protected = false;
  bool want_unprotected = false;
  bool attack = false;
  auto* sim = cli.add_subcommand("simulate", "federated training with and without aggregation proofs");
  sim->add_option("config", config, "INI config file")->required();
  sim->add_flag("--protected", want_protected, "run the protected pipeline");
  sim->add_flag("--unprotected", want_unprotected, "run the plain-averaging pipeline");
  sim->add_flag("--attack", attack, "enable the label-flip attack");

  std::vector<std::size_t> dims;
  auto* bench = cli.add_subcommand("bench-zk", "proof size and timing per model dimension");
  bench->add_option("config", config, "INI config file")->required();
  bench->add_option("--dims", dims, "comma-separated model dimensions")->delimiter(',')->required();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return cli.exit(e);
    return fail("usage", e.what(), app::kExitConfig);
  }

  return guarded([&] {
    const auto cfg = app::load_run_config(config);
    if (*opt) {
      const auto o = app::run_optimize(cfg, app::parse_baseline(baseline), !no_dt);
      app::write_optimize_outputs(cfg, o);
      std::printf("status=%s iterations=%d planned_energy_j=%.6g realized_energy_j=%.6g\n",
                  sca::to_string(o.result.status), o.result.outer_iterations, o.result.energy_j,
                  o.realized_report.total_energy_j);
    } else if (*sim) {
      const bool both = !want_protected && !want_unprotected;
      const auto records = app::run_simulate(cfg, both || want_protected, both || want_unprotected, attack);
      app::write_csv(cfg.output_dir / "fl_metrics.csv", app::fl_metrics_table(records));
      std::printf("rounds=%zu\n", records.size());
    } else if (*bench) {
      const auto rows = app::run_bench_zk(cfg, dims);
      app::write_csv(cfg.output_dir / "overhead.csv", app::overhead_table(rows));
      for (const auto& r : rows) {
        std::printf("dim=%zu overhead_bytes=%zu gen_ms=%.3f verify_ms=%.3f\n", r.dim, r.overhead_bytes, r.gen_ms_mean,
                    r.verify_ms_mean);
      }
    }
  });
}
