#include "uavfl/app/commands.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "uavfl/common/seed.hpp"
#include "uavfl/fl/experiment.hpp"
#include "uavfl/twin/sync.hpp"
#include "uavfl/zkfed/quantize.hpp"
#include "uavfl/zkfed/serialize.hpp"

namespace uavfl::app {
namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }

model::AllocationSolution with_actual(const model::AllocationSolution& base, const twin::ActualParameters& a) {
  model::AllocationSolution s = base;
  s.freq = a.freq;
  s.user_power = a.user_power;
  s.uav_power = a.uav_power;
  return s;
}

struct Stats {
  double mean = 0.0;
  double std = 0.0;
};

Stats stats(const std::vector<double>& v) {
  Stats s;
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double acc = 0.0;
    for (double x : v) acc += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(acc / static_cast<double>(v.size() - 1));
  }
  return s;
}

}  // namespace

Baseline parse_baseline(std::string_view s) {
  if (s == "none") return Baseline::kNone;
  if (s == "fixed-traj") return Baseline::kFixedTrajectory;
  if (s == "fixed-alloc") return Baseline::kFixedAllocation;
  throw ConfigError("unknown baseline '" + std::string(s) + "' (expected none, fixed-traj or fixed-alloc)");
}

const char* to_string(Baseline b) {
  switch (b) {
    case Baseline::kNone: return "none";
    case Baseline::kFixedTrajectory: return "fixed-traj";
    case Baseline::kFixedAllocation: return "fixed-alloc";
  }
  return "none";
}

OptimizeOutcome plan_optimize(const RunConfig& cfg, Baseline baseline) {
  cfg.validate();
  OptimizeOutcome o;
  o.baseline = baseline;
  o.users = model::generate_users(cfg.system, cfg.users, sub_seed(cfg.seed, "users"));
  o.deviations = twin::DeviationProfile::random(cfg.system.n_users, cfg.system.k_slots, cfg.twin.deviation_min,
                                                cfg.twin.deviation_max, sub_seed(cfg.seed, "deviations"));
  const auto init = sca::default_initialization(cfg.system.n_users, cfg.system);
  const auto twin0 = twin::twin_for_plan(twin::actual_of(init), o.deviations);
  switch (baseline) {
    case Baseline::kNone: o.result = sca::bcd_optimize(o.users, twin0, cfg.system, init, cfg.solver); break;
    case Baseline::kFixedTrajectory:
      o.result = sca::baseline_fixed_trajectory(o.users, twin0, cfg.system, cfg.solver);
      break;
    case Baseline::kFixedAllocation:
      o.result = sca::baseline_fixed_allocation(o.users, twin0, cfg.system, cfg.solver);
      break;
  }
  o.result.commanded = twin::twin_for_plan(twin::actual_of(o.result.solution), o.deviations);
  o.planned_report = model::round_totals(o.result.solution, o.users, &o.result.commanded, cfg.system);
  return o;
}

void realize_plan(const RunConfig& cfg, OptimizeOutcome& o, bool dt) {
  o.dt = dt;
  if (dt) {
    const twin::TwinState& t = o.result.commanded;
    o.commands = {t.est_freq, t.est_power, t.est_uav_power};
  } else {
    o.commands = twin::robust_commands(twin::actual_of(o.result.solution), cfg.twin.deviation_max);
  }
  o.realized = with_actual(o.result.solution, twin::realize(o.commands, o.deviations));
  o.realized_report = model::round_totals(o.realized, o.users, cfg.system);
}

OptimizeOutcome run_optimize(const RunConfig& cfg, Baseline baseline, bool dt) {
  OptimizeOutcome o = plan_optimize(cfg, baseline);
  realize_plan(cfg, o, dt);
  return o;
}

CsvTable trajectory_table(const OptimizeOutcome& o) {
  CsvTable t;
  t.header = {"slot", "x_m", "y_m", "uav_power_w", "commanded_uav_power_w"};
  const auto& s = o.result.solution;
  for (std::size_t k = 0; k < s.trajectory.waypoints.size(); ++k) {
    t.rows.push_back({fmt(k), fmt(s.trajectory.waypoints[k].x), fmt(s.trajectory.waypoints[k].y),
                      fmt(s.uav_power[k]), fmt(o.commands.uav_power[k])});
  }
  return t;
}

CsvTable energy_trace_table(const sca::SolveTrace& trace, bool timing) {
  CsvTable t;
  t.header = {"outer_iter", "energy_j", "feas_residual", "inner_iters", "ms"};
  for (const auto& r : trace.rows) {
    t.rows.push_back({std::to_string(r.outer_iter), fmt(r.energy_j), fmt(r.feas_residual),
                      std::to_string(r.inner_iters), fmt(timing ? r.ms : 0.0)});
  }
  return t;
}

CsvTable allocation_table(const OptimizeOutcome& o) {
  CsvTable t;
  t.header = {"user", "x_m", "y_m", "freq_hz", "user_power_w", "commanded_freq_hz", "commanded_power_w",
              "realized_energy_j", "realized_latency_s"};
  const auto& s = o.result.solution;
  for (std::size_t n = 0; n < o.users.size(); ++n) {
    const auto& r = o.realized_report.users[n];
    t.rows.push_back({fmt(n), fmt(o.users[n].pos.x), fmt(o.users[n].pos.y), fmt(s.freq[n]), fmt(s.user_power[n]),
                      fmt(o.commands.freq[n]), fmt(o.commands.user_power[n]), fmt(r.energy_j()), fmt(r.latency_s())});
  }
  return t;
}

void write_optimize_outputs(const RunConfig& cfg, const OptimizeOutcome& o) {
  const auto& dir = cfg.output_dir;
  write_csv(dir / "trajectory.csv", trajectory_table(o));
  write_csv(dir / "energy_trace.csv", energy_trace_table(o.result.trace, cfg.timing));
  write_csv(dir / "allocation.csv", allocation_table(o));

  twin::TwinState twin = o.result.commanded;
  twin::TwinSynchronizer sync(cfg.sync, cfg.twin.dynamics, sub_seed(cfg.seed, "sync"));
  const auto events = sync.tick(cfg.twin.sync_duration_s, twin, twin::actual_of(o.result.solution));
  CsvTable ev;
  ev.header = {"sim_time_s", "entity_id", "field", "old_dev", "new_dev", "delay_ms"};
  for (const auto& e : events) {
    ev.rows.push_back({fmt(e.sim_time_s), e.entity_id, e.field, fmt(e.old_dev), fmt(e.new_dev), fmt(e.delay_ms)});
  }
  write_csv(dir / "sync_events.csv", ev);

  nlohmann::ordered_json j;
  j["baseline"] = to_string(o.baseline);
  j["dt"] = o.dt;
  j["status"] = sca::to_string(o.result.status);
  j["outer_iterations"] = o.result.outer_iterations;
  j["planned_energy_j"] = o.result.energy_j;
  j["planned_max_violation"] = o.planned_report.max_violation();
  j["realized_energy_j"] = o.realized_report.total_energy_j;
  j["realized_latency_s"] = o.realized_report.total_latency_s;
  j["realized_max_violation"] = o.realized_report.max_violation();
  write_text(dir / "optimize_summary.json", j.dump(2) + "\n");
}

std::vector<fl::RoundRecord> run_simulate(const RunConfig& cfg, bool run_protected, bool run_unprotected,
                                          bool attack) {
  fl::ExperimentConfig ec = cfg.fl;
  ec.seed = cfg.seed;
  ec.timing = cfg.timing;
  ec.run_protected = run_protected;
  ec.run_unprotected = run_unprotected;
  if (attack) ec.attack.enabled = true;
  try {
    ec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return fl::run_experiment(ec);
}

CsvTable fl_metrics_table(std::span<const fl::RoundRecord> records) {
  CsvTable t;
  t.header = {"epoch",         "protected",      "accuracy",     "loss",           "asr",
              "rejected_ids",  "payload_bytes",  "overhead_bytes", "proof_gen_ms", "proof_verify_ms"};
  for (const auto& r : records) {
    std::string ids;
    for (std::size_t i = 0; i < r.rejected_ids.size(); ++i) {
      if (i > 0) ids += ';';
      ids += std::to_string(r.rejected_ids[i]);
    }
    t.rows.push_back({std::to_string(r.epoch), r.protected_run ? "1" : "0", fmt(r.accuracy), fmt(r.loss), fmt(r.asr),
                      ids, fmt(r.payload_bytes), fmt(r.overhead_bytes), fmt(r.proof_gen_ms),
                      fmt(r.proof_verify_ms)});
  }
  return t;
}

std::vector<BenchRow> run_bench_zk(const RunConfig& cfg, std::span<const std::size_t> dims) {
  if (cfg.bench.rounds <= 0) throw ConfigError("no rounds (bench.rounds must be >= 1)");
  if (dims.empty()) throw ConfigError("no dimensions given");
  for (auto d : dims) {
    if (d == 0) throw ConfigError("dimension must be >= 1");
  }
  const auto proto = zkfed::setup(sub_seed(cfg.seed, "bench.zkfed"), cfg.bench.clients);
  const auto& group = *proto.group;
  const auto registry = proto.registry();
  std::vector<BenchRow> rows;
  for (std::size_t d : dims) {
    BenchRow row;
    row.dim = d;
    row.rounds = cfg.bench.rounds;
    row.clients = cfg.bench.clients;
    row.payload_bytes = d * 4;
    std::vector<double> gen;
    std::vector<double> ver;
    for (int r = 0; r < cfg.bench.rounds; ++r) {
      std::mt19937_64 rng(sub_seed(cfg.seed, "bench.data", d * 1000003ULL + static_cast<std::uint64_t>(r)));
      std::normal_distribution<double> weight(0.0, 0.05);
      std::vector<zkfed::ClientUpdate> updates;
      for (const auto& party : proto.clients) {
        std::vector<double> delta(d);
        for (auto& x : delta) x = weight(rng);
        updates.push_back(zkfed::make_update(group, party, static_cast<std::uint64_t>(r), zkfed::quantize(delta).values));
      }
      const auto t0 = Clock::now();
      const auto outcome = zkfed::aggregate(group, registry, proto.aggregator, static_cast<std::uint64_t>(r), d,
                                            updates, cfg.fl.policy);
      gen.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
      const auto bytes = zkfed::serialize_proof(group, outcome.proof);
      const auto received = zkfed::parse_proof(group, bytes);
      if (!received) throw std::runtime_error("bench: transcript does not parse");
      for (auto id : outcome.accepted) {
        const auto t1 = Clock::now();
        const auto code = zkfed::verify_aggregate(group, *received, updates[id], proto.aggregator.signing.pub);
        ver.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t1).count());
        if (code != zkfed::VerifyCode::kOk) {
          throw std::runtime_error("bench: honest verification failed: " + zkfed::to_string(code));
        }
      }
      const std::size_t overhead = zkfed::serialize_proof_core(group, outcome.proof).size() + zkfed::kSignatureBytes;
      if (r > 0 && overhead != row.overhead_bytes) throw std::logic_error("bench: proof core size changed between rounds");
      row.overhead_bytes = overhead;
    }
    if (cfg.timing) {
      const auto g = stats(gen);
      const auto v = stats(ver);
      row.gen_ms_mean = g.mean;
      row.gen_ms_std = g.std;
      row.verify_ms_mean = v.mean;
      row.verify_ms_std = v.std;
    }
    rows.push_back(row);
  }
  return rows;
}

CsvTable overhead_table(std::span<const BenchRow> rows) {
  CsvTable t;
  t.header = {"dim",          "rounds",      "clients",        "payload_bytes", "overhead_bytes",
              "gen_ms_mean",  "gen_ms_std",  "verify_ms_mean", "verify_ms_std"};
  for (const auto& r : rows) {
    t.rows.push_back({fmt(r.dim), std::to_string(r.rounds), fmt(r.clients), fmt(r.payload_bytes),
                      fmt(r.overhead_bytes), fmt(r.gen_ms_mean), fmt(r.gen_ms_std), fmt(r.verify_ms_mean),
                      fmt(r.verify_ms_std)});
  }
  return t;
}

}  // namespace uavfl::app
