#include "uavfl/app/run_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "uavfl/app/errors.hpp"

namespace uavfl::app {
namespace {

namespace pt = boost::property_tree;

using Setter = std::function<void(RunConfig&, const std::string&)>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& raw, const std::string& key) {
  const std::string v = trim(raw);
  T out{};
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError(key + ": cannot parse '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& raw, const std::string& key) {
  const std::string v = trim(raw);
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> m;
    auto d = [&m](const std::string& key, auto get) {
      m[key] = [get, key](RunConfig& c, const std::string& v) { get(c) = parse_number<double>(v, key); };
    };
    auto u = [&m](const std::string& key, auto get) {
      m[key] = [get, key](RunConfig& c, const std::string& v) {
        const auto x = parse_number<long long>(v, key);
        if (x < 0) throw ConfigError(key + ": must be >= 0");
        get(c) = static_cast<std::size_t>(x);
      };
    };
    auto b = [&m](const std::string& key, auto get) {
      m[key] = [get, key](RunConfig& c, const std::string& v) { get(c) = parse_bool(v, key); };
    };
    auto s = [&m](const std::string& key, auto get) {
      m[key] = [get, key](RunConfig& c, const std::string& v) { get(c) = trim(v); };
    };

    m["run.seed"] = [](RunConfig& c, const std::string& v) { c.seed = parse_number<std::uint64_t>(v, "run.seed"); };
    s("run.output_dir", [](RunConfig& c) -> std::filesystem::path& { return c.output_dir; });
    b("run.timing", [](RunConfig& c) -> bool& { return c.timing; });

    u("system.n_users", [](RunConfig& c) -> std::size_t& { return c.system.n_users; });
    u("system.k_slots", [](RunConfig& c) -> std::size_t& { return c.system.k_slots; });
    d("system.altitude_m", [](RunConfig& c) -> double& { return c.system.altitude_m; });
    d("system.slot_len_s", [](RunConfig& c) -> double& { return c.system.slot_len_s; });
    d("system.v_max_mps", [](RunConfig& c) -> double& { return c.system.v_max_mps; });
    d("system.start_x", [](RunConfig& c) -> double& { return c.system.start_pos.x; });
    d("system.start_y", [](RunConfig& c) -> double& { return c.system.start_pos.y; });
    d("system.end_x", [](RunConfig& c) -> double& { return c.system.end_pos.x; });
    d("system.end_y", [](RunConfig& c) -> double& { return c.system.end_pos.y; });
    d("system.bandwidth_hz", [](RunConfig& c) -> double& { return c.system.bandwidth_hz; });
    d("system.noise_psd_dbm_hz", [](RunConfig& c) -> double& { return c.system.noise_psd_dbm_hz; });
    d("system.ref_gain", [](RunConfig& c) -> double& { return c.system.ref_gain; });
    d("system.t_max_s", [](RunConfig& c) -> double& { return c.system.t_max_s; });
    d("system.f_max_hz", [](RunConfig& c) -> double& { return c.system.f_max_hz; });
    d("system.q_max_w", [](RunConfig& c) -> double& { return c.system.q_max_w; });
    d("system.q_uav_max_w", [](RunConfig& c) -> double& { return c.system.q_uav_max_w; });
    d("system.avg_power_w", [](RunConfig& c) -> double& { return c.system.avg_power_w; });
    d("system.capacitance_coeff", [](RunConfig& c) -> double& { return c.system.capacitance_coeff; });

    d("users.area_m", [](RunConfig& c) -> double& { return c.users.area_m; });
    d("users.data_size_min", [](RunConfig& c) -> double& { return c.users.data_size_min; });
    d("users.data_size_max", [](RunConfig& c) -> double& { return c.users.data_size_max; });
    d("users.cycles_per_sample", [](RunConfig& c) -> double& { return c.users.cycles_per_sample; });
    d("users.local_iters", [](RunConfig& c) -> double& { return c.users.local_iters; });
    d("users.model_params", [](RunConfig& c) -> double& { return c.users.model_params; });

    d("twin.deviation_min", [](RunConfig& c) -> double& { return c.twin.deviation_min; });
    d("twin.deviation_max", [](RunConfig& c) -> double& { return c.twin.deviation_max; });
    d("twin.sync_duration_s", [](RunConfig& c) -> double& { return c.twin.sync_duration_s; });
    d("twin.drift_std_fraction", [](RunConfig& c) -> double& { return c.twin.dynamics.drift_std_fraction; });
    d("twin.residual_fraction", [](RunConfig& c) -> double& { return c.twin.dynamics.residual_fraction; });

    d("sync.telemetry_period_s", [](RunConfig& c) -> double& { return c.sync.telemetry_period_s; });
    d("sync.user_metrics_period_s", [](RunConfig& c) -> double& { return c.sync.user_metrics_period_s; });
    d("sync.feedback_delay_s", [](RunConfig& c) -> double& { return c.sync.feedback_delay_s; });

    d("solver.outer_tol", [](RunConfig& c) -> double& { return c.solver.outer_tol; });
    m["solver.max_outer"] = [](RunConfig& c, const std::string& v) {
      c.solver.max_outer = static_cast<int>(parse_number<long long>(v, "solver.max_outer"));
    };
    d("solver.block_tol", [](RunConfig& c) -> double& { return c.solver.block_tol; });
    m["solver.max_block_passes"] = [](RunConfig& c, const std::string& v) {
      c.solver.max_block_passes = static_cast<int>(parse_number<long long>(v, "solver.max_block_passes"));
    };

    m["fl.epochs"] = [](RunConfig& c, const std::string& v) {
      c.fl.epochs = static_cast<int>(parse_number<long long>(v, "fl.epochs"));
    };
    u("fl.n_clients", [](RunConfig& c) -> std::size_t& { return c.fl.n_clients; });
    d("fl.learning_rate", [](RunConfig& c) -> double& { return c.fl.train.learning_rate; });
    u("fl.batch_size", [](RunConfig& c) -> std::size_t& { return c.fl.train.batch_size; });
    m["fl.local_epochs"] = [](RunConfig& c, const std::string& v) {
      c.fl.train.local_epochs = static_cast<int>(parse_number<long long>(v, "fl.local_epochs"));
    };

    m["data.source"] = [](RunConfig& c, const std::string& v) {
      const auto t = trim(v);
      if (t == "synthetic") {
        c.fl.data.source = fl::DataSource::kSynthetic;
      } else if (t == "idx") {
        c.fl.data.source = fl::DataSource::kIdx;
      } else {
        throw ConfigError("data.source: expected synthetic or idx, got '" + t + "'");
      }
    };
    m["data.n_classes"] = [](RunConfig& c, const std::string& v) {
      c.fl.data.n_classes = static_cast<int>(parse_number<long long>(v, "data.n_classes"));
    };
    m["data.d_in"] = [](RunConfig& c, const std::string& v) {
      c.fl.data.d_in = static_cast<int>(parse_number<long long>(v, "data.d_in"));
    };
    u("data.train_per_class", [](RunConfig& c) -> std::size_t& { return c.fl.data.train_per_class; });
    u("data.test_per_class", [](RunConfig& c) -> std::size_t& { return c.fl.data.test_per_class; });
    d("data.separation", [](RunConfig& c) -> double& { return c.fl.data.separation; });
    s("data.train_images", [](RunConfig& c) -> std::string& { return c.fl.data.train_images; });
    s("data.train_labels", [](RunConfig& c) -> std::string& { return c.fl.data.train_labels; });
    s("data.test_images", [](RunConfig& c) -> std::string& { return c.fl.data.test_images; });
    s("data.test_labels", [](RunConfig& c) -> std::string& { return c.fl.data.test_labels; });
    u("data.idx_train_limit", [](RunConfig& c) -> std::size_t& { return c.fl.data.idx_train_limit; });
    u("data.idx_test_limit", [](RunConfig& c) -> std::size_t& { return c.fl.data.idx_test_limit; });

    b("attack.enabled", [](RunConfig& c) -> bool& { return c.fl.attack.enabled; });
    m["attack.malicious_client"] = [](RunConfig& c, const std::string& v) {
      const auto x = parse_number<long long>(v, "attack.malicious_client");
      if (x < 0 || x > 0xffffffffLL) throw ConfigError("attack.malicious_client: out of range");
      c.fl.attack.malicious_client = static_cast<std::uint32_t>(x);
    };
    m["attack.start_epoch"] = [](RunConfig& c, const std::string& v) {
      c.fl.attack.start_epoch = static_cast<int>(parse_number<long long>(v, "attack.start_epoch"));
    };
    m["attack.source_label"] = [](RunConfig& c, const std::string& v) {
      c.fl.attack.source_label = static_cast<int>(parse_number<long long>(v, "attack.source_label"));
    };
    m["attack.target_label"] = [](RunConfig& c, const std::string& v) {
      c.fl.attack.target_label = static_cast<int>(parse_number<long long>(v, "attack.target_label"));
    };
    d("attack.boost", [](RunConfig& c) -> double& { return c.fl.attack.boost; });

    d("zkfed.norm_bound", [](RunConfig& c) -> double& { return c.fl.policy.norm_bound; });
    d("zkfed.norm_multiplier", [](RunConfig& c) -> double& { return c.fl.policy.norm_multiplier; });

    m["bench.rounds"] = [](RunConfig& c, const std::string& v) {
      c.bench.rounds = static_cast<int>(parse_number<long long>(v, "bench.rounds"));
    };
    u("bench.clients", [](RunConfig& c) -> std::size_t& { return c.bench.clients; });
    return m;
  }();
  return table;
}

template <class F>
void rethrow_as_config(F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

void RunConfig::validate() const {
  if (output_dir.empty()) throw ConfigError("run.output_dir must not be empty");
  rethrow_as_config([&] {
    system.validate();
    if (!(users.area_m > 0.0)) throw std::invalid_argument("users.area_m must be > 0");
    if (!(users.data_size_min > 0.0) || !(users.data_size_max >= users.data_size_min)) {
      throw std::invalid_argument("users.data_size_min/max must satisfy 0 < min <= max");
    }
    if (!(users.cycles_per_sample > 0.0)) throw std::invalid_argument("users.cycles_per_sample must be > 0");
    if (!(users.local_iters > 0.0)) throw std::invalid_argument("users.local_iters must be > 0");
    if (!(users.model_params > 0.0)) throw std::invalid_argument("users.model_params must be > 0");
    if (!(twin.deviation_min >= 0.0 && twin.deviation_min <= twin.deviation_max && twin.deviation_max < 1.0)) {
      throw std::invalid_argument("twin.deviation_min/max must satisfy 0 <= min <= max < 1");
    }
    if (!(twin.sync_duration_s >= 0.0)) throw std::invalid_argument("twin.sync_duration_s must be >= 0");
    if (!(twin.dynamics.drift_std_fraction >= 0.0)) throw std::invalid_argument("twin.drift_std_fraction must be >= 0");
    if (!(twin.dynamics.residual_fraction >= 0.0 && twin.dynamics.residual_fraction <= 1.0)) {
      throw std::invalid_argument("twin.residual_fraction must lie in [0, 1]");
    }
    sync.validate();
    if (!(solver.outer_tol > 0.0)) throw std::invalid_argument("solver.outer_tol must be > 0");
    if (solver.max_outer < 1) throw std::invalid_argument("solver.max_outer must be >= 1");
    if (!(solver.block_tol > 0.0)) throw std::invalid_argument("solver.block_tol must be > 0");
    if (solver.max_block_passes < 1) throw std::invalid_argument("solver.max_block_passes must be >= 1");
    fl.validate();
    if (bench.clients == 0) throw std::invalid_argument("bench.clients must be >= 1");
    if (bench.rounds < 0) throw std::invalid_argument("bench.rounds must be >= 0");
  });
}

RunConfig parse_run_config(std::string_view ini_text) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(ini_text)};
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  RunConfig cfg;
  const auto& table = setters();
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("key outside a section: " + section);
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto it = table.find(full);
      if (it == table.end()) throw ConfigError("unknown key: " + full);
      try {
        it->second(cfg, value.data());
      } catch (const ConfigError& e) {
        const std::string msg = e.what();
        throw ConfigError(msg.rfind(full, 0) == 0 ? msg : full + ": " + msg);
      }
    }
  }
  if (const char* env = std::getenv(std::string(kOutputDirEnv).c_str()); env != nullptr && *env != '\0') {
    cfg.output_dir = env;
  }
  cfg.fl.seed = cfg.seed;
  cfg.fl.timing = cfg.timing;
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace uavfl::app
