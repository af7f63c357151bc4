#include "uavfl/sca/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "uavfl/model/physics.hpp"
#include "uavfl/model/report.hpp"
#include "uavfl/sca/barrier_solver.hpp"
#include "uavfl/sca/bounds.hpp"

namespace uavfl::sca {
namespace {

using model::AllocationSolution;
using model::SystemConfig;
using model::UserProfile;

constexpr double kGHz = 1e9;
constexpr double kLn2 = std::numbers::ln2;

double floored(double v) { return std::max(v, kLinFloor); }

double max_d2(const UserProfile& u, const AllocationSolution& s, const SystemConfig& cfg) {
  double d2 = 0.0;
  for (const auto& wp : s.trajectory.waypoints) {
    d2 = std::max(d2, model::squared_distance(wp, u.pos, cfg.altitude_m));
  }
  return d2;
}

std::string tag(const char* name, std::size_t n) { return std::string(name) + "[" + std::to_string(n) + "]"; }

std::string tag(const char* name, std::size_t n, std::size_t k) {
  return std::string(name) + "[" + std::to_string(n) + "," + std::to_string(k) + "]";
}

double f_floor(const SystemConfig& cfg) { return 1e-9 * cfg.f_max_hz; }
double q_floor(const SystemConfig& cfg) { return 1e-15 * cfg.q_max_w; }
double quav_floor(const SystemConfig& cfg) { return 1e-15 * cfg.q_uav_max_w; }


}  // namespace

double upload_time_of_d2(double upload_bits, double q_w, double d2, const SystemConfig& cfg) {
  const double beta = upload_bits / cfg.bandwidth_hz;
  return beta * kLn2 / std::log1p(cfg.beta0() * q_w / d2);
}

double upload_time_slope(double upload_bits, double q_w, double d2, const SystemConfig& cfg) {
  const double beta = upload_bits / cfg.bandwidth_hz;
  const double a = cfg.beta0() * q_w;
  const double l = std::log1p(a / d2);
  return beta * kLn2 * a / (d2 * (d2 + a) * l * l);
}

LinearizationPoint tight_linearization(const AllocationSolution& s, std::span<const UserProfile> users,
                                       const SystemConfig& cfg) {
  LinearizationPoint lin;
  const double b0 = cfg.beta0();
  const std::size_t k_slots = s.trajectory.waypoints.size();
  for (std::size_t n = 0; n < users.size(); ++n) {
    const auto& u = users[n];
    const double beta = u.upload_bits / cfg.bandwidth_hz;
    const double gamma = u.model_bits / cfg.bandwidth_hz;

    UserLinPoint p;
    p.theta = floored(b0 * s.user_power[n] / max_d2(u, s, cfg));
    p.psi = floored(std::log1p(p.theta) / kLn2);
    p.z = floored(beta * s.user_power[n] / p.psi);
    p.t = floored(beta / p.psi);
    lin.user.push_back(p);

    UavLinPoint w;
    w.xi.resize(k_slots);
    w.eta.resize(k_slots);
    w.lambda.resize(k_slots);
    for (std::size_t k = 0; k < k_slots; ++k) {
      const double d2 = model::squared_distance(s.trajectory.waypoints[k], u.pos, cfg.altitude_m);
      w.lambda[k] = floored(d2);
      w.eta[k] = floored(b0 * s.uav_power[k] / d2);
      w.xi[k] = floored(std::log1p(w.eta[k]) / kLn2);
      w.omega = std::max(w.omega, gamma * s.uav_power[k] / w.xi[k]);
      w.v = std::max(w.v, gamma / w.xi[k]);
      w.u = std::max(w.u, upload_time_of_d2(u.upload_bits, s.user_power[n], d2, cfg));
    }
    w.omega = floored(w.omega);
    w.v = floored(w.v);
    w.u = floored(w.u);
    lin.uav.push_back(std::move(w));
  }
  return lin;
}

BuiltSubproblem build_subproblem1(std::span<const UserProfile> users, const AllocationSolution& fixed,
                                  const LinearizationPoint& lin, const SystemConfig& cfg) {
  model::check_dimensions(fixed, users.size(), cfg);
  BuiltSubproblem out;
  auto& spec = out.spec;
  out.start.resize(static_cast<Eigen::Index>(6 * users.size()));
  const double b0 = cfg.beta0();

  for (std::size_t n = 0; n < users.size(); ++n) {
    const auto& u = users[n];
    const auto& p = lin.user.at(n);
    const double cycles = u.total_cycles();
    const double beta = u.upload_bits / cfg.bandwidth_hz;
    const double d2 = max_d2(u, fixed, cfg);

    double down_t = 0.0;
    double down_e = 0.0;
    for (std::size_t k = 0; k < fixed.uav_power.size(); ++k) {
      const auto c = model::download_time_energy(u, fixed.uav_power[k], fixed.trajectory.waypoints[k], cfg);
      down_t = std::max(down_t, c.seconds);
      down_e = std::max(down_e, c.joules);
    }
    if (down_t >= cfg.t_max_s) {
      throw SolverError(SolverError::Kind::kInfeasible,
                        "user " + std::to_string(n) + ": download time alone exceeds t_max");
    }

    const std::size_t f = spec.add_var(tag("f_ghz", n), f_floor(cfg) / kGHz, cfg.f_max_hz / kGHz);
    const std::size_t q = spec.add_var(tag("q", n), q_floor(cfg), cfg.q_max_w);
    const std::size_t z = spec.add_var(tag("z", n), 0.0);
    const std::size_t psi = spec.add_var(tag("psi", n), 0.0);
    const std::size_t theta = spec.add_var(tag("theta", n), 0.0);
    const std::size_t t = spec.add_var(tag("t", n), 0.0);
    out.f_idx.push_back(f);
    out.q_idx.push_back(q);

    out.start[static_cast<Eigen::Index>(f)] = fixed.freq[n] / kGHz;
    out.start[static_cast<Eigen::Index>(q)] = fixed.user_power[n];
    out.start[static_cast<Eigen::Index>(z)] = p.z;
    out.start[static_cast<Eigen::Index>(psi)] = p.psi;
    out.start[static_cast<Eigen::Index>(theta)] = p.theta;
    out.start[static_cast<Eigen::Index>(t)] = p.t;

    spec.objective.add_square(cfg.capacitance_coeff * cycles * kGHz * kGHz, {{{f, 1.0}}, 0.0});
    spec.objective.add_linear(z, 1.0);
    spec.objective.add_constant(down_e);

    // z * psi >= beta * q
    ConvexFunction energy;
    energy.add_linear(q, beta).add_bilinear_restriction(z, psi, p.z, p.psi);
    spec.constraints.push_back({tag("upload_energy", n), std::move(energy)});

    // psi * ln2 <= ln(1 + theta)
    const LogBoundCoeffs lb = log_bound_coeffs(p.theta);
    ConvexFunction rate;
    rate.add_linear(psi, kLn2).add_constant(-lb.a).add_reciprocal(theta, lb.c);
    spec.constraints.push_back({tag("rate", n), std::move(rate)});

    // theta <= beta0 * q / d2 at the farthest slot
    ConvexFunction snr;
    snr.add_linear(theta, d2 / b0).add_linear(q, -1.0);
    spec.constraints.push_back({tag("snr", n), std::move(snr)});

    ConvexFunction latency;
    latency.add_reciprocal(f, cycles / kGHz).add_linear(t, 1.0).add_constant(down_t - cfg.t_max_s);
    spec.constraints.push_back({tag("latency", n), std::move(latency)});

    // t * q >= z bounds the upload time z/q from above
    ConvexFunction up_time;
    up_time.add_linear(z, 1.0).add_bilinear_restriction(t, q, p.t, floored(fixed.user_power[n]));
    spec.constraints.push_back({tag("upload_time", n), std::move(up_time)});
  }
  return out;
}

BuiltSubproblem build_subproblem2(std::span<const UserProfile> users, const AllocationSolution& fixed,
                                  const LinearizationPoint& lin, const SystemConfig& cfg,
                                  bool pin_trajectory, bool free_freq) {
  model::check_dimensions(fixed, users.size(), cfg);
  BuiltSubproblem out;
  auto& spec = out.spec;
  const std::size_t K = cfg.k_slots;
  const std::size_t N = users.size();
  const double inf = std::numeric_limits<double>::infinity();
  const double b0 = cfg.beta0();
  out.start.resize(static_cast<Eigen::Index>((pin_trajectory ? 1 : 3) * K + (free_freq ? 4 : 3) * N + 3 * N * K));

  auto set_start = [&](std::size_t j, double v) { out.start[static_cast<Eigen::Index>(j)] = v; };

  std::vector<std::size_t> xs, ys, qs(K);
  for (std::size_t k = 0; k < K; ++k) {
    if (!pin_trajectory) {
      xs.push_back(spec.add_var(tag("x", k), -inf, inf));
      ys.push_back(spec.add_var(tag("y", k), -inf, inf));
      set_start(xs[k], fixed.trajectory.waypoints[k].x);
      set_start(ys[k], fixed.trajectory.waypoints[k].y);
    }
    qs[k] = spec.add_var(tag("q_uav", k), quav_floor(cfg), cfg.q_uav_max_w);
    set_start(qs[k], fixed.uav_power[k]);
  }
  out.x_idx = xs;
  out.y_idx = ys;
  out.quav_idx = qs;
  std::vector<std::size_t> om(N), us(N), vs(N);
  for (std::size_t n = 0; n < N; ++n) {
    const auto& w = lin.uav.at(n);
    om[n] = spec.add_var(tag("omega", n), 0.0);
    us[n] = spec.add_var(tag("u", n), 0.0);
    vs[n] = spec.add_var(tag("v", n), 0.0);
    set_start(om[n], w.omega);
    set_start(us[n], w.u);
    set_start(vs[n], w.v);
  }

  for (std::size_t n = 0; n < N; ++n) {
    const auto& u = users[n];
    const auto& w = lin.uav.at(n);
    const double gamma = u.model_bits / cfg.bandwidth_hz;
    const double qn = fixed.user_power[n];
    spec.objective.add_linear(us[n], qn);
    spec.objective.add_linear(om[n], 1.0);

    ConvexFunction latency;
    latency.add_linear(us[n], 1.0).add_linear(vs[n], 1.0).add_constant(-cfg.t_max_s);
    if (free_freq) {
      // Training time competes with the links for the same deadline, so f moves with this block too.
      const double cycles = u.total_cycles();
      const std::size_t f = spec.add_var(tag("f_ghz", n), f_floor(cfg) / kGHz, cfg.f_max_hz / kGHz);
      out.f_idx.push_back(f);
      set_start(f, fixed.freq[n] / kGHz);
      spec.objective.add_square(cfg.capacitance_coeff * cycles * kGHz * kGHz, {{{f, 1.0}}, 0.0});
      latency.add_reciprocal(f, cycles / kGHz);
    } else {
      const auto train = model::train_time_energy(u, fixed.freq[n], cfg);
      spec.objective.add_constant(train.joules);
      latency.add_constant(train.seconds);
    }
    spec.constraints.push_back({tag("latency", n), std::move(latency)});

    for (std::size_t k = 0; k < K; ++k) {
      const std::size_t xi = spec.add_var(tag("xi", n, k), 0.0);
      const std::size_t eta = spec.add_var(tag("eta", n, k), 0.0);
      const std::size_t lam = spec.add_var(tag("lambda", n, k), 0.0);
      set_start(xi, w.xi[k]);
      set_start(eta, w.eta[k]);
      set_start(lam, w.lambda[k]);

      ConvexFunction dist;
      if (pin_trajectory) {
        dist.add_constant(model::squared_distance(fixed.trajectory.waypoints[k], u.pos, cfg.altitude_m));
      } else {
        dist.add_square(1.0, {{{xs[k], 1.0}}, -u.pos.x})
            .add_square(1.0, {{{ys[k], 1.0}}, -u.pos.y})
            .add_constant(cfg.altitude_m * cfg.altitude_m);
      }
      dist.add_linear(lam, -1.0);
      spec.constraints.push_back({tag("distance", n, k), std::move(dist)});

      // eta * lambda <= beta0 * q_uav through the AM-GM majorant
      ConvexFunction snr;
      snr.add_square(0.5 * w.lambda[k] / w.eta[k] / b0, {{{eta, 1.0}}, 0.0})
          .add_square(0.5 * w.eta[k] / w.lambda[k] / b0, {{{lam, 1.0}}, 0.0})
          .add_linear(qs[k], -1.0);
      spec.constraints.push_back({tag("snr", n, k), std::move(snr)});

      const LogBoundCoeffs lb = log_bound_coeffs(w.eta[k]);
      ConvexFunction rate;
      rate.add_linear(xi, kLn2).add_constant(-lb.a).add_reciprocal(eta, lb.c);
      spec.constraints.push_back({tag("rate", n, k), std::move(rate)});

      // xi * omega >= gamma * q_uav
      ConvexFunction energy;
      energy.add_linear(qs[k], gamma).add_bilinear_restriction(xi, om[n], w.xi[k], w.omega);
      spec.constraints.push_back({tag("download_energy", n, k), std::move(energy)});

      ConvexFunction down_time;
      down_time.add_reciprocal(xi, gamma).add_linear(vs[n], -1.0);
      spec.constraints.push_back({tag("download_time", n, k), std::move(down_time)});

      // Upload time is concave in the squared distance; its tangent bounds it from above.
      const double t0 = upload_time_of_d2(u.upload_bits, qn, w.lambda[k], cfg);
      const double slope = upload_time_slope(u.upload_bits, qn, w.lambda[k], cfg);
      ConvexFunction up_time;
      up_time.add_constant(t0 - slope * w.lambda[k]).add_linear(lam, slope).add_linear(us[n], -1.0);
      spec.constraints.push_back({tag("upload_time", n, k), std::move(up_time)});
    }
  }

  if (!pin_trajectory) {
    // Step k joins waypoint k-1 (or the start) to waypoint k (or the end).
    const double l2 = cfg.max_step_m() * cfg.max_step_m();
    for (std::size_t k = 0; k <= K; ++k) {
      SparseAffine dx{{}, 0.0};
      SparseAffine dy{{}, 0.0};
      if (k < K) {
        dx.coeffs.push_back({xs[k], 1.0});
        dy.coeffs.push_back({ys[k], 1.0});
      } else {
        dx.offset += cfg.end_pos.x;
        dy.offset += cfg.end_pos.y;
      }
      if (k > 0) {
        dx.coeffs.push_back({xs[k - 1], -1.0});
        dy.coeffs.push_back({ys[k - 1], -1.0});
      } else {
        dx.offset -= cfg.start_pos.x;
        dy.offset -= cfg.start_pos.y;
      }
      ConvexFunction g;
      g.add_square(1.0, std::move(dx)).add_square(1.0, std::move(dy)).add_constant(-l2);
      spec.constraints.push_back({tag("step", k), std::move(g)});
    }
  }

  ConvexFunction avg;
  for (std::size_t k = 0; k < K; ++k) avg.add_linear(qs[k], 1.0 / static_cast<double>(K));
  avg.add_constant(-cfg.avg_power_w);
  spec.constraints.push_back({"quav_avg", std::move(avg)});
  return out;
}

AllocationSolution apply_solution(const BuiltSubproblem& sp, const Eigen::VectorXd& x, AllocationSolution base) {
  auto at = [&](std::size_t j) { return x[static_cast<Eigen::Index>(j)]; };
  for (std::size_t n = 0; n < sp.f_idx.size(); ++n) base.freq[n] = at(sp.f_idx[n]) * kGHz;
  for (std::size_t n = 0; n < sp.q_idx.size(); ++n) base.user_power[n] = at(sp.q_idx[n]);
  for (std::size_t k = 0; k < sp.x_idx.size(); ++k) base.trajectory.waypoints[k] = {at(sp.x_idx[k]), at(sp.y_idx[k])};
  for (std::size_t k = 0; k < sp.quav_idx.size(); ++k) base.uav_power[k] = at(sp.quav_idx[k]);
  return base;
}

}  // namespace uavfl::sca
