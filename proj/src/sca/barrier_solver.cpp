#include "uavfl/sca/barrier_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace uavfl::sca {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Barrier problem over y = (x) or y = (x, s) in phase I:
//   phase II: minimize f(x)/fscale, constraints g_i(x)/c_i <= 0
//   phase I:  minimize s,           constraints g_i(x)/c_i - s <= 0, s >= -1
class BarrierProblem {
 public:
  BarrierProblem(const SubproblemSpec& spec, std::vector<double> cscale, double fscale, bool phase1)
      : spec_(spec), cscale_(std::move(cscale)), fscale_(fscale), phase1_(phase1) {
    n_ = static_cast<Eigen::Index>(spec.n_vars());
    m_ = static_cast<double>(spec.constraints.size()) + (phase1 ? 1.0 : 0.0);
    for (const auto& c : spec.constraints) support_.push_back(c.g.support());
    for (Eigen::Index j = 0; j < n_; ++j) {
      if (std::isfinite(spec.lower[j])) m_ += 1.0;
      if (std::isfinite(spec.upper[j])) m_ += 1.0;
    }
  }

  Eigen::Index dim() const { return n_ + (phase1_ ? 1 : 0); }
  double barrier_terms() const { return m_; }

  double objective(const Eigen::VectorXd& y) const {
    return phase1_ ? y[n_] : spec_.objective.value(y.head(n_)) / fscale_;
  }

  double shift(const Eigen::VectorXd& y) const { return phase1_ ? y[n_] : 0.0; }

  // Scaled constraint value minus the phase-I shift.
  double constraint(std::size_t i, const Eigen::VectorXd& x, double shift) const {
    return spec_.constraints[i].g.value(x) / cscale_[i] - shift;
  }

  bool strictly_feasible(const Eigen::VectorXd& y) const {
    const Eigen::VectorXd x = y.head(n_);
    for (Eigen::Index j = 0; j < n_; ++j) {
      if (!(x[j] > spec_.lower[j]) || !(x[j] < spec_.upper[j])) return false;
    }
    if (phase1_ && !(y[n_] > -1.0)) return false;
    if (!spec_.objective.in_domain(x)) return false;
    for (std::size_t i = 0; i < spec_.constraints.size(); ++i) {
      if (!spec_.constraints[i].g.in_domain(x)) return false;
      if (!(constraint(i, x, shift(y)) < 0.0)) return false;
    }
    return true;
  }

  // t * objective + barrier; +inf when not strictly feasible.
  double merit(const Eigen::VectorXd& y, double t) const {
    if (!strictly_feasible(y)) return kInf;
    double v = t * objective(y);
    const Eigen::VectorXd x = y.head(n_);
    for (std::size_t i = 0; i < spec_.constraints.size(); ++i) v -= std::log(-constraint(i, x, shift(y)));
    for (Eigen::Index j = 0; j < n_; ++j) {
      if (std::isfinite(spec_.lower[j])) v -= std::log(y[j] - spec_.lower[j]);
      if (std::isfinite(spec_.upper[j])) v -= std::log(spec_.upper[j] - y[j]);
    }
    if (phase1_) v -= std::log(y[n_] + 1.0);
    return v;
  }

  void derivatives(const Eigen::VectorXd& y, double t, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const {
    const Eigen::Index d = dim();
    grad.setZero(d);
    hess.setZero(d, d);
    const Eigen::VectorXd x = y.head(n_);
    if (phase1_) {
      grad[n_] += t;
    } else {
      Eigen::VectorXd gx = Eigen::VectorXd::Zero(n_);
      spec_.objective.add_gradient(x, t / fscale_, gx);
      grad.head(n_) += gx;
      Eigen::MatrixXd hx = Eigen::MatrixXd::Zero(n_, n_);
      spec_.objective.add_hessian(x, t / fscale_, hx);
      hess.topLeftCorner(n_, n_) += hx;
    }
    // Constraint gradients are sparse; accumulate over each support only.
    Eigen::VectorXd gx = Eigen::VectorXd::Zero(d);
    std::vector<Eigen::Index> idx;
    for (std::size_t i = 0; i < spec_.constraints.size(); ++i) {
      const double v = constraint(i, x, shift(y));  // < 0
      const double inv = -1.0 / v;
      const auto& g = spec_.constraints[i].g;
      g.add_gradient(x, 1.0 / cscale_[i], gx);
      idx.assign(support_[i].begin(), support_[i].end());
      if (phase1_) {
        gx[n_] = -1.0;
        idx.push_back(n_);
      }
      for (Eigen::Index a : idx) {
        grad[a] += inv * gx[a];
        for (Eigen::Index b : idx) hess(a, b) += inv * inv * gx[a] * gx[b];
      }
      g.add_hessian(x, inv / cscale_[i], hess);
      for (Eigen::Index a : idx) gx[a] = 0.0;
    }
    for (Eigen::Index j = 0; j < n_; ++j) {
      if (std::isfinite(spec_.lower[j])) {
        const double r = 1.0 / (y[j] - spec_.lower[j]);
        grad[j] -= r;
        hess(j, j) += r * r;
      }
      if (std::isfinite(spec_.upper[j])) {
        const double r = 1.0 / (spec_.upper[j] - y[j]);
        grad[j] += r;
        hess(j, j) += r * r;
      }
    }
    if (phase1_) {
      const double r = 1.0 / (y[n_] + 1.0);
      grad[n_] -= r;
      hess(n_, n_) += r * r;
    }
  }

 private:
  const SubproblemSpec& spec_;
  std::vector<double> cscale_;
  double fscale_;
  bool phase1_;
  Eigen::Index n_ = 0;
  double m_ = 0.0;
  std::vector<std::vector<std::size_t>> support_;
};

struct CenterOutcome {
  double decrement = 0.0;
  double grad_inf = 0.0;  ///< infinity norm of the merit gradient at exit
};

// Newton centering with feasibility-preserving backtracking and Armijo.
// `stop_early` lets phase I return as soon as s < 0.
template <class Stop>
CenterOutcome center(const BarrierProblem& p, Eigen::VectorXd& y, double t, const SolverOptions& opt,
                     int& budget, Stop stop_early) {
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  CenterOutcome out;
  while (true) {
    p.derivatives(y, t, grad, hess);
    out.grad_inf = grad.lpNorm<Eigen::Infinity>();
    if (!grad.allFinite() || !hess.allFinite()) {
      throw SolverError(SolverError::Kind::kNumerical, "non-finite barrier derivatives");
    }
    // Jacobi scaling keeps the Newton system well conditioned across units.
    Eigen::VectorXd dscale = hess.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd hs = dscale.asDiagonal() * hess * dscale.asDiagonal();
    Eigen::VectorXd rhs = -dscale.cwiseProduct(grad);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hs);
    Eigen::VectorXd step = ldlt.solve(rhs);
    double reg = 1e-12;
    while ((ldlt.info() != Eigen::Success || !step.allFinite() || rhs.dot(step) <= 0.0) && reg < 1.0) {
      ldlt.compute(hs + reg * Eigen::MatrixXd::Identity(hs.rows(), hs.cols()));
      step = ldlt.solve(rhs);
      reg *= 100.0;
    }
    if (!step.allFinite()) throw SolverError(SolverError::Kind::kNumerical, "Newton system is singular");
    const Eigen::VectorXd dy = dscale.cwiseProduct(step);
    out.decrement = -grad.dot(dy);
    if (out.decrement / 2.0 <= opt.newton_tol) return out;
    if (budget-- <= 0) throw SolverError(SolverError::Kind::kMaxIterations, "Newton iteration budget exhausted");

    const double f0 = p.merit(y, t);
    const double slope = grad.dot(dy);
    double alpha = 1.0;
    Eigen::VectorXd trial = y + alpha * dy;
    while (!p.strictly_feasible(trial) && alpha > 1e-30) {
      alpha *= 0.5;
      trial = y + alpha * dy;
    }
    double f1 = p.merit(trial, t);
    while (f1 > f0 + 0.25 * alpha * slope && alpha > 1e-30) {
      alpha *= 0.5;
      trial = y + alpha * dy;
      f1 = p.merit(trial, t);
    }
    if (!(f1 <= f0)) return out;  // no progress possible at this precision
    const bool stalled = f0 - f1 <= 1e-15 * std::abs(f0);
    y = trial;
    if (stop_early(y) || stalled) return out;
  }
}

Eigen::VectorXd clip_to_interior(const SubproblemSpec& spec, Eigen::VectorXd x) {
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double lo = spec.lower[j];
    const double hi = spec.upper[j];
    if (!std::isfinite(x[j])) x[j] = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi : 0.0);
    if (std::isfinite(lo) && std::isfinite(hi)) {
      const double margin = 1e-6 * (hi - lo);
      x[j] = std::clamp(x[j], lo + margin, hi - margin);
    } else if (std::isfinite(lo) && !(x[j] > lo)) {
      x[j] = lo + std::max(1e-6 * std::abs(lo), 1e-12);
    } else if (std::isfinite(hi) && !(x[j] < hi)) {
      x[j] = hi - std::max(1e-6 * std::abs(hi), 1e-12);
    }
  }
  return x;
}

}  // namespace

SolveResult solve_convex(const SubproblemSpec& spec, const Eigen::VectorXd& init, const SolverOptions& opt) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(spec.n_vars());
  if (init.size() != n) throw std::invalid_argument("init has the wrong dimension");
  SolveResult res;
  if (n == 0) {
    res.x = init;
    res.objective = spec.objective.value(init);
    return res;
  }

  Eigen::VectorXd x = clip_to_interior(spec, init);
  std::vector<double> cscale(spec.constraints.size(), 1.0);
  for (std::size_t i = 0; i < cscale.size(); ++i) {
    if (!spec.constraints[i].g.in_domain(x)) {
      throw SolverError(SolverError::Kind::kNumerical, "start outside the domain of " + spec.constraints[i].name);
    }
    const double m = spec.constraints[i].g.magnitude(x);
    if (m > 0.0 && std::isfinite(m)) cscale[i] = m;
  }
  double fscale = spec.objective.magnitude(x);
  if (!(fscale > 0.0) || !std::isfinite(fscale)) fscale = 1.0;

  int budget = opt.max_newton;

  // Phase I unless the start is already strictly feasible.
  {
    BarrierProblem p2(spec, cscale, fscale, false);
    Eigen::VectorXd probe = x;
    if (!p2.strictly_feasible(probe)) {
      BarrierProblem p1(spec, cscale, fscale, true);
      double worst = 0.0;
      for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
        worst = std::max(worst, spec.constraints[i].g.value(x) / cscale[i]);
      }
      if (!std::isfinite(worst)) throw SolverError(SolverError::Kind::kNumerical, "non-finite constraint at start");
      Eigen::VectorXd y(n + 1);
      y.head(n) = x;
      y[n] = worst + 1.0;
      const int before = budget;
      double t = 1.0;
      bool found = false;
      auto feasible = [&](const Eigen::VectorXd& v) { return v[n] < 0.0; };
      while (true) {
        center(p1, y, t, opt, budget, feasible);
        if (y[n] < 0.0) {
          found = true;
          break;
        }
        if (p1.barrier_terms() / t < 1e-13) break;
        t *= opt.mu;
      }
      res.phase1_iters = before - budget;
      if (!found) {
        throw SolverError(SolverError::Kind::kInfeasible,
                          "no strictly feasible point (phase-I optimum " + std::to_string(y[n]) + ")");
      }
      x = y.head(n);
    }
  }

  BarrierProblem p(spec, cscale, fscale, false);
  Eigen::VectorXd y = x;
  double t = 1.0;
  CenterOutcome last;
  const int before = budget;
  while (true) {
    last = center(p, y, t, opt, budget, [](const Eigen::VectorXd&) { return false; });
    const double obj = std::abs(p.objective(y));
    const double gap = p.barrier_terms() / t;
    if (gap <= opt.gap_rel_tol * obj || gap <= 1e-16) break;
    if (t > 1e300 / opt.mu) break;
    t *= opt.mu;
  }
  res.newton_iters = before - budget;
  res.x = y;
  res.objective = spec.objective.value(y);
  res.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
    res.max_violation = std::max(res.max_violation, spec.constraints[i].g.value(y) / cscale[i]);
  }
  if (spec.constraints.empty()) res.max_violation = 0.0;
  res.stationarity = last.grad_inf / t;
  return res;
}

}  // namespace uavfl::sca
