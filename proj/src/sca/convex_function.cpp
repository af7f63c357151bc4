#include "uavfl/sca/convex_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uavfl::sca {

double SparseAffine::eval(const Eigen::VectorXd& x) const {
  double v = offset;
  for (const auto& [j, a] : coeffs) v += a * x[static_cast<Eigen::Index>(j)];
  return v;
}

ConvexFunction& ConvexFunction::add_constant(double c) {
  constant_ += c;
  return *this;
}

ConvexFunction& ConvexFunction::add_linear(std::size_t j, double a) {
  linear_.emplace_back(j, a);
  return *this;
}

ConvexFunction& ConvexFunction::add_square(double w, SparseAffine form) {
  if (!(w >= 0.0)) throw std::invalid_argument("square term weight must be >= 0");
  squares_.push_back({w, std::move(form)});
  return *this;
}

ConvexFunction& ConvexFunction::add_reciprocal(std::size_t j, double c) {
  if (!(c >= 0.0)) throw std::invalid_argument("reciprocal coefficient must be >= 0");
  reciprocals_.push_back({j, c});
  return *this;
}

ConvexFunction& ConvexFunction::add_bilinear_restriction(std::size_t a, std::size_t b, double a_i,
                                                         double b_i) {
  if (!(a_i > 0.0) || !(b_i > 0.0)) {
    throw std::invalid_argument("bilinear restriction needs a positive expansion point");
  }
  bilinears_.push_back({a, b, a_i, b_i, std::sqrt(b_i / a_i)});
  return *this;
}

double ConvexFunction::value(const Eigen::VectorXd& x) const {
  double v = constant_;
  for (const auto& [j, a] : linear_) v += a * x[static_cast<Eigen::Index>(j)];
  for (const auto& sq : squares_) {
    const double r = sq.form.eval(x);
    v += sq.w * r * r;
  }
  for (const auto& rc : reciprocals_) v += rc.c / x[static_cast<Eigen::Index>(rc.j)];
  for (const auto& bl : bilinears_) {
    const double xa = x[static_cast<Eigen::Index>(bl.a)];
    const double xb = x[static_cast<Eigen::Index>(bl.b)];
    const double r = bl.s * (xa - bl.a_i) + (xb - bl.b_i) / bl.s;
    v += -xa * xb + 0.25 * r * r;
  }
  return v;
}

void ConvexFunction::add_gradient(const Eigen::VectorXd& x, double scale, Eigen::VectorXd& g) const {
  for (const auto& [j, a] : linear_) g[static_cast<Eigen::Index>(j)] += scale * a;
  for (const auto& sq : squares_) {
    const double r = sq.form.eval(x);
    for (const auto& [j, a] : sq.form.coeffs) g[static_cast<Eigen::Index>(j)] += scale * 2.0 * sq.w * r * a;
  }
  for (const auto& rc : reciprocals_) {
    const double xj = x[static_cast<Eigen::Index>(rc.j)];
    g[static_cast<Eigen::Index>(rc.j)] -= scale * rc.c / (xj * xj);
  }
  for (const auto& bl : bilinears_) {
    const auto ia = static_cast<Eigen::Index>(bl.a);
    const auto ib = static_cast<Eigen::Index>(bl.b);
    const double r = bl.s * (x[ia] - bl.a_i) + (x[ib] - bl.b_i) / bl.s;
    g[ia] += scale * (-x[ib] + 0.5 * r * bl.s);
    g[ib] += scale * (-x[ia] + 0.5 * r / bl.s);
  }
}

void ConvexFunction::add_hessian(const Eigen::VectorXd& x, double scale, Eigen::MatrixXd& h) const {
  for (const auto& sq : squares_) {
    for (const auto& [i, ai] : sq.form.coeffs) {
      for (const auto& [j, aj] : sq.form.coeffs) {
        h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += scale * 2.0 * sq.w * ai * aj;
      }
    }
  }
  for (const auto& rc : reciprocals_) {
    const auto j = static_cast<Eigen::Index>(rc.j);
    h(j, j) += scale * 2.0 * rc.c / (x[j] * x[j] * x[j]);
  }
  for (const auto& bl : bilinears_) {
    const auto ia = static_cast<Eigen::Index>(bl.a);
    const auto ib = static_cast<Eigen::Index>(bl.b);
    h(ia, ia) += scale * 0.5 * bl.s * bl.s;
    h(ib, ib) += scale * 0.5 / (bl.s * bl.s);
    h(ia, ib) -= scale * 0.5;
    h(ib, ia) -= scale * 0.5;
  }
}

double ConvexFunction::magnitude(const Eigen::VectorXd& x) const {
  double m = std::abs(constant_);
  for (const auto& [j, a] : linear_) m += std::abs(a * x[static_cast<Eigen::Index>(j)]);
  for (const auto& sq : squares_) {
    const double r = sq.form.eval(x);
    m += sq.w * r * r;
  }
  for (const auto& rc : reciprocals_) m += std::abs(rc.c / x[static_cast<Eigen::Index>(rc.j)]);
  for (const auto& bl : bilinears_) {
    const double xa = x[static_cast<Eigen::Index>(bl.a)];
    const double xb = x[static_cast<Eigen::Index>(bl.b)];
    const double r = bl.s * (xa - bl.a_i) + (xb - bl.b_i) / bl.s;
    m += std::abs(xa * xb) + 0.25 * r * r;
  }
  return m;
}

bool ConvexFunction::in_domain(const Eigen::VectorXd& x) const {
  return std::all_of(reciprocals_.begin(), reciprocals_.end(),
                     [&](const Reciprocal& rc) { return x[static_cast<Eigen::Index>(rc.j)] > 0.0; });
}

std::size_t ConvexFunction::max_index() const {
  std::size_t m = 0;
  for (const auto& [j, a] : linear_) m = std::max(m, j + 1);
  for (const auto& sq : squares_) {
    for (const auto& [j, a] : sq.form.coeffs) m = std::max(m, j + 1);
  }
  for (const auto& rc : reciprocals_) m = std::max(m, rc.j + 1);
  for (const auto& bl : bilinears_) m = std::max({m, bl.a + 1, bl.b + 1});
  return m;
}

std::vector<std::size_t> ConvexFunction::support() const {
  std::vector<std::size_t> idx;
  for (const auto& [j, a] : linear_) idx.push_back(j);
  for (const auto& sq : squares_) {
    for (const auto& [j, a] : sq.form.coeffs) idx.push_back(j);
  }
  for (const auto& rc : reciprocals_) idx.push_back(rc.j);
  for (const auto& bl : bilinears_) {
    idx.push_back(bl.a);
    idx.push_back(bl.b);
  }
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

std::size_t SubproblemSpec::add_var(std::string name, double lo, double hi) {
  const auto n = static_cast<Eigen::Index>(var_names.size());
  var_names.push_back(std::move(name));
  lower.conservativeResize(n + 1);
  upper.conservativeResize(n + 1);
  lower[n] = lo;
  upper[n] = hi;
  return static_cast<std::size_t>(n);
}

void SubproblemSpec::validate() const {
  const std::size_t n = n_vars();
  if (static_cast<std::size_t>(lower.size()) != n || static_cast<std::size_t>(upper.size()) != n) {
    throw std::invalid_argument("bound vectors do not match the variable count");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!(lower[static_cast<Eigen::Index>(j)] < upper[static_cast<Eigen::Index>(j)])) {
      throw std::invalid_argument("empty box for variable " + var_names[j]);
    }
  }
  if (objective.max_index() > n) throw std::invalid_argument("objective references an undeclared variable");
  for (const auto& c : constraints) {
    if (c.g.max_index() > n) throw std::invalid_argument("constraint " + c.name + " references an undeclared variable");
  }
}

}  // namespace uavfl::sca
