#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace uavfl::sca {

/// sum_j coeff_j * x[index_j] + offset
struct SparseAffine {
  std::vector<std::pair<std::size_t, double>> coeffs;
  double offset = 0.0;

  double eval(const Eigen::VectorXd& x) const;
};

/// Smooth convex function assembled from a small set of term kinds, each
/// with closed-form gradient and Hessian.
class ConvexFunction {
 public:
  ConvexFunction& add_constant(double c);
  ConvexFunction& add_linear(std::size_t j, double a);
  /// w * (affine)^2, w >= 0.
  ConvexFunction& add_square(double w, SparseAffine form);
  /// c / x_j with c >= 0; x_j must stay > 0.
  ConvexFunction& add_reciprocal(std::size_t j, double c);
  /// Convex restriction of -x_a*x_b around (a_i, b_i):
  ///   -x_a x_b + 1/4 (s (x_a - a_i) + (x_b - b_i)/s)^2, s = sqrt(b_i/a_i).
  /// Upper-bounds -x_a x_b everywhere and is tight at (a_i, b_i).
  ConvexFunction& add_bilinear_restriction(std::size_t a, std::size_t b, double a_i, double b_i);

  double value(const Eigen::VectorXd& x) const;
  /// Adds scale * gradient into g.
  void add_gradient(const Eigen::VectorXd& x, double scale, Eigen::VectorXd& g) const;
  /// Adds scale * Hessian into h.
  void add_hessian(const Eigen::VectorXd& x, double scale, Eigen::MatrixXd& h) const;
  /// Sum of absolute term values; used to normalize constraints.
  double magnitude(const Eigen::VectorXd& x) const;
  /// False if a reciprocal term's variable is not strictly positive.
  bool in_domain(const Eigen::VectorXd& x) const;

  std::size_t max_index() const;  ///< largest variable index referenced + 1
  /// Sorted, unique variable indices the function depends on.
  std::vector<std::size_t> support() const;

 private:
  struct Square {
    double w;
    SparseAffine form;
  };
  struct Reciprocal {
    std::size_t j;
    double c;
  };
  struct Bilinear {
    std::size_t a, b;
    double a_i, b_i, s;
  };

  double constant_ = 0.0;
  std::vector<std::pair<std::size_t, double>> linear_;
  std::vector<Square> squares_;
  std::vector<Reciprocal> reciprocals_;
  std::vector<Bilinear> bilinears_;
};

struct NamedConstraint {
  std::string name;
  ConvexFunction g;  ///< feasible iff g(x) <= 0
};

/// Smooth convex program: minimize objective subject to g_i(x) <= 0 and
/// lower <= x <= upper (infinite bounds allowed).
struct SubproblemSpec {
  std::vector<std::string> var_names;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  ConvexFunction objective;
  std::vector<NamedConstraint> constraints;

  std::size_t add_var(std::string name, double lo,
                      double hi = std::numeric_limits<double>::infinity());
  std::size_t n_vars() const { return var_names.size(); }
  /// Throws std::invalid_argument if a term references an undeclared variable
  /// or a bound pair is empty.
  void validate() const;
};

}  // namespace uavfl::sca
