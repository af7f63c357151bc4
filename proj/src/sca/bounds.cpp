#include "uavfl/sca/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace uavfl::sca {

Affine1 taylor_lower_square(double u_i) { return {2.0 * u_i, -u_i * u_i}; }

LogBoundCoeffs log_bound_coeffs(double t_i) {
  if (!(t_i > 0.0)) throw std::domain_error("log bound: expansion point must be > 0");
  return {std::log1p(t_i) + t_i / (1.0 + t_i), t_i * t_i / (1.0 + t_i)};
}

double log_lower_bound(double t, double t_i) {
  if (!(t > 0.0)) throw std::domain_error("log bound: argument must be > 0");
  const LogBoundCoeffs k = log_bound_coeffs(t_i);
  return k.a - k.c / t;
}

double amgm_upper_bilinear(double eta, double lambda, double eta_i, double lambda_i) {
  if (!(eta_i > 0.0) || !(lambda_i > 0.0)) {
    throw std::domain_error("amgm bound: expansion point must be > 0");
  }
  return 0.5 * (lambda_i / eta_i) * eta * eta + 0.5 * (eta_i / lambda_i) * lambda * lambda;
}

}  // namespace uavfl::sca
