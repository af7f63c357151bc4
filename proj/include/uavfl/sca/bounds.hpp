#pragma once

namespace uavfl::sca {

/// Affine function slope * u + intercept.
struct Affine1 {
  double slope = 0.0;
  double intercept = 0.0;

  double operator()(double u) const { return slope * u + intercept; }
};

/// First-order minorant of u^2 at u_i: u_i^2 + 2 u_i (u - u_i).
Affine1 taylor_lower_square(double u_i);

inline double taylor_lower_square(double u, double u_i) { return taylor_lower_square(u_i)(u); }

/// ln(1+t) >= a - c/t with a = ln(1+t_i) + t_i/(1+t_i), c = t_i^2/(1+t_i).
struct LogBoundCoeffs {
  double a = 0.0;
  double c = 0.0;
};

/// Throws std::domain_error unless t_i > 0.
LogBoundCoeffs log_bound_coeffs(double t_i);

/// Lower bound on ln(1+t), tight at t_i. Throws std::domain_error for t <= 0 or t_i <= 0.
double log_lower_bound(double t, double t_i);

/// Upper bound on eta*lambda, tight at (eta_i, lambda_i). Throws std::domain_error
/// unless eta_i, lambda_i > 0.
double amgm_upper_bilinear(double eta, double lambda, double eta_i, double lambda_i);

}  // namespace uavfl::sca
