#include "uavfl/zkfed/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "uavfl/zkfed/quantize.hpp"

namespace uavfl::zkfed {

void VerificationPolicy::validate() const {
  if (!(norm_bound >= 0.0) || !std::isfinite(norm_bound)) throw std::invalid_argument("norm_bound must be >= 0");
  if (!(norm_multiplier > 0.0) || !std::isfinite(norm_multiplier)) {
    throw std::invalid_argument("norm_multiplier must be > 0");
  }
}

double dequantized_norm(std::span<const std::int64_t> delta) {
  long double acc = 0.0L;
  for (auto v : delta) {
    const long double x = static_cast<long double>(v) / kQuantScale;
    acc += x * x;
  }
  return static_cast<double>(std::sqrt(acc));
}

PolicyCheck check_policy(std::span<const std::int64_t> delta, double bound) {
  if (!(bound > 0.0)) throw std::invalid_argument("norm bound must be > 0");
  const double n = dequantized_norm(delta);
  return {n <= bound, n};
}

double calibrated_bound(std::span<const double> norms, double multiplier) {
  if (norms.empty()) throw std::invalid_argument("calibrated_bound: no norms");
  std::vector<double> v(norms.begin(), norms.end());
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  const double median = v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
  return multiplier * median;
}

}  // namespace uavfl::zkfed
