#pragma once

#include <cstdint>
#include <span>

namespace uavfl::zkfed {

/// Update-validity rule applied by the aggregator before aggregation.
/// A positive norm_bound is used as is; 0 selects per-round calibration at
/// norm_multiplier times the median norm submitted in that round.
struct VerificationPolicy {
  double norm_bound = 0.0;
  double norm_multiplier = 3.0;

  void validate() const;
};

struct PolicyCheck {
  bool pass = false;
  double norm = 0.0;
};

/// L2 norm of the dequantized vector.
double dequantized_norm(std::span<const std::int64_t> delta);

/// Passes iff the dequantized L2 norm is <= bound (inclusive). Throws
/// std::invalid_argument unless bound > 0.
PolicyCheck check_policy(std::span<const std::int64_t> delta, double bound);

/// multiplier * median(norms); throws std::invalid_argument on empty input.
double calibrated_bound(std::span<const double> norms, double multiplier);

}  // namespace uavfl::zkfed
