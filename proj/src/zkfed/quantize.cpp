#include "uavfl/zkfed/quantize.hpp"

#include <cmath>
#include <stdexcept>

namespace uavfl::zkfed {

QuantizedVector quantize(std::span<const double> v) {
  QuantizedVector q;
  q.values.reserve(v.size());
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument("quantize: non-finite input");
    const double r = std::nearbyint(x * kQuantScale);  // default rounding mode: ties to even
    if (r < static_cast<double>(kQuantMin)) {
      q.values.push_back(kQuantMin);
      ++q.clamped;
    } else if (r > static_cast<double>(kQuantMax)) {
      q.values.push_back(kQuantMax);
      ++q.clamped;
    } else {
      q.values.push_back(static_cast<std::int64_t>(r));
    }
  }
  return q;
}

std::vector<double> dequantize(std::span<const std::int64_t> values, double divisor) {
  std::vector<double> out;
  out.reserve(values.size());
  const double k = kQuantScale * divisor;
  for (auto v : values) out.push_back(static_cast<double>(v) / k);
  return out;
}

}  // namespace uavfl::zkfed
