#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace uavfl::zkfed {

inline constexpr double kQuantScale = 65536.0;  // 2^16 fixed point
inline constexpr std::int64_t kQuantMin = -(std::int64_t{1} << 31);
inline constexpr std::int64_t kQuantMax = (std::int64_t{1} << 31) - 1;
/// Summed plaintexts stay far below the group order for up to this many clients.
inline constexpr std::size_t kMaxClients = std::size_t{1} << 20;

struct QuantizedVector {
  std::vector<std::int64_t> values;
  std::size_t clamped = 0;  ///< coordinates saturated to [kQuantMin, kQuantMax]
};

/// Round-half-to-even at scale 2^16 with saturation. Throws
/// std::invalid_argument on non-finite input.
QuantizedVector quantize(std::span<const double> v);

/// values / (2^16 * divisor)
std::vector<double> dequantize(std::span<const std::int64_t> values, double divisor = 1.0);

}  // namespace uavfl::zkfed
