#pragma once

#include <cstdint>
#include <string_view>

namespace uavfl {

// splitmix64 finalizer; used to spread seeds before handing them to engines.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Named sub-seed: hash(seed, component-name). Stable across platforms.
constexpr std::uint64_t sub_seed(std::uint64_t seed, std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the name
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return mix64(seed ^ mix64(h));
}

constexpr std::uint64_t sub_seed(std::uint64_t seed, std::string_view name, std::uint64_t index) {
  return mix64(sub_seed(seed, name) + mix64(index));
}

}  // namespace uavfl
