#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "uavfl/fl/dataset.hpp"

namespace uavfl::fl {

class IdxError : public std::runtime_error {
 public:
  enum class Kind { kOpen, kMagicMismatch, kCountMismatch, kTruncated, kBadLabel };
  IdxError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

/// IDX image/label pair; pixels scaled to [0, 1], labels must be < 10.
/// limit = 0 keeps every sample.
Samples load_idx(const std::filesystem::path& images, const std::filesystem::path& labels, std::size_t limit = 0);

Dataset load_idx_dataset(const std::filesystem::path& train_images, const std::filesystem::path& train_labels,
                         const std::filesystem::path& test_images, const std::filesystem::path& test_labels,
                         std::size_t train_limit, std::size_t test_limit);

}  // namespace uavfl::fl
