#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace uavfl::fl {

enum class DataSource { kSynthetic, kIdx };

/// Row i of X is sample i.
struct Samples {
  Eigen::MatrixXd X;
  std::vector<int> y;

  std::size_t size() const { return y.size(); }
  Samples subset(std::span<const std::size_t> rows) const;
};

struct Dataset {
  Samples train;
  Samples test;
  int n_classes = 0;
  DataSource source = DataSource::kSynthetic;

  int d_in() const { return static_cast<int>(train.X.cols()); }
  /// Throws std::invalid_argument on shape or label-range violations.
  void validate() const;
};

/// Gaussian blobs with unit covariance. Class c has mean
/// (separation / sqrt 2) * e_c, so every pair of means is `separation` apart.
/// Requires d_in >= n_classes and n_per_class > 0.
Dataset generate_synthetic(std::uint64_t seed, int n_classes, int d_in, std::size_t n_per_class,
                           std::size_t test_per_class, double separation = 5.0);

/// Equal-size IID shards after a seeded shuffle; the remainder is dropped.
std::vector<Samples> shard_iid(const Samples& s, std::size_t n_shards, std::uint64_t seed);

}  // namespace uavfl::fl
