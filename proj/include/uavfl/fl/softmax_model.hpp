#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "uavfl/fl/dataset.hpp"

namespace uavfl::fl {

/// Linear softmax classifier. Flattened weights: the n_classes x d_in matrix
/// in column-major order, then n_classes biases.
struct SoftmaxModel {
  int d_in = 0;
  int n_classes = 0;
  Eigen::VectorXd w;

  static SoftmaxModel zeros(int d_in, int n_classes);
  std::size_t dim() const { return static_cast<std::size_t>(w.size()); }

  Eigen::MatrixXd logits(const Eigen::MatrixXd& X) const;
  std::vector<int> predict(const Eigen::MatrixXd& X) const;
};

/// Mean cross-entropy.
double loss(const SoftmaxModel& m, const Samples& s);
/// Gradient of the mean cross-entropy with respect to the flattened weights.
Eigen::VectorXd gradient(const SoftmaxModel& m, const Samples& s);
double accuracy(const SoftmaxModel& m, const Samples& s);

struct TrainOptions {
  double learning_rate = 0.1;
  std::size_t batch_size = 32;
  int local_epochs = 1;

  void validate() const;
};

/// Seeded mini-batch SGD on the shard; returns new weights minus old.
/// Throws std::invalid_argument for an empty shard.
Eigen::VectorXd local_train(const SoftmaxModel& model, const Samples& shard, const TrainOptions& opt,
                            std::uint64_t seed);

}  // namespace uavfl::fl
