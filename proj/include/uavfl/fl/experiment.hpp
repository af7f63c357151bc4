#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavfl/fl/attack.hpp"
#include "uavfl/fl/dataset.hpp"
#include "uavfl/fl/round.hpp"
#include "uavfl/zkfed/policy.hpp"

namespace uavfl::fl {

struct DataConfig {
  DataSource source = DataSource::kSynthetic;
  int n_classes = 10;
  int d_in = 20;
  std::size_t train_per_class = 200;
  std::size_t test_per_class = 100;
  double separation = 5.0;
  std::string train_images, train_labels, test_images, test_labels;
  std::size_t idx_train_limit = 2000;
  std::size_t idx_test_limit = 1000;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  int epochs = 100;
  std::size_t n_clients = 5;
  DataConfig data;
  TrainOptions train;
  AttackConfig attack;
  zkfed::VerificationPolicy policy;
  bool run_protected = true;
  bool run_unprotected = true;
  bool timing = true;

  void validate() const;
};

Dataset load_dataset(const DataConfig& cfg, std::uint64_t seed);

/// Paired runs on identical data, shards and training seeds: all protected
/// rounds first, then all unprotected rounds.
std::vector<RoundRecord> run_experiment(const ExperimentConfig& cfg);

}  // namespace uavfl::fl
