#pragma once

#include <cstdint>

#include "uavfl/fl/dataset.hpp"
#include "uavfl/fl/softmax_model.hpp"

namespace uavfl::fl {

/// Label-flip poisoning by one client.
struct AttackConfig {
  bool enabled = false;
  std::uint32_t malicious_client = 0;
  int start_epoch = 20;
  int source_label = 2;
  int target_label = 7;
  double boost = 10.0;  ///< scale applied to the malicious delta before upload

  bool active(int epoch) const { return enabled && epoch >= start_epoch; }
  void validate(int n_classes, std::size_t n_clients) const;
};

/// Relabels every source_label sample as target_label.
Samples flip_labels(const Samples& shard, const AttackConfig& attack);

/// Fraction of source_label samples predicted as target_label. Throws
/// std::invalid_argument if the set holds no source_label sample.
double attack_success_rate(const SoftmaxModel& model, const Samples& test, const AttackConfig& attack);

}  // namespace uavfl::fl
