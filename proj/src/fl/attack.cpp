#include "uavfl/fl/attack.hpp"

#include <cmath>
#include <stdexcept>

namespace uavfl::fl {

void AttackConfig::validate(int n_classes, std::size_t n_clients) const {
  if (source_label == target_label) throw std::invalid_argument("attack: source_label must differ from target_label");
  if (source_label < 0 || source_label >= n_classes || target_label < 0 || target_label >= n_classes) {
    throw std::invalid_argument("attack: label outside [0, n_classes)");
  }
  if (start_epoch < 0) throw std::invalid_argument("attack: start_epoch must be >= 0");
  if (!(boost > 0.0) || !std::isfinite(boost)) throw std::invalid_argument("attack: boost must be > 0");
  if (enabled && malicious_client >= n_clients) throw std::invalid_argument("attack: malicious_client out of range");
}

Samples flip_labels(const Samples& shard, const AttackConfig& attack) {
  Samples out = shard;
  for (int& label : out.y) {
    if (label == attack.source_label) label = attack.target_label;
  }
  return out;
}

double attack_success_rate(const SoftmaxModel& model, const Samples& test, const AttackConfig& attack) {
  const auto pred = model.predict(test.X);
  std::size_t source = 0;
  std::size_t flipped = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (test.y[i] != attack.source_label) continue;
    ++source;
    flipped += pred[i] == attack.target_label;
  }
  if (source == 0) throw std::invalid_argument("attack_success_rate: no source-label samples");
  return static_cast<double>(flipped) / static_cast<double>(source);
}

}  // namespace uavfl::fl
