#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "uavfl/fl/attack.hpp"
#include "uavfl/fl/softmax_model.hpp"
#include "uavfl/zkfed/policy.hpp"
#include "uavfl/zkfed/protocol.hpp"

namespace uavfl::fl {

struct RoundRecord {
  int epoch = 0;
  bool protected_run = false;
  double accuracy = 0.0;
  double loss = 0.0;
  double asr = 0.0;  ///< 0 while the attack has not started
  std::vector<std::uint32_t> rejected_ids;
  std::size_t payload_bytes = 0;
  std::size_t overhead_bytes = 0;
  double proof_gen_ms = 0.0;
  double proof_verify_ms = 0.0;  ///< mean over verifying clients
  /// Clients whose verification failed; a non-empty list means the broadcast
  /// was not applied.
  std::vector<std::uint32_t> verify_failures;
};

struct FlClient {
  std::uint32_t id = 0;
  Samples shard;
};

struct ZkContext {
  zkfed::ProtocolSetup setup;
  zkfed::VerificationPolicy policy;
};

struct RoundOptions {
  TrainOptions train;
  bool timing = true;  ///< false writes 0 into the timing fields
  std::uint64_t seed = 0;
};

struct RoundResult {
  RoundRecord record;
  SoftmaxModel global;
};

/// One federated round. With zk set, updates go through quantize, commit,
/// sign, policy, aggregate, prove and verification by every accepted client;
/// otherwise all deltas (poisoned ones included) are averaged. Clients are
/// reduced in ascending id order.
RoundResult run_round(std::span<const FlClient> clients, const SoftmaxModel& global, const Samples& test, int epoch,
                      const AttackConfig& attack, const ZkContext* zk, const RoundOptions& opt);

}  // namespace uavfl::fl
