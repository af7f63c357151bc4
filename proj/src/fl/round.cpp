#include "uavfl/fl/round.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

#include "uavfl/common/seed.hpp"
#include "uavfl/zkfed/quantize.hpp"
#include "uavfl/zkfed/serialize.hpp"

namespace uavfl::fl {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

constexpr std::size_t kFloatBytes = 4;  // plaintext weights travel as 32-bit values

}  // namespace

RoundResult run_round(std::span<const FlClient> clients, const SoftmaxModel& global, const Samples& test, int epoch,
                      const AttackConfig& attack, const ZkContext* zk, const RoundOptions& opt) {
  if (clients.empty()) throw std::invalid_argument("run_round: no clients");
  attack.validate(global.n_classes, clients.size());
  const std::size_t d = global.dim();

  std::vector<std::size_t> order(clients.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return clients[a].id < clients[b].id; });

  std::vector<Eigen::VectorXd> deltas;
  deltas.reserve(clients.size());
  const std::uint64_t round_seed = sub_seed(opt.seed, "local_train", static_cast<std::uint64_t>(epoch));
  for (std::size_t idx : order) {
    const auto& c = clients[idx];
    const bool malicious = attack.active(epoch) && c.id == attack.malicious_client;
    const std::uint64_t seed = sub_seed(round_seed, "client", c.id);
    if (malicious) {
      deltas.push_back(attack.boost * local_train(global, flip_labels(c.shard, attack), opt.train, seed));
    } else {
      deltas.push_back(local_train(global, c.shard, opt.train, seed));
    }
  }

  RoundResult res{{}, global};
  RoundRecord& rec = res.record;
  rec.epoch = epoch;
  rec.protected_run = zk != nullptr;

  if (zk == nullptr) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    for (const auto& delta : deltas) sum += delta;
    res.global.w += sum / static_cast<double>(deltas.size());
    rec.payload_bytes = (deltas.size() + 1) * d * kFloatBytes;
  } else {
    const auto& group = *zk->setup.group;
    const auto round_id = static_cast<std::uint64_t>(epoch);
    std::vector<zkfed::ClientUpdate> updates;
    updates.reserve(deltas.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      const auto id = clients[order[k]].id;
      if (id >= zk->setup.clients.size()) throw std::invalid_argument("run_round: client has no registered keys");
      const auto q = zkfed::quantize(std::span<const double>(deltas[k].data(), d));
      updates.push_back(zkfed::make_update(group, zk->setup.clients[id], round_id, q.values));
      rec.payload_bytes += zkfed::serialize_update_public(group, updates.back()).size() + d * kFloatBytes;
    }

    const auto t0 = Clock::now();
    const auto outcome = zkfed::aggregate(group, zk->setup.registry(), zk->setup.aggregator, round_id, d, updates,
                                          zk->policy);
    const double gen_ms = ms_since(t0);
    for (const auto& r : outcome.rejected) rec.rejected_ids.push_back(r.client_id);

    const auto transcript = zkfed::serialize_proof(group, outcome.proof);
    rec.payload_bytes += transcript.size();
    rec.overhead_bytes = zkfed::serialize_proof_core(group, outcome.proof).size() + zkfed::kSignatureBytes;

    const auto received = zkfed::parse_proof(group, transcript);
    if (!received) throw std::logic_error("run_round: own transcript does not parse");
    double verify_total = 0.0;
    for (std::uint32_t id : outcome.accepted) {
      const auto it = std::find_if(updates.begin(), updates.end(),
                                   [&](const zkfed::ClientUpdate& u) { return u.client_id == id; });
      const auto t1 = Clock::now();
      const auto code = zkfed::verify_aggregate(group, *received, *it, zk->setup.aggregator.signing.pub);
      verify_total += ms_since(t1);
      if (code != zkfed::VerifyCode::kOk) rec.verify_failures.push_back(id);
    }
    if (opt.timing) {
      rec.proof_gen_ms = gen_ms;
      rec.proof_verify_ms = outcome.accepted.empty() ? 0.0 : verify_total / static_cast<double>(outcome.accepted.size());
    }
    if (rec.verify_failures.empty() && !outcome.accepted.empty()) {
      const auto mean = zkfed::dequantize(outcome.proof.w, static_cast<double>(outcome.accepted.size()));
      res.global.w += Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(d));
    }
  }

  rec.accuracy = accuracy(res.global, test);
  rec.loss = loss(res.global, test);
  rec.asr = attack.active(epoch) ? attack_success_rate(res.global, test, attack) : 0.0;
  return res;
}

}  // namespace uavfl::fl
