#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uavfl/zkfed/group.hpp"
#include "uavfl/zkfed/hash.hpp"
#include "uavfl/zkfed/policy.hpp"
#include "uavfl/zkfed/signature.hpp"

namespace uavfl::zkfed {

inline constexpr std::string_view kDefaultTag = "uavfl.zkfed.v1";

using Secret = std::array<std::uint8_t, 32>;

struct ClientParty {
  std::uint32_t id = 0;
  KeyPair signing;
  Secret blinding_secret{};  ///< per-round blinding keys are derived from this
};

struct AggregatorParty {
  KeyPair signing;
  Secret nonce_secret{};
};

struct ProtocolSetup {
  GroupPtr group;
  std::vector<ClientParty> clients;  ///< index == client id
  AggregatorParty aggregator;

  std::vector<PublicKey> registry() const;
};

/// Seeded setup is deterministic; without a seed all keys come from system entropy.
ProtocolSetup setup(std::optional<std::uint64_t> seed, std::size_t n_clients,
                    std::string_view tag = kDefaultTag);

struct ClientUpdate {
  std::uint32_t client_id = 0;
  std::uint64_t round_id = 0;
  std::vector<std::int64_t> values;  ///< quantized delta, sent to the aggregator
  std::vector<Point> commitments;    ///< g^w_j h^s_j
  Digest commitment_digest{};
  Signature signature{};
  /// Private-channel key from which the aggregator re-derives every s_j.
  Secret blinding_key{};
};

Scalar blinding_scalar(const Group& group, const Secret& key, std::uint64_t j);
Digest commitment_digest(const Group& group, std::uint32_t client_id, std::uint64_t round_id,
                         std::span<const Point> commitments);
Bytes client_signing_message(const Group& group, std::uint64_t round_id, std::uint32_t client_id,
                             const Digest& digest);

/// Commits to and signs a quantized delta. Throws std::invalid_argument for
/// values outside the quantization range.
ClientUpdate make_update(const Group& group, const ClientParty& party, std::uint64_t round_id,
                         std::vector<std::int64_t> values);

struct AggregateProof {
  std::uint64_t round_id = 0;
  std::uint32_t accepted_count = 0;
  Digest root{};  ///< inclusion root over accepted (client id, commitment digest)
  Point announcement;
  Scalar challenge;
  Scalar response;
  Signature aggregator_sig{};

  std::vector<Point> C;  ///< coordinatewise product of accepted commitments
  std::vector<std::int64_t> w;  ///< plaintext sum of accepted deltas
  std::vector<MerkleLeaf> leaves;
};

enum class RejectReason {
  kUnknownClient,
  kDuplicate,
  kRoundMismatch,
  kDimensionMismatch,
  kOutOfRange,
  kDigestMismatch,
  kBadSignature,
  kPolicy,
  kOpeningMismatch,
};

std::string to_string(RejectReason r);

struct Rejection {
  std::uint32_t client_id = 0;
  RejectReason reason = RejectReason::kBadSignature;
  double norm = 0.0;
};

struct AggregateOutcome {
  AggregateProof proof;
  std::vector<std::uint32_t> accepted;
  std::vector<Rejection> rejected;
  double norm_bound = 0.0;  ///< bound applied this round
};

/// Checks every update in ascending client id (identity, round, dimension,
/// signature, norm policy, commitment opening), excludes failures and proves
/// the aggregate over the accepted set. Throws std::invalid_argument when
/// dim == 0 or more than kMaxClients updates are given.
AggregateOutcome aggregate(const Group& group, std::span<const PublicKey> registry,
                           const AggregatorParty& aggregator, std::uint64_t round_id, std::size_t dim,
                           std::span<const ClientUpdate> updates, const VerificationPolicy& policy);

enum class VerifyCode {
  kOk,
  kMalformed,
  kRoundMismatch,
  kProofFailed,
  kBadAggregatorSignature,
  kNotIncluded,
};

std::string to_string(VerifyCode c);

/// Client-side check of a broadcast aggregate against the client's own update.
VerifyCode verify_aggregate(const Group& group, const AggregateProof& proof, const ClientUpdate& own,
                            const PublicKey& aggregator_key);

}  // namespace uavfl::zkfed
