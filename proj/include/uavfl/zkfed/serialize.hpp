#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "uavfl/zkfed/protocol.hpp"

namespace uavfl::zkfed {

// Byte layout. Every field is a little-endian u32 length followed by the bytes.
//   core:  round_id (u64 LE) | accepted_count (u32 LE) | root (32) | R (33, compressed)
//          | c (32, big-endian) | z (32, big-endian) | aggregator signature (64)
//   body:  C (33 * d) | w (8 * d, i64 LE) | leaves (36 * n: u32 LE id, 32-byte digest)
// A full transcript is core followed by body.

/// Constant-size part of the proof (independent of d and of the client count).
Bytes serialize_proof_core(const Group& group, const AggregateProof& proof);
Bytes serialize_proof(const Group& group, const AggregateProof& proof);

/// Strict inverse of serialize_proof: wrong lengths, invalid points,
/// non-canonical scalars or trailing bytes give nullopt.
std::optional<AggregateProof> parse_proof(const Group& group, std::span<const std::uint8_t> bytes);

/// Public wire form of a client update: id, round, commitments, digest, signature.
Bytes serialize_update_public(const Group& group, const ClientUpdate& update);

inline constexpr std::size_t kSignatureBytes = 64;

}  // namespace uavfl::zkfed
