#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace uavfl::zkfed {

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::span<const std::uint8_t> data);
std::array<std::uint8_t, 64> sha512(std::span<const std::uint8_t> data);

/// Domain-separated hash builder. Every item is length-prefixed so that
/// distinct item sequences never collide on concatenation.
class Transcript {
 public:
  explicit Transcript(std::string_view domain);

  Transcript& append(std::string_view label, std::span<const std::uint8_t> data);
  Transcript& append_u64(std::string_view label, std::uint64_t v);
  Transcript& append_digest(std::string_view label, const Digest& d) { return append(label, d); }

  Digest digest() const;
  /// SHA-512 of the transcript, for reduction to a scalar.
  std::array<std::uint8_t, 64> wide_digest() const;
  const Bytes& bytes() const { return buf_; }

 private:
  void put_len(std::size_t n);
  Bytes buf_;
};

struct MerkleLeaf {
  std::uint32_t client_id = 0;
  Digest digest{};

  friend bool operator==(const MerkleLeaf&, const MerkleLeaf&) = default;
};

/// Balanced binary SHA-256 tree; leaves and inner nodes are domain-tagged,
/// an unpaired node is promoted unchanged. The empty tree hashes the tag only.
Digest merkle_root(std::span<const MerkleLeaf> leaves);

void put_u32le(Bytes& out, std::uint32_t v);
void put_u64le(Bytes& out, std::uint64_t v);

}  // namespace uavfl::zkfed
