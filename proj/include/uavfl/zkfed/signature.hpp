#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace uavfl::zkfed {

using PublicKey = std::array<std::uint8_t, 32>;
using Signature = std::array<std::uint8_t, 64>;

/// Ed25519 key pair.
struct KeyPair {
  std::array<std::uint8_t, 32> secret{};
  PublicKey pub{};
};

KeyPair keypair_from_seed(std::span<const std::uint8_t, 32> seed);
KeyPair random_keypair();

Signature sign(std::span<const std::uint8_t> message, const KeyPair& key);

/// False for a wrong signature and for malformed keys alike.
bool verify_sig(std::span<const std::uint8_t> message, const Signature& sig, const PublicKey& pub);

}  // namespace uavfl::zkfed
