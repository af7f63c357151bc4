#include "uavfl/zkfed/signature.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <memory>
#include <stdexcept>

namespace uavfl::zkfed {
namespace {

struct PkeyFree {
  void operator()(EVP_PKEY* k) const { EVP_PKEY_free(k); }
};
struct MdCtxFree {
  void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyFree>;
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, MdCtxFree>;

}  // namespace

KeyPair keypair_from_seed(std::span<const std::uint8_t, 32> seed) {
  PkeyPtr k(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, seed.data(), seed.size()));
  if (!k) throw std::runtime_error("Ed25519 key derivation failed");
  KeyPair kp;
  std::copy(seed.begin(), seed.end(), kp.secret.begin());
  std::size_t len = kp.pub.size();
  if (EVP_PKEY_get_raw_public_key(k.get(), kp.pub.data(), &len) != 1 || len != 32) {
    throw std::runtime_error("Ed25519 public key export failed");
  }
  return kp;
}

KeyPair random_keypair() {
  std::array<std::uint8_t, 32> seed{};
  if (RAND_bytes(seed.data(), static_cast<int>(seed.size())) != 1) throw std::runtime_error("RAND_bytes failed");
  return keypair_from_seed(seed);
}

Signature sign(std::span<const std::uint8_t> message, const KeyPair& key) {
  PkeyPtr k(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, key.secret.data(), key.secret.size()));
  MdCtxPtr ctx(EVP_MD_CTX_new());
  if (!k || !ctx || EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, k.get()) != 1) {
    throw std::runtime_error("Ed25519 sign init failed");
  }
  Signature sig{};
  std::size_t len = sig.size();
  if (EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(), message.size()) != 1 || len != sig.size()) {
    throw std::runtime_error("Ed25519 sign failed");
  }
  return sig;
}

bool verify_sig(std::span<const std::uint8_t> message, const Signature& sig, const PublicKey& pub) {
  PkeyPtr k(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, pub.data(), pub.size()));
  if (!k) return false;
  MdCtxPtr ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, k.get()) != 1) return false;
  return EVP_DigestVerify(ctx.get(), sig.data(), sig.size(), message.data(), message.size()) == 1;
}

}  // namespace uavfl::zkfed
