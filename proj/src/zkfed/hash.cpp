#include "uavfl/zkfed/hash.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace uavfl::zkfed {
namespace {

template <std::size_t N>
std::array<std::uint8_t, N> evp_digest(const EVP_MD* md, std::span<const std::uint8_t> data) {
  std::array<std::uint8_t, N> out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, md, nullptr) != 1 || len != N) {
    throw std::runtime_error("EVP_Digest failed");
  }
  return out;
}

Digest node_hash(std::uint8_t tag, std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  Bytes buf;
  buf.reserve(1 + a.size() + b.size());
  buf.push_back(tag);
  buf.insert(buf.end(), a.begin(), a.end());
  buf.insert(buf.end(), b.begin(), b.end());
  return sha256(buf);
}

}  // namespace

Digest sha256(std::span<const std::uint8_t> data) { return evp_digest<32>(EVP_sha256(), data); }

std::array<std::uint8_t, 64> sha512(std::span<const std::uint8_t> data) {
  return evp_digest<64>(EVP_sha512(), data);
}

void put_u32le(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64le(Bytes& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

Transcript::Transcript(std::string_view domain) {
  append("domain", {reinterpret_cast<const std::uint8_t*>(domain.data()), domain.size()});
}

void Transcript::put_len(std::size_t n) { put_u64le(buf_, static_cast<std::uint64_t>(n)); }

Transcript& Transcript::append(std::string_view label, std::span<const std::uint8_t> data) {
  put_len(label.size());
  buf_.insert(buf_.end(), label.begin(), label.end());
  put_len(data.size());
  buf_.insert(buf_.end(), data.begin(), data.end());
  return *this;
}

Transcript& Transcript::append_u64(std::string_view label, std::uint64_t v) {
  Bytes b;
  put_u64le(b, v);
  return append(label, b);
}

Digest Transcript::digest() const { return sha256(buf_); }

std::array<std::uint8_t, 64> Transcript::wide_digest() const { return sha512(buf_); }

Digest merkle_root(std::span<const MerkleLeaf> leaves) {
  if (leaves.empty()) {
    const std::uint8_t tag = 0x02;
    return sha256({&tag, 1});
  }
  std::vector<Digest> level;
  level.reserve(leaves.size());
  for (const auto& leaf : leaves) {
    Bytes id;
    put_u32le(id, leaf.client_id);
    level.push_back(node_hash(0x00, id, leaf.digest));
  }
  while (level.size() > 1) {
    std::vector<Digest> next;
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(node_hash(0x01, level[i], level[i + 1]));
    if (level.size() % 2 == 1) next.push_back(level.back());
    level = std::move(next);
  }
  return level.front();
}

}  // namespace uavfl::zkfed
