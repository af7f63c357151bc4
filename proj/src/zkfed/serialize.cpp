#include "uavfl/zkfed/serialize.hpp"

#include <cstring>

namespace uavfl::zkfed {
namespace {

void put_field(Bytes& out, std::span<const std::uint8_t> data) {
  put_u32le(out, static_cast<std::uint32_t>(data.size()));
  out.insert(out.end(), data.begin(), data.end());
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}

  std::optional<std::span<const std::uint8_t>> field() {
    if (b_.size() - pos_ < 4) return std::nullopt;
    std::uint32_t n = 0;
    for (int i = 0; i < 4; ++i) n |= static_cast<std::uint32_t>(b_[pos_ + i]) << (8 * i);
    pos_ += 4;
    if (b_.size() - pos_ < n) return std::nullopt;
    auto f = b_.subspan(pos_, n);
    pos_ += n;
    return f;
  }
  bool done() const { return pos_ == b_.size(); }

 private:
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

std::uint64_t get_le(std::span<const std::uint8_t> b) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < b.size(); ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

Bytes serialize_proof_core(const Group& group, const AggregateProof& proof) {
  Bytes out;
  Bytes tmp;
  put_u64le(tmp, proof.round_id);
  put_field(out, tmp);
  tmp.clear();
  put_u32le(tmp, proof.accepted_count);
  put_field(out, tmp);
  put_field(out, proof.root);
  put_field(out, group.encode(proof.announcement));
  put_field(out, group.to_bytes(proof.challenge));
  put_field(out, group.to_bytes(proof.response));
  put_field(out, proof.aggregator_sig);
  return out;
}

Bytes serialize_proof(const Group& group, const AggregateProof& proof) {
  Bytes out = serialize_proof_core(group, proof);
  const auto enc = group.encode_batch(proof.C);
  Bytes c(33 * enc.size());
  for (std::size_t i = 0; i < enc.size(); ++i) std::memcpy(c.data() + 33 * i, enc[i].data(), 33);
  put_field(out, c);
  Bytes w;
  w.reserve(8 * proof.w.size());
  for (auto v : proof.w) put_u64le(w, static_cast<std::uint64_t>(v));
  put_field(out, w);
  Bytes leaves;
  leaves.reserve(36 * proof.leaves.size());
  for (const auto& l : proof.leaves) {
    put_u32le(leaves, l.client_id);
    leaves.insert(leaves.end(), l.digest.begin(), l.digest.end());
  }
  put_field(out, leaves);
  return out;
}

std::optional<AggregateProof> parse_proof(const Group& group, std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  auto round = r.field();
  auto count = r.field();
  auto root = r.field();
  auto R = r.field();
  auto c = r.field();
  auto z = r.field();
  auto sig = r.field();
  auto C = r.field();
  auto w = r.field();
  auto leaves = r.field();
  if (!round || !count || !root || !R || !c || !z || !sig || !C || !w || !leaves || !r.done()) return std::nullopt;
  if (round->size() != 8 || count->size() != 4 || root->size() != 32 || R->size() != 33 || c->size() != 32 ||
      z->size() != 32 || sig->size() != kSignatureBytes || C->size() % 33 != 0 || w->size() % 8 != 0 ||
      leaves->size() % 36 != 0 || C->size() / 33 != w->size() / 8) {
    return std::nullopt;
  }
  AggregateProof p;
  p.round_id = get_le(*round);
  p.accepted_count = static_cast<std::uint32_t>(get_le(*count));
  std::memcpy(p.root.data(), root->data(), 32);
  auto ann = group.decode(*R);
  auto cs = group.scalar_from_bytes(*c);
  auto zs = group.scalar_from_bytes(*z);
  if (!ann || !cs || !zs) return std::nullopt;
  p.announcement = std::move(*ann);
  p.challenge = std::move(*cs);
  p.response = std::move(*zs);
  std::memcpy(p.aggregator_sig.data(), sig->data(), kSignatureBytes);

  const std::size_t d = C->size() / 33;
  p.C.reserve(d);
  for (std::size_t j = 0; j < d; ++j) {
    auto pt = group.decode(C->subspan(33 * j, 33));
    if (!pt) return std::nullopt;
    p.C.push_back(std::move(*pt));
  }
  p.w.reserve(d);
  for (std::size_t j = 0; j < d; ++j) p.w.push_back(static_cast<std::int64_t>(get_le(w->subspan(8 * j, 8))));
  const std::size_t n = leaves->size() / 36;
  if (n != p.accepted_count) return std::nullopt;
  for (std::size_t i = 0; i < n; ++i) {
    MerkleLeaf l;
    l.client_id = static_cast<std::uint32_t>(get_le(leaves->subspan(36 * i, 4)));
    std::memcpy(l.digest.data(), leaves->data() + 36 * i + 4, 32);
    p.leaves.push_back(l);
  }
  return p;
}

Bytes serialize_update_public(const Group& group, const ClientUpdate& update) {
  Bytes out;
  Bytes tmp;
  put_u32le(tmp, update.client_id);
  put_field(out, tmp);
  tmp.clear();
  put_u64le(tmp, update.round_id);
  put_field(out, tmp);
  const auto enc = group.encode_batch(update.commitments);
  Bytes c(33 * enc.size());
  for (std::size_t i = 0; i < enc.size(); ++i) std::memcpy(c.data() + 33 * i, enc[i].data(), 33);
  put_field(out, c);
  put_field(out, update.commitment_digest);
  put_field(out, update.signature);
  return out;
}

}  // namespace uavfl::zkfed
