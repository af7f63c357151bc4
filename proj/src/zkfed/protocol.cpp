#include "uavfl/zkfed/protocol.hpp"

#include <openssl/rand.h>

#include <algorithm>
#include <cstring>
#include <numeric>
#include <stdexcept>

#include "uavfl/zkfed/quantize.hpp"

namespace uavfl::zkfed {
namespace {

std::span<const std::uint8_t> as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

Secret derive_secret(std::uint64_t seed, std::string_view role, std::uint64_t index) {
  Transcript t("uavfl.zkfed.setup");
  t.append_u64("seed", seed).append("role", as_bytes(role)).append_u64("index", index);
  return t.digest();
}

Secret random_secret() {
  Secret s{};
  if (RAND_bytes(s.data(), static_cast<int>(s.size())) != 1) throw std::runtime_error("RAND_bytes failed");
  return s;
}

Bytes concat_encodings(const Group& group, std::span<const Point> points) {
  const auto enc = group.encode_batch(points);
  Bytes out(enc.size() * 33);
  for (std::size_t i = 0; i < enc.size(); ++i) std::memcpy(out.data() + 33 * i, enc[i].data(), 33);
  return out;
}

Bytes pack_values(std::span<const std::int64_t> w) {
  Bytes out;
  out.reserve(8 * w.size());
  for (auto v : w) put_u64le(out, static_cast<std::uint64_t>(v));
  return out;
}

Digest statement_digest(const Group& group, const AggregateProof& p) {
  Transcript t("uavfl.zkfed.statement");
  t.append("tag", as_bytes(group.tag()));
  t.append("g", group.encode(group.g())).append("h", group.encode(group.h()));
  t.append_u64("round", p.round_id).append_u64("count", p.accepted_count);
  t.append_digest("root", p.root);
  t.append_u64("dim", p.C.size());
  t.append("C", concat_encodings(group, p.C));
  t.append("w", pack_values(p.w));
  return t.digest();
}

/// 128-bit coefficients, four per SHA-512 block.
std::vector<U128> coefficients(std::string_view domain, std::span<const std::uint8_t> key, const Digest& context,
                               std::size_t n) {
  std::vector<U128> out;
  out.reserve(n);
  for (std::uint64_t block = 0; out.size() < n; ++block) {
    Transcript t(domain);
    t.append("key", key).append_digest("context", context).append_u64("block", block);
    const auto h = t.wide_digest();
    for (int part = 0; part < 4 && out.size() < n; ++part) {
      U128 v = 0;
      for (int b = 15; b >= 0; --b) v = (v << 8) | h[16 * part + b];
      out.push_back(v);
    }
  }
  return out;
}

std::vector<U128> proof_coefficients(const Digest& statement, std::size_t n) {
  return coefficients("uavfl.zkfed.rho", {}, statement, n);
}

Scalar combine(const Group& group, std::span<const U128> rho, std::span<const std::int64_t> w) {
  Scalar acc = group.scalar(std::uint64_t{0});
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] != 0) acc = group.add(acc, group.mul(group.scalar_u128(rho[j]), group.scalar(w[j])));
  }
  return acc;
}

Scalar combine(const Group& group, std::span<const U128> rho, std::span<const Scalar> s) {
  Scalar acc = group.scalar(std::uint64_t{0});
  for (std::size_t j = 0; j < s.size(); ++j) acc = group.add(acc, group.mul(group.scalar_u128(rho[j]), s[j]));
  return acc;
}

Scalar challenge(const Group& group, const Digest& statement, const Point& announcement) {
  Transcript t("uavfl.zkfed.challenge");
  t.append_digest("statement", statement).append("R", group.encode(announcement));
  const auto h = t.wide_digest();
  return group.scalar_from_wide(h);
}

Digest aggregator_message(const Group& group, const Digest& statement, const AggregateProof& p) {
  Transcript t("uavfl.zkfed.aggregate-sig");
  t.append_digest("statement", statement);
  t.append("R", group.encode(p.announcement));
  t.append("c", group.to_bytes(p.challenge)).append("z", group.to_bytes(p.response));
  return t.digest();
}

std::vector<Scalar> blindings(const Group& group, const Secret& key, std::size_t d) {
  std::vector<Scalar> s;
  s.reserve(d);
  for (std::size_t j = 0; j < d; ++j) s.push_back(blinding_scalar(group, key, j));
  return s;
}

}  // namespace

std::vector<PublicKey> ProtocolSetup::registry() const {
  std::vector<PublicKey> r;
  r.reserve(clients.size());
  for (const auto& c : clients) r.push_back(c.signing.pub);
  return r;
}

ProtocolSetup setup(std::optional<std::uint64_t> seed, std::size_t n_clients, std::string_view tag) {
  if (n_clients > kMaxClients) throw std::invalid_argument("too many clients");
  auto secret = [&](std::string_view role, std::uint64_t i) {
    return seed ? derive_secret(*seed, role, i) : random_secret();
  };
  ProtocolSetup s;
  s.group = Group::create(tag);
  s.clients.reserve(n_clients);
  for (std::size_t i = 0; i < n_clients; ++i) {
    ClientParty c;
    c.id = static_cast<std::uint32_t>(i);
    c.signing = keypair_from_seed(secret("client-sign", i));
    c.blinding_secret = secret("client-blind", i);
    s.clients.push_back(c);
  }
  s.aggregator.signing = keypair_from_seed(secret("aggregator-sign", 0));
  s.aggregator.nonce_secret = secret("aggregator-nonce", 0);
  return s;
}

Scalar blinding_scalar(const Group& group, const Secret& key, std::uint64_t j) {
  static constexpr std::string_view kDomain = "uavfl.zkfed.blind";
  Bytes buf(kDomain.begin(), kDomain.end());
  buf.insert(buf.end(), key.begin(), key.end());
  put_u64le(buf, j);
  return group.scalar_from_wide(sha512(buf));
}

Digest commitment_digest(const Group& group, std::uint32_t client_id, std::uint64_t round_id,
                         std::span<const Point> commitments) {
  Transcript t("uavfl.zkfed.commitments");
  t.append("tag", as_bytes(group.tag()));
  t.append_u64("client", client_id).append_u64("round", round_id).append_u64("dim", commitments.size());
  t.append("C", concat_encodings(group, commitments));
  return t.digest();
}

Bytes client_signing_message(const Group& group, std::uint64_t round_id, std::uint32_t client_id,
                             const Digest& digest) {
  Transcript t("uavfl.zkfed.client-sig");
  t.append("tag", as_bytes(group.tag()));
  t.append_u64("round", round_id).append_u64("client", client_id).append_digest("commitments", digest);
  return t.bytes();
}

ClientUpdate make_update(const Group& group, const ClientParty& party, std::uint64_t round_id,
                         std::vector<std::int64_t> values) {
  for (auto v : values) {
    if (v < kQuantMin || v > kQuantMax) throw std::invalid_argument("make_update: value outside quantization range");
  }
  ClientUpdate u;
  u.client_id = party.id;
  u.round_id = round_id;
  {
    Transcript t("uavfl.zkfed.blinding-key");
    t.append("secret", party.blinding_secret).append_u64("round", round_id);
    u.blinding_key = t.digest();
  }
  u.commitments.reserve(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    u.commitments.push_back(group.commit(values[j], blinding_scalar(group, u.blinding_key, j)));
  }
  u.values = std::move(values);
  u.commitment_digest = commitment_digest(group, u.client_id, round_id, u.commitments);
  u.signature = sign(client_signing_message(group, round_id, u.client_id, u.commitment_digest), party.signing);
  return u;
}

std::string to_string(RejectReason r) {
  switch (r) {
    case RejectReason::kUnknownClient: return "unknown_client";
    case RejectReason::kDuplicate: return "duplicate";
    case RejectReason::kRoundMismatch: return "round_mismatch";
    case RejectReason::kDimensionMismatch: return "dimension_mismatch";
    case RejectReason::kOutOfRange: return "out_of_range";
    case RejectReason::kDigestMismatch: return "digest_mismatch";
    case RejectReason::kBadSignature: return "bad_signature";
    case RejectReason::kPolicy: return "policy";
    case RejectReason::kOpeningMismatch: return "opening_mismatch";
  }
  return "unknown";
}

std::string to_string(VerifyCode c) {
  switch (c) {
    case VerifyCode::kOk: return "ok";
    case VerifyCode::kMalformed: return "malformed";
    case VerifyCode::kRoundMismatch: return "round_mismatch";
    case VerifyCode::kProofFailed: return "proof_failed";
    case VerifyCode::kBadAggregatorSignature: return "bad_aggregator_signature";
    case VerifyCode::kNotIncluded: return "not_included";
  }
  return "unknown";
}

AggregateOutcome aggregate(const Group& group, std::span<const PublicKey> registry,
                           const AggregatorParty& aggregator, std::uint64_t round_id, std::size_t dim,
                           std::span<const ClientUpdate> updates, const VerificationPolicy& policy) {
  if (dim == 0) throw std::invalid_argument("aggregate: dimension must be > 0");
  if (updates.size() > kMaxClients) throw std::invalid_argument("aggregate: too many updates");
  policy.validate();

  AggregateOutcome out;
  std::vector<std::size_t> order(updates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return updates[a].client_id < updates[b].client_id; });

  auto reject = [&](const ClientUpdate& u, RejectReason why, double norm = 0.0) {
    out.rejected.push_back({u.client_id, why, norm});
  };

  // Integrity checks, then the norm policy over the survivors.
  std::vector<std::size_t> intact;
  std::vector<double> norms;
  std::optional<std::uint32_t> last_id;
  for (std::size_t idx : order) {
    const auto& u = updates[idx];
    const bool dup = last_id && *last_id == u.client_id;
    last_id = u.client_id;
    if (u.client_id >= registry.size()) {
      reject(u, RejectReason::kUnknownClient);
    } else if (dup) {
      reject(u, RejectReason::kDuplicate);
    } else if (u.round_id != round_id) {
      reject(u, RejectReason::kRoundMismatch);
    } else if (u.values.size() != dim || u.commitments.size() != dim ||
               std::any_of(u.commitments.begin(), u.commitments.end(), [](const Point& p) { return !p.valid(); })) {
      reject(u, RejectReason::kDimensionMismatch);
    } else if (std::any_of(u.values.begin(), u.values.end(),
                           [](std::int64_t v) { return v < kQuantMin || v > kQuantMax; })) {
      reject(u, RejectReason::kOutOfRange);
    } else if (commitment_digest(group, u.client_id, u.round_id, u.commitments) != u.commitment_digest) {
      reject(u, RejectReason::kDigestMismatch);
    } else if (!verify_sig(client_signing_message(group, u.round_id, u.client_id, u.commitment_digest), u.signature,
                           registry[u.client_id])) {
      reject(u, RejectReason::kBadSignature);
    } else {
      intact.push_back(idx);
      norms.push_back(dequantized_norm(u.values));
    }
  }

  out.norm_bound = policy.norm_bound > 0.0 ? policy.norm_bound
                   : norms.empty()         ? 0.0
                                           : calibrated_bound(norms, policy.norm_multiplier);

  AggregateProof& proof = out.proof;
  proof.round_id = round_id;
  proof.C.assign(dim, group.identity());
  proof.w.assign(dim, 0);
  std::vector<Scalar> S(dim, group.scalar(std::uint64_t{0}));

  for (std::size_t k = 0; k < intact.size(); ++k) {
    const auto& u = updates[intact[k]];
    if (!(norms[k] <= out.norm_bound)) {
      reject(u, RejectReason::kPolicy, norms[k]);
      continue;
    }
    // Opening audit: a random combination of the commitments must open to
    // the same combination of the plaintext and blinding values.
    auto s = blindings(group, u.blinding_key, dim);
    const auto rho = coefficients("uavfl.zkfed.audit", aggregator.nonce_secret, u.commitment_digest, dim);
    const Point lhs = group.msm(u.commitments, rho);
    const Point rhs = group.commit(combine(group, rho, u.values), combine(group, rho, s));
    if (!group.equal(lhs, rhs)) {
      reject(u, RejectReason::kOpeningMismatch, norms[k]);
      continue;
    }
    for (std::size_t j = 0; j < dim; ++j) {
      proof.C[j] = group.add(proof.C[j], u.commitments[j]);
      proof.w[j] += u.values[j];
      S[j] = group.add(S[j], s[j]);
    }
    out.accepted.push_back(u.client_id);
    proof.leaves.push_back({u.client_id, u.commitment_digest});
  }
  std::sort(out.rejected.begin(), out.rejected.end(),
            [](const Rejection& a, const Rejection& b) { return a.client_id < b.client_id; });

  proof.accepted_count = static_cast<std::uint32_t>(proof.leaves.size());
  proof.root = merkle_root(proof.leaves);

  // Batched Schnorr proof of knowledge of x with X = h^x, where
  // X = prod_j (C_j g^{-w_j})^{rho_j}.
  const Digest P = statement_digest(group, proof);
  const auto rho = proof_coefficients(P, dim);
  const Scalar x = combine(group, rho, S);
  Transcript nt("uavfl.zkfed.nonce");
  nt.append("secret", aggregator.nonce_secret).append_digest("statement", P).append("x", group.to_bytes(x));
  const Scalar k = group.scalar_from_wide(nt.wide_digest());
  proof.announcement = group.mul_h(k);
  proof.challenge = challenge(group, P, proof.announcement);
  proof.response = group.add(k, group.mul(proof.challenge, x));
  proof.aggregator_sig = sign(aggregator_message(group, P, proof), aggregator.signing);
  return out;
}

VerifyCode verify_aggregate(const Group& group, const AggregateProof& proof, const ClientUpdate& own,
                            const PublicKey& aggregator_key) {
  const std::size_t d = proof.C.size();
  if (d == 0 || proof.w.size() != d || proof.leaves.size() != proof.accepted_count || !proof.announcement.valid() ||
      std::any_of(proof.C.begin(), proof.C.end(), [](const Point& p) { return !p.valid(); })) {
    return VerifyCode::kMalformed;
  }
  for (std::size_t i = 1; i < proof.leaves.size(); ++i) {
    if (proof.leaves[i - 1].client_id >= proof.leaves[i].client_id) return VerifyCode::kMalformed;
  }
  if (proof.round_id != own.round_id) return VerifyCode::kRoundMismatch;

  const Digest P = statement_digest(group, proof);
  if (!(challenge(group, P, proof.announcement) == proof.challenge)) return VerifyCode::kProofFailed;
  const auto rho = proof_coefficients(P, d);
  const Point X = group.sub(group.msm(proof.C, rho), group.mul_g(combine(group, rho, proof.w)));
  const Point rhs = group.add(proof.announcement, group.mul(X, proof.challenge));
  if (!group.equal(group.mul_h(proof.response), rhs)) return VerifyCode::kProofFailed;

  const Digest msg = aggregator_message(group, P, proof);
  if (!verify_sig(msg, proof.aggregator_sig, aggregator_key)) return VerifyCode::kBadAggregatorSignature;

  const MerkleLeaf mine{own.client_id, own.commitment_digest};
  if (merkle_root(proof.leaves) != proof.root ||
      std::find(proof.leaves.begin(), proof.leaves.end(), mine) == proof.leaves.end()) {
    return VerifyCode::kNotIncluded;
  }
  return VerifyCode::kOk;
}

}  // namespace uavfl::zkfed
