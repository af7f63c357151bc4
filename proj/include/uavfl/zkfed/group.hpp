#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/bn.h>
#include <openssl/ec.h>

namespace uavfl::zkfed {

using U128 = unsigned __int128;
using Encoded = std::array<std::uint8_t, 33>;  ///< compressed point; identity = all zero

struct BnFree {
  void operator()(BIGNUM* b) const { BN_clear_free(b); }
};

/// Integer modulo the group order (value semantics).
class Scalar {
 public:
  Scalar();
  Scalar(const Scalar& o);
  Scalar& operator=(const Scalar& o);
  Scalar(Scalar&&) noexcept = default;
  Scalar& operator=(Scalar&&) noexcept = default;

  BIGNUM* bn() { return v_.get(); }
  const BIGNUM* bn() const { return v_.get(); }
  bool is_zero() const { return BN_is_zero(v_.get()) == 1; }
  friend bool operator==(const Scalar& a, const Scalar& b) { return BN_cmp(a.bn(), b.bn()) == 0; }

 private:
  std::unique_ptr<BIGNUM, BnFree> v_;
};

class Group;

/// Curve point bound to the group that created it (value semantics).
class Point {
 public:
  Point() = default;
  Point(const Point& o);
  Point& operator=(const Point& o);
  Point(Point&&) noexcept = default;
  Point& operator=(Point&&) noexcept = default;

  EC_POINT* raw() { return p_.get(); }
  const EC_POINT* raw() const { return p_.get(); }
  bool valid() const { return p_ != nullptr; }

 private:
  friend class Group;
  struct Free {
    void operator()(EC_POINT* p) const { EC_POINT_free(p); }
  };
  Point(const EC_GROUP* g, EC_POINT* p) : group_(g), p_(p) {}
  const EC_GROUP* group_ = nullptr;
  std::unique_ptr<EC_POINT, Free> p_;
};

/// NIST P-256 with generators g (the standard base point) and h derived from
/// g and a domain tag by try-and-increment hashing, so log_g(h) is unknown.
/// Methods are safe to call concurrently; lookup tables are built on first use.
class Group {
 public:
  static std::shared_ptr<const Group> create(std::string_view tag);
  ~Group();
  Group(const Group&) = delete;
  Group& operator=(const Group&) = delete;

  const std::string& tag() const { return tag_; }
  const BIGNUM* order() const;
  /// Counter value at which the hash-to-group search for h succeeded.
  std::uint32_t h_counter() const { return h_counter_; }

  Point identity() const;
  const Point& g() const { return g_; }
  const Point& h() const { return h_; }

  Point add(const Point& a, const Point& b) const;
  Point sub(const Point& a, const Point& b) const;
  Point neg(const Point& a) const;
  Point mul(const Point& p, const Scalar& k) const;
  Point mul_g(const Scalar& k) const;
  /// g^w for a signed integer; |w| < 2^32 uses a byte-window comb table.
  Point mul_g(std::int64_t w) const;
  Point mul_h(const Scalar& k) const;
  /// g^w * h^s
  Point commit(std::int64_t w, const Scalar& s) const;
  Point commit(const Scalar& w, const Scalar& s) const;
  /// sum_i k_i P_i with 128-bit coefficients (bucket method for large inputs).
  Point msm(std::span<const Point> points, std::span<const U128> coeffs) const;

  bool equal(const Point& a, const Point& b) const;
  bool is_identity(const Point& a) const;

  Encoded encode(const Point& p) const;
  std::vector<Encoded> encode_batch(std::span<const Point> points) const;
  /// Strict decoding: rejects off-curve points and non-canonical encodings.
  std::optional<Point> decode(std::span<const std::uint8_t> bytes) const;

  // Scalar arithmetic modulo the order.
  Scalar scalar(std::uint64_t v) const;
  Scalar scalar(std::int64_t v) const;
  Scalar scalar_u128(U128 v) const;
  /// Uniform-ish reduction of a wide (>= 48 byte) string.
  Scalar scalar_from_wide(std::span<const std::uint8_t> bytes) const;
  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  std::array<std::uint8_t, 32> to_bytes(const Scalar& s) const;
  /// Rejects values >= order.
  std::optional<Scalar> scalar_from_bytes(std::span<const std::uint8_t> bytes) const;

 private:
  Group() = default;
  Point wrap(EC_POINT* p) const;
  Point fresh() const;
  void build_tables() const;

  std::string tag_;
  EC_GROUP* group_ = nullptr;
  EC_GROUP* h_group_ = nullptr;  ///< same curve with h as base point, for precomputed h^k
  Point g_;
  Point h_;
  std::uint32_t h_counter_ = 0;

  mutable std::once_flag tables_once_;
  mutable std::vector<Point> g_comb_;  ///< 4 windows x 255 affine points: d * 2^(8w) * g
};

using GroupPtr = std::shared_ptr<const Group>;

}  // namespace uavfl::zkfed
