#include "uavfl/zkfed/group.hpp"

#include <openssl/obj_mac.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <stdexcept>

#include "uavfl/zkfed/hash.hpp"

namespace uavfl::zkfed {
namespace {

struct CtxFree {
  void operator()(BN_CTX* c) const { BN_CTX_free(c); }
};

BN_CTX* ctx() {
  thread_local std::unique_ptr<BN_CTX, CtxFree> c(BN_CTX_new());
  return c.get();
}

void check(int rc, const char* what) {
  if (rc != 1) throw std::runtime_error(std::string("OpenSSL: ") + what + " failed");
}

}  // namespace

Scalar::Scalar() : v_(BN_new()) {
  if (!v_) throw std::bad_alloc();
}

Scalar::Scalar(const Scalar& o) : v_(BN_dup(o.bn())) {
  if (!v_) throw std::bad_alloc();
}

Scalar& Scalar::operator=(const Scalar& o) {
  if (this != &o) {
    if (!v_) v_.reset(BN_new());
    if (!BN_copy(v_.get(), o.bn())) throw std::bad_alloc();
  }
  return *this;
}

Point::Point(const Point& o) : group_(o.group_), p_(o.p_ ? EC_POINT_dup(o.p_.get(), o.group_) : nullptr) {
  if (o.p_ && !p_) throw std::bad_alloc();
}

Point& Point::operator=(const Point& o) {
  if (this != &o) {
    group_ = o.group_;
    p_.reset(o.p_ ? EC_POINT_dup(o.p_.get(), o.group_) : nullptr);
    if (o.p_ && !p_) throw std::bad_alloc();
  }
  return *this;
}

std::shared_ptr<const Group> Group::create(std::string_view tag) {
  std::shared_ptr<Group> grp(new Group());
  grp->tag_ = std::string(tag);
  grp->group_ = EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1);
  if (!grp->group_) throw std::runtime_error("OpenSSL: P-256 unavailable");
  grp->g_ = grp->wrap(EC_POINT_dup(EC_GROUP_get0_generator(grp->group_), grp->group_));

  // Try-and-increment: x = H(tag, g, counter) until 0x02 || x is a curve point.
  const Encoded genc = grp->encode(grp->g_);
  for (std::uint32_t ctr = 0;; ++ctr) {
    Transcript t("uavfl.zkfed.hash-to-group");
    t.append("tag", {reinterpret_cast<const std::uint8_t*>(tag.data()), tag.size()});
    t.append("g", genc);
    t.append_u64("ctr", ctr);
    const Digest x = t.digest();
    Encoded cand{};
    cand[0] = 0x02;
    std::copy(x.begin(), x.end(), cand.begin() + 1);
    if (auto p = grp->decode(cand); p && !grp->is_identity(*p)) {
      grp->h_ = std::move(*p);
      grp->h_counter_ = ctr;
      break;
    }
  }
  grp->h_group_ = EC_GROUP_dup(grp->group_);
  if (!grp->h_group_) throw std::bad_alloc();
  check(EC_GROUP_set_generator(grp->h_group_, grp->h_.raw(), EC_GROUP_get0_order(grp->group_), BN_value_one()),
        "EC_GROUP_set_generator");
  return grp;
}

Group::~Group() {
  g_comb_.clear();
  g_ = Point();
  h_ = Point();
  EC_GROUP_free(h_group_);
  EC_GROUP_free(group_);
}

const BIGNUM* Group::order() const { return EC_GROUP_get0_order(group_); }

Point Group::wrap(EC_POINT* p) const {
  if (!p) throw std::bad_alloc();
  return Point(group_, p);
}

Point Group::fresh() const { return wrap(EC_POINT_new(group_)); }

Point Group::identity() const {
  Point p = fresh();
  check(EC_POINT_set_to_infinity(group_, p.raw()), "set_to_infinity");
  return p;
}

void Group::build_tables() const {
  std::call_once(tables_once_, [this] {
    check(EC_GROUP_precompute_mult(h_group_, ctx()), "precompute h");
    g_comb_.reserve(4 * 255);
    Point base = g_;
    for (int w = 0; w < 4; ++w) {
      Point acc = base;
      for (int d = 1; d <= 255; ++d) {
        g_comb_.push_back(acc);
        acc = add(acc, base);
      }
      base = acc;  // 256 * previous base
    }
    std::vector<EC_POINT*> raw;
    for (auto& p : g_comb_) raw.push_back(p.raw());
    check(EC_POINTs_make_affine(group_, raw.size(), raw.data(), ctx()), "make_affine");
  });
}

Point Group::add(const Point& a, const Point& b) const {
  Point r = fresh();
  check(EC_POINT_add(group_, r.raw(), a.raw(), b.raw(), ctx()), "point add");
  return r;
}

Point Group::neg(const Point& a) const {
  Point r = a;
  check(EC_POINT_invert(group_, r.raw(), ctx()), "point invert");
  return r;
}

Point Group::sub(const Point& a, const Point& b) const { return add(a, neg(b)); }

Point Group::mul(const Point& p, const Scalar& k) const {
  Point r = fresh();
  check(EC_POINT_mul(group_, r.raw(), nullptr, p.raw(), k.bn(), ctx()), "point mul");
  return r;
}

Point Group::mul_g(const Scalar& k) const {
  Point r = fresh();
  check(EC_POINT_mul(group_, r.raw(), k.bn(), nullptr, nullptr, ctx()), "base mul");
  return r;
}

Point Group::mul_g(std::int64_t w) const {
  const std::uint64_t mag = w < 0 ? 0 - static_cast<std::uint64_t>(w) : static_cast<std::uint64_t>(w);
  if (mag >= (1ULL << 32)) return mul_g(scalar(w));
  build_tables();
  Point r = identity();
  for (int win = 0; win < 4; ++win) {
    const unsigned digit = static_cast<unsigned>((mag >> (8 * win)) & 0xff);
    if (digit != 0) {
      check(EC_POINT_add(group_, r.raw(), r.raw(), g_comb_[static_cast<std::size_t>(win * 255 + digit - 1)].raw(), ctx()),
            "comb add");
    }
  }
  if (w < 0) check(EC_POINT_invert(group_, r.raw(), ctx()), "point invert");
  return r;
}

Point Group::mul_h(const Scalar& k) const {
  build_tables();
  EC_POINT* r = EC_POINT_new(h_group_);
  if (!r) throw std::bad_alloc();
  if (EC_POINT_mul(h_group_, r, k.bn(), nullptr, nullptr, ctx()) != 1) {
    EC_POINT_free(r);
    throw std::runtime_error("OpenSSL: h mul failed");
  }
  return wrap(r);
}

Point Group::commit(std::int64_t w, const Scalar& s) const {
  Point r = mul_h(s);
  const Point gw = mul_g(w);
  check(EC_POINT_add(group_, r.raw(), r.raw(), gw.raw(), ctx()), "commit add");
  return r;
}

Point Group::commit(const Scalar& w, const Scalar& s) const {
  Point r = mul_h(s);
  const Point gw = mul_g(w);
  check(EC_POINT_add(group_, r.raw(), r.raw(), gw.raw(), ctx()), "commit add");
  return r;
}

Point Group::msm(std::span<const Point> points, std::span<const U128> coeffs) const {
  if (points.size() != coeffs.size()) throw std::invalid_argument("msm: size mismatch");
  const std::size_t n = points.size();
  if (n < 64) {
    Point r = identity();
    for (std::size_t i = 0; i < n; ++i) {
      if (coeffs[i] == 0) continue;
      const Point t = mul(points[i], scalar_u128(coeffs[i]));
      check(EC_POINT_add(group_, r.raw(), r.raw(), t.raw(), ctx()), "msm add");
    }
    return r;
  }
  // Bucket method: c-bit windows from the top, 2^c - 1 buckets per window.
  const int c = std::clamp(static_cast<int>(std::bit_width(n)) - 3, 4, 15);
  const int windows = (128 + c - 1) / c;
  const std::size_t nb = (std::size_t{1} << c) - 1;
  std::vector<Point> buckets;
  buckets.reserve(nb);
  for (std::size_t b = 0; b < nb; ++b) buckets.push_back(fresh());
  std::vector<char> used(nb);
  Point result = identity();
  Point running = fresh();
  Point sum = fresh();
  for (int win = windows - 1; win >= 0; --win) {
    for (int i = 0; i < c; ++i) check(EC_POINT_dbl(group_, result.raw(), result.raw(), ctx()), "dbl");
    std::fill(used.begin(), used.end(), 0);
    const int shift = win * c;
    for (std::size_t i = 0; i < n; ++i) {
      const auto digit = static_cast<std::size_t>((coeffs[i] >> shift) & nb);
      if (digit == 0) continue;
      Point& bk = buckets[digit - 1];
      if (!used[digit - 1]) {
        check(EC_POINT_copy(bk.raw(), points[i].raw()), "copy");
        used[digit - 1] = 1;
      } else {
        check(EC_POINT_add(group_, bk.raw(), bk.raw(), points[i].raw(), ctx()), "bucket add");
      }
    }
    check(EC_POINT_set_to_infinity(group_, running.raw()), "inf");
    check(EC_POINT_set_to_infinity(group_, sum.raw()), "inf");
    for (std::size_t b = nb; b-- > 0;) {
      if (used[b]) check(EC_POINT_add(group_, running.raw(), running.raw(), buckets[b].raw(), ctx()), "run add");
      check(EC_POINT_add(group_, sum.raw(), sum.raw(), running.raw(), ctx()), "sum add");
    }
    check(EC_POINT_add(group_, result.raw(), result.raw(), sum.raw(), ctx()), "window add");
  }
  return result;
}

bool Group::equal(const Point& a, const Point& b) const {
  const int r = EC_POINT_cmp(group_, a.raw(), b.raw(), ctx());
  if (r < 0) throw std::runtime_error("OpenSSL: point compare failed");
  return r == 0;
}

bool Group::is_identity(const Point& a) const { return EC_POINT_is_at_infinity(group_, a.raw()) == 1; }

Encoded Group::encode(const Point& p) const {
  Encoded out{};
  if (is_identity(p)) return out;
  const std::size_t len =
      EC_POINT_point2oct(group_, p.raw(), POINT_CONVERSION_COMPRESSED, out.data(), out.size(), ctx());
  if (len != out.size()) throw std::runtime_error("OpenSSL: point encoding failed");
  return out;
}

std::vector<Encoded> Group::encode_batch(std::span<const Point> points) const {
  // One shared inversion for all points, then read affine coordinates directly.
  std::vector<Point> copies(points.begin(), points.end());
  std::vector<EC_POINT*> raw;
  raw.reserve(copies.size());
  for (auto& p : copies) {
    if (!is_identity(p)) raw.push_back(p.raw());
  }
  if (!raw.empty()) check(EC_POINTs_make_affine(group_, raw.size(), raw.data(), ctx()), "make_affine");
  std::vector<Encoded> out(copies.size());
  BN_CTX* c = ctx();
  BN_CTX_start(c);
  BIGNUM* x = BN_CTX_get(c);
  BIGNUM* y = BN_CTX_get(c);
  BIGNUM* z = BN_CTX_get(c);
  if (!z) throw std::bad_alloc();
  for (std::size_t i = 0; i < copies.size(); ++i) {
    if (is_identity(copies[i])) continue;
    check(EC_POINT_get_Jprojective_coordinates_GFp(group_, copies[i].raw(), x, y, z, c), "coordinates");
    if (!BN_is_one(z)) {
      out[i] = encode(copies[i]);
      continue;
    }
    out[i][0] = static_cast<std::uint8_t>(BN_is_odd(y) ? 0x03 : 0x02);
    if (BN_bn2binpad(x, out[i].data() + 1, 32) != 32) throw std::runtime_error("OpenSSL: bn2binpad failed");
  }
  BN_CTX_end(c);
  return out;
}

std::optional<Point> Group::decode(std::span<const std::uint8_t> bytes) const {
  if (bytes.size() != 33) return std::nullopt;
  if (std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; })) return identity();
  if (bytes[0] != 0x02 && bytes[0] != 0x03) return std::nullopt;
  Point p = fresh();
  if (EC_POINT_oct2point(group_, p.raw(), bytes.data(), bytes.size(), ctx()) != 1) return std::nullopt;
  return p;
}

Scalar Group::scalar(std::uint64_t v) const {
  Scalar s;
  check(BN_set_word(s.bn(), v), "BN_set_word");
  return s;
}

Scalar Group::scalar(std::int64_t v) const {
  const std::uint64_t mag = v < 0 ? 0 - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
  Scalar s = scalar(mag);
  if (v < 0) check(BN_sub(s.bn(), order(), s.bn()), "BN_sub");
  return s;
}

Scalar Group::scalar_u128(U128 v) const {
  std::array<std::uint8_t, 16> be{};
  for (int i = 0; i < 16; ++i) be[15 - i] = static_cast<std::uint8_t>(v >> (8 * i));
  Scalar s;
  if (!BN_bin2bn(be.data(), 16, s.bn())) throw std::bad_alloc();
  return s;
}

Scalar Group::scalar_from_wide(std::span<const std::uint8_t> bytes) const {
  if (bytes.size() < 48) throw std::invalid_argument("scalar_from_wide needs >= 48 bytes");
  Scalar s;
  if (!BN_bin2bn(bytes.data(), static_cast<int>(bytes.size()), s.bn())) throw std::bad_alloc();
  check(BN_nnmod(s.bn(), s.bn(), order(), ctx()), "BN_nnmod");
  return s;
}

Scalar Group::add(const Scalar& a, const Scalar& b) const {
  Scalar r;
  check(BN_mod_add(r.bn(), a.bn(), b.bn(), order(), ctx()), "BN_mod_add");
  return r;
}

Scalar Group::sub(const Scalar& a, const Scalar& b) const {
  Scalar r;
  check(BN_mod_sub(r.bn(), a.bn(), b.bn(), order(), ctx()), "BN_mod_sub");
  return r;
}

Scalar Group::mul(const Scalar& a, const Scalar& b) const {
  Scalar r;
  check(BN_mod_mul(r.bn(), a.bn(), b.bn(), order(), ctx()), "BN_mod_mul");
  return r;
}

std::array<std::uint8_t, 32> Group::to_bytes(const Scalar& s) const {
  std::array<std::uint8_t, 32> out{};
  if (BN_bn2binpad(s.bn(), out.data(), 32) != 32) throw std::runtime_error("scalar does not fit 32 bytes");
  return out;
}

std::optional<Scalar> Group::scalar_from_bytes(std::span<const std::uint8_t> bytes) const {
  if (bytes.size() != 32) return std::nullopt;
  Scalar s;
  if (!BN_bin2bn(bytes.data(), 32, s.bn())) throw std::bad_alloc();
  if (BN_cmp(s.bn(), order()) >= 0) return std::nullopt;
  return s;
}

}  // namespace uavfl::zkfed
