/*
 * Copyright 2026 The secagg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "secagg/group.h"

#include <sodium.h>

#include <algorithm>
#include <stdexcept>

#include "secagg/error.h"

namespace secagg {

std::string_view GroupBackendName(GroupBackend backend) {
  switch (backend) {
    case GroupBackend::kProduction: return "production";
    case GroupBackend::kTest: return "test";
  }
  return "unknown";
}

Bytes Group::EncodeScalar(const Scalar& s) const {
  Bytes out(scalar_size());
  for (size_t i = 0; i < out.size(); ++i) out[out.size() - 1 - i] = s.le[i];
  return out;
}

std::optional<Scalar> Group::DecodeScalar(ByteView bytes) const {
  if (bytes.size() != scalar_size()) return std::nullopt;
  Scalar s;
  for (size_t i = 0; i < bytes.size(); ++i) s.le[i] = bytes[bytes.size() - 1 - i];
  if (!IsCanonicalScalar(s)) return std::nullopt;
  return s;
}

namespace {

class Ristretto255Group final : public Group {
 public:
  Ristretto255Group() {
    if (sodium_init() < 0) throw std::runtime_error("libsodium init failed");
    Scalar one = FromU64(1);
    crypto_scalarmult_ristretto255_base(generator_.repr.data(), one.le.data());
  }

  GroupBackend backend() const override { return GroupBackend::kProduction; }
  size_t element_size() const override { return 32; }
  size_t scalar_size() const override { return 32; }

  GroupElement Generator() const override { return generator_; }
  GroupElement Identity() const override { return GroupElement{}; }

  GroupElement Mul(const GroupElement& a, const GroupElement& b) const override {
    GroupElement r;
    crypto_core_ristretto255_add(r.repr.data(), a.repr.data(), b.repr.data());
    return r;
  }

  GroupElement Div(const GroupElement& a, const GroupElement& b) const override {
    GroupElement r;
    crypto_core_ristretto255_sub(r.repr.data(), a.repr.data(), b.repr.data());
    return r;
  }

  // A nonzero return only signals an identity result; the output buffer then
  // already holds the all-zero identity encoding.
  GroupElement Exp(const GroupElement& base, const Scalar& e) const override {
    GroupElement r;
    if (crypto_scalarmult_ristretto255(r.repr.data(), e.le.data(),
                                       base.repr.data()) != 0) {
      return Identity();
    }
    return r;
  }

  GroupElement ExpBase(const Scalar& e) const override {
    GroupElement r;
    if (crypto_scalarmult_ristretto255_base(r.repr.data(), e.le.data()) != 0) {
      return Identity();
    }
    return r;
  }

  Scalar Add(const Scalar& a, const Scalar& b) const override {
    Scalar r;
    crypto_core_ristretto255_scalar_add(r.le.data(), a.le.data(), b.le.data());
    return r;
  }

  Scalar Sub(const Scalar& a, const Scalar& b) const override {
    Scalar r;
    crypto_core_ristretto255_scalar_sub(r.le.data(), a.le.data(), b.le.data());
    return r;
  }

  Scalar Mul(const Scalar& a, const Scalar& b) const override {
    Scalar r;
    crypto_core_ristretto255_scalar_mul(r.le.data(), a.le.data(), b.le.data());
    return r;
  }

  Scalar Neg(const Scalar& a) const override {
    Scalar r;
    crypto_core_ristretto255_scalar_negate(r.le.data(), a.le.data());
    return r;
  }

  Scalar Invert(const Scalar& a) const override {
    Scalar r;
    if (crypto_core_ristretto255_scalar_invert(r.le.data(), a.le.data()) != 0) {
      Fail(ErrorCode::kInvalidIndexSet, "inverse of zero scalar");
    }
    return r;
  }

  Scalar FromU64(uint64_t v) const override {
    Scalar s;
    for (int i = 0; i < 8; ++i) s.le[i] = static_cast<uint8_t>(v >> (8 * i));
    return s;
  }

  Scalar RandomScalar(Rng& rng) const override {
    Digest64 wide;
    rng.Fill(wide);
    return ReduceWide(wide);
  }

  Scalar ReduceWide(const Digest64& wide) const override {
    Scalar s;
    crypto_core_ristretto255_scalar_reduce(s.le.data(), wide.data());
    return s;
  }

  std::optional<GroupElement> ElementFromHash(const Digest64& h) const override {
    GroupElement r;
    crypto_core_ristretto255_from_hash(r.repr.data(), h.data());
    if (IsIdentity(r)) return std::nullopt;
    return r;
  }

  Bytes Encode(const GroupElement& x) const override {
    return Bytes(x.repr.begin(), x.repr.end());
  }

  std::optional<GroupElement> Decode(ByteView bytes) const override {
    if (bytes.size() != 32) return std::nullopt;
    GroupElement r;
    std::copy(bytes.begin(), bytes.end(), r.repr.begin());
    if (!IsIdentity(r) && crypto_core_ristretto255_is_valid_point(r.repr.data()) != 1) {
      return std::nullopt;
    }
    return r;
  }

 protected:
  bool IsCanonicalScalar(const Scalar& s) const override {
    std::array<uint8_t, 64> wide{};
    std::copy(s.le.begin(), s.le.end(), wide.begin());
    Scalar reduced;
    crypto_core_ristretto255_scalar_reduce(reduced.le.data(), wide.data());
    return reduced == s;
  }

 private:
  GroupElement generator_;
};

// Hand-checkable toy group. Elements and scalars live in byte 0.
class TinyGroup final : public Group {
 public:
  static constexpr uint64_t kP = 23;
  static constexpr uint64_t kQ = 11;
  static constexpr uint64_t kG = 2;

  GroupBackend backend() const override { return GroupBackend::kTest; }
  size_t element_size() const override { return 1; }
  size_t scalar_size() const override { return 1; }

  GroupElement Generator() const override { return Elem(kG); }
  GroupElement Identity() const override { return Elem(1); }

  GroupElement Mul(const GroupElement& a, const GroupElement& b) const override {
    return Elem(V(a) * V(b) % kP);
  }

  GroupElement Div(const GroupElement& a, const GroupElement& b) const override {
    return Elem(V(a) * PowP(V(b), kP - 2) % kP);
  }

  GroupElement Exp(const GroupElement& base, const Scalar& e) const override {
    return Elem(PowP(V(base), V(e)));
  }

  GroupElement ExpBase(const Scalar& e) const override {
    return Exp(Generator(), e);
  }

  Scalar Add(const Scalar& a, const Scalar& b) const override {
    return Sc((V(a) + V(b)) % kQ);
  }
  Scalar Sub(const Scalar& a, const Scalar& b) const override {
    return Sc((V(a) + kQ - V(b)) % kQ);
  }
  Scalar Mul(const Scalar& a, const Scalar& b) const override {
    return Sc(V(a) * V(b) % kQ);
  }
  Scalar Neg(const Scalar& a) const override { return Sc((kQ - V(a)) % kQ); }

  Scalar Invert(const Scalar& a) const override {
    if (V(a) == 0) Fail(ErrorCode::kInvalidIndexSet, "inverse of zero scalar");
    uint64_t r = 1, b = V(a), e = kQ - 2;
    while (e) {
      if (e & 1) r = r * b % kQ;
      b = b * b % kQ;
      e >>= 1;
    }
    return Sc(r);
  }

  Scalar FromU64(uint64_t v) const override { return Sc(v % kQ); }
  Scalar RandomScalar(Rng& rng) const override { return Sc(rng.Uniform(kQ)); }

  Scalar ReduceWide(const Digest64& wide) const override {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(wide[i]) << (8 * i);
    return Sc(v % kQ);
  }

  std::optional<GroupElement> ElementFromHash(const Digest64& h) const override {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(h[i]) << (8 * i);
    v %= kP;
    // Members of the order-11 subgroup are exactly the x with x^q = 1.
    if (v <= 1 || PowP(v, kQ) != 1) return std::nullopt;
    return Elem(v);
  }

  Bytes Encode(const GroupElement& x) const override { return Bytes{x.repr[0]}; }

  std::optional<GroupElement> Decode(ByteView bytes) const override {
    if (bytes.size() != 1) return std::nullopt;
    uint64_t v = bytes[0];
    if (v == 0 || v >= kP || PowP(v, kQ) != 1) return std::nullopt;
    return Elem(v);
  }

 protected:
  bool IsCanonicalScalar(const Scalar& s) const override {
    for (size_t i = 1; i < s.le.size(); ++i) {
      if (s.le[i] != 0) return false;
    }
    return s.le[0] < kQ;
  }

 private:
  static uint64_t V(const GroupElement& x) { return x.repr[0]; }
  static uint64_t V(const Scalar& s) { return s.le[0]; }
  static GroupElement Elem(uint64_t v) {
    GroupElement x;
    x.repr[0] = static_cast<uint8_t>(v);
    return x;
  }
  static Scalar Sc(uint64_t v) {
    Scalar s;
    s.le[0] = static_cast<uint8_t>(v);
    return s;
  }
  static uint64_t PowP(uint64_t b, uint64_t e) {
    uint64_t r = 1;
    b %= kP;
    while (e) {
      if (e & 1) r = r * b % kP;
      b = b * b % kP;
      e >>= 1;
    }
    return r;
  }
};

}  // namespace

const Group& GetGroup(GroupBackend backend) {
  static const Ristretto255Group production;
  static const TinyGroup test;
  return backend == GroupBackend::kProduction ? static_cast<const Group&>(production)
                                              : static_cast<const Group&>(test);
}

}  // namespace secagg
