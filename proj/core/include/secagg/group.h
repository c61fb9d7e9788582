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

#ifndef SECAGG_GROUP_H_
#define SECAGG_GROUP_H_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "secagg/bytes.h"
#include "secagg/hash.h"
#include "secagg/rng.h"

namespace secagg {

enum class GroupBackend {
  // ristretto255: prime order 2^252 + 27742317777372353535851937790883648493.
  kProduction,
  // The subgroup of squares of Z_23^*: p = 23, q = 11, g = 2.
  kTest,
};

std::string_view GroupBackendName(GroupBackend backend);

// Element of Z_q, stored little-endian. Only meaningful together with the
// Group that produced it.
struct Scalar {
  std::array<uint8_t, 32> le{};

  friend bool operator==(const Scalar&, const Scalar&) = default;
  friend auto operator<=>(const Scalar&, const Scalar&) = default;
};

// Group element in the backend's internal canonical representation.
struct GroupElement {
  std::array<uint8_t, 32> repr{};

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

// Prime-order cyclic group with a fixed generator. Implementations are
// stateless; obtain them through GetGroup().
class Group {
 public:
  virtual ~Group() = default;

  virtual GroupBackend backend() const = 0;
  // Byte length of Encode() output and of EncodeScalar() output.
  virtual size_t element_size() const = 0;
  virtual size_t scalar_size() const = 0;

  virtual GroupElement Generator() const = 0;
  virtual GroupElement Identity() const = 0;
  virtual GroupElement Mul(const GroupElement& a, const GroupElement& b) const = 0;
  virtual GroupElement Div(const GroupElement& a, const GroupElement& b) const = 0;
  virtual GroupElement Exp(const GroupElement& base, const Scalar& e) const = 0;
  virtual GroupElement ExpBase(const Scalar& e) const = 0;
  bool IsIdentity(const GroupElement& x) const { return x == Identity(); }

  virtual Scalar Add(const Scalar& a, const Scalar& b) const = 0;
  virtual Scalar Sub(const Scalar& a, const Scalar& b) const = 0;
  virtual Scalar Mul(const Scalar& a, const Scalar& b) const = 0;
  virtual Scalar Neg(const Scalar& a) const = 0;
  // Throws Error(kInvalidIndexSet) on zero.
  virtual Scalar Invert(const Scalar& a) const = 0;
  virtual Scalar FromU64(uint64_t v) const = 0;
  virtual Scalar RandomScalar(Rng& rng) const = 0;
  // Uniform-looking reduction of 512 hash bits into Z_q.
  virtual Scalar ReduceWide(const Digest64& wide) const = 0;
  bool IsZero(const Scalar& s) const { return s == Scalar{}; }

  // One candidate of the hash-and-retry map; nullopt asks for another
  // counter value. Never returns the identity.
  virtual std::optional<GroupElement> ElementFromHash(const Digest64& h) const = 0;

  // Fixed-length canonical encodings. These bytes feed every hash.
  virtual Bytes Encode(const GroupElement& x) const = 0;
  virtual std::optional<GroupElement> Decode(ByteView bytes) const = 0;
  Bytes EncodeScalar(const Scalar& s) const;  // big-endian
  std::optional<Scalar> DecodeScalar(ByteView bytes) const;

 protected:
  virtual bool IsCanonicalScalar(const Scalar& s) const = 0;
};

const Group& GetGroup(GroupBackend backend);

}  // namespace secagg

#endif  // SECAGG_GROUP_H_
