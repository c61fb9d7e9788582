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

#include "secagg/groupmath.h"

#include <openssl/evp.h>

#include <memory>
#include <set>
#include <string>

#include "secagg/error.h"
#include "secagg/hash.h"

namespace secagg {

LagrangeCoefficients LagrangeAtZero(const Group& group,
                                    std::span<const uint64_t> indices) {
  if (indices.empty()) Fail(ErrorCode::kInvalidIndexSet, "empty index set");
  std::vector<Scalar> points;
  std::set<Scalar> seen;
  points.reserve(indices.size());
  for (uint64_t index : indices) {
    Scalar x = group.FromU64(index);
    if (group.IsZero(x)) {
      Fail(ErrorCode::kInvalidIndexSet,
           "index " + std::to_string(index) + " is zero modulo q");
    }
    if (!seen.insert(x).second) {
      Fail(ErrorCode::kInvalidIndexSet,
           "index " + std::to_string(index) + " repeats modulo q");
    }
    points.push_back(x);
  }

  LagrangeCoefficients out;
  const Scalar one = group.FromU64(1);
  for (size_t i = 0; i < points.size(); ++i) {
    Scalar num = one;
    Scalar den = one;
    for (size_t j = 0; j < points.size(); ++j) {
      if (j == i) continue;
      num = group.Mul(num, points[j]);
      den = group.Mul(den, group.Sub(points[j], points[i]));
    }
    out.by_index[indices[i]] = group.Mul(num, group.Invert(den));
  }
  return out;
}

GroupElement InterpolateInExponent(const Group& group,
                                   const std::map<uint64_t, GroupElement>& shares,
                                   const LagrangeCoefficients& coeffs) {
  GroupElement acc = group.Identity();
  for (const auto& [index, beta] : coeffs.by_index) {
    auto it = shares.find(index);
    if (it == shares.end()) {
      Fail(ErrorCode::kMissingShare, "no share for index " + std::to_string(index));
    }
    acc = group.Mul(acc, group.Exp(it->second, beta));
  }
  return acc;
}

Scalar InterpolateScalars(const Group& group,
                          const std::map<uint64_t, Scalar>& values,
                          const LagrangeCoefficients& coeffs) {
  Scalar acc{};
  for (const auto& [index, beta] : coeffs.by_index) {
    auto it = values.find(index);
    if (it == values.end()) {
      Fail(ErrorCode::kMissingShare, "no share for index " + std::to_string(index));
    }
    acc = group.Add(acc, group.Mul(it->second, beta));
  }
  return acc;
}

GroupElement MapToPoint(const Group& group, ByteView input) {
  const Bytes domain = ToBytes("secagg/map-to-point");
  for (uint32_t counter = 0;; ++counter) {
    Bytes ctr;
    AppendU32Le(ctr, counter);
    if (auto element = group.ElementFromHash(Sha512({domain, ctr, input}))) {
      return *element;
    }
  }
}

Scalar HashToScalar(const Group& group, ByteView input) {
  return group.ReduceWide(Sha512({ToBytes("secagg/hash-to-scalar"), input}));
}

std::vector<uint32_t> PrgExpand(const Group& group, const GroupElement& seed,
                                size_t length) {
  if (length == 0) Fail(ErrorCode::kEmptyExpansion, "PRG length must be >= 1");
  const Digest32 digest = Sha256({ToBytes("secagg/prg"), group.Encode(seed)});

  std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)> ctx(
      EVP_CIPHER_CTX_new(), &EVP_CIPHER_CTX_free);
  const uint8_t iv[16] = {0};
  if (!ctx || EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_ctr(), nullptr,
                                 digest.data(), iv) != 1) {
    throw std::runtime_error("AES-CTR initialization failed");
  }
  std::vector<uint8_t> stream(length * 4, 0);
  int produced = 0;
  if (EVP_EncryptUpdate(ctx.get(), stream.data(), &produced, stream.data(),
                        static_cast<int>(stream.size())) != 1) {
    throw std::runtime_error("AES-CTR keystream failed");
  }

  std::vector<uint32_t> out(length);
  for (size_t i = 0; i < length; ++i) {
    out[i] = static_cast<uint32_t>(stream[4 * i]) |
             static_cast<uint32_t>(stream[4 * i + 1]) << 8 |
             static_cast<uint32_t>(stream[4 * i + 2]) << 16 |
             static_cast<uint32_t>(stream[4 * i + 3]) << 24;
  }
  return out;
}

GroupElement DeriveRoundGenerator(const Group& group, ByteView model_digest,
                                  uint64_t iteration) {
  Bytes input(model_digest.begin(), model_digest.end());
  AppendU64Le(input, iteration);
  return MapToPoint(group, input);
}

}  // namespace secagg
