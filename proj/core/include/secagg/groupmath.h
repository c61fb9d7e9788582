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

#ifndef SECAGG_GROUPMATH_H_
#define SECAGG_GROUPMATH_H_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "secagg/bytes.h"
#include "secagg/group.h"

namespace secagg {

// Lagrange coefficients for evaluation at zero, keyed by share index.
struct LagrangeCoefficients {
  std::map<uint64_t, Scalar> by_index;
};

// beta_i = prod_{j != i} j / (j - i) mod q. Indices must be distinct and
// nonzero modulo q, otherwise Error(kInvalidIndexSet).
LagrangeCoefficients LagrangeAtZero(const Group& group,
                                    std::span<const uint64_t> indices);

// prod_u shares[u]^{beta_u}. Every coefficient index needs a share
// (Error(kMissingShare) otherwise); extra shares are ignored.
GroupElement InterpolateInExponent(const Group& group,
                                   const std::map<uint64_t, GroupElement>& shares,
                                   const LagrangeCoefficients& coeffs);

// sum_u values[u] * beta_u, the scalar counterpart of the above.
Scalar InterpolateScalars(const Group& group,
                          const std::map<uint64_t, Scalar>& values,
                          const LagrangeCoefficients& coeffs);

// Hash-and-retry map into G \ {1}.
GroupElement MapToPoint(const Group& group, ByteView input);

Scalar HashToScalar(const Group& group, ByteView input);

// Expands a group element into `length` words of Z_{2^32}. The element's
// canonical encoding is hashed to an AES-128 key and the AES-CTR keystream
// (zero IV) is read as little-endian u32 words, so shorter expansions are
// prefixes of longer ones. Error(kEmptyExpansion) for length 0.
std::vector<uint32_t> PrgExpand(const Group& group, const GroupElement& seed,
                                size_t length);

// g_t = MapToPoint(model_digest || LE64(t)).
GroupElement DeriveRoundGenerator(const Group& group, ByteView model_digest,
                                  uint64_t iteration);

}  // namespace secagg

#endif  // SECAGG_GROUPMATH_H_
