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

#ifndef SECAGG_MASKING_H_
#define SECAGG_MASKING_H_

#include <cstdint>
#include <span>
#include <vector>

#include "secagg/selection.h"

namespace secagg {

// Vector over Z_{2^32}; unsigned wraparound is the ring arithmetic.
using RingVector = std::vector<uint32_t>;

void AddInto(RingVector& acc, std::span<const uint32_t> v);
void SubInto(RingVector& acc, std::span<const uint32_t> v);

// +1 when `peer` follows `owner` in id order, -1 otherwise: the sign with
// which owner's input carries the mask of edge (owner, peer).
int PairwiseSign(ClientId owner, ClientId peer);

struct PairwiseMask {
  ClientId peer = 0;
  RingVector mask;
};

// y = x + r + sum_{j > i} m_ij - sum_{j < i} m_ij. An empty self mask
// stands for the zero vector.
RingVector MaskInput(std::span<const uint32_t> input,
                     std::span<const uint32_t> self_mask, ClientId self,
                     const std::vector<PairwiseMask>& pairwise);

// Mask of an edge between a dropped client and a surviving neighbour.
struct DropoutEdgeMask {
  ClientId dropped = 0;
  ClientId survivor = 0;
  RingVector mask;
};

// z = sum y_i - (sum r_i + sum sign(survivor, dropped) m). All vectors share
// one length.
RingVector UnmaskSum(const std::vector<RingVector>& masked_inputs,
                     const std::vector<RingVector>& self_masks,
                     const std::vector<DropoutEdgeMask>& dropout_edges);

}  // namespace secagg

#endif  // SECAGG_MASKING_H_
