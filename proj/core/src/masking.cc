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

#include "secagg/masking.h"

#include <stdexcept>

namespace secagg {

void AddInto(RingVector& acc, std::span<const uint32_t> v) {
  if (acc.size() != v.size()) throw std::invalid_argument("vector length mismatch");
  for (size_t k = 0; k < acc.size(); ++k) acc[k] += v[k];
}

void SubInto(RingVector& acc, std::span<const uint32_t> v) {
  if (acc.size() != v.size()) throw std::invalid_argument("vector length mismatch");
  for (size_t k = 0; k < acc.size(); ++k) acc[k] -= v[k];
}

int PairwiseSign(ClientId owner, ClientId peer) { return peer > owner ? 1 : -1; }

RingVector MaskInput(std::span<const uint32_t> input,
                     std::span<const uint32_t> self_mask, ClientId self,
                     const std::vector<PairwiseMask>& pairwise) {
  RingVector y(input.begin(), input.end());
  if (!self_mask.empty()) AddInto(y, self_mask);
  for (const PairwiseMask& m : pairwise) {
    if (PairwiseSign(self, m.peer) > 0) {
      AddInto(y, m.mask);
    } else {
      SubInto(y, m.mask);
    }
  }
  return y;
}

RingVector UnmaskSum(const std::vector<RingVector>& masked_inputs,
                     const std::vector<RingVector>& self_masks,
                     const std::vector<DropoutEdgeMask>& dropout_edges) {
  if (masked_inputs.empty()) throw std::invalid_argument("no masked inputs");
  RingVector z(masked_inputs.front().size(), 0);
  for (const RingVector& y : masked_inputs) AddInto(z, y);
  for (const RingVector& r : self_masks) SubInto(z, r);
  for (const DropoutEdgeMask& e : dropout_edges) {
    // The survivor's report carries sign(survivor, dropped) * m; the dropped
    // partner's opposite term never arrived.
    if (PairwiseSign(e.survivor, e.dropped) > 0) {
      SubInto(z, e.mask);
    } else {
      AddInto(z, e.mask);
    }
  }
  return z;
}

}  // namespace secagg
