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

#ifndef SECAGG_SELECTION_H_
#define SECAGG_SELECTION_H_

#include <cstdint>
#include <vector>

#include "secagg/bytes.h"

namespace secagg {

using ClientId = uint64_t;
// Ascending, duplicate-free list of client ids. Clients are numbered 1..N.
using IdSet = std::vector<ClientId>;

IdSet MakeIdSet(std::vector<ClientId> ids);
bool Contains(const IdSet& set, ClientId id);

// Pseudorandom `count`-subset of [1, total] seeded by H(seed_material || t).
// Error(kInvalidConfig) when count > total.
IdSet ChooseSetStatic(ByteView seed_material, uint64_t iteration, uint64_t count,
                      uint64_t total);

// Each client i is kept iff H(digest || t || i), read as a base-m number,
// has last digit < n; i.e. with probability n/m.
// Error(kInvalidConfig) unless 0 <= n <= m and m >= 1.
IdSet ChooseSetDynamic(ByteView model_digest, uint64_t iteration, uint64_t n,
                       uint64_t m, uint64_t total);

// Symmetric edge rule: complete graph when set_size <= degree + 1, otherwise
// H(digest || t || min || max) mod ceil(set_size / degree) == 0.
bool NeighborEdge(ByteView model_digest, uint64_t iteration, ClientId a,
                  ClientId b, size_t set_size, size_t expected_degree);

// A_{i,t}. Error(kNotParticipant) when i is not in `participants`.
IdSet FindNeighbors(ByteView model_digest, uint64_t iteration,
                    const IdSet& participants, ClientId i, size_t expected_degree);

}  // namespace secagg

#endif  // SECAGG_SELECTION_H_
