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

#include "secagg/selection.h"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>

#include "secagg/error.h"
#include "secagg/hash.h"
#include "secagg/rng.h"

namespace secagg {

IdSet MakeIdSet(std::vector<ClientId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

bool Contains(const IdSet& set, ClientId id) {
  return std::binary_search(set.begin(), set.end(), id);
}

IdSet ChooseSetStatic(ByteView seed_material, uint64_t iteration, uint64_t count,
                      uint64_t total) {
  if (count > total) {
    Fail(ErrorCode::kInvalidConfig,
         "cannot choose " + std::to_string(count) + " of " + std::to_string(total));
  }
  Bytes t;
  AppendU64Le(t, iteration);
  Rng rng(Sha256({ToBytes("secagg/choose-static"), seed_material, t}));
  // Sparse partial Fisher-Yates over [1, total].
  std::unordered_map<uint64_t, uint64_t> swapped;
  auto at = [&](uint64_t k) {
    auto it = swapped.find(k);
    return it == swapped.end() ? k + 1 : it->second;
  };
  IdSet out;
  out.reserve(count);
  for (uint64_t k = 0; k < count; ++k) {
    uint64_t r = k + rng.Uniform(total - k);
    uint64_t chosen = at(r);
    swapped[r] = at(k);
    out.push_back(chosen);
  }
  std::sort(out.begin(), out.end());
  return out;
}

IdSet ChooseSetDynamic(ByteView model_digest, uint64_t iteration, uint64_t n,
                       uint64_t m, uint64_t total) {
  if (m == 0 || n > m) Fail(ErrorCode::kInvalidConfig, "selection needs 0 <= n <= m, m >= 1");
  IdSet out;
  Bytes suffix;
  AppendU64Le(suffix, iteration);
  for (ClientId i = 1; i <= total; ++i) {
    Bytes id;
    AppendU64Le(id, i);
    const Digest32 alpha =
        Sha256({ToBytes("secagg/choose-dynamic"), model_digest, suffix, id});
    // Last base-m digit of alpha read as a big-endian integer.
    unsigned __int128 rem = 0;
    for (uint8_t byte : alpha) rem = ((rem << 8) | byte) % m;
    if (static_cast<uint64_t>(rem) < n) out.push_back(i);
  }
  return out;
}

bool NeighborEdge(ByteView model_digest, uint64_t iteration, ClientId a,
                  ClientId b, size_t set_size, size_t expected_degree) {
  if (a == b) return false;
  if (set_size <= expected_degree + 1) return true;
  if (expected_degree == 0) return false;
  const uint64_t modulus = (set_size + expected_degree - 1) / expected_degree;
  Bytes material;
  AppendU64Le(material, iteration);
  AppendU64Le(material, std::min(a, b));
  AppendU64Le(material, std::max(a, b));
  const Digest32 h = Sha256({ToBytes("secagg/neighbors"), model_digest, material});
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(h[i]) << (8 * i);
  return v % modulus == 0;
}

IdSet FindNeighbors(ByteView model_digest, uint64_t iteration,
                    const IdSet& participants, ClientId i, size_t expected_degree) {
  if (!Contains(participants, i)) {
    Fail(ErrorCode::kNotParticipant, "client " + std::to_string(i) + " not selected");
  }
  IdSet out;
  for (ClientId j : participants) {
    if (NeighborEdge(model_digest, iteration, i, j, participants.size(),
                     expected_degree)) {
      out.push_back(j);
    }
  }
  return out;
}

}  // namespace secagg
