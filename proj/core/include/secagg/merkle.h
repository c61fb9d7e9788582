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

#ifndef SECAGG_MERKLE_H_
#define SECAGG_MERKLE_H_

#include <cstddef>
#include <vector>

#include "secagg/bytes.h"
#include "secagg/hash.h"

namespace secagg {

// Binary Merkle tree over leaf payloads. Leaves hash as H(0x00 || payload),
// inner nodes as H(0x01 || left || right); an odd node at the end of a level
// is paired with itself. A single-leaf tree's root is the leaf hash.
class MerkleTree {
 public:
  // Error(kInvalidIndex) for an empty leaf list.
  explicit MerkleTree(const std::vector<Bytes>& leaves);

  const Digest32& root() const { return levels_.back().front(); }
  size_t size() const { return levels_.front().size(); }

  // Sibling path from leaf to root, ceil(log2 n) entries.
  // Error(kInvalidIndex) when index >= size().
  std::vector<Digest32> Prove(size_t index) const;

  static Digest32 LeafHash(ByteView payload);
  static bool Verify(const Digest32& root, ByteView leaf_payload, size_t index,
                     const std::vector<Digest32>& proof);

 private:
  std::vector<std::vector<Digest32>> levels_;
};

}  // namespace secagg

#endif  // SECAGG_MERKLE_H_
