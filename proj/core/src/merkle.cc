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

#include "secagg/merkle.h"

#include <string>

#include "secagg/error.h"

namespace secagg {
namespace {

Digest32 NodeHash(const Digest32& left, const Digest32& right) {
  const uint8_t tag = 0x01;
  return Sha256({ByteView(&tag, 1), left, right});
}

}  // namespace

Digest32 MerkleTree::LeafHash(ByteView payload) {
  const uint8_t tag = 0x00;
  return Sha256({ByteView(&tag, 1), payload});
}

MerkleTree::MerkleTree(const std::vector<Bytes>& leaves) {
  if (leaves.empty()) Fail(ErrorCode::kInvalidIndex, "Merkle tree needs a leaf");
  std::vector<Digest32> level;
  level.reserve(leaves.size());
  for (const Bytes& leaf : leaves) level.push_back(LeafHash(leaf));
  levels_.push_back(std::move(level));
  while (levels_.back().size() > 1) {
    const auto& below = levels_.back();
    std::vector<Digest32> above;
    for (size_t i = 0; i < below.size(); i += 2) {
      const Digest32& right = i + 1 < below.size() ? below[i + 1] : below[i];
      above.push_back(NodeHash(below[i], right));
    }
    levels_.push_back(std::move(above));
  }
}

std::vector<Digest32> MerkleTree::Prove(size_t index) const {
  if (index >= size()) {
    Fail(ErrorCode::kInvalidIndex, "leaf " + std::to_string(index) + " out of range");
  }
  std::vector<Digest32> proof;
  for (size_t depth = 0; depth + 1 < levels_.size(); ++depth) {
    const auto& level = levels_[depth];
    size_t sibling = index ^ 1;
    proof.push_back(sibling < level.size() ? level[sibling] : level[index]);
    index >>= 1;
  }
  return proof;
}

bool MerkleTree::Verify(const Digest32& root, ByteView leaf_payload, size_t index,
                        const std::vector<Digest32>& proof) {
  Digest32 acc = LeafHash(leaf_payload);
  for (const Digest32& sibling : proof) {
    acc = (index & 1) ? NodeHash(sibling, acc) : NodeHash(acc, sibling);
    index >>= 1;
  }
  return index == 0 && acc == root;
}

}  // namespace secagg
