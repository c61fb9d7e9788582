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

#ifndef SECAGG_BYTES_H_
#define SECAGG_BYTES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace secagg {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

Bytes ToBytes(std::string_view s);
std::string ToHex(ByteView bytes);

void AppendU32Le(Bytes& out, uint32_t v);
void AppendU64Le(Bytes& out, uint64_t v);
void Append(Bytes& out, ByteView bytes);

// Sequential little-endian writer used for every canonical serialization.
class ByteWriter {
 public:
  ByteWriter() = default;

  ByteWriter& U8(uint8_t v);
  ByteWriter& U32(uint32_t v);
  ByteWriter& U64(uint64_t v);
  ByteWriter& Raw(ByteView bytes);
  // u32 length prefix followed by the bytes.
  ByteWriter& Blob(ByteView bytes);

  const Bytes& bytes() const { return out_; }
  Bytes Take() { return std::move(out_); }

 private:
  Bytes out_;
};

// Bounds-checked reader; any overrun throws Error(kMalformed).
class ByteReader {
 public:
  explicit ByteReader(ByteView in) : in_(in) {}

  uint8_t U8();
  uint32_t U32();
  uint64_t U64();
  ByteView Raw(size_t n);
  ByteView Blob();

  size_t remaining() const { return in_.size() - pos_; }
  bool done() const { return pos_ == in_.size(); }
  void ExpectDone() const;

 private:
  ByteView in_;
  size_t pos_ = 0;
};

}  // namespace secagg

#endif  // SECAGG_BYTES_H_
