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

#ifndef SECAGG_WIRE_H_
#define SECAGG_WIRE_H_

#include <cstdint>
#include <string_view>

#include "secagg/bytes.h"

namespace secagg {

enum class MsgType : uint8_t {
  kPkCommit = 0x01,
  kRootSig = 0x02,
  kSeedShare = 0x03,
  kDkgDeal = 0x04,
  kModel = 0x05,
  kReport = 0x06,
  kCheckReq = 0x07,
  kDecResp = 0x08,
  kTssReq = 0x09,
  kTssPart = 0x0A,
  kTssFull = 0x0B,
};

std::string_view MsgTypeName(MsgType type);

// type (1 byte) || body length (4 bytes LE) || body.
struct Message {
  MsgType type = MsgType::kModel;
  Bytes body;

  size_t wire_size() const { return kHeaderSize + body.size(); }
  static constexpr size_t kHeaderSize = 5;
};

Bytes EncodeEnvelope(const Message& message);
// Error(kMalformed) for unknown types or length mismatches.
Message DecodeEnvelope(ByteView bytes);

}  // namespace secagg

#endif  // SECAGG_WIRE_H_
