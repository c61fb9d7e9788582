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

#include "secagg/bytes.h"

#include "secagg/error.h"

namespace secagg {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidIndexSet: return "InvalidIndexSet";
    case ErrorCode::kMissingShare: return "MissingShare";
    case ErrorCode::kEmptyExpansion: return "EmptyExpansion";
    case ErrorCode::kThresholdTooLarge: return "ThresholdTooLarge";
    case ErrorCode::kInsufficientShares: return "InsufficientShares";
    case ErrorCode::kDegenerateExtension: return "DegenerateExtension";
    case ErrorCode::kAccessDenied: return "AccessDenied";
    case ErrorCode::kDkgComplaint: return "DkgComplaint";
    case ErrorCode::kInvalidPeerKey: return "InvalidPeerKey";
    case ErrorCode::kAeAuthFailure: return "AeAuthFailure";
    case ErrorCode::kInvalidIndex: return "InvalidIndex";
    case ErrorCode::kMerkleVerifyFailure: return "MerkleVerifyFailure";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kNotParticipant: return "NotParticipant";
    case ErrorCode::kMissingSeed: return "MissingSeed";
    case ErrorCode::kRoundAbort: return "RoundAbort";
    case ErrorCode::kConsistencyAbort: return "ConsistencyAbort";
    case ErrorCode::kVerifyUnavailable: return "VerifyUnavailable";
    case ErrorCode::kCombineReject: return "CombineReject";
    case ErrorCode::kInvalidPlan: return "InvalidPlan";
    case ErrorCode::kMalformed: return "Malformed";
  }
  return "Unknown";
}

Bytes ToBytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

std::string ToHex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

void AppendU32Le(Bytes& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void AppendU64Le(Bytes& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void Append(Bytes& out, ByteView bytes) {
  out.insert(out.end(), bytes.begin(), bytes.end());
}

ByteWriter& ByteWriter::U8(uint8_t v) {
  out_.push_back(v);
  return *this;
}

ByteWriter& ByteWriter::U32(uint32_t v) {
  AppendU32Le(out_, v);
  return *this;
}

ByteWriter& ByteWriter::U64(uint64_t v) {
  AppendU64Le(out_, v);
  return *this;
}

ByteWriter& ByteWriter::Raw(ByteView bytes) {
  Append(out_, bytes);
  return *this;
}

ByteWriter& ByteWriter::Blob(ByteView bytes) {
  U32(static_cast<uint32_t>(bytes.size()));
  return Raw(bytes);
}

uint8_t ByteReader::U8() { return Raw(1)[0]; }

uint32_t ByteReader::U32() {
  ByteView b = Raw(4);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
  return v;
}

uint64_t ByteReader::U64() {
  ByteView b = Raw(8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

ByteView ByteReader::Raw(size_t n) {
  if (n > remaining()) {
    Fail(ErrorCode::kMalformed, "read past end of buffer");
  }
  ByteView out = in_.subspan(pos_, n);
  pos_ += n;
  return out;
}

ByteView ByteReader::Blob() { return Raw(U32()); }

void ByteReader::ExpectDone() const {
  if (!done()) Fail(ErrorCode::kMalformed, "trailing bytes");
}

}  // namespace secagg
