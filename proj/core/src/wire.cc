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

#include "secagg/wire.h"

#include "secagg/error.h"

namespace secagg {

std::string_view MsgTypeName(MsgType type) {
  switch (type) {
    case MsgType::kPkCommit: return "PKCOMMIT";
    case MsgType::kRootSig: return "ROOTSIG";
    case MsgType::kSeedShare: return "SEEDSHARE";
    case MsgType::kDkgDeal: return "DKGDEAL";
    case MsgType::kModel: return "MODEL";
    case MsgType::kReport: return "REPORT";
    case MsgType::kCheckReq: return "CHECKREQ";
    case MsgType::kDecResp: return "DECRESP";
    case MsgType::kTssReq: return "TSSREQ";
    case MsgType::kTssPart: return "TSSPART";
    case MsgType::kTssFull: return "TSSFULL";
  }
  return "UNKNOWN";
}

Bytes EncodeEnvelope(const Message& message) {
  ByteWriter w;
  w.U8(static_cast<uint8_t>(message.type));
  w.Blob(message.body);
  return w.Take();
}

Message DecodeEnvelope(ByteView bytes) {
  ByteReader r(bytes);
  const uint8_t tag = r.U8();
  if (tag < 0x01 || tag > 0x0B) Fail(ErrorCode::kMalformed, "unknown message type");
  ByteView body = r.Blob();
  r.ExpectDone();
  return Message{static_cast<MsgType>(tag), Bytes(body.begin(), body.end())};
}

}  // namespace secagg
