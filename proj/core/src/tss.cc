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

#include "secagg/tss.h"

#include <algorithm>
#include <string>

#include "secagg/error.h"
#include "secagg/groupmath.h"

namespace secagg {
namespace {

GroupElement ReadElement(ByteReader& r, const Group& group) {
  auto x = group.Decode(r.Raw(group.element_size()));
  if (!x) Fail(ErrorCode::kMalformed, "invalid group element");
  return *x;
}

}  // namespace

GroupElement TssMessagePoint(const Group& group, ByteView message) {
  Bytes input = ToBytes("secagg/tss");
  Append(input, message);
  return MapToPoint(group, input);
}

PartialSignature TssSignPoint(const Group& group, uint64_t signer, const Scalar& msk_share,
                              const GroupElement& point) {
  return {signer, group.Exp(point, msk_share)};
}

PartialSignature TssSignShare(const Group& group, const Share& msk_share,
                              ByteView message) {
  return TssSignPoint(group, msk_share.holder, msk_share.value,
                      TssMessagePoint(group, message));
}

OracleVerifier::OracleVerifier(const Group& group, const GroupElement& mpk,
                               const Scalar& msk,
                               const std::map<uint64_t, GroupElement>& public_shares,
                               const std::map<uint64_t, Scalar>& msk_shares)
    : group_(group), msk_(msk), shares_(msk_shares) {
  if (group.ExpBase(msk) != mpk) {
    Fail(ErrorCode::kVerifyUnavailable, "msk does not match mpk");
  }
  for (const auto& [u, x] : shares_) {
    auto it = public_shares.find(u);
    if (it == public_shares.end() || group.ExpBase(x) != it->second) {
      Fail(ErrorCode::kVerifyUnavailable,
           "no matching commitment for signer " + std::to_string(u));
    }
  }
}

bool OracleVerifier::VerifyShare(ByteView message, const PartialSignature& partial) const {
  auto it = shares_.find(partial.signer);
  if (it == shares_.end()) {
    Fail(ErrorCode::kVerifyUnavailable,
         "no commitment for signer " + std::to_string(partial.signer));
  }
  return group_.Exp(TssMessagePoint(group_, message), it->second) == partial.value;
}

bool OracleVerifier::Verify(ByteView message, const ThresholdSignature& signature) const {
  return group_.Exp(TssMessagePoint(group_, message), msk_) == signature.value;
}

ThresholdSignature TssCombine(const Group& group, ByteView message,
                              std::span<const PartialSignature> partials,
                              size_t threshold, const TssVerifier& verifier) {
  std::map<uint64_t, GroupElement> by_signer;
  for (const PartialSignature& p : partials) by_signer.emplace(p.signer, p.value);
  if (threshold == 0 || by_signer.size() < threshold) {
    Fail(ErrorCode::kInsufficientShares, std::to_string(by_signer.size()) +
                                             " partials, need " + std::to_string(threshold));
  }
  for (const PartialSignature& p : partials) {
    if (!verifier.VerifyShare(message, p)) {
      Fail(ErrorCode::kCombineReject,
           "partial of signer " + std::to_string(p.signer) + " does not verify");
    }
  }
  std::vector<uint64_t> ids;
  std::map<uint64_t, GroupElement> used;
  for (const auto& [id, value] : by_signer) {
    if (ids.size() == threshold) break;
    ids.push_back(id);
    used.emplace(id, value);
  }
  return {InterpolateInExponent(group, used, LagrangeAtZero(group, ids))};
}

bool TssVerify(const TssVerifier& verifier, ByteView message,
               const ThresholdSignature& signature) {
  return verifier.Verify(message, signature);
}

TssSetMessages MakeTssSetMessages(uint64_t iteration, const IdSet& survivors,
                                  const IdSet& dropouts) {
  auto encode = [iteration](std::string_view tag, const IdSet& ids) {
    ByteWriter w;
    w.Raw(ToBytes(tag)).U64(iteration).U32(static_cast<uint32_t>(ids.size()));
    for (ClientId id : ids) w.U64(id);
    return w.Take();
  };
  return {encode("US", survivors), encode("UD", dropouts)};
}

Bytes SerializeTssPartial(const Group& group, const TssPartialPair& p) {
  ByteWriter w;
  w.U64(p.signer).Raw(group.Encode(p.on_survivors)).Raw(group.Encode(p.on_dropouts));
  return w.Take();
}

TssPartialPair ParseTssPartial(const Group& group, ByteView bytes) {
  ByteReader r(bytes);
  TssPartialPair p;
  p.signer = r.U64();
  p.on_survivors = ReadElement(r, group);
  p.on_dropouts = ReadElement(r, group);
  r.ExpectDone();
  return p;
}

Bytes SerializeTssCertificate(const Group& group, const TssCertificate& c) {
  ByteWriter w;
  w.Raw(group.Encode(c.on_survivors.value)).Raw(group.Encode(c.on_dropouts.value));
  return w.Take();
}

TssCertificate ParseTssCertificate(const Group& group, ByteView bytes) {
  ByteReader r(bytes);
  TssCertificate c;
  c.on_survivors.value = ReadElement(r, group);
  c.on_dropouts.value = ReadElement(r, group);
  r.ExpectDone();
  return c;
}

TssPartialPair DecryptorTssPartial(const Group& group, const DecryptorState& state,
                                   const CheckRequest& req, const RoundConfig& config) {
  DecryptorCheck(group, state, req, config);
  if (!state.msk_share) Fail(ErrorCode::kMissingShare, "decryptor holds no msk share");
  TssSetMessages m = MakeTssSetMessages(config.iteration, req.survivors, req.dropouts);
  return {state.id, TssSignShare(group, *state.msk_share, m.survivors).value,
          TssSignShare(group, *state.msk_share, m.dropouts).value};
}

TssCertificate ServerCrossCheck(const Group& group, const IdSet& survivors,
                                const IdSet& dropouts, uint64_t iteration,
                                std::span<const TssPartialPair> partials,
                                size_t threshold, const TssVerifier& verifier) {
  TssSetMessages m = MakeTssSetMessages(iteration, survivors, dropouts);
  std::vector<PartialSignature> on_s, on_d;
  for (const TssPartialPair& p : partials) {
    on_s.push_back({p.signer, p.on_survivors});
    on_d.push_back({p.signer, p.on_dropouts});
  }
  return {TssCombine(group, m.survivors, on_s, threshold, verifier),
          TssCombine(group, m.dropouts, on_d, threshold, verifier)};
}

void DecryptorCheckCertificate(const TssVerifier& verifier, const CheckRequest& req,
                               const TssCertificate& certificate) {
  TssSetMessages m = MakeTssSetMessages(req.iteration, req.survivors, req.dropouts);
  if (!verifier.Verify(m.survivors, certificate.on_survivors) ||
      !verifier.Verify(m.dropouts, certificate.on_dropouts)) {
    Fail(ErrorCode::kConsistencyAbort, "threshold signature over the sets does not verify");
  }
}

}  // namespace secagg
