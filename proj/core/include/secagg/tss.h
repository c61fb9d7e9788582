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

#ifndef SECAGG_TSS_H_
#define SECAGG_TSS_H_

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "secagg/bytes.h"
#include "secagg/group.h"
#include "secagg/protocol.h"
#include "secagg/sharing.h"

namespace secagg {

// Non-interactive threshold signatures, sigma = H(m)^msk, over the DKG key.

struct PartialSignature {
  uint64_t signer = 0;
  GroupElement value;
};

struct ThresholdSignature {
  GroupElement value;
};

// H(m), the hash of a message into the group.
GroupElement TssMessagePoint(const Group& group, ByteView message);

// point^{msk_u}; the primitive behind TssSignShare.
PartialSignature TssSignPoint(const Group& group, uint64_t signer, const Scalar& msk_share,
                              const GroupElement& point);
PartialSignature TssSignShare(const Group& group, const Share& msk_share,
                              ByteView message);

// Checking sigma against g^x needs a decisional Diffie-Hellman test, which a
// plain prime-order group does not offer. Verification is therefore a
// pluggable backend.
class TssVerifier {
 public:
  virtual ~TssVerifier() = default;
  // Error(kVerifyUnavailable) when nothing is known about `signer`.
  virtual bool VerifyShare(ByteView message, const PartialSignature& partial) const = 0;
  virtual bool Verify(ByteView message, const ThresholdSignature& signature) const = 0;
};

// Verifier that holds the exponents. The public shares g^{msk_u}, derived
// from the DKG commitments, must match the supplied exponents or the
// constructor throws Error(kVerifyUnavailable).
class OracleVerifier : public TssVerifier {
 public:
  OracleVerifier(const Group& group, const GroupElement& mpk, const Scalar& msk,
                 const std::map<uint64_t, GroupElement>& public_shares,
                 const std::map<uint64_t, Scalar>& msk_shares);

  bool VerifyShare(ByteView message, const PartialSignature& partial) const override;
  bool Verify(ByteView message, const ThresholdSignature& signature) const override;

 private:
  const Group& group_;
  Scalar msk_;
  std::map<uint64_t, Scalar> shares_;
};

// Verifies every partial, then interpolates the first `threshold` (by
// signer) in the exponent. Errors: kInsufficientShares below threshold
// distinct signers, kCombineReject when any partial fails verification.
ThresholdSignature TssCombine(const Group& group, ByteView message,
                              std::span<const PartialSignature> partials,
                              size_t threshold, const TssVerifier& verifier);

bool TssVerify(const TssVerifier& verifier, ByteView message,
               const ThresholdSignature& signature);

// The two messages signed in the cross-check: "US" || ids and "UD" || ids.
struct TssSetMessages {
  Bytes survivors;
  Bytes dropouts;
};
TssSetMessages MakeTssSetMessages(uint64_t iteration, const IdSet& survivors,
                                  const IdSet& dropouts);

// TSSPART body.
struct TssPartialPair {
  uint64_t signer = 0;
  GroupElement on_survivors;
  GroupElement on_dropouts;
};

// TSSFULL body.
struct TssCertificate {
  ThresholdSignature on_survivors;
  ThresholdSignature on_dropouts;
};

Bytes SerializeTssPartial(const Group& group, const TssPartialPair& p);
TssPartialPair ParseTssPartial(const Group& group, ByteView bytes);
Bytes SerializeTssCertificate(const Group& group, const TssCertificate& c);
TssCertificate ParseTssCertificate(const Group& group, ByteView bytes);

// Decryptor side of the request: the usual consistency checks, then partial
// signatures over its own view of the sets. Decryptors without an msk share
// raise Error(kMissingShare).
TssPartialPair DecryptorTssPartial(const Group& group, const DecryptorState& state,
                                   const CheckRequest& req, const RoundConfig& config);

// Server side: combines both messages' partials.
TssCertificate ServerCrossCheck(const Group& group, const IdSet& survivors,
                                const IdSet& dropouts, uint64_t iteration,
                                std::span<const TssPartialPair> partials,
                                size_t threshold, const TssVerifier& verifier);

// Decryptor side of TSSFULL. Error(kConsistencyAbort) unless both
// signatures verify for the decryptor's view.
void DecryptorCheckCertificate(const TssVerifier& verifier, const CheckRequest& req,
                               const TssCertificate& certificate);

}  // namespace secagg

#endif  // SECAGG_TSS_H_
