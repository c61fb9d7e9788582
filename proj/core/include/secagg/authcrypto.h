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

#ifndef SECAGG_AUTHCRYPTO_H_
#define SECAGG_AUTHCRYPTO_H_

#include <array>
#include <cstdint>

#include "secagg/bytes.h"
#include "secagg/group.h"
#include "secagg/rng.h"

namespace secagg {

enum class KeyPurpose : uint8_t {
  kMask = 1,     // pairwise-seed agreement
  kAuth = 2,     // signatures and transport-key agreement
  kDecrypt = 3,  // decryptors only: binds k_u to the checked sets
};

struct KeyPair {
  Scalar sk;
  GroupElement pk;
  KeyPurpose purpose = KeyPurpose::kMask;
};

struct KeyTriple {
  KeyPair mask;
  KeyPair auth;
  KeyPair decrypt;
};

KeyPair MakeKeyPair(const Group& group, const Scalar& sk, KeyPurpose purpose);
KeyTriple KeygenTriple(const Group& group, Rng& rng);

using AeKey = std::array<uint8_t, 16>;

// Diffie-Hellman agreement followed by a role-prefixed key derivation, so
// the seed and transport outputs of one pair never coincide.
// Error(kInvalidPeerKey) for the identity.
Scalar KaAgreeSeed(const Group& group, const Scalar& my_sk,
                   const GroupElement& their_pk);
AeKey KaAgreeTransport(const Group& group, const Scalar& my_sk,
                       const GroupElement& their_pk);

// AE key wrapped by a decryptor's per-iteration k_u.
AeKey DeriveAeKey(const Group& group, const GroupElement& secret);

enum class NoncePurpose : uint8_t {
  kSeedShare = 1,
  kDkgShare = 2,
  kSeedRelease = 3,
  kExtension = 4,
};

using Nonce = std::array<uint8_t, 12>;

// purpose (1 byte) || sender (4 bytes LE) || counter (7 bytes LE). Each
// (key, sender, purpose) triple advances its own counter, so nonces never
// repeat under one key even when both ends of a pair send.
Nonce MakeNonce(NoncePurpose purpose, uint32_t sender, uint64_t counter);

inline constexpr size_t kAeOverhead = 12 + 16;

// AES-128-GCM. Output layout: nonce (12) || body || tag (16).
Bytes AeEncrypt(const AeKey& key, const Nonce& nonce, ByteView plaintext,
                ByteView associated_data);
// Error(kAeAuthFailure) on any tampering, wrong key or wrong associated data.
Bytes AeDecrypt(const AeKey& key, ByteView ciphertext, ByteView associated_data);

// Schnorr signatures over the auth key pair. The signature stores the full
// 256-bit challenge hash followed by the response scalar, so even the test
// group rejects random signatures with overwhelming probability. Nonces are
// derived deterministically from (sk, message).
Bytes DsSign(const Group& group, const Scalar& sk, ByteView message);
// Malformed signatures simply fail to verify.
bool DsVerify(const Group& group, const GroupElement& pk, ByteView signature,
              ByteView message);
size_t SignatureSize(const Group& group);

}  // namespace secagg

#endif  // SECAGG_AUTHCRYPTO_H_
