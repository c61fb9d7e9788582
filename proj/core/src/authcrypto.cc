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

#include "secagg/authcrypto.h"

#include <openssl/evp.h>

#include <algorithm>
#include <memory>
#include <stdexcept>

#include "secagg/error.h"
#include "secagg/groupmath.h"
#include "secagg/hash.h"

namespace secagg {
namespace {

constexpr std::string_view kSeedPrefix = "secagg/ka/seed";
constexpr std::string_view kTransportPrefix = "secagg/ka/transport";
constexpr std::string_view kReleasePrefix = "secagg/ae/release-key";
constexpr std::string_view kSigNoncePrefix = "secagg/ds/nonce";
constexpr std::string_view kSigChallengePrefix = "secagg/ds/challenge";

GroupElement SharedPoint(const Group& group, const Scalar& my_sk,
                         const GroupElement& their_pk) {
  if (group.IsIdentity(their_pk)) {
    Fail(ErrorCode::kInvalidPeerKey, "peer public key is the identity");
  }
  return group.Exp(their_pk, my_sk);
}

AeKey Truncate(const Digest32& d) {
  AeKey key;
  std::copy_n(d.begin(), key.size(), key.begin());
  return key;
}

using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)>;

CipherCtx NewCtx() {
  CipherCtx ctx(EVP_CIPHER_CTX_new(), &EVP_CIPHER_CTX_free);
  if (!ctx) throw std::runtime_error("EVP_CIPHER_CTX_new failed");
  return ctx;
}

}  // namespace

KeyPair MakeKeyPair(const Group& group, const Scalar& sk, KeyPurpose purpose) {
  return KeyPair{sk, group.ExpBase(sk), purpose};
}

KeyTriple KeygenTriple(const Group& group, Rng& rng) {
  // A zero key would publish the identity, which peers reject.
  auto nonzero = [&] {
    Scalar s = group.RandomScalar(rng);
    while (group.IsZero(s)) s = group.RandomScalar(rng);
    return s;
  };
  Scalar mask = nonzero();
  Scalar auth = nonzero();
  Scalar decrypt = nonzero();
  return KeyTriple{
      MakeKeyPair(group, mask, KeyPurpose::kMask),
      MakeKeyPair(group, auth, KeyPurpose::kAuth),
      MakeKeyPair(group, decrypt, KeyPurpose::kDecrypt),
  };
}

Scalar KaAgreeSeed(const Group& group, const Scalar& my_sk,
                   const GroupElement& their_pk) {
  Bytes input = ToBytes(kSeedPrefix);
  Append(input, group.Encode(SharedPoint(group, my_sk, their_pk)));
  return HashToScalar(group, input);
}

AeKey KaAgreeTransport(const Group& group, const Scalar& my_sk,
                       const GroupElement& their_pk) {
  return Truncate(Sha256(
      {ToBytes(kTransportPrefix), group.Encode(SharedPoint(group, my_sk, their_pk))}));
}

AeKey DeriveAeKey(const Group& group, const GroupElement& secret) {
  return Truncate(Sha256({ToBytes(kReleasePrefix), group.Encode(secret)}));
}

Nonce MakeNonce(NoncePurpose purpose, uint32_t sender, uint64_t counter) {
  Nonce n{};
  n[0] = static_cast<uint8_t>(purpose);
  for (int i = 0; i < 4; ++i) n[1 + i] = static_cast<uint8_t>(sender >> (8 * i));
  for (int i = 0; i < 7; ++i) n[5 + i] = static_cast<uint8_t>(counter >> (8 * i));
  return n;
}

Bytes AeEncrypt(const AeKey& key, const Nonce& nonce, ByteView plaintext,
                ByteView associated_data) {
  CipherCtx ctx = NewCtx();
  Bytes out(nonce.size() + plaintext.size() + 16);
  std::copy(nonce.begin(), nonce.end(), out.begin());
  int len = 0;
  bool ok = EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, nullptr,
                               nullptr) == 1 &&
            EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, 12, nullptr) == 1 &&
            EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.data(),
                               nonce.data()) == 1 &&
            EVP_EncryptUpdate(ctx.get(), nullptr, &len, associated_data.data(),
                              static_cast<int>(associated_data.size())) == 1 &&
            EVP_EncryptUpdate(ctx.get(), out.data() + 12, &len, plaintext.data(),
                              static_cast<int>(plaintext.size())) == 1 &&
            EVP_EncryptFinal_ex(ctx.get(), out.data() + 12 + plaintext.size(), &len) == 1 &&
            EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, 16,
                                out.data() + 12 + plaintext.size()) == 1;
  if (!ok) throw std::runtime_error("AES-GCM encryption failed");
  return out;
}

Bytes AeDecrypt(const AeKey& key, ByteView ciphertext, ByteView associated_data) {
  if (ciphertext.size() < kAeOverhead) {
    Fail(ErrorCode::kAeAuthFailure, "ciphertext shorter than nonce and tag");
  }
  const size_t body = ciphertext.size() - kAeOverhead;
  CipherCtx ctx = NewCtx();
  Bytes out(body);
  Bytes tag(ciphertext.end() - 16, ciphertext.end());
  int len = 0;
  bool setup =
      EVP_DecryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, nullptr, nullptr) == 1 &&
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, 12, nullptr) == 1 &&
      EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), ciphertext.data()) == 1 &&
      EVP_DecryptUpdate(ctx.get(), nullptr, &len, associated_data.data(),
                        static_cast<int>(associated_data.size())) == 1 &&
      EVP_DecryptUpdate(ctx.get(), out.data(), &len, ciphertext.data() + 12,
                        static_cast<int>(body)) == 1 &&
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, 16, tag.data()) == 1;
  if (!setup) throw std::runtime_error("AES-GCM decryption setup failed");
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + body, &len) != 1) {
    Fail(ErrorCode::kAeAuthFailure, "authentication tag mismatch");
  }
  return out;
}

size_t SignatureSize(const Group& group) { return 32 + group.scalar_size(); }

Bytes DsSign(const Group& group, const Scalar& sk, ByteView message) {
  const GroupElement pk = group.ExpBase(sk);
  Bytes nonce_input = ToBytes(kSigNoncePrefix);
  Append(nonce_input, group.EncodeScalar(sk));
  Append(nonce_input, message);
  const Scalar k = HashToScalar(group, nonce_input);
  const GroupElement commitment = group.ExpBase(k);
  const Digest32 challenge = Sha256({ToBytes(kSigChallengePrefix),
                                     group.Encode(commitment), group.Encode(pk),
                                     message});
  const Scalar e = HashToScalar(group, challenge);
  const Scalar s = group.Add(k, group.Mul(e, sk));
  Bytes sig(challenge.begin(), challenge.end());
  Append(sig, group.EncodeScalar(s));
  return sig;
}

bool DsVerify(const Group& group, const GroupElement& pk, ByteView signature,
              ByteView message) {
  if (signature.size() != SignatureSize(group)) return false;
  ByteView challenge = signature.first(32);
  auto s = group.DecodeScalar(signature.subspan(32));
  if (!s) return false;
  const Scalar e = HashToScalar(group, challenge);
  // g^s pk^{-e} reproduces the signer's commitment.
  const GroupElement commitment =
      group.Div(group.ExpBase(*s), group.Exp(pk, e));
  const Digest32 expected = Sha256({ToBytes(kSigChallengePrefix),
                                    group.Encode(commitment), group.Encode(pk),
                                    message});
  return std::equal(expected.begin(), expected.end(), challenge.begin());
}

}  // namespace secagg
