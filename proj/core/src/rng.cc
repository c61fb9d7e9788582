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

#include "secagg/rng.h"

#include <sodium.h>

#include <algorithm>
#include <cstring>
#include <stdexcept>

#include "secagg/bytes.h"
#include "secagg/hash.h"

namespace secagg {
namespace {

void EnsureSodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw std::runtime_error("libsodium initialization failed");
}

}  // namespace

Rng::Rng(uint64_t seed) {
  EnsureSodium();
  Bytes material = ToBytes("secagg/rng/seed");
  AppendU64Le(material, seed);
  key_ = Sha256(material);
}

Rng::Rng(const Key& key) : key_(key) { EnsureSodium(); }

Rng Rng::FromOs() {
  EnsureSodium();
  Key key;
  randombytes_buf(key.data(), key.size());
  return Rng(key);
}

void Rng::Refill() {
  std::array<uint8_t, crypto_stream_chacha20_ietf_NONCEBYTES> nonce{};
  for (int i = 0; i < 8; ++i) nonce[i] = static_cast<uint8_t>(block_ >> (8 * i));
  ++block_;
  crypto_stream_chacha20_ietf(buffer_.data(), buffer_.size(), nonce.data(),
                              key_.data());
  pos_ = 0;
}

void Rng::Fill(std::span<uint8_t> out) {
  size_t done = 0;
  while (done < out.size()) {
    if (pos_ == buffer_.size()) Refill();
    size_t n = std::min(out.size() - done, buffer_.size() - pos_);
    std::memcpy(out.data() + done, buffer_.data() + pos_, n);
    pos_ += n;
    done += n;
  }
}

uint64_t Rng::NextU64() {
  std::array<uint8_t, 8> b;
  Fill(b);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

uint64_t Rng::Uniform(uint64_t bound) {
  // Rejection sampling removes modulo bias.
  const uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  for (;;) {
    uint64_t v = NextU64();
    if (v < limit) return v % bound;
  }
}

double Rng::NextDouble() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

Rng Rng::Fork(std::string_view label, uint64_t index) const {
  Bytes suffix;
  AppendU64Le(suffix, index);
  Key child = Sha256({ToBytes("secagg/rng/fork"), key_, ToBytes(label), suffix});
  return Rng(child);
}

}  // namespace secagg
