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

#ifndef SECAGG_RNG_H_
#define SECAGG_RNG_H_

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace secagg {

// Deterministic ChaCha20 keystream generator. Every simulated party owns one,
// forked from the session seed, so a run is reproducible from a single u64.
class Rng {
 public:
  using Key = std::array<uint8_t, 32>;

  explicit Rng(uint64_t seed);
  explicit Rng(const Key& key);

  // Seeds from the operating system.
  static Rng FromOs();

  void Fill(std::span<uint8_t> out);
  uint64_t NextU64();
  // Uniform in [0, bound); bound > 0.
  uint64_t Uniform(uint64_t bound);
  double NextDouble();

  // Independent child stream; (label, index) pairs give distinct streams.
  Rng Fork(std::string_view label, uint64_t index = 0) const;

 private:
  void Refill();

  Key key_;
  uint64_t block_ = 0;
  std::array<uint8_t, 256> buffer_{};
  size_t pos_ = 256;
};

}  // namespace secagg

#endif  // SECAGG_RNG_H_
