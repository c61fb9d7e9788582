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

#ifndef SECAGG_SHARING_H_
#define SECAGG_SHARING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "secagg/bytes.h"
#include "secagg/group.h"
#include "secagg/rng.h"

namespace secagg {

// One Shamir share. Level 0 is plain Shamir; multilevel shares carry the
// (1-based) level at which they were dealt.
struct Share {
  uint64_t holder = 0;
  Scalar value;
  uint8_t level = 0;

  friend bool operator==(const Share&, const Share&) = default;
};

// level (1 byte) || holder id (scalar bytes) || value (scalar bytes).
Bytes SerializeShare(const Group& group, const Share& share);
Share ParseShare(const Group& group, ByteView bytes);

// a_0 + a_1 x + ... ; coefficients[0] is the shared secret.
struct Polynomial {
  std::vector<Scalar> coefficients;

  Scalar Evaluate(const Group& group, const Scalar& x) const;
  Scalar Evaluate(const Group& group, uint64_t x) const;
};

Polynomial RandomPolynomial(const Group& group, const Scalar& secret,
                            size_t degree, Rng& rng);

// Evaluates `poly` at every holder. Holders must be distinct and nonzero
// modulo q (Error(kInvalidIndexSet)).
std::vector<Share> ShareWithPolynomial(const Group& group, const Polynomial& poly,
                                       std::span<const uint64_t> holders,
                                       uint8_t level = 0);

// threshold-out-of-|holders| sharing of `secret` with a fresh random
// polynomial of degree threshold - 1.
std::vector<Share> ShamirShare(const Group& group, const Scalar& secret,
                               size_t threshold, std::span<const uint64_t> holders,
                               Rng& rng);

// Lagrange interpolation at zero over the first `threshold` shares (by
// holder id). Inconsistent shares are not detected: plain Shamir carries no
// integrity, the transport layer provides it.
Scalar ShamirReconstruct(const Group& group, std::span<const Share> shares,
                         size_t threshold);

// Cumulative-threshold multilevel access structure. A holder set A is
// authorized iff for every level i, |A ∩ (P_1 ∪ ... ∪ P_i)| >= threshold_i.
struct AccessLevel {
  std::vector<uint64_t> members;
  size_t threshold = 0;
};

struct AccessStructure {
  std::vector<AccessLevel> levels;

  static AccessStructure SingleLevel(std::vector<uint64_t> members,
                                     size_t threshold);

  // Error(kInvalidConfig) unless thresholds strictly increase, levels are
  // disjoint, threshold_1 <= |P_1| and threshold_{i+1} >= N_i + 1.
  void Validate() const;
  bool Authorizes(std::span<const uint64_t> holders) const;
  // 1-based level of a holder, nullopt for outsiders.
  std::optional<uint8_t> LevelOf(uint64_t holder) const;
  // |P_1| + ... + |P_level|.
  size_t CumulativeSize(size_t level) const;
  std::vector<uint64_t> AllMembers() const;
  size_t final_threshold() const { return levels.back().threshold; }

  // Smallest authorized subset of `available`, taken level by level from the
  // most privileged holders, or nullopt when `available` is unauthorized.
  // Its size is always final_threshold().
  std::optional<std::vector<uint64_t>> SelectQuorum(
      std::span<const uint64_t> available) const;
};

// Dealer side of the multilevel scheme. The dealer keeps every level's
// polynomial so that later levels can be added without touching existing
// shares.
class DealerState {
 public:
  // Plain Shamir sharing to P_1 with threshold_1, remembered for extension.
  static std::pair<DealerState, std::vector<Share>> DealFirstLevel(
      const Group& group, const Scalar& secret, size_t threshold,
      std::span<const uint64_t> members, Rng& rng);
  static std::pair<DealerState, std::vector<Share>> DealFirstLevelWith(
      const Group& group, const Polynomial& poly, size_t threshold,
      std::span<const uint64_t> members);

  // Adds a level: f_next agrees with f_prev on 0 and on every earlier holder,
  // has degree threshold - 1, and its threshold - 1 - N_prev remaining degrees
  // of freedom are random. Existing shares stay valid.
  // Errors: kDegenerateExtension when threshold <= N_prev (or not above the
  // previous threshold), kInvalidIndexSet when `members` overlaps.
  std::vector<Share> ExtendLevel(const Group& group, size_t threshold,
                                 std::span<const uint64_t> members, Rng& rng);
  // As above with caller-chosen free coefficients (threshold - 1 - N_prev).
  std::vector<Share> ExtendLevelWith(const Group& group, size_t threshold,
                                     std::span<const uint64_t> members,
                                     std::span<const Scalar> free_coefficients);

  const Scalar& secret() const { return polynomials_.front().coefficients[0]; }
  const std::vector<Polynomial>& polynomials() const { return polynomials_; }
  const AccessStructure& access() const { return access_; }
  const std::vector<Share>& issued() const { return issued_; }

 private:
  DealerState() = default;

  std::vector<Polynomial> polynomials_;
  AccessStructure access_;
  std::vector<Share> issued_;
};

// Reconstructs the secret iff the holders of `shares` satisfy `access`.
// Errors: kInsufficientShares below the first level's threshold,
// kAccessDenied for other unauthorized sets, kInvalidIndexSet when a share's
// level disagrees with its holder's level in `access`.
Scalar MultilevelReconstruct(const Group& group, std::span<const Share> shares,
                             const AccessStructure& access);

}  // namespace secagg

#endif  // SECAGG_SHARING_H_
