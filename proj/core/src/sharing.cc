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

#include "secagg/sharing.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "secagg/error.h"
#include "secagg/groupmath.h"

namespace secagg {
namespace {

void CheckHolders(const Group& group, std::span<const uint64_t> holders) {
  std::set<Scalar> seen;
  for (uint64_t h : holders) {
    Scalar x = group.FromU64(h);
    if (group.IsZero(x)) {
      Fail(ErrorCode::kInvalidIndexSet,
           "holder " + std::to_string(h) + " is zero modulo q");
    }
    if (!seen.insert(x).second) {
      Fail(ErrorCode::kInvalidIndexSet,
           "holder " + std::to_string(h) + " repeats modulo q");
    }
  }
}

uint64_t ScalarToU64(const Scalar& s) {
  for (size_t i = 8; i < s.le.size(); ++i) {
    if (s.le[i] != 0) Fail(ErrorCode::kMalformed, "holder id exceeds 64 bits");
  }
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(s.le[i]) << (8 * i);
  return v;
}

// Coefficients of a(x) * b(x).
std::vector<Scalar> PolyMul(const Group& group, const std::vector<Scalar>& a,
                            const std::vector<Scalar>& b) {
  std::vector<Scalar> out(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) {
      out[i + j] = group.Add(out[i + j], group.Mul(a[i], b[j]));
    }
  }
  return out;
}

Scalar Interpolate(const Group& group, std::span<const Share> shares) {
  std::vector<uint64_t> ids;
  std::map<uint64_t, Scalar> values;
  for (const Share& s : shares) {
    ids.push_back(s.holder);
    values[s.holder] = s.value;
  }
  return InterpolateScalars(group, values, LagrangeAtZero(group, ids));
}

}  // namespace

Bytes SerializeShare(const Group& group, const Share& share) {
  ByteWriter w;
  w.U8(share.level);
  w.Raw(group.EncodeScalar(group.FromU64(share.holder)));
  w.Raw(group.EncodeScalar(share.value));
  return w.Take();
}

Share ParseShare(const Group& group, ByteView bytes) {
  ByteReader r(bytes);
  Share share;
  share.level = r.U8();
  auto holder = group.DecodeScalar(r.Raw(group.scalar_size()));
  auto value = group.DecodeScalar(r.Raw(group.scalar_size()));
  r.ExpectDone();
  if (!holder || !value) Fail(ErrorCode::kMalformed, "non-canonical share scalar");
  share.holder = ScalarToU64(*holder);
  share.value = *value;
  return share;
}

Scalar Polynomial::Evaluate(const Group& group, const Scalar& x) const {
  Scalar acc{};
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
    acc = group.Add(group.Mul(acc, x), *it);
  }
  return acc;
}

Scalar Polynomial::Evaluate(const Group& group, uint64_t x) const {
  return Evaluate(group, group.FromU64(x));
}

Polynomial RandomPolynomial(const Group& group, const Scalar& secret,
                            size_t degree, Rng& rng) {
  Polynomial poly;
  poly.coefficients.reserve(degree + 1);
  poly.coefficients.push_back(secret);
  for (size_t i = 0; i < degree; ++i) {
    poly.coefficients.push_back(group.RandomScalar(rng));
  }
  return poly;
}

std::vector<Share> ShareWithPolynomial(const Group& group, const Polynomial& poly,
                                       std::span<const uint64_t> holders,
                                       uint8_t level) {
  CheckHolders(group, holders);
  std::vector<Share> shares;
  shares.reserve(holders.size());
  for (uint64_t h : holders) {
    shares.push_back(Share{h, poly.Evaluate(group, h), level});
  }
  return shares;
}

std::vector<Share> ShamirShare(const Group& group, const Scalar& secret,
                               size_t threshold, std::span<const uint64_t> holders,
                               Rng& rng) {
  if (threshold == 0) Fail(ErrorCode::kInvalidConfig, "threshold must be >= 1");
  if (threshold > holders.size()) {
    Fail(ErrorCode::kThresholdTooLarge,
         std::to_string(threshold) + " > " + std::to_string(holders.size()) +
             " holders");
  }
  CheckHolders(group, holders);
  return ShareWithPolynomial(group, RandomPolynomial(group, secret, threshold - 1, rng),
                             holders);
}

Scalar ShamirReconstruct(const Group& group, std::span<const Share> shares,
                         size_t threshold) {
  if (threshold == 0 || shares.size() < threshold) {
    Fail(ErrorCode::kInsufficientShares,
         std::to_string(shares.size()) + " shares, need " + std::to_string(threshold));
  }
  std::vector<Share> sorted(shares.begin(), shares.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Share& a, const Share& b) { return a.holder < b.holder; });
  sorted.resize(threshold);
  return Interpolate(group, sorted);
}

AccessStructure AccessStructure::SingleLevel(std::vector<uint64_t> members,
                                             size_t threshold) {
  AccessStructure access;
  access.levels.push_back(AccessLevel{std::move(members), threshold});
  return access;
}

void AccessStructure::Validate() const {
  if (levels.empty()) Fail(ErrorCode::kInvalidConfig, "no levels");
  std::set<uint64_t> seen;
  size_t cumulative = 0;
  for (size_t i = 0; i < levels.size(); ++i) {
    const AccessLevel& level = levels[i];
    if (level.members.empty()) Fail(ErrorCode::kInvalidConfig, "empty level");
    if (level.threshold == 0) Fail(ErrorCode::kInvalidConfig, "zero threshold");
    if (i > 0) {
      if (level.threshold <= levels[i - 1].threshold) {
        Fail(ErrorCode::kInvalidConfig, "thresholds must strictly increase");
      }
      if (level.threshold < cumulative + 1) {
        Fail(ErrorCode::kInvalidConfig,
             "level " + std::to_string(i + 1) + " threshold below N_prev + 1");
      }
    }
    for (uint64_t m : level.members) {
      if (!seen.insert(m).second) {
        Fail(ErrorCode::kInvalidConfig, "levels overlap at " + std::to_string(m));
      }
    }
    cumulative += level.members.size();
    if (level.threshold > cumulative) {
      Fail(ErrorCode::kInvalidConfig,
           "level " + std::to_string(i + 1) + " threshold exceeds its holders");
    }
  }
}

std::optional<uint8_t> AccessStructure::LevelOf(uint64_t holder) const {
  for (size_t i = 0; i < levels.size(); ++i) {
    const auto& m = levels[i].members;
    if (std::find(m.begin(), m.end(), holder) != m.end()) {
      return static_cast<uint8_t>(i + 1);
    }
  }
  return std::nullopt;
}

size_t AccessStructure::CumulativeSize(size_t level) const {
  size_t n = 0;
  for (size_t i = 0; i < level && i < levels.size(); ++i) {
    n += levels[i].members.size();
  }
  return n;
}

std::vector<uint64_t> AccessStructure::AllMembers() const {
  std::vector<uint64_t> out;
  for (const auto& level : levels) {
    out.insert(out.end(), level.members.begin(), level.members.end());
  }
  return out;
}

bool AccessStructure::Authorizes(std::span<const uint64_t> holders) const {
  std::vector<size_t> per_level(levels.size(), 0);
  std::set<uint64_t> distinct(holders.begin(), holders.end());
  for (uint64_t h : distinct) {
    if (auto level = LevelOf(h)) ++per_level[*level - 1];
  }
  size_t cumulative = 0;
  for (size_t i = 0; i < levels.size(); ++i) {
    cumulative += per_level[i];
    if (cumulative < levels[i].threshold) return false;
  }
  return true;
}

std::optional<std::vector<uint64_t>> AccessStructure::SelectQuorum(
    std::span<const uint64_t> available) const {
  if (!Authorizes(available)) return std::nullopt;
  std::set<uint64_t> pool(available.begin(), available.end());
  std::vector<uint64_t> quorum;
  const size_t want = final_threshold();
  for (const AccessLevel& level : levels) {
    std::vector<uint64_t> members = level.members;
    std::sort(members.begin(), members.end());
    for (uint64_t m : members) {
      if (quorum.size() == want) break;
      if (pool.count(m)) quorum.push_back(m);
    }
  }
  return quorum;
}

std::pair<DealerState, std::vector<Share>> DealerState::DealFirstLevel(
    const Group& group, const Scalar& secret, size_t threshold,
    std::span<const uint64_t> members, Rng& rng) {
  if (threshold == 0) Fail(ErrorCode::kInvalidConfig, "threshold must be >= 1");
  if (threshold > members.size()) {
    Fail(ErrorCode::kThresholdTooLarge,
         std::to_string(threshold) + " > " + std::to_string(members.size()));
  }
  return DealFirstLevelWith(group, RandomPolynomial(group, secret, threshold - 1, rng),
                            threshold, members);
}

std::pair<DealerState, std::vector<Share>> DealerState::DealFirstLevelWith(
    const Group& group, const Polynomial& poly, size_t threshold,
    std::span<const uint64_t> members) {
  if (threshold == 0) Fail(ErrorCode::kInvalidConfig, "threshold must be >= 1");
  if (threshold > members.size()) {
    Fail(ErrorCode::kThresholdTooLarge,
         std::to_string(threshold) + " > " + std::to_string(members.size()));
  }
  DealerState state;
  state.polynomials_.push_back(poly);
  state.access_.levels.push_back(
      AccessLevel{std::vector<uint64_t>(members.begin(), members.end()), threshold});
  std::vector<Share> shares = ShareWithPolynomial(group, poly, members, 1);
  state.issued_ = shares;
  return {std::move(state), std::move(shares)};
}

std::vector<Share> DealerState::ExtendLevel(const Group& group, size_t threshold,
                                            std::span<const uint64_t> members,
                                            Rng& rng) {
  const size_t prior = access_.CumulativeSize(access_.levels.size());
  if (threshold <= prior || threshold <= access_.final_threshold()) {
    Fail(ErrorCode::kDegenerateExtension,
         "threshold " + std::to_string(threshold) + " must exceed N_prev = " +
             std::to_string(prior));
  }
  std::vector<Scalar> free(threshold - 1 - prior);
  for (Scalar& c : free) c = group.RandomScalar(rng);
  return ExtendLevelWith(group, threshold, members, free);
}

std::vector<Share> DealerState::ExtendLevelWith(
    const Group& group, size_t threshold, std::span<const uint64_t> members,
    std::span<const Scalar> free_coefficients) {
  const size_t prior = access_.CumulativeSize(access_.levels.size());
  if (threshold <= prior || threshold <= access_.final_threshold()) {
    Fail(ErrorCode::kDegenerateExtension,
         "threshold " + std::to_string(threshold) + " must exceed N_prev = " +
             std::to_string(prior));
  }
  if (free_coefficients.size() != threshold - 1 - prior) {
    Fail(ErrorCode::kInvalidConfig, "wrong number of free coefficients");
  }
  if (members.empty()) Fail(ErrorCode::kInvalidIndexSet, "empty level");
  if (threshold > prior + members.size()) {
    Fail(ErrorCode::kThresholdTooLarge, "threshold exceeds cumulative holders");
  }
  std::vector<uint64_t> previous = access_.AllMembers();
  for (uint64_t m : members) {
    if (std::find(previous.begin(), previous.end(), m) != previous.end()) {
      Fail(ErrorCode::kInvalidIndexSet,
           "holder " + std::to_string(m) + " already belongs to a level");
    }
  }
  std::vector<uint64_t> all = previous;
  all.insert(all.end(), members.begin(), members.end());
  CheckHolders(group, all);

  // f_next = f_prev + Z(x) R(x) with Z(x) = x prod_h (x - h) vanishing on 0
  // and on every earlier holder; R carries the free coefficients.
  Polynomial next = polynomials_.back();
  if (!free_coefficients.empty()) {
    std::vector<Scalar> vanishing = {Scalar{}, group.FromU64(1)};
    for (uint64_t h : previous) {
      vanishing = PolyMul(group, vanishing, {group.Neg(group.FromU64(h)), group.FromU64(1)});
    }
    std::vector<Scalar> r(free_coefficients.begin(), free_coefficients.end());
    std::vector<Scalar> correction = PolyMul(group, vanishing, r);
    next.coefficients.resize(std::max(next.coefficients.size(), correction.size()));
    for (size_t i = 0; i < correction.size(); ++i) {
      next.coefficients[i] = group.Add(next.coefficients[i], correction[i]);
    }
  }

  const uint8_t level = static_cast<uint8_t>(access_.levels.size() + 1);
  polynomials_.push_back(next);
  access_.levels.push_back(
      AccessLevel{std::vector<uint64_t>(members.begin(), members.end()), threshold});
  std::vector<Share> shares = ShareWithPolynomial(group, next, members, level);
  issued_.insert(issued_.end(), shares.begin(), shares.end());
  return shares;
}

Scalar MultilevelReconstruct(const Group& group, std::span<const Share> shares,
                             const AccessStructure& access) {
  std::vector<uint64_t> holders;
  for (const Share& s : shares) {
    auto level = access.LevelOf(s.holder);
    if (!level || *level != s.level) {
      Fail(ErrorCode::kInvalidIndexSet,
           "share of holder " + std::to_string(s.holder) + " has the wrong level");
    }
    holders.push_back(s.holder);
  }
  // Below the smallest threshold no set of this size could be authorized.
  if (access.levels.empty() || holders.size() < access.levels.front().threshold) {
    Fail(ErrorCode::kInsufficientShares,
         std::to_string(holders.size()) + " shares below every level threshold");
  }
  if (!access.Authorizes(holders)) {
    Fail(ErrorCode::kAccessDenied, "holder set does not satisfy the access structure");
  }
  // Every share lies on the deepest polynomial, so all of them interpolate.
  return Interpolate(group, shares);
}

}  // namespace secagg
