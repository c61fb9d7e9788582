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

#include "secagg/dkg.h"

#include <string>

#include "secagg/error.h"

namespace secagg {

DkgDeal DkgCreateDeal(const Group& group, uint64_t dealer,
                      std::span<const uint64_t> participants, size_t threshold,
                      Rng& rng) {
  if (threshold == 0 || threshold > participants.size()) {
    Fail(ErrorCode::kThresholdTooLarge, "DKG threshold out of range");
  }
  return DkgCreateDealWith(
      group, dealer, participants,
      RandomPolynomial(group, group.RandomScalar(rng), threshold - 1, rng));
}

DkgDeal DkgCreateDealWith(const Group& group, uint64_t dealer,
                          std::span<const uint64_t> participants,
                          const Polynomial& poly) {
  DkgDeal deal;
  deal.dealer = dealer;
  for (const Scalar& c : poly.coefficients) {
    deal.commitments.push_back(group.ExpBase(c));
  }
  for (const Share& s : ShareWithPolynomial(group, poly, participants)) {
    deal.shares[s.holder] = s.value;
  }
  return deal;
}

GroupElement EvaluateCommitments(const Group& group,
                                 std::span<const GroupElement> commitments,
                                 uint64_t x) {
  // Horner in the exponent: ((C_d)^x C_{d-1})^x ...
  const Scalar xs = group.FromU64(x);
  GroupElement acc = group.Identity();
  for (auto it = commitments.rbegin(); it != commitments.rend(); ++it) {
    acc = group.Mul(group.Exp(acc, xs), *it);
  }
  return acc;
}

bool DkgVerifyShare(const Group& group, std::span<const GroupElement> commitments,
                    uint64_t recipient, const Scalar& share) {
  if (commitments.empty()) return false;
  return group.ExpBase(share) == EvaluateCommitments(group, commitments, recipient);
}

GroupElement DkgOutcome::PublicShare(const Group& group, uint64_t participant) const {
  GroupElement acc = group.Identity();
  for (const auto& [dealer, c] : commitments) {
    acc = group.Mul(acc, EvaluateCommitments(group, c, participant));
  }
  return acc;
}

DkgOutcome DkgFinalize(const Group& group, uint64_t me,
                       const std::map<uint64_t, DkgReceived>& received) {
  DkgOutcome out;
  out.mpk = group.Identity();
  out.my_share = Share{me, Scalar{}, 0};
  for (const auto& [dealer, r] : received) {
    if (!DkgVerifyShare(group, r.commitments, me, r.share)) {
      Fail(ErrorCode::kDkgComplaint,
           "share from dealer " + std::to_string(dealer) + " fails its commitments");
    }
    out.my_share.value = group.Add(out.my_share.value, r.share);
    out.mpk = group.Mul(out.mpk, r.commitments.front());
    out.commitments[dealer] = r.commitments;
  }
  return out;
}

std::map<uint64_t, DkgOutcome> DkgRun(const Group& group,
                                      std::span<const uint64_t> participants,
                                      size_t threshold, Rng& rng) {
  if (threshold == 0 || threshold > participants.size()) {
    Fail(ErrorCode::kThresholdTooLarge, "DKG threshold out of range");
  }
  std::map<uint64_t, Polynomial> polys;
  for (uint64_t p : participants) {
    polys[p] = RandomPolynomial(group, group.RandomScalar(rng), threshold - 1, rng);
  }
  return DkgRunWith(group, participants, polys);
}

std::map<uint64_t, DkgOutcome> DkgRunWith(const Group& group,
                                          std::span<const uint64_t> participants,
                                          const std::map<uint64_t, Polynomial>& polys) {
  std::map<uint64_t, DkgDeal> deals;
  for (const auto& [dealer, poly] : polys) {
    deals[dealer] = DkgCreateDealWith(group, dealer, participants, poly);
  }
  std::map<uint64_t, DkgOutcome> outcomes;
  for (uint64_t me : participants) {
    std::map<uint64_t, DkgReceived> received;
    for (const auto& [dealer, deal] : deals) {
      received[dealer] = DkgReceived{deal.commitments, deal.shares.at(me)};
    }
    outcomes[me] = DkgFinalize(group, me, received);
  }
  return outcomes;
}

}  // namespace secagg
