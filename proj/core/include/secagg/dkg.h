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

#ifndef SECAGG_DKG_H_
#define SECAGG_DKG_H_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "secagg/group.h"
#include "secagg/rng.h"
#include "secagg/sharing.h"

namespace secagg {

// One participant's contribution: Feldman commitments g^{a_j} to its
// polynomial and the evaluations addressed to each participant.
struct DkgDeal {
  uint64_t dealer = 0;
  std::vector<GroupElement> commitments;
  std::map<uint64_t, Scalar> shares;
};

DkgDeal DkgCreateDeal(const Group& group, uint64_t dealer,
                      std::span<const uint64_t> participants, size_t threshold,
                      Rng& rng);
DkgDeal DkgCreateDealWith(const Group& group, uint64_t dealer,
                          std::span<const uint64_t> participants,
                          const Polynomial& poly);

// prod_j C_j^{x^j} = g^{f(x)}.
GroupElement EvaluateCommitments(const Group& group,
                                 std::span<const GroupElement> commitments,
                                 uint64_t x);

bool DkgVerifyShare(const Group& group, std::span<const GroupElement> commitments,
                    uint64_t recipient, const Scalar& share);

struct DkgOutcome {
  GroupElement mpk;
  Share my_share;
  std::map<uint64_t, std::vector<GroupElement>> commitments;

  // g^{msk_u}, reconstructed in the exponent from the published commitments.
  GroupElement PublicShare(const Group& group, uint64_t participant) const;
};

// What one participant received from one dealer.
struct DkgReceived {
  std::vector<GroupElement> commitments;
  Scalar share;
};

// Verifies every received share against its dealer's commitments and sums
// them. Error(kDkgComplaint) names the first dealer whose share fails.
DkgOutcome DkgFinalize(const Group& group, uint64_t me,
                       const std::map<uint64_t, DkgReceived>& received);

// In-memory run over honest participants; returns every participant's view.
std::map<uint64_t, DkgOutcome> DkgRun(const Group& group,
                                      std::span<const uint64_t> participants,
                                      size_t threshold, Rng& rng);
std::map<uint64_t, DkgOutcome> DkgRunWith(const Group& group,
                                          std::span<const uint64_t> participants,
                                          const std::map<uint64_t, Polynomial>& polys);

}  // namespace secagg

#endif  // SECAGG_DKG_H_
