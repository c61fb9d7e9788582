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

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "oracle_suite.h"
#include "secagg/dkg.h"
#include "secagg/error.h"
#include "secagg/session.h"
#include "secagg/simnet.h"
#include "test_util.h"

namespace secagg {
namespace {

using ::secagg::testing::CodeOf;
using ::secagg::testing::ConfigFor;
using ::secagg::testing::Deployment;
using ::secagg::testing::MakeDeployment;

IdSet Ids(uint64_t from, uint64_t to) {
  IdSet out;
  for (uint64_t i = from; i <= to; ++i) out.push_back(i);
  return out;
}

// Six decryptors with threshold four.
class TssTest : public ::testing::TestWithParam<GroupBackend> {
 protected:
  void SetUp() override {
    const Group& g = GetGroup(GetParam());
    Rng rng(1);
    auto outcomes = DkgRun(g, Ids(1, 6), 4, rng);
    std::map<uint64_t, GroupElement> public_shares;
    std::vector<Share> first;
    for (const auto& [u, o] : outcomes) {
      shares_[u] = o.my_share.value;
      public_shares[u] = o.PublicShare(g, u);
      first.push_back(o.my_share);
    }
    msk_ = ShamirReconstruct(g, first, 4);
    mpk_ = outcomes.begin()->second.mpk;
    verifier_ = std::make_unique<OracleVerifier>(g, mpk_, msk_, public_shares, shares_);
  }

  const Group& group() const { return GetGroup(GetParam()); }

  std::vector<PartialSignature> Partials(ByteView m) const {
    std::vector<PartialSignature> out;
    for (const auto& [u, s] : shares_) out.push_back(TssSignShare(group(), Share{u, s, 0}, m));
    return out;
  }

  std::map<uint64_t, Scalar> shares_;
  Scalar msk_;
  GroupElement mpk_;
  std::unique_ptr<OracleVerifier> verifier_;
};

TEST_P(TssTest, SigningIsDeterministic) {
  Bytes m = ToBytes("sets");
  Share s{2, shares_.at(2), 0};
  EXPECT_EQ(TssSignShare(group(), s, m).value, TssSignShare(group(), s, m).value);
  EXPECT_EQ(TssSignShare(group(), s, m).value,
            group().Exp(TssMessagePoint(group(), m), shares_.at(2)));
}

TEST_P(TssTest, ShareVerification) {
  Bytes m = ToBytes("m"), other = ToBytes("m'");
  for (const PartialSignature& p : Partials(m)) EXPECT_TRUE(verifier_->VerifyShare(m, p));
  if (GetParam() == GroupBackend::kProduction) {
    for (const PartialSignature& p : Partials(other)) {
      EXPECT_FALSE(verifier_->VerifyShare(m, p));
    }
  }
  PartialSignature stranger{9, group().Generator()};
  EXPECT_EQ(CodeOf([&] { verifier_->VerifyShare(m, stranger); }),
            ErrorCode::kVerifyUnavailable);
}

// Every kappa-subset combines to the same verifying signature; every
// (kappa - 1)-subset is rejected.
TEST_P(TssTest, RobustnessExhaustive) {
  Bytes m = ToBytes("robust");
  auto all = Partials(m);
  const GroupElement want = group().Exp(TssMessagePoint(group(), m), msk_);
  int combined = 0, rejected = 0;
  for (uint32_t mask = 0; mask < 64; ++mask) {
    std::vector<PartialSignature> subset;
    for (size_t i = 0; i < 6; ++i) {
      if (mask >> i & 1) subset.push_back(all[i]);
    }
    if (subset.size() == 4) {
      ThresholdSignature sigma = TssCombine(group(), m, subset, 4, *verifier_);
      EXPECT_EQ(sigma.value, want);
      EXPECT_TRUE(TssVerify(*verifier_, m, sigma));
      ++combined;
    } else if (subset.size() == 3) {
      EXPECT_EQ(CodeOf([&] { TssCombine(group(), m, subset, 4, *verifier_); }),
                ErrorCode::kInsufficientShares);
      ++rejected;
    }
  }
  EXPECT_EQ(combined, 15);
  EXPECT_EQ(rejected, 20);
}

TEST_P(TssTest, ForgedPartialRejected) {
  Bytes m = ToBytes("forge");
  auto partials = Partials(m);
  partials.resize(4);
  partials[2].value = group().Mul(partials[2].value, group().Generator());
  EXPECT_EQ(CodeOf([&] { TssCombine(group(), m, partials, 4, *verifier_); }),
            ErrorCode::kCombineReject);
  // Duplicated signers do not count twice.
  auto dup = Partials(m);
  dup.resize(3);
  dup.push_back(dup[0]);
  EXPECT_EQ(CodeOf([&] { TssCombine(group(), m, dup, 4, *verifier_); }),
            ErrorCode::kInsufficientShares);
}

TEST_P(TssTest, VerifierRejectsMismatchedExponents) {
  std::map<uint64_t, GroupElement> wrong;
  for (const auto& [u, s] : shares_) wrong[u] = group().ExpBase(group().Add(s, group().FromU64(1)));
  EXPECT_EQ(CodeOf([&] { OracleVerifier(group(), mpk_, msk_, wrong, shares_); }),
            ErrorCode::kVerifyUnavailable);
}

INSTANTIATE_TEST_SUITE_P(Backends, TssTest,
                         ::testing::Values(GroupBackend::kProduction, GroupBackend::kTest),
                         [](const auto& info) {
                           return std::string(GroupBackendName(info.param));
                         });

TEST(TssMessagesTest, SetMessagesAreDistinct) {
  TssSetMessages a = MakeTssSetMessages(1, {1, 2}, {3});
  EXPECT_NE(a.survivors, a.dropouts);
  EXPECT_NE(a.survivors, MakeTssSetMessages(2, {1, 2}, {3}).survivors);
  EXPECT_NE(a.survivors, MakeTssSetMessages(1, {1}, {2, 3}).survivors);
}

TEST(TssCrossCheckTest, HonestFlowAndMixedViews) {
  const Group& g = GetGroup(GroupBackend::kProduction);
  Deployment d = MakeDeployment(g, 6, Ids(1, 5), 3, 2);
  RoundConfig config = ConfigFor(d, 1, 2);
  std::vector<Report> reports;
  for (ClientId i = 1; i <= 5; ++i) {
    reports.push_back(ClientReport(g, d.clients.at(i), config, RingVector(2, 0)));
  }
  RoundState state = ServerCollect(g, reports, config, *d.roster);
  CheckRequest req = MakeCheckRequest(state, config);

  std::vector<TssPartialPair> partials;
  for (const auto& [u, s] : d.decryptors) {
    TssPartialPair p = DecryptorTssPartial(g, s, req, config);
    TssPartialPair back = ParseTssPartial(g, SerializeTssPartial(g, p));
    EXPECT_EQ(back.on_survivors, p.on_survivors);
    partials.push_back(p);
  }
  TssCertificate cert =
      ServerCrossCheck(g, state.survivors, state.dropouts, 1, partials, 3, *d.verifier);
  TssCertificate cert_back = ParseTssCertificate(g, SerializeTssCertificate(g, cert));
  EXPECT_EQ(cert_back.on_dropouts.value, cert.on_dropouts.value);
  for (const auto& [u, s] : d.decryptors) {
    EXPECT_NO_THROW(DecryptorCheckCertificate(*d.verifier, req, cert));
  }

  // One decryptor signs a different U_S: the mixed set fails to combine.
  CheckRequest shifted = req;
  std::tie(shifted.survivors, shifted.dropouts) = ShiftedSets(req.survivors, req.dropouts);
  config.dropout_rate = 0.4;
  std::vector<TssPartialPair> mixed(partials.begin(), partials.begin() + 2);
  mixed.push_back(DecryptorTssPartial(g, d.decryptors.at(5), shifted, config));
  EXPECT_EQ(CodeOf([&] {
              ServerCrossCheck(g, state.survivors, state.dropouts, 1, mixed, 3, *d.verifier);
            }),
            ErrorCode::kCombineReject);
  // A certificate for the honest view does not satisfy the shifted view.
  EXPECT_EQ(CodeOf([&] { DecryptorCheckCertificate(*d.verifier, shifted, cert); }),
            ErrorCode::kConsistencyAbort);

  std::vector<TssPartialPair> few(partials.begin(), partials.begin() + 2);
  EXPECT_EQ(CodeOf([&] {
              ServerCrossCheck(g, state.survivors, state.dropouts, 1, few, 3, *d.verifier);
            }),
            ErrorCode::kInsufficientShares);
}

TEST(TssSessionTest, CrossCheckTakesThreeRounds) {
  SessionOptions o;
  o.clients = 8;
  o.decryptors = 5;
  o.threshold = 3;
  o.dropout_rate = 0.25;
  o.seed = 3;
  Session session(o);
  IterationResult r = session.RunIteration(CrossCheckMode::kTss, IdSet{2});
  EXPECT_EQ(r.outcome, Outcome::kSumOk);
  EXPECT_EQ(r.collection_rounds, 3u);
  EXPECT_EQ(r.aggregate, r.expected);
  IterationResult sets = session.RunIteration(CrossCheckMode::kTss, IdSet{},
                                              AdversaryScript::InconsistentSets({4, 5}));
  EXPECT_EQ(sets.outcome, Outcome::kAbort);
  EXPECT_EQ(sets.masks_recovered, 0u);
}

}  // namespace
}  // namespace secagg
