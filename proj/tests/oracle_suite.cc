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


#include "oracle_suite.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "secagg/authcrypto.h"
#include "secagg/dkg.h"
#include "secagg/error.h"
#include "secagg/groupmath.h"
#include "secagg/harness.h"
#include "secagg/masking.h"
#include "secagg/merkle.h"
#include "secagg/protocol.h"
#include "secagg/selection.h"
#include "secagg/session.h"
#include "secagg/sharing.h"
#include "secagg/simnet.h"
#include "secagg/tss.h"

namespace secagg::testing {

uint64_t PowMod(uint64_t base, uint64_t exp, uint64_t mod) {
  uint64_t r = 1 % mod;
  base %= mod;
  while (exp) {
    if (exp & 1) r = r * base % mod;
    base = base * base % mod;
    exp >>= 1;
  }
  return r;
}

uint64_t InvMod(uint64_t a, uint64_t prime) { return PowMod(a, prime - 2, prime); }

const Group& TinyGroup() { return GetGroup(GroupBackend::kTest); }

GroupElement TinyElement(uint64_t v) {
  auto x = TinyGroup().Decode(Bytes{static_cast<uint8_t>(v)});
  if (!x) throw OracleFailure("not a subgroup element: " + std::to_string(v));
  return *x;
}

uint64_t TinyValue(const GroupElement& x) { return TinyGroup().Encode(x).at(0); }
uint64_t TinyValue(const Scalar& s) { return TinyGroup().EncodeScalar(s).at(0); }
Scalar TinyScalar(uint64_t v) { return TinyGroup().FromU64(v); }

namespace {

constexpr uint64_t kP = 23;
constexpr uint64_t kQ = 11;

const Group& Prod() { return GetGroup(GroupBackend::kProduction); }

template <typename F>
bool Throws(ErrorCode code, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

// Reference Lagrange coefficient at zero over Z_11.
uint64_t Beta(uint64_t i, const std::vector<uint64_t>& set) {
  uint64_t num = 1, den = 1;
  for (uint64_t j : set) {
    if (j == i) continue;
    num = num * (j % kQ) % kQ;
    den = den * ((j + kQ - i % kQ) % kQ) % kQ;
  }
  return num * InvMod(den, kQ) % kQ;
}

Polynomial TinyPoly(std::vector<uint64_t> coefficients) {
  Polynomial f;
  for (uint64_t c : coefficients) f.coefficients.push_back(TinyScalar(c));
  return f;
}

uint64_t EvalMod(const std::vector<uint64_t>& coefficients, uint64_t x) {
  uint64_t acc = 0;
  for (size_t i = coefficients.size(); i-- > 0;) acc = (acc * x + coefficients[i]) % kQ;
  return acc;
}

Bytes RandomBytes(Rng& rng, size_t n) {
  Bytes b(n);
  rng.Fill(b);
  return b;
}

void CheckLagrangePair() {
  auto beta = LagrangeAtZero(TinyGroup(), std::vector<uint64_t>{1, 2});
  // 2 / (2 - 1) and 1 / (1 - 2) mod 11.
  ORACLE_CHECK(TinyValue(beta.by_index.at(1)) == 2 * InvMod(1, kQ) % kQ);
  ORACLE_CHECK(TinyValue(beta.by_index.at(2)) == 1 * InvMod(kQ - 1, kQ) % kQ);
  ORACLE_CHECK(TinyValue(beta.by_index.at(1)) == 2);
  ORACLE_CHECK(TinyValue(beta.by_index.at(2)) == 10);
}

void CheckLagrangeBruteForce() {
  auto beta = LagrangeAtZero(TinyGroup(), std::vector<uint64_t>{1, 3});
  ORACLE_CHECK(TinyValue(beta.by_index.at(1)) == 7);
  ORACLE_CHECK(TinyValue(beta.by_index.at(3)) == 5);
  // 7 f(1) + 5 f(3) = f(0) for every degree-1 polynomial.
  for (uint64_t a = 0; a < kQ; ++a) {
    for (uint64_t b = 0; b < kQ; ++b) {
      ORACLE_CHECK((7 * EvalMod({a, b}, 1) + 5 * EvalMod({a, b}, 3)) % kQ == a);
    }
  }
  auto single = LagrangeAtZero(TinyGroup(), std::vector<uint64_t>{5});
  ORACLE_CHECK(TinyValue(single.by_index.at(5)) == 1);
}

void CheckInterpolateInExponent() {
  const Group& g = TinyGroup();
  // f(x) = 7 + 3x: g^f(1) = 2^10, g^f(2) = 2^13 = 2^2.
  ORACLE_CHECK(PowMod(2, 10, kP) == 12);
  ORACLE_CHECK(PowMod(2, 2, kP) == 4);
  std::map<uint64_t, GroupElement> shares{{1, TinyElement(12)}, {2, TinyElement(4)}};
  auto beta = LagrangeAtZero(g, std::vector<uint64_t>{1, 2});
  ORACLE_CHECK(TinyValue(InterpolateInExponent(g, shares, beta)) == PowMod(2, 7, kP));
  ORACLE_CHECK(PowMod(2, 7, kP) == 13);
}

void CheckExponentInterpolationProperty() {
  const Group& g = TinyGroup();
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    size_t k = 1 + rng.Uniform(4);
    std::vector<uint64_t> coefficients(k);
    for (auto& c : coefficients) c = rng.Uniform(kQ);
    std::vector<uint64_t> ids;
    while (ids.size() < k) {
      uint64_t id = 1 + rng.Uniform(kQ - 1);
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
    auto beta = LagrangeAtZero(g, ids);
    uint64_t sum = 0;
    uint64_t product = 1;
    for (uint64_t u : ids) {
      ORACLE_CHECK(TinyValue(beta.by_index.at(u)) == Beta(u, ids));
      sum = (sum + Beta(u, ids) * EvalMod(coefficients, u)) % kQ;
      product = product * PowMod(PowMod(2, EvalMod(coefficients, u), kP), Beta(u, ids), kP) % kP;
    }
    ORACLE_CHECK(sum == coefficients[0]);
    ORACLE_CHECK(product == PowMod(2, coefficients[0], kP));
  }
}

void CheckMapToPointScan() {
  Rng rng(11);
  std::set<Bytes> seen;
  for (int i = 0; i < 10000; ++i) {
    GroupElement x = MapToPoint(Prod(), RandomBytes(rng, 16));
    ORACLE_CHECK(!Prod().IsIdentity(x));
    ORACLE_CHECK(seen.insert(Prod().Encode(x)).second);
  }
  // Test group: membership and determinism only; ten elements cannot avoid
  // collisions.
  for (int i = 0; i < 200; ++i) {
    Bytes in = RandomBytes(rng, 8);
    uint64_t v = TinyValue(MapToPoint(TinyGroup(), in));
    ORACLE_CHECK(v != 1 && PowMod(v, kQ, kP) == 1);
    ORACLE_CHECK(v == TinyValue(MapToPoint(TinyGroup(), in)));
  }
}

void CheckHashToScalarScan() {
  Rng rng(12);
  std::set<Scalar> seen;
  for (int i = 0; i < 10000; ++i) {
    ORACLE_CHECK(seen.insert(HashToScalar(Prod(), RandomBytes(rng, 16))).second);
  }
  ORACLE_CHECK(HashToScalar(Prod(), {}) == HashToScalar(Prod(), {}));
}

void CheckPrgSeedSeparation() {
  for (const Group* g : {&Prod(), &TinyGroup()}) {
    auto a = PrgExpand(*g, g->ExpBase(g->FromU64(1)), 1000);
    auto b = PrgExpand(*g, g->ExpBase(g->FromU64(2)), 1000);
    size_t differ = 0;
    for (size_t i = 0; i < a.size(); ++i) differ += a[i] != b[i];
    ORACLE_CHECK(differ >= 990);
  }
}

void CheckRoundGeneratorScan() {
  Bytes digest(32, 0x5a);
  std::set<GroupElement> seen;
  for (uint64_t t = 0; t < 10000; ++t) {
    ORACLE_CHECK(seen.insert(DeriveRoundGenerator(Prod(), digest, t)).second);
  }
  for (size_t pos = 0; pos < digest.size(); ++pos) {
    Bytes other = digest;
    other[pos] ^= 0x01;
    for (uint64_t t = 0; t < 20; ++t) {
      ORACLE_CHECK(DeriveRoundGenerator(Prod(), digest, t) !=
                   DeriveRoundGenerator(Prod(), other, t));
    }
  }
}

void CheckShamirFixedPolynomial() {
  const Group& g = TinyGroup();
  std::vector<uint64_t> holders{1, 2, 3};
  auto shares = ShareWithPolynomial(g, TinyPoly({7, 3}), holders);
  ORACLE_CHECK(shares.size() == 3);
  for (const Share& s : shares) {
    ORACLE_CHECK(TinyValue(s.value) == EvalMod({7, 3}, s.holder));
  }
  ORACLE_CHECK(TinyValue(shares[0].value) == 10);
  ORACLE_CHECK(TinyValue(shares[1].value) == 2);
  ORACLE_CHECK(TinyValue(shares[2].value) == 5);

  std::vector<Share> one_three{shares[0], shares[2]};
  ORACLE_CHECK((7 * 10 + 5 * 5) % kQ == 7);
  ORACLE_CHECK(TinyValue(ShamirReconstruct(g, one_three, 2)) == 7);
  std::vector<Share> one_two{shares[0], shares[1]};
  ORACLE_CHECK((2 * 10 + 10 * 2) % kQ == 7);
  ORACLE_CHECK(TinyValue(ShamirReconstruct(g, one_two, 2)) == 7);
}

void CheckShamirRoundTrip() {
  const Group& g = TinyGroup();
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    size_t n = 1 + rng.Uniform(8);
    size_t k = 1 + rng.Uniform(std::min<size_t>(n, 5));
    std::vector<uint64_t> holders;
    for (uint64_t h = 1; h <= n; ++h) holders.push_back(h);
    uint64_t secret = rng.Uniform(kQ);
    auto shares = ShamirShare(g, TinyScalar(secret), k, holders, rng);
    // Brute force: the unique degree < k polynomial through the first k
    // points has constant term `secret`.
    size_t matches = 0;
    std::vector<uint64_t> coefficients(k, 0);
    for (uint64_t code = 0; code < PowMod(kQ, k, ~uint64_t{0}); ++code) {
      uint64_t c = code;
      for (size_t i = 0; i < k; ++i) {
        coefficients[i] = c % kQ;
        c /= kQ;
      }
      bool through = true;
      for (size_t i = 0; i < k && through; ++i) {
        through = EvalMod(coefficients, shares[i].holder) == TinyValue(shares[i].value);
      }
      if (through) {
        ++matches;
        ORACLE_CHECK(coefficients[0] == secret);
      }
    }
    ORACLE_CHECK(matches == 1);
    ORACLE_CHECK(TinyValue(ShamirReconstruct(g, shares, k)) == secret);
  }
}

// Two-sample chi-square homogeneity statistic over the 11 residues.
double ChiSquare(const std::array<double, kQ>& a, const std::array<double, kQ>& b) {
  double na = 0, nb = 0;
  for (size_t i = 0; i < kQ; ++i) {
    na += a[i];
    nb += b[i];
  }
  double stat = 0;
  for (size_t i = 0; i < kQ; ++i) {
    double total = a[i] + b[i];
    if (total == 0) continue;
    double ea = total * na / (na + nb);
    double eb = total * nb / (na + nb);
    stat += (a[i] - ea) * (a[i] - ea) / ea + (b[i] - eb) * (b[i] - eb) / eb;
  }
  return stat;
}

void CheckShareMarginals() {
  const Group& g = TinyGroup();
  Rng rng(14);
  std::vector<uint64_t> holders{1, 2, 3};
  std::array<double, kQ> zero{}, one{};
  for (int i = 0; i < 1000; ++i) {
    zero[TinyValue(ShamirShare(g, TinyScalar(0), 2, holders, rng)[0].value)] += 1;
    one[TinyValue(ShamirShare(g, TinyScalar(1), 2, holders, rng)[0].value)] += 1;
  }
  // 10 degrees of freedom, p = 0.001.
  ORACLE_CHECK(ChiSquare(zero, one) < 29.59);
}

void CheckMultilevelExample() {
  const Group& g = TinyGroup();
  std::vector<uint64_t> p1{1, 2}, p2{3, 4, 5};
  for (uint64_t free = 0; free < kQ; ++free) {
    auto [dealer, level1] = DealerState::DealFirstLevelWith(g, TinyPoly({7, 3}), 2, p1);
    ORACLE_CHECK(TinyValue(level1[0].value) == 10 && level1[0].level == 1);
    ORACLE_CHECK(TinyValue(level1[1].value) == 2 && level1[1].level == 1);
    ORACLE_CHECK(TinyValue(MultilevelReconstruct(g, level1, dealer.access())) == 7);
    std::vector<Share> alone{level1[0]};
    ORACLE_CHECK(Throws(ErrorCode::kInsufficientShares,
                        [&] { MultilevelReconstruct(g, alone, dealer.access()); }));

    std::vector<Scalar> coefficient{TinyScalar(free)};
    auto level2 = dealer.ExtendLevelWith(g, 4, p2, coefficient);
    // Brute force over all degree <= 3 polynomials through the five points.
    std::map<uint64_t, uint64_t> points{{1, 10}, {2, 2}};
    for (const Share& s : level2) points[s.holder] = TinyValue(s.value);
    size_t matches = 0;
    for (uint64_t code = 0; code < kQ * kQ * kQ * kQ; ++code) {
      std::vector<uint64_t> c{code % kQ, code / kQ % kQ, code / (kQ * kQ) % kQ,
                              code / (kQ * kQ * kQ)};
      bool through = true;
      for (const auto& [x, y] : points) through = through && EvalMod(c, x) == y;
      if (!through) continue;
      ++matches;
      ORACLE_CHECK(c[0] == 7);
    }
    ORACLE_CHECK(matches == 1);
    ORACLE_CHECK(TinyValue(dealer.polynomials().back().Evaluate(g, uint64_t{0})) == 7);
    // Full quorum across both levels.
    std::vector<Share> quorum{level1[0], level1[1], level2[0], level2[2]};
    ORACLE_CHECK(TinyValue(MultilevelReconstruct(g, quorum, dealer.access())) == 7);
    // Meets kappa_1 by size but holds only level-2 members.
    std::vector<Share> new_only{level2[0], level2[1]};
    ORACLE_CHECK(Throws(ErrorCode::kAccessDenied,
                        [&] { MultilevelReconstruct(g, new_only, dealer.access()); }));
  }
}

void CheckDkgExample() {
  const Group& g = TinyGroup();
  std::vector<uint64_t> participants{1, 2, 3};
  std::map<uint64_t, Polynomial> polys{
      {1, TinyPoly({2, 5})}, {2, TinyPoly({3, 1})}, {3, TinyPoly({4, 9})}};
  auto outcomes = DkgRunWith(g, participants, polys);
  const uint64_t msk = (2 + 3 + 4) % kQ;
  ORACLE_CHECK(PowMod(2, msk, kP) == 6);
  for (const auto& [id, o] : outcomes) ORACLE_CHECK(TinyValue(o.mpk) == 6);
  for (uint64_t a : participants) {
    for (uint64_t b : participants) {
      if (a >= b) continue;
      std::vector<uint64_t> pair{a, b};
      uint64_t sa = TinyValue(outcomes.at(a).my_share.value);
      uint64_t sb = TinyValue(outcomes.at(b).my_share.value);
      ORACLE_CHECK((Beta(a, pair) * sa + Beta(b, pair) * sb) % kQ == msk);
    }
  }
}

void CheckKeygen() {
  const Group& g = TinyGroup();
  ORACLE_CHECK(TinyValue(MakeKeyPair(g, TinyScalar(3), KeyPurpose::kMask).pk) == 8);
  ORACLE_CHECK(TinyValue(MakeKeyPair(g, TinyScalar(5), KeyPurpose::kAuth).pk) == 9);
  ORACLE_CHECK(TinyValue(MakeKeyPair(g, TinyScalar(7), KeyPurpose::kDecrypt).pk) == 13);
  ORACLE_CHECK(PowMod(2, 3, kP) == 8 && PowMod(2, 5, kP) == 9 && PowMod(2, 7, kP) == 13);

  Rng rng(15);
  for (int i = 0; i < 100; ++i) {
    KeyTriple a = KeygenTriple(Prod(), rng);
    KeyTriple b = KeygenTriple(Prod(), rng);
    std::set<Scalar> secrets{a.mask.sk, a.auth.sk, a.decrypt.sk,
                             b.mask.sk, b.auth.sk, b.decrypt.sk};
    ORACLE_CHECK(secrets.size() == 6);
  }
}

void CheckKeyAgreement() {
  const Group& g = TinyGroup();
  // 3 * 5 = 15 = 4 mod 11, so the shared point is 2^4 = 16. Any pair whose
  // exponents multiply to 4 must derive the same output, e.g. (1, 16).
  ORACLE_CHECK(PowMod(2, 15, kP) == 16);
  GroupElement pk_a = TinyElement(PowMod(2, 3, kP));
  GroupElement pk_b = TinyElement(PowMod(2, 5, kP));
  Scalar ab = KaAgreeSeed(g, TinyScalar(3), pk_b);
  ORACLE_CHECK(ab == KaAgreeSeed(g, TinyScalar(5), pk_a));
  ORACLE_CHECK(ab == KaAgreeSeed(g, TinyScalar(1), TinyElement(16)));
  ORACLE_CHECK(KaAgreeTransport(g, TinyScalar(3), pk_b) ==
               KaAgreeTransport(g, TinyScalar(1), TinyElement(16)));
  ORACLE_CHECK(TinyValue(g.Exp(pk_b, TinyScalar(3))) == 16);
}

void CheckMerkleTamper() {
  const Group& g = Prod();
  Rng rng(16);
  std::map<ClientId, PublicKeySet> keys;
  for (ClientId id = 1; id <= 8; ++id) keys[id] = PublicKeysOf(KeygenTriple(g, rng));
  std::vector<Bytes> leaves;
  for (const auto& [id, pks] : keys) leaves.push_back(RosterLeaf(g, id, pks));
  MerkleTree tree(leaves);
  PublicKeySet stranger = PublicKeysOf(KeygenTriple(g, rng));
  for (size_t i = 0; i < 8; ++i) {
    const ClientId id = i + 1;
    auto proof = tree.Prove(i);
    ORACLE_CHECK(MerkleTree::Verify(tree.root(), leaves[i], i, proof));
    for (ClientId other = 1; other <= 8; ++other) {
      if (other == id) continue;
      // The other client's keys placed under this client's id.
      ORACLE_CHECK(
          !MerkleTree::Verify(tree.root(), RosterLeaf(g, id, keys[other]), i, proof));
      PublicKeySet mixed = keys[id];
      mixed.mask = keys[other].mask;
      ORACLE_CHECK(!MerkleTree::Verify(tree.root(), RosterLeaf(g, id, mixed), i, proof));
    }
    ORACLE_CHECK(
        !MerkleTree::Verify(tree.root(), RosterLeaf(g, id, stranger), i, proof));
  }
}

void CheckPreRoundExample() {
  const Group& g = TinyGroup();
  Rng rng(17);
  KeyPair server = MakeKeyPair(g, TinyScalar(6), KeyPurpose::kAuth);
  std::map<ClientId, KeyTriple> keys;
  std::map<ClientId, PublicKeySet> pks;
  for (ClientId id = 1; id <= 3; ++id) {
    keys[id] = KeygenTriple(g, rng);
    pks[id] = PublicKeysOf(keys[id]);
  }
  RootAnnouncement announcement = CommitRoster(g, server.sk, pks);
  AccessStructure access = AccessStructure::SingleLevel({1, 2}, 2);
  auto roster = std::make_shared<const Roster>(VerifyRoster(g, announcement, server.pk));

  std::map<ClientId, DecryptorState> decryptors;
  for (ClientId u : {1, 2}) {
    DecryptorState d;
    d.id = u;
    d.auth = keys[u].auth;
    d.decrypt = keys[u].decrypt;
    d.roster = roster;
    d.decryptors = access;
    decryptors[u] = d;
  }
  std::map<ClientId, ClientState> states;
  for (ClientId id = 1; id <= 3; ++id) {
    PreRoundOutput out =
        PreRoundClient(g, id, keys[id], announcement, server.pk, access, rng);
    ORACLE_CHECK(out.messages.size() == 2);
    std::set<ClientId> receivers;
    for (const auto& m : out.messages) {
      ORACLE_CHECK(m.sender == id);
      receivers.insert(m.receiver);
      DecryptorAcceptSeedShares(g, decryptors.at(m.receiver), m);
    }
    ORACLE_CHECK((receivers == std::set<ClientId>{1, 2}));
    states.emplace(id, std::move(out.state));
  }
  for (ClientId id = 1; id <= 3; ++id) {
    std::vector<Share> self;
    for (const auto& [u, d] : decryptors) {
      const StoredShares& stored = d.shares.at(id);
      ORACLE_CHECK(stored.self.has_value());
      ORACLE_CHECK(stored.pairwise.size() == 2);
      self.push_back(Share{u, *stored.self, 1});
    }
    ORACLE_CHECK(ShamirReconstruct(g, self, 2) == states.at(id).self_seed);
  }
}

void CheckMaskingExample() {
  const uint64_t ring = uint64_t{1} << 32;
  RingVector x1{1, 1}, x3{2, 2}, r1{5, 5}, r3{7, 7};
  RingVector m12{3, 3}, m13{4, 4}, m23{6, 6};
  RingVector y1 = MaskInput(x1, r1, 1, {{2, m12}, {3, m13}});
  RingVector y3 = MaskInput(x3, r3, 3, {{1, m13}, {2, m23}});
  // Reference arithmetic in 64 bits, reduced once.
  const uint64_t want1 = (1 + 5 + 3 + 4) % ring;
  const uint64_t want3 = (2 + 7 + 2 * ring - 4 - 6) % ring;
  ORACLE_CHECK(want1 == 13 && want3 == ring - 1);
  for (size_t i = 0; i < 2; ++i) ORACLE_CHECK(y1[i] == want1 && y3[i] == want3);
  RingVector z = UnmaskSum({y1, y3}, {r1, r3}, {{2, 1, m12}, {2, 3, m23}});
  ORACLE_CHECK((z == RingVector{3, 3}));
}

void CheckSelectionFrequency() {
  Bytes digest(32, 0x17);
  std::vector<int> hits(101, 0);
  for (uint64_t t = 0; t < 1000; ++t) {
    IdSet s = ChooseSetStatic(digest, t, 30, 100);
    ORACLE_CHECK(s.size() == 30);
    for (ClientId i : s) ++hits[i];
  }
  for (ClientId i = 1; i <= 100; ++i) {
    ORACLE_CHECK(hits[i] >= 250 && hits[i] <= 350);
  }
}

void CheckDynamicSelection() {
  Bytes digest(32, 0x23);
  const double bound = 3 * std::sqrt(250.0);
  int within = 0;
  for (uint64_t t = 0; t < 100; ++t) {
    double size = static_cast<double>(ChooseSetDynamic(digest, t, 1, 2, 1000).size());
    within += std::abs(size - 500) <= bound;
  }
  ORACLE_CHECK(within >= 99);
}

void CheckNeighborDegree() {
  double total = 0;
  for (uint8_t model = 0; model < 20; ++model) {
    Bytes digest(32, model);
    size_t edges = 0;
    for (ClientId a = 1; a <= 200; ++a) {
      for (ClientId b = a + 1; b <= 200; ++b) edges += NeighborEdge(digest, 1, a, b, 200, 16);
    }
    total += 2.0 * static_cast<double>(edges) / 200.0;
  }
  const double mean = total / 20;
  ORACLE_CHECK(mean >= 12 && mean <= 20);
}

void CheckDropoutSeeds() {
  IdSet selected;
  for (ClientId i = 1; i <= 100; ++i) selected.push_back(i);
  std::set<IdSet> seen;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    IdSet d = InjectDropouts(0.05, 0.05, seed).For(1, selected);
    ORACLE_CHECK(d.size() == 5);
    ORACLE_CHECK(seen.insert(d).second);
  }
}

void CheckTssExample() {
  const Group& g = TinyGroup();
  ORACLE_CHECK(PowMod(16, 3, kP) == 2);
  ORACLE_CHECK(PowMod(2, 12 % kQ, kP) == 2);
  PartialSignature s = TssSignPoint(g, 1, TinyScalar(3), TinyElement(16));
  ORACLE_CHECK(TinyValue(s.value) == 2);
}

struct ProdDkg {
  std::vector<uint64_t> ids;
  Scalar msk;
  GroupElement mpk;
  std::map<uint64_t, Scalar> shares;
  std::map<uint64_t, GroupElement> public_shares;
};

ProdDkg MakeProdDkg(size_t n, size_t threshold, uint64_t seed) {
  const Group& g = Prod();
  Rng rng(seed);
  ProdDkg d;
  std::map<uint64_t, Polynomial> polys;
  d.msk = Scalar{};
  for (uint64_t u = 1; u <= n; ++u) {
    d.ids.push_back(u);
    Scalar secret = g.RandomScalar(rng);
    d.msk = g.Add(d.msk, secret);
    polys[u] = RandomPolynomial(g, secret, threshold - 1, rng);
  }
  auto outcomes = DkgRunWith(g, d.ids, polys);
  d.mpk = outcomes.begin()->second.mpk;
  for (const auto& [u, o] : outcomes) {
    d.shares[u] = o.my_share.value;
    d.public_shares[u] = o.PublicShare(g, u);
  }
  return d;
}

void CheckTssScans() {
  const Group& g = Prod();
  ProdDkg dkg = MakeProdDkg(4, 3, 18);
  ORACLE_CHECK(g.ExpBase(dkg.msk) == dkg.mpk);
  OracleVerifier verifier(g, dkg.mpk, dkg.msk, dkg.public_shares, dkg.shares);
  Rng rng(19);

  std::set<GroupElement> seen;
  for (int i = 0; i < 1000; ++i) {
    Share share{1, dkg.shares.at(1), 0};
    ORACLE_CHECK(seen.insert(TssSignShare(g, share, RandomBytes(rng, 16)).value).second);
  }

  Bytes m = ToBytes("check");
  for (int i = 0; i < 1000; ++i) {
    PartialSignature forged{1 + rng.Uniform(4), g.ExpBase(g.RandomScalar(rng))};
    ORACLE_CHECK(!verifier.VerifyShare(m, forged));
  }

  // kappa honest partials combine to H(m)^msk.
  std::vector<PartialSignature> partials;
  for (uint64_t u = 1; u <= 3; ++u) {
    partials.push_back(TssSignShare(g, Share{u, dkg.shares.at(u), 0}, m));
  }
  ThresholdSignature sigma = TssCombine(g, m, partials, 3, verifier);
  ORACLE_CHECK(sigma.value == g.Exp(TssMessagePoint(g, m), dkg.msk));
  ORACLE_CHECK(TssVerify(verifier, m, sigma));
}

void CheckGateExample() {
  ORACLE_CHECK(2 * 3 <= (1.0 + 0.2 - 0.2) * 10);
  ExperimentConfig config;
  ApplyConfigValue(config, "threshold", "3");
  ApplyConfigValue(config, "decryptors", "10");
  ApplyConfigValue(config, "eta-c", "0.2");
  ApplyConfigValue(config, "eta-d", "0.2");
  ApplyConfigValue(config, "dropout", "0.2");
  ORACLE_CHECK(Throws(ErrorCode::kInvalidConfig, [&] { config.Validate(); }));
}

// Decrypts every c_key,u of a tiny session with the harness-held msk and
// compares with the library's threshold recovery.
void CheckReleaseKeyCorrectness() {
  const Group& g = TinyGroup();
  SessionOptions options;
  options.group = GroupBackend::kTest;
  options.clients = 3;
  options.decryptors = 3;
  options.threshold = 2;
  options.dropout_rate = 0.0;
  options.vector_length = 4;
  options.seed = 20;
  Session session(options);
  IterationResult result = session.RunIteration(CrossCheckMode::kOneRound, IdSet{});
  ORACLE_CHECK(result.outcome == Outcome::kSumOk);
  ORACLE_CHECK(result.aggregate == result.expected);
  ORACLE_CHECK(result.responses.size() == 3);

  const uint64_t msk = TinyValue(session.msk());
  ORACLE_CHECK(PowMod(2, msk, kP) == TinyValue(session.decryptor(1).mpk));
  RoundConfig config = session.MakeRoundConfig(result.iteration, result.model_digest);
  for (const DecryptorResponse& target : result.responses) {
    const ClientId u = target.sender;
    const CheckRequest& view = result.views.at(u);
    const uint64_t h = TinyValue(SetsHash(g, view.survivors, view.dropouts));
    const uint64_t sk3 = TinyValue(session.decryptor(u).decrypt.sk);
    const uint64_t pk3 = TinyValue(session.decryptor(u).decrypt.pk);
    ORACLE_CHECK(pk3 == PowMod(2, sk3, kP));
    // k_u = c_key / mpk^{sk3 + H}.
    const uint64_t mask = PowMod(2, msk * ((sk3 + h) % kQ) % kQ, kP);
    const uint64_t k_u = TinyValue(target.key_ciphertext) * InvMod(mask, kP) % kP;

    std::vector<const DecryptorResponse*> helpers;
    std::vector<uint64_t> helper_ids;
    for (const DecryptorResponse& r : result.responses) {
      if (r.sender == u) continue;
      helpers.push_back(&r);
      helper_ids.push_back(r.sender);
    }
    // prod c_{i,u}^{beta_i} = (g^H pk_u3)^msk.
    uint64_t product = 1;
    for (const DecryptorResponse* r : helpers) {
      ORACLE_CHECK(r->decryption_shares.size() == 2);
      for (const auto& [i, c] : r->decryption_shares) {
        if (i == u) product = product * PowMod(TinyValue(c), Beta(r->sender, helper_ids), kP) % kP;
      }
    }
    ORACLE_CHECK(product == PowMod(PowMod(2, h, kP) * pk3 % kP, msk, kP));
    ORACLE_CHECK(TinyValue(RecoverReleaseKey(g, target, helpers)) == k_u);
    ORACLE_CHECK(AeDecrypt(DeriveAeKey(g, TinyElement(k_u)), target.seed_ciphertext,
                           ByteWriter().U64(u).U64(result.iteration).Take())
                     .size() ==
                 MakeReleasePlan(config, view.survivors, view.dropouts).size());

    // A chosen k_u survives the round trip.
    for (uint64_t chosen : {2, 13, 16}) {
      DecryptorResponse again = DecryptorRespondWithKey(
          g, session.decryptor(u), view, config, TinyElement(chosen));
      ORACLE_CHECK(TinyValue(RecoverReleaseKey(g, again, helpers)) == chosen);
    }
  }
}

}  // namespace

const std::vector<OracleCheck>& OracleChecks() {
  static const std::vector<OracleCheck> checks = {
      {"LagrangePairFormula", CheckLagrangePair},
      {"LagrangeBruteForce", CheckLagrangeBruteForce},
      {"InterpolateInExponent", CheckInterpolateInExponent},
      {"ExponentInterpolationProperty", CheckExponentInterpolationProperty},
      {"MapToPointCollisionScan", CheckMapToPointScan},
      {"HashToScalarCollisionScan", CheckHashToScalarScan},
      {"PrgSeedSeparation", CheckPrgSeedSeparation},
      {"RoundGeneratorScan", CheckRoundGeneratorScan},
      {"ShamirFixedPolynomial", CheckShamirFixedPolynomial},
      {"ShamirRoundTrip", CheckShamirRoundTrip},
      {"ShareMarginals", CheckShareMarginals},
      {"MultilevelExample", CheckMultilevelExample},
      {"DkgExample", CheckDkgExample},
      {"Keygen", CheckKeygen},
      {"KeyAgreement", CheckKeyAgreement},
      {"MerkleTamper", CheckMerkleTamper},
      {"PreRoundExample", CheckPreRoundExample},
      {"MaskingExample", CheckMaskingExample},
      {"SelectionFrequency", CheckSelectionFrequency},
      {"DynamicSelection", CheckDynamicSelection},
      {"NeighborDegree", CheckNeighborDegree},
      {"DropoutSeeds", CheckDropoutSeeds},
      {"TssExample", CheckTssExample},
      {"TssScans", CheckTssScans},
      {"GateExample", CheckGateExample},
      {"ReleaseKeyCorrectness", CheckReleaseKeyCorrectness},
  };
  return checks;
}

}  // namespace secagg::testing
