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

#include "secagg/protocol.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "secagg/error.h"
#include "secagg/groupmath.h"
#include "secagg/merkle.h"

namespace secagg {
namespace {

constexpr double kEpsilon = 1e-9;

void WriteScalar(ByteWriter& w, const Group& group, const Scalar& s) {
  w.Raw(group.EncodeScalar(s));
}

Scalar ReadScalar(ByteReader& r, const Group& group) {
  auto s = group.DecodeScalar(r.Raw(group.scalar_size()));
  if (!s) Fail(ErrorCode::kMalformed, "non-canonical scalar");
  return *s;
}

void WriteElement(ByteWriter& w, const Group& group, const GroupElement& x) {
  w.Raw(group.Encode(x));
}

GroupElement ReadElement(ByteReader& r, const Group& group) {
  auto x = group.Decode(r.Raw(group.element_size()));
  if (!x) Fail(ErrorCode::kMalformed, "invalid group element");
  return *x;
}

void WriteIds(ByteWriter& w, const IdSet& ids) {
  w.U32(static_cast<uint32_t>(ids.size()));
  for (ClientId id : ids) w.U64(id);
}

IdSet ReadIds(ByteReader& r) {
  uint32_t n = r.U32();
  if (n > r.remaining() / 8) Fail(ErrorCode::kMalformed, "id count");
  IdSet ids(n);
  for (auto& id : ids) id = r.U64();
  if (!std::is_sorted(ids.begin(), ids.end()) ||
      std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    Fail(ErrorCode::kMalformed, "id set not canonical");
  }
  return ids;
}

Bytes ReleaseAssociatedData(ClientId sender, uint64_t iteration) {
  return ByteWriter().U64(sender).U64(iteration).Take();
}

Bytes SeedShareAssociatedData(ClientId sender, ClientId receiver) {
  return ByteWriter().U64(sender).U64(receiver).Take();
}

// Plaintext of a seed-share bundle: sender || receiver || level ||
// has_self (1) [|| self share] || count || (peer || share)*.
struct SeedBundle {
  ClientId sender = 0;
  ClientId receiver = 0;
  uint8_t level = 0;
  std::optional<Scalar> self;
  std::vector<std::pair<ClientId, Scalar>> pairwise;
};

Bytes EncodeBundle(const Group& group, const SeedBundle& b) {
  ByteWriter w;
  w.U64(b.sender).U64(b.receiver).U8(b.level).U8(b.self ? 1 : 0);
  if (b.self) WriteScalar(w, group, *b.self);
  w.U32(static_cast<uint32_t>(b.pairwise.size()));
  for (const auto& [peer, share] : b.pairwise) {
    w.U64(peer);
    WriteScalar(w, group, share);
  }
  return w.Take();
}

SeedBundle DecodeBundle(const Group& group, ByteView bytes) {
  ByteReader r(bytes);
  SeedBundle b;
  b.sender = r.U64();
  b.receiver = r.U64();
  b.level = r.U8();
  uint8_t has_self = r.U8();
  if (has_self > 1) Fail(ErrorCode::kMalformed, "self flag");
  if (has_self) b.self = ReadScalar(r, group);
  uint32_t n = r.U32();
  if (n > r.remaining() / (8 + group.scalar_size())) {
    Fail(ErrorCode::kMalformed, "pairwise count");
  }
  b.pairwise.reserve(n);
  for (uint32_t i = 0; i < n; ++i) {
    ClientId peer = r.U64();
    b.pairwise.emplace_back(peer, ReadScalar(r, group));
  }
  r.ExpectDone();
  return b;
}

// Deals `secret` over every level of `access`.
std::pair<DealerState, std::vector<Share>> DealAllLevels(const Group& group,
                                                         const Scalar& secret,
                                                         const AccessStructure& access,
                                                         Rng& rng) {
  const AccessLevel& first = access.levels.front();
  auto [dealer, shares] =
      DealerState::DealFirstLevel(group, secret, first.threshold, first.members, rng);
  for (size_t i = 1; i < access.levels.size(); ++i) {
    auto more = dealer.ExtendLevel(group, access.levels[i].threshold,
                                   access.levels[i].members, rng);
    shares.insert(shares.end(), more.begin(), more.end());
  }
  return {std::move(dealer), std::move(shares)};
}

SeedShareEnvelope SealBundle(const Group& group, ClientState& state,
                             const SeedBundle& bundle, NoncePurpose purpose) {
  const PublicKeySet& peer = state.roster->at(bundle.receiver);
  AeKey key = KaAgreeTransport(group, state.keys.auth.sk, peer.auth);
  uint64_t counter = state.NextNonce(bundle.receiver, purpose);
  SeedShareEnvelope e;
  e.sender = state.id;
  e.receiver = bundle.receiver;
  e.ciphertext =
      AeEncrypt(key, MakeNonce(purpose, static_cast<uint32_t>(state.id), counter),
                EncodeBundle(group, bundle),
                SeedShareAssociatedData(state.id, bundle.receiver));
  return e;
}

// Collects per-receiver bundles out of the dealt share lists.
std::map<ClientId, SeedBundle> GroupShares(
    ClientId sender, const std::vector<Share>& self_shares,
    const std::vector<std::pair<ClientId, std::vector<Share>>>& pairwise_shares) {
  std::map<ClientId, SeedBundle> out;
  for (const Share& s : self_shares) {
    SeedBundle& b = out[s.holder];
    b.sender = sender;
    b.receiver = s.holder;
    b.level = s.level;
    b.self = s.value;
  }
  for (const auto& [peer, shares] : pairwise_shares) {
    for (const Share& s : shares) {
      SeedBundle& b = out[s.holder];
      b.sender = sender;
      b.receiver = s.holder;
      b.level = s.level;
      b.pairwise.emplace_back(peer, s.value);
    }
  }
  return out;
}

}  // namespace

bool ThresholdConditionHolds(uint64_t threshold, uint64_t num_decryptors,
                             double corruption_rate, double dropout_rate) {
  double bound = (1.0 + corruption_rate - dropout_rate) * static_cast<double>(num_decryptors);
  return 2.0 * static_cast<double>(threshold) > bound + kEpsilon;
}

size_t RoundConfig::MinSurvivors(size_t selected) const {
  if (abort_rule == AbortRule::kThresholdCount) return threshold;
  double need = (1.0 - eta()) * static_cast<double>(selected);
  return static_cast<size_t>(std::max(0.0, std::ceil(need - kEpsilon)));
}

void RoundConfig::Validate() const {
  auto bad = [](const std::string& what) { Fail(ErrorCode::kInvalidConfig, what); };
  if (total_clients == 0) bad("N must be positive");
  if (vector_length == 0) bad("vector length must be >= 1");
  if (num_decryptors == 0 || num_decryptors > total_clients) {
    bad("n_I must be in [1, N]");
  }
  if (threshold == 0 || threshold > num_decryptors) bad("kappa must be in [1, n_I]");
  if (!(corruption_rate >= 0.0) || !(dropout_rate >= 0.0) || eta() >= 1.0) {
    bad("rates must be non-negative with eta_C + eta_D < 1");
  }
  if (expected_degree == 0) bad("expected degree must be >= 1");
  if (selection == SelectionMode::kStatic) {
    if (participants == 0 || participants > total_clients) bad("n_t must be in [1, N]");
  } else if (select_denominator == 0 || select_numerator > select_denominator) {
    bad("selection probability must satisfy 0 <= n <= m, m >= 1");
  }
  if (!ThresholdConditionHolds(threshold, num_decryptors, corruption_rate, dropout_rate)) {
    bad("threshold condition 2*kappa > (1 + eta_C - eta_D) * n_I violated");
  }
}

IdSet SelectParticipants(const RoundConfig& config) {
  if (config.selection == SelectionMode::kStatic) {
    return ChooseSetStatic(config.model_digest, config.iteration, config.participants,
                           config.total_clients);
  }
  return ChooseSetDynamic(config.model_digest, config.iteration, config.select_numerator,
                          config.select_denominator, config.total_clients);
}

Bytes RosterLeaf(const Group& group, ClientId id, const PublicKeySet& pks) {
  ByteWriter w;
  w.U64(id);
  WriteElement(w, group, pks.mask);
  WriteElement(w, group, pks.auth);
  WriteElement(w, group, pks.decrypt);
  return w.Take();
}

PublicKeySet PublicKeysOf(const KeyTriple& keys) {
  return {keys.mask.pk, keys.auth.pk, keys.decrypt.pk};
}

IdSet Roster::ids() const {
  IdSet out;
  out.reserve(keys.size());
  for (const auto& [id, pks] : keys) out.push_back(id);
  return out;
}

const PublicKeySet& Roster::at(ClientId id) const {
  auto it = keys.find(id);
  if (it == keys.end()) Fail(ErrorCode::kNotParticipant, "no roster entry for " + std::to_string(id));
  return it->second;
}

Bytes RootSigningMessage(const Digest32& root) {
  Bytes m = ToBytes("secagg/root");
  Append(m, root);
  return m;
}

RootAnnouncement CommitRoster(const Group& group, const Scalar& server_sk,
                              const std::map<ClientId, PublicKeySet>& keys) {
  std::vector<Bytes> leaves;
  leaves.reserve(keys.size());
  for (const auto& [id, pks] : keys) leaves.push_back(RosterLeaf(group, id, pks));
  MerkleTree tree(leaves);
  RootAnnouncement a;
  a.root = tree.root();
  a.server_signature = DsSign(group, server_sk, RootSigningMessage(a.root));
  size_t index = 0;
  for (const auto& [id, pks] : keys) {
    a.entries.push_back({id, pks, tree.Prove(index++)});
  }
  return a;
}

Roster VerifyRoster(const Group& group, const RootAnnouncement& announcement,
                    const GroupElement& server_pk) {
  if (!DsVerify(group, server_pk, announcement.server_signature,
                RootSigningMessage(announcement.root))) {
    Fail(ErrorCode::kMerkleVerifyFailure, "root signature does not verify");
  }
  Roster roster;
  roster.root = announcement.root;
  for (size_t i = 0; i < announcement.entries.size(); ++i) {
    const auto& e = announcement.entries[i];
    if (!MerkleTree::Verify(announcement.root, RosterLeaf(group, e.id, e.pks), i, e.proof)) {
      Fail(ErrorCode::kMerkleVerifyFailure,
           "membership proof of client " + std::to_string(e.id) + " fails");
    }
    if (!roster.keys.emplace(e.id, e.pks).second) {
      Fail(ErrorCode::kMerkleVerifyFailure, "duplicate roster id");
    }
  }
  return roster;
}

Bytes SerializeRootAnnouncement(const Group& group, const RootAnnouncement& a) {
  ByteWriter w;
  w.Raw(a.root).Blob(a.server_signature).U32(static_cast<uint32_t>(a.entries.size()));
  for (const auto& e : a.entries) {
    w.U64(e.id);
    WriteElement(w, group, e.pks.mask);
    WriteElement(w, group, e.pks.auth);
    WriteElement(w, group, e.pks.decrypt);
    w.U32(static_cast<uint32_t>(e.proof.size()));
    for (const Digest32& d : e.proof) w.Raw(d);
  }
  return w.Take();
}

RootAnnouncement ParseRootAnnouncement(const Group& group, ByteView bytes) {
  ByteReader r(bytes);
  RootAnnouncement a;
  auto root = r.Raw(32);
  std::copy(root.begin(), root.end(), a.root.begin());
  auto sig = r.Blob();
  a.server_signature.assign(sig.begin(), sig.end());
  uint32_t n = r.U32();
  for (uint32_t i = 0; i < n; ++i) {
    RootAnnouncement::Entry e;
    e.id = r.U64();
    e.pks.mask = ReadElement(r, group);
    e.pks.auth = ReadElement(r, group);
    e.pks.decrypt = ReadElement(r, group);
    uint32_t depth = r.U32();
    if (depth > 64) Fail(ErrorCode::kMalformed, "proof depth");
    e.proof.resize(depth);
    for (auto& d : e.proof) {
      auto raw = r.Raw(32);
      std::copy(raw.begin(), raw.end(), d.begin());
    }
    a.entries.push_back(std::move(e));
  }
  r.ExpectDone();
  return a;
}

IdSet ChooseDecryptors(const Digest32& root, uint64_t num_decryptors,
                       uint64_t total_clients) {
  return ChooseSetStatic(root, 0, num_decryptors, total_clients);
}

uint64_t ClientState::NextNonce(ClientId receiver, NoncePurpose purpose) {
  return nonce_counters[{receiver, static_cast<uint8_t>(purpose)}]++;
}

Bytes SerializeSeedShare(const SeedShareEnvelope& e) {
  return ByteWriter().U64(e.sender).U64(e.receiver).Blob(e.ciphertext).Take();
}

SeedShareEnvelope ParseSeedShare(ByteView bytes) {
  ByteReader r(bytes);
  SeedShareEnvelope e;
  e.sender = r.U64();
  e.receiver = r.U64();
  auto c = r.Blob();
  e.ciphertext.assign(c.begin(), c.end());
  r.ExpectDone();
  return e;
}

PreRoundOutput PreRoundClient(const Group& group, ClientId id, const KeyTriple& keys,
                              const RootAnnouncement& announcement,
                              const GroupElement& server_pk,
                              const AccessStructure& decryptors, Rng& rng) {
  auto roster = std::make_shared<const Roster>(VerifyRoster(group, announcement, server_pk));
  return PreRoundClientWithRoster(group, id, keys, std::move(roster), decryptors, rng);
}

PreRoundOutput PreRoundClientWithRoster(const Group& group, ClientId id,
                                        const KeyTriple& keys,
                                        std::shared_ptr<const Roster> roster,
                                        const AccessStructure& decryptors, Rng& rng) {
  if (!roster->keys.count(id)) Fail(ErrorCode::kNotParticipant, "client not in roster");
  decryptors.Validate();

  PreRoundOutput out;
  ClientState& state = out.state;
  state.id = id;
  state.keys = keys;
  state.roster = roster;
  state.decryptors = decryptors;
  state.self_seed = group.RandomScalar(rng);
  for (const auto& [peer, pks] : roster->keys) {
    if (peer == id) continue;
    state.pairwise_seeds.emplace(peer, KaAgreeSeed(group, keys.mask.sk, pks.mask));
  }

  auto [self_dealer, self_shares] = DealAllLevels(group, state.self_seed, decryptors, rng);
  state.self_dealer.emplace(std::move(self_dealer));
  std::vector<std::pair<ClientId, std::vector<Share>>> pairwise_shares;
  pairwise_shares.reserve(state.pairwise_seeds.size());
  for (const auto& [peer, seed] : state.pairwise_seeds) {
    auto [dealer, shares] = DealAllLevels(group, seed, decryptors, rng);
    state.pairwise_dealers.emplace(peer, std::move(dealer));
    pairwise_shares.emplace_back(peer, std::move(shares));
  }
  for (const auto& [receiver, bundle] : GroupShares(id, self_shares, pairwise_shares)) {
    out.messages.push_back(SealBundle(group, state, bundle, NoncePurpose::kSeedShare));
  }
  return out;
}

void AddLatePeers(const Group& group, ClientState& state,
                  std::shared_ptr<const Roster> roster) {
  for (const auto& [peer, pks] : roster->keys) {
    if (peer == state.id || state.pairwise_seeds.count(peer)) continue;
    state.pairwise_seeds.emplace(peer, KaAgreeSeed(group, state.keys.mask.sk, pks.mask));
  }
  state.roster = std::move(roster);
}

std::vector<SeedShareEnvelope> ExtendToNewLevel(const Group& group, ClientState& state,
                                                size_t threshold,
                                                const IdSet& new_members, Rng& rng) {
  if (!state.self_dealer) Fail(ErrorCode::kMissingSeed, "no dealt seeds to extend");
  std::vector<Share> self_shares =
      state.self_dealer->ExtendLevel(group, threshold, new_members, rng);
  std::vector<std::pair<ClientId, std::vector<Share>>> pairwise_shares;
  for (auto& [peer, dealer] : state.pairwise_dealers) {
    pairwise_shares.emplace_back(peer, dealer.ExtendLevel(group, threshold, new_members, rng));
  }
  state.decryptors.levels.push_back({new_members, threshold});
  std::vector<SeedShareEnvelope> out;
  for (const auto& [receiver, bundle] : GroupShares(state.id, self_shares, pairwise_shares)) {
    out.push_back(SealBundle(group, state, bundle, NoncePurpose::kExtension));
  }
  return out;
}

const Scalar* DecryptorState::FindPairwise(ClientId owner, ClientId peer) const {
  auto lookup = [this](ClientId a, ClientId b) -> const Scalar* {
    auto it = shares.find(a);
    if (it == shares.end()) return nullptr;
    const auto& list = it->second.pairwise;
    auto pos = std::lower_bound(list.begin(), list.end(), b,
                                [](const auto& e, ClientId v) { return e.first < v; });
    if (pos == list.end() || pos->first != b) return nullptr;
    return &pos->second;
  };
  if (const Scalar* s = lookup(owner, peer)) return s;
  return lookup(peer, owner);
}

void DecryptorAcceptSeedShares(const Group& group, DecryptorState& state,
                               const SeedShareEnvelope& envelope) {
  if (envelope.receiver != state.id) {
    Fail(ErrorCode::kMalformed, "seed share addressed to another decryptor");
  }
  const PublicKeySet& sender = state.roster->at(envelope.sender);
  AeKey key = KaAgreeTransport(group, state.auth.sk, sender.auth);
  Bytes plain = AeDecrypt(key, envelope.ciphertext,
                          SeedShareAssociatedData(envelope.sender, envelope.receiver));
  SeedBundle bundle = DecodeBundle(group, plain);
  if (bundle.sender != envelope.sender || bundle.receiver != state.id) {
    Fail(ErrorCode::kMalformed, "seed share header mismatch");
  }
  StoredShares& stored = state.shares[bundle.sender];
  if (bundle.self) stored.self = bundle.self;
  auto& list = stored.pairwise;
  for (const auto& [peer, share] : bundle.pairwise) {
    auto pos = std::lower_bound(list.begin(), list.end(), peer,
                                [](const auto& e, ClientId v) { return e.first < v; });
    if (pos != list.end() && pos->first == peer) {
      pos->second = share;
    } else {
      list.insert(pos, {peer, share});
    }
  }
}

Bytes OnlineMessage(ClientId id, uint64_t iteration) {
  return ByteWriter().Raw(ToBytes("online")).U64(id).U64(iteration).Take();
}

Bytes SerializeReport(const Report& r) {
  ByteWriter w;
  w.U64(r.sender).U64(r.iteration).U32(static_cast<uint32_t>(r.masked.size()));
  for (uint32_t v : r.masked) w.U32(v);
  w.Blob(r.message).Blob(r.signature);
  return w.Take();
}

Report ParseReport(ByteView bytes) {
  ByteReader r(bytes);
  Report out;
  out.sender = r.U64();
  out.iteration = r.U64();
  uint32_t n = r.U32();
  if (n > r.remaining() / 4) Fail(ErrorCode::kMalformed, "vector length");
  out.masked.resize(n);
  for (auto& v : out.masked) v = r.U32();
  auto m = r.Blob();
  out.message.assign(m.begin(), m.end());
  auto s = r.Blob();
  out.signature.assign(s.begin(), s.end());
  r.ExpectDone();
  return out;
}

Report ClientReport(const Group& group, const ClientState& state,
                    const RoundConfig& config, std::span<const uint32_t> input,
                    const SelfMaskTap& tap) {
  if (input.size() != config.vector_length) {
    Fail(ErrorCode::kInvalidConfig, "input length differs from l");
  }
  IdSet selected = SelectParticipants(config);
  IdSet neighbors = FindNeighbors(config.model_digest, config.iteration, selected,
                                  state.id, config.expected_degree);
  GroupElement g_t = DeriveRoundGenerator(group, config.model_digest, config.iteration);

  RingVector self_mask;
  if (config.hooks.self_masks) {
    self_mask = PrgExpand(group, group.Exp(g_t, state.self_seed), config.vector_length);
    if (tap) tap(state.id, config.iteration, self_mask);
  }
  std::vector<PairwiseMask> pairwise;
  if (config.hooks.pairwise_masks) {
    pairwise.reserve(neighbors.size());
    for (ClientId j : neighbors) {
      auto it = state.pairwise_seeds.find(j);
      if (it == state.pairwise_seeds.end()) {
        Fail(ErrorCode::kMissingSeed, "no pairwise seed with " + std::to_string(j));
      }
      pairwise.push_back(
          {j, PrgExpand(group, group.Exp(g_t, it->second), config.vector_length)});
    }
  }
  Report r;
  r.sender = state.id;
  r.iteration = config.iteration;
  r.masked = MaskInput(input, self_mask, state.id, pairwise);
  r.message = OnlineMessage(state.id, config.iteration);
  r.signature = DsSign(group, state.keys.auth.sk, r.message);
  return r;
}

RoundState ServerCollect(const Group& group, const std::vector<Report>& reports,
                         const RoundConfig& config, const Roster& roster) {
  RoundState state;
  state.iteration = config.iteration;
  state.selected = SelectParticipants(config);
  for (const Report& r : reports) {
    if (!Contains(state.selected, r.sender) || state.reports.count(r.sender)) continue;
    if (r.iteration != config.iteration || r.masked.size() != config.vector_length) continue;
    if (r.message != OnlineMessage(r.sender, config.iteration)) continue;
    auto it = roster.keys.find(r.sender);
    if (it == roster.keys.end()) continue;
    if (!DsVerify(group, it->second.auth, r.signature, r.message)) continue;
    state.reports.emplace(r.sender, r);
  }
  for (ClientId id : state.selected) {
    (state.reports.count(id) ? state.survivors : state.dropouts).push_back(id);
  }
  size_t need = config.MinSurvivors(state.selected.size());
  if (state.survivors.empty() || state.survivors.size() < need) {
    Fail(ErrorCode::kRoundAbort, std::to_string(state.survivors.size()) +
                                     " reports, need " + std::to_string(need));
  }
  return state;
}

CheckRequest MakeCheckRequest(const RoundState& state, const RoundConfig& config) {
  CheckRequest req;
  req.iteration = state.iteration;
  req.model_digest = config.model_digest;
  req.survivors = state.survivors;
  req.dropouts = state.dropouts;
  for (ClientId id : state.survivors) {
    const Report& r = state.reports.at(id);
    req.signatures.push_back({id, r.message, r.signature});
  }
  return req;
}

Bytes EncodeSets(const IdSet& survivors, const IdSet& dropouts) {
  ByteWriter w;
  WriteIds(w, survivors);
  WriteIds(w, dropouts);
  return w.Take();
}

Scalar SetsHash(const Group& group, const IdSet& survivors, const IdSet& dropouts) {
  return HashToScalar(group, EncodeSets(survivors, dropouts));
}

Bytes SerializeCheckRequest(const CheckRequest& req) {
  ByteWriter w;
  w.U64(req.iteration).Blob(req.model_digest);
  WriteIds(w, req.survivors);
  WriteIds(w, req.dropouts);
  w.U32(static_cast<uint32_t>(req.signatures.size()));
  for (const auto& s : req.signatures) w.U64(s.id).Blob(s.message).Blob(s.signature);
  return w.Take();
}

CheckRequest ParseCheckRequest(ByteView bytes) {
  ByteReader r(bytes);
  CheckRequest req;
  req.iteration = r.U64();
  auto d = r.Blob();
  req.model_digest.assign(d.begin(), d.end());
  req.survivors = ReadIds(r);
  req.dropouts = ReadIds(r);
  uint32_t n = r.U32();
  for (uint32_t i = 0; i < n; ++i) {
    SignedOnline s;
    s.id = r.U64();
    auto m = r.Blob();
    s.message.assign(m.begin(), m.end());
    auto sig = r.Blob();
    s.signature.assign(sig.begin(), sig.end());
    req.signatures.push_back(std::move(s));
  }
  r.ExpectDone();
  return req;
}

ReleasePlan MakeReleasePlan(const RoundConfig& config, const IdSet& survivors,
                            const IdSet& dropouts) {
  ReleasePlan plan;
  if (config.hooks.self_masks) plan.self_owners = survivors;
  if (!config.hooks.pairwise_masks || dropouts.empty()) return plan;
  IdSet selected = survivors;
  selected.insert(selected.end(), dropouts.begin(), dropouts.end());
  std::sort(selected.begin(), selected.end());
  for (ClientId j : dropouts) {
    for (ClientId k : FindNeighbors(config.model_digest, config.iteration, selected, j,
                                    config.expected_degree)) {
      if (Contains(survivors, k)) plan.dropout_edges.emplace_back(j, k);
    }
  }
  return plan;
}

Bytes SerializeDecryptorResponse(const Group& group, const DecryptorResponse& r) {
  ByteWriter w;
  w.U64(r.sender).Blob(r.seed_ciphertext);
  WriteElement(w, group, r.key_ciphertext);
  w.U32(static_cast<uint32_t>(r.decryption_shares.size()));
  for (const auto& [i, c] : r.decryption_shares) {
    w.U64(i);
    WriteElement(w, group, c);
  }
  return w.Take();
}

DecryptorResponse ParseDecryptorResponse(const Group& group, ByteView bytes) {
  ByteReader r(bytes);
  DecryptorResponse out;
  out.sender = r.U64();
  auto c = r.Blob();
  out.seed_ciphertext.assign(c.begin(), c.end());
  out.key_ciphertext = ReadElement(r, group);
  uint32_t n = r.U32();
  for (uint32_t i = 0; i < n; ++i) {
    ClientId id = r.U64();
    out.decryption_shares.emplace_back(id, ReadElement(r, group));
  }
  r.ExpectDone();
  return out;
}

void DecryptorCheck(const Group& group, const DecryptorState& state,
                    const CheckRequest& req, const RoundConfig& config,
                    bool verify_signatures) {
  auto abort = [](const std::string& why) { Fail(ErrorCode::kConsistencyAbort, why); };
  if (req.iteration != config.iteration) abort("iteration mismatch");
  IdSet both;
  std::set_intersection(req.survivors.begin(), req.survivors.end(), req.dropouts.begin(),
                        req.dropouts.end(), std::back_inserter(both));
  if (!both.empty()) abort("U_S and U_D intersect");
  IdSet all = req.survivors;
  all.insert(all.end(), req.dropouts.begin(), req.dropouts.end());
  std::sort(all.begin(), all.end());
  IdSet selected = SelectParticipants(config);
  if (all != selected) abort("U_S and U_D do not partition S_t");
  size_t need = config.MinSurvivors(selected.size());
  if (req.survivors.empty() || req.survivors.size() < need) abort("survivor quorum not met");
  if (!verify_signatures) return;
  std::map<ClientId, const SignedOnline*> sigs;
  for (const auto& s : req.signatures) sigs.emplace(s.id, &s);
  for (ClientId i : req.survivors) {
    auto it = sigs.find(i);
    if (it == sigs.end()) abort("missing signature of " + std::to_string(i));
    const SignedOnline& s = *it->second;
    if (s.message != OnlineMessage(i, config.iteration) ||
        !DsVerify(group, state.roster->at(i).auth, s.signature, s.message)) {
      abort("invalid signature of " + std::to_string(i));
    }
  }
}

DecryptorResponse DecryptorRespond(const Group& group, const DecryptorState& state,
                                   const CheckRequest& req, const RoundConfig& config,
                                   Rng& rng, bool verify_signatures) {
  GroupElement k_u = group.ExpBase(group.RandomScalar(rng));
  return DecryptorRespondWithKey(group, state, req, config, k_u, verify_signatures);
}

DecryptorResponse DecryptorRespondWithKey(const Group& group,
                                          const DecryptorState& state,
                                          const CheckRequest& req,
                                          const RoundConfig& config,
                                          const GroupElement& release_key,
                                          bool verify_signatures) {
  DecryptorCheck(group, state, req, config, verify_signatures);
  const Scalar h = SetsHash(group, req.survivors, req.dropouts);
  const GroupElement g_t = DeriveRoundGenerator(group, config.model_digest, config.iteration);
  const ReleasePlan plan = MakeReleasePlan(config, req.survivors, req.dropouts);

  Bytes plain;
  plain.reserve(plan.size() * group.element_size());
  for (ClientId i : plan.self_owners) {
    auto it = state.shares.find(i);
    if (it == state.shares.end() || !it->second.self) {
      Fail(ErrorCode::kMissingShare, "no self-seed share of " + std::to_string(i));
    }
    Append(plain, group.Encode(group.Exp(g_t, *it->second.self)));
  }
  for (const auto& [j, k] : plan.dropout_edges) {
    const Scalar* share = state.FindPairwise(j, k);
    if (!share) {
      Fail(ErrorCode::kMissingShare,
           "no pairwise share of " + std::to_string(j) + "," + std::to_string(k));
    }
    Append(plain, group.Encode(group.Exp(g_t, *share)));
  }

  DecryptorResponse r;
  r.sender = state.id;
  r.seed_ciphertext = AeEncrypt(
      DeriveAeKey(group, release_key),
      MakeNonce(NoncePurpose::kSeedRelease, static_cast<uint32_t>(state.id),
                config.iteration),
      plain, ReleaseAssociatedData(state.id, config.iteration));
  r.key_ciphertext =
      group.Mul(release_key, group.Exp(state.mpk, group.Add(state.decrypt.sk, h)));
  if (state.msk_share) {
    const GroupElement g_h = group.ExpBase(h);
    for (ClientId i : state.decryptors.AllMembers()) {
      if (i == state.id) continue;
      GroupElement base = group.Mul(g_h, state.roster->at(i).decrypt);
      r.decryption_shares.emplace_back(i, group.Exp(base, state.msk_share->value));
    }
    std::sort(r.decryption_shares.begin(), r.decryption_shares.end());
  }
  return r;
}

GroupElement RecoverReleaseKey(const Group& group, const DecryptorResponse& target,
                               std::span<const DecryptorResponse* const> helpers) {
  std::vector<uint64_t> ids;
  std::map<uint64_t, GroupElement> shares;
  for (const DecryptorResponse* h : helpers) {
    ids.push_back(h->sender);
    auto it = std::find_if(h->decryption_shares.begin(), h->decryption_shares.end(),
                           [&](const auto& e) { return e.first == target.sender; });
    if (it == h->decryption_shares.end()) {
      Fail(ErrorCode::kMissingShare, "decryptor " + std::to_string(h->sender) +
                                         " sent no share for " +
                                         std::to_string(target.sender));
    }
    shares.emplace(h->sender, it->second);
  }
  LagrangeCoefficients beta = LagrangeAtZero(group, ids);
  return group.Div(target.key_ciphertext, InterpolateInExponent(group, shares, beta));
}

std::optional<std::vector<GroupElement>> OpenSeedRelease(
    const Group& group, const DecryptorResponse& target,
    std::span<const DecryptorResponse* const> helpers, uint64_t iteration,
    size_t expected_elements) {
  GroupElement k_u = RecoverReleaseKey(group, target, helpers);
  Bytes plain;
  try {
    plain = AeDecrypt(DeriveAeKey(group, k_u), target.seed_ciphertext,
                      ReleaseAssociatedData(target.sender, iteration));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kAeAuthFailure) return std::nullopt;
    throw;
  }
  const size_t width = group.element_size();
  if (plain.size() != expected_elements * width) return std::nullopt;
  std::vector<GroupElement> out;
  out.reserve(expected_elements);
  for (size_t i = 0; i < expected_elements; ++i) {
    auto x = group.Decode(ByteView(plain).subspan(i * width, width));
    if (!x) return std::nullopt;
    out.push_back(*x);
  }
  return out;
}

UnmaskResult ServerUnmask(const Group& group, const RoundState& state,
                          const std::vector<DecryptorResponse>& responses,
                          const RoundConfig& config, const UnmaskContext& context) {
  std::map<ClientId, const DecryptorResponse*> by_sender;
  for (const auto& r : responses) {
    if (context.decryptors.LevelOf(r.sender)) by_sender.emplace(r.sender, &r);
  }
  IdSet responders;
  for (const auto& [id, r] : by_sender) responders.push_back(id);
  if (!context.decryptors.Authorizes(responders)) {
    Fail(ErrorCode::kRoundAbort, "responders do not form an authorized set");
  }

  const ReleasePlan plan = MakeReleasePlan(config, state.survivors, state.dropouts);
  std::map<ClientId, std::vector<GroupElement>> released;
  UnmaskResult result;
  for (const auto& [u, target] : by_sender) {
    std::vector<const DecryptorResponse*> helpers;
    for (const auto& [id, r] : by_sender) {
      if (helpers.size() == context.msk_threshold) break;
      if (id != u && Contains(context.msk_holders, id)) helpers.push_back(r);
    }
    if (helpers.size() < context.msk_threshold) continue;
    std::optional<std::vector<GroupElement>> opened;
    try {
      opened = OpenSeedRelease(group, *target, helpers, config.iteration, plan.size());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kMissingShare) throw;
    }
    if (!opened) continue;
    released.emplace(u, std::move(*opened));
    result.opened.push_back(u);
  }

  auto quorum = context.decryptors.SelectQuorum(result.opened);
  if (!quorum) {
    Fail(ErrorCode::kRoundAbort, std::to_string(result.opened.size()) +
                                     " seed releases opened, not an authorized set");
  }
  std::sort(quorum->begin(), quorum->end());
  result.quorum = *quorum;
  LagrangeCoefficients beta = LagrangeAtZero(group, result.quorum);
  auto reconstruct = [&](size_t index) {
    std::map<uint64_t, GroupElement> shares;
    for (ClientId u : result.quorum) shares.emplace(u, released.at(u)[index]);
    return InterpolateInExponent(group, shares, beta);
  };

  const size_t l = config.vector_length;
  std::vector<RingVector> masked;
  masked.reserve(state.survivors.size());
  for (ClientId i : state.survivors) masked.push_back(state.reports.at(i).masked);
  std::vector<RingVector> self_masks;
  size_t index = 0;
  for (size_t n = 0; n < plan.self_owners.size(); ++n) {
    self_masks.push_back(PrgExpand(group, reconstruct(index++), l));
  }
  std::vector<DropoutEdgeMask> edges;
  for (const auto& [j, k] : plan.dropout_edges) {
    edges.push_back({j, k, PrgExpand(group, reconstruct(index++), l)});
  }
  result.masks_recovered = plan.size();
  result.aggregate = UnmaskSum(masked, self_masks, edges);
  return result;
}

}  // namespace secagg
