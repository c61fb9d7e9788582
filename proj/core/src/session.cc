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

#include "secagg/session.h"

#include <algorithm>
#include <chrono>
#include <set>

#include "secagg/authcrypto.h"
#include "secagg/dkg.h"
#include "secagg/groupmath.h"
#include "secagg/hash.h"

namespace secagg {
namespace {

Address ClientAddress(ClientId id) { return {EntityKind::kClient, id}; }
Address DecryptorAddress(ClientId id) { return {EntityKind::kDecryptor, id}; }

Bytes DkgAssociatedData(uint64_t dealer, uint64_t receiver) {
  return ByteWriter().Raw(ToBytes("dkg")).U64(dealer).U64(receiver).Take();
}

}  // namespace

std::string_view CrossCheckModeName(CrossCheckMode mode) {
  return mode == CrossCheckMode::kOneRound ? "oneround" : "tss";
}

struct Session::Pending {
  // Setup and joins.
  std::map<ClientId, PublicKeySet> commits;
  IdSet joining;

  // Collection.
  CrossCheckMode mode = CrossCheckMode::kOneRound;
  IdSet silent_clients;
  AdversaryScript script;
  bool reports_open = false;
  std::vector<Report> reports;
  std::vector<DecryptorResponse> responses;
  std::vector<TssPartialPair> partials;
  std::map<ClientId, CheckRequest> decryptor_views;
  IdSet decryptor_aborts;
};

Session::Session(SessionOptions options)
    : options_(std::move(options)),
      group_(GetGroup(options_.group)),
      root_rng_(options_.seed),
      network_(DelayModel{options_.delay.base_us, options_.delay.jitter_us,
                          options_.delay.seed ^ options_.seed},
               &metrics_) {
  if (options_.participants == 0) options_.participants = options_.clients;
  if (options_.delay.jitter_us >= 2 * options_.delay.base_us) {
    Fail(ErrorCode::kInvalidConfig, "jitter must stay below twice the base delay");
  }
  RoundConfig probe = MakeRoundConfig(1, ModelDigest(1));
  probe.total_clients = options_.clients;
  probe.Validate();
  network_.set_measure_cpu(options_.measure_cpu);
  network_.set_handler([this](const Delivery& d) { Dispatch(d); });
  SetupPhase();
}

Session::~Session() = default;

Bytes Session::ModelDigest(uint64_t iteration) const {
  Digest32 d = Sha256({ToBytes("secagg/model"),
                       ByteWriter().U64(options_.seed).U64(iteration).bytes()});
  return Bytes(d.begin(), d.end());
}

RoundConfig Session::MakeRoundConfig(uint64_t iteration, const Bytes& digest) const {
  RoundConfig c;
  c.iteration = iteration;
  c.model_digest = digest;
  c.total_clients = roster_ ? roster_->keys.size() : options_.clients;
  c.selection = options_.selection;
  c.participants = options_.participants;
  c.select_numerator = options_.select_numerator;
  c.select_denominator = options_.select_denominator;
  c.num_decryptors =
      access_.levels.empty() ? options_.decryptors : access_.AllMembers().size();
  c.threshold = access_.levels.empty() ? options_.threshold : access_.final_threshold();
  c.corruption_rate = options_.corruption_rate;
  c.dropout_rate = options_.dropout_rate;
  c.expected_degree = options_.expected_degree;
  c.vector_length = options_.vector_length;
  c.abort_rule = options_.abort_rule;
  c.hooks = options_.hooks;
  return c;
}

RingVector Session::InputOf(ClientId id, uint64_t iteration) const {
  Rng rng = root_rng_.Fork("input", iteration).Fork("client", id);
  RingVector x(options_.vector_length);
  for (auto& v : x) {
    v = options_.full_range_inputs ? static_cast<uint32_t>(rng.NextU64())
                                   : static_cast<uint32_t>(rng.Uniform(1u << 16));
  }
  return x;
}

void Session::Send(Address from, Address to, MsgType type, Bytes body) {
  network_.Send(from, to, Message{type, std::move(body)});
}

void Session::ServerTimed(MsgType type, const std::function<void()>& step) {
  if (!options_.measure_cpu) {
    step();
    return;
  }
  auto start = std::chrono::steady_clock::now();
  step();
  auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                std::chrono::steady_clock::now() - start)
                .count();
  metrics_.AddCpu(network_.KeyFor(kServerAddress, type), static_cast<uint64_t>(us));
}

void Session::SetupPhase() {
  Rng server_rng = root_rng_.Fork("server");
  Scalar server_sk = group_.RandomScalar(server_rng);
  while (group_.IsZero(server_sk)) server_sk = group_.RandomScalar(server_rng);
  server_keys_ = MakeKeyPair(group_, server_sk, KeyPurpose::kAuth);
  pending_ = std::make_unique<Pending>();
  network_.BeginPhase(0, Phase::kPreRound);

  for (ClientId id = 1; id <= options_.clients; ++id) {
    Rng rng = root_rng_.Fork("keys", id);
    keys_.emplace(id, KeygenTriple(group_, rng));
    PublicKeySet pks = PublicKeysOf(keys_.at(id));
    ByteWriter w;
    w.U64(id).Raw(group_.Encode(pks.mask)).Raw(group_.Encode(pks.auth)).Raw(
        group_.Encode(pks.decrypt));
    Send(ClientAddress(id), kServerAddress, MsgType::kPkCommit, w.Take());
  }
  network_.RunUntil(network_.now() + options_.delay.max_delay_us() + 1);

  ServerTimed(MsgType::kRootSig, [&] {
    announcement_ = CommitRoster(group_, server_keys_.sk, pending_->commits);
    roster_ = std::make_shared<const Roster>(
        VerifyRoster(group_, announcement_, server_keys_.pk));
    decryptor_ids_ = ChooseDecryptors(announcement_.root, options_.decryptors,
                                      options_.clients);
    access_ = AccessStructure::SingleLevel(decryptor_ids_, options_.threshold);
    Bytes body = SerializeRootAnnouncement(group_, announcement_);
    for (ClientId id : roster_->ids()) {
      Send(kServerAddress, ClientAddress(id), MsgType::kRootSig, body);
    }
  });
  network_.RunUntilIdle();

  // Every deal has arrived; each decryptor finalizes its DKG share.
  std::map<uint64_t, Scalar> msk_shares;
  std::map<uint64_t, GroupElement> public_shares;
  std::optional<DkgOutcome> any;
  for (ClientId id : decryptor_ids_) {
    DkgOutcome outcome = DkgFinalize(group_, id, dkg_inbox_[id]);
    DecryptorState& d = decryptors_.at(id);
    d.msk_share = outcome.my_share;
    d.msk_share->level = 1;
    d.mpk = outcome.mpk;
    msk_shares.emplace(id, outcome.my_share.value);
    if (!any) any = outcome;
  }
  dkg_inbox_.clear();
  for (ClientId id : decryptor_ids_) public_shares.emplace(id, any->PublicShare(group_, id));

  std::vector<uint64_t> first(decryptor_ids_.begin(),
                              decryptor_ids_.begin() + options_.threshold);
  msk_ = InterpolateScalars(group_, msk_shares, LagrangeAtZero(group_, first));
  verifier_ = std::make_unique<OracleVerifier>(group_, any->mpk, msk_, public_shares,
                                               msk_shares);
  unmask_context_ = {access_, decryptor_ids_, options_.threshold};
  network_.EndPhase();
  pending_.reset();
}

std::shared_ptr<const Roster> Session::VerifiedRoster(const Bytes& body) {
  Digest32 key = Sha256(body);
  auto it = verified_rosters_.find(key);
  if (it != verified_rosters_.end()) return it->second;
  auto roster = std::make_shared<const Roster>(
      VerifyRoster(group_, ParseRootAnnouncement(group_, body), server_keys_.pk));
  verified_rosters_.emplace(key, roster);
  return roster;
}

void Session::Dispatch(const Delivery& d) {
  switch (d.to.kind) {
    case EntityKind::kServer: OnServer(d); break;
    case EntityKind::kClient: OnClient(d); break;
    case EntityKind::kDecryptor: OnDecryptor(d); break;
  }
}

void Session::OnServer(const Delivery& d) {
  if (!pending_) return;
  const Bytes& body = d.message.body;
  switch (d.message.type) {
    case MsgType::kPkCommit: {
      ByteReader r(body);
      ClientId id = r.U64();
      PublicKeySet pks;
      for (GroupElement* x : {&pks.mask, &pks.auth, &pks.decrypt}) {
        auto e = group_.Decode(r.Raw(group_.element_size()));
        if (!e) return;
        *x = *e;
      }
      if (id != d.from.id) return;
      pending_->commits[id] = pks;
      return;
    }
    case MsgType::kSeedShare: {
      SeedShareEnvelope e = ParseSeedShare(body);
      if (e.sender != d.from.id) return;
      Send(kServerAddress, DecryptorAddress(e.receiver), MsgType::kSeedShare, body);
      return;
    }
    case MsgType::kDkgDeal: {
      ByteReader r(body);
      uint64_t dealer = r.U64();
      uint64_t receiver = r.U64();
      if (dealer != d.from.id) return;
      Send(kServerAddress, DecryptorAddress(receiver), MsgType::kDkgDeal, body);
      return;
    }
    case MsgType::kReport:
      if (pending_->reports_open) pending_->reports.push_back(ParseReport(body));
      return;
    case MsgType::kTssPart:
      pending_->partials.push_back(ParseTssPartial(group_, body));
      return;
    case MsgType::kDecResp:
      pending_->responses.push_back(ParseDecryptorResponse(group_, body));
      return;
    default:
      return;
  }
}

void Session::OnClient(const Delivery& d) {
  const ClientId id = d.to.id;
  const Bytes& body = d.message.body;
  if (d.message.type == MsgType::kRootSig) {
    std::shared_ptr<const Roster> roster = VerifiedRoster(body);
    auto it = clients_.find(id);
    if (it != clients_.end()) {
      AddLatePeers(group_, it->second, roster);
      if (auto dec = decryptors_.find(id); dec != decryptors_.end()) {
        dec->second.roster = roster;
      }
      return;
    }
    // First announcement this client sees: run the pre-round.
    AccessStructure access = access_;
    if (pending_->joining.empty()) {
      access = AccessStructure::SingleLevel(
          ChooseDecryptors(roster->root, options_.decryptors, options_.clients),
          options_.threshold);
    }
    Rng rng = root_rng_.Fork("preround", id);
    PreRoundOutput out =
        PreRoundClientWithRoster(group_, id, keys_.at(id), roster, access, rng);
    for (const SeedShareEnvelope& e : out.messages) {
      Send(ClientAddress(id), kServerAddress, MsgType::kSeedShare, SerializeSeedShare(e));
    }
    ClientState& state = clients_.emplace(id, std::move(out.state)).first->second;

    if (!pending_->joining.empty() || !access.LevelOf(id)) return;
    DecryptorState dec;
    dec.id = id;
    dec.level = 1;
    dec.auth = state.keys.auth;
    dec.decrypt = state.keys.decrypt;
    dec.roster = state.roster;
    dec.decryptors = access;
    decryptors_.emplace(id, std::move(dec));

    IdSet committee = access.AllMembers();
    Rng dkg_rng = root_rng_.Fork("dkg", id);
    DkgDeal deal = DkgCreateDeal(group_, id, committee, access.levels[0].threshold, dkg_rng);
    for (ClientId r : committee) {
      if (r == id) {
        dkg_inbox_[id][id] = {deal.commitments, deal.shares.at(id)};
        continue;
      }
      AeKey key = KaAgreeTransport(group_, state.keys.auth.sk, state.roster->at(r).auth);
      uint64_t counter = state.NextNonce(r, NoncePurpose::kDkgShare);
      Bytes ct = AeEncrypt(key,
                           MakeNonce(NoncePurpose::kDkgShare, static_cast<uint32_t>(id),
                                     counter),
                           group_.EncodeScalar(deal.shares.at(r)), DkgAssociatedData(id, r));
      ByteWriter w;
      w.U64(id).U64(r).U32(static_cast<uint32_t>(deal.commitments.size()));
      for (const GroupElement& c : deal.commitments) w.Raw(group_.Encode(c));
      w.Blob(ct);
      Send(DecryptorAddress(id), kServerAddress, MsgType::kDkgDeal, w.Take());
    }
    return;
  }

  if (d.message.type == MsgType::kModel) {
    if (!pending_ || Contains(pending_->silent_clients, id)) return;
    auto it = clients_.find(id);
    if (it == clients_.end()) return;
    ByteReader r(body);
    uint64_t t = r.U64();
    auto digest = r.Blob();
    RoundConfig config = MakeRoundConfig(t, Bytes(digest.begin(), digest.end()));
    try {
      Report report = ClientReport(group_, it->second, config, InputOf(id, t),
                                   options_.self_mask_tap);
      Send(ClientAddress(id), kServerAddress, MsgType::kReport, SerializeReport(report));
    } catch (const Error& e) {
      // A client outside its own S_t stays silent.
      if (e.code() != ErrorCode::kNotParticipant) throw;
    }
  }
}

void Session::OnDecryptor(const Delivery& d) {
  const ClientId id = d.to.id;
  auto it = decryptors_.find(id);
  if (it == decryptors_.end()) return;
  DecryptorState& state = it->second;
  const Bytes& body = d.message.body;
  switch (d.message.type) {
    case MsgType::kSeedShare: {
      try {
        DecryptorAcceptSeedShares(group_, state, ParseSeedShare(body));
      } catch (const Error&) {
        // Unauthenticated or malformed bundles are dropped.
      }
      return;
    }
    case MsgType::kDkgDeal: {
      ByteReader r(body);
      uint64_t dealer = r.U64();
      uint64_t receiver = r.U64();
      uint32_t n = r.U32();
      if (receiver != id || n > r.remaining() / group_.element_size()) return;
      DkgReceived received;
      for (uint32_t i = 0; i < n; ++i) {
        auto c = group_.Decode(r.Raw(group_.element_size()));
        if (!c) return;
        received.commitments.push_back(*c);
      }
      auto ct = r.Blob();
      AeKey key = KaAgreeTransport(group_, state.auth.sk, state.roster->at(dealer).auth);
      Bytes plain = AeDecrypt(key, ct, DkgAssociatedData(dealer, receiver));
      auto share = group_.DecodeScalar(plain);
      if (!share) Fail(ErrorCode::kMalformed, "dkg share");
      received.share = *share;
      dkg_inbox_[id][dealer] = std::move(received);
      return;
    }
    case MsgType::kCheckReq:
    case MsgType::kTssReq: {
      if (!pending_ || (pending_->script.mode == AdversaryScript::Mode::kDropResponses &&
                        Contains(pending_->script.partition, id))) {
        return;
      }
      CheckRequest req = ParseCheckRequest(body);
      RoundConfig config = MakeRoundConfig(req.iteration, req.model_digest);
      try {
        if (d.message.type == MsgType::kTssReq) {
          TssPartialPair p = DecryptorTssPartial(group_, state, req, config);
          pending_->decryptor_views[id] = req;
          Send(DecryptorAddress(id), kServerAddress, MsgType::kTssPart,
               SerializeTssPartial(group_, p));
          return;
        }
        Rng rng = root_rng_.Fork("release", req.iteration).Fork("decryptor", id);
        DecryptorResponse resp = DecryptorRespond(group_, state, req, config, rng);
        Send(DecryptorAddress(id), kServerAddress, MsgType::kDecResp,
             SerializeDecryptorResponse(group_, resp));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kConsistencyAbort && e.code() != ErrorCode::kMissingShare) {
          throw;
        }
        pending_->decryptor_aborts.push_back(id);
        // Decryptors without an msk share still release seeds in TSS mode.
        if (e.code() == ErrorCode::kMissingShare && d.message.type == MsgType::kTssReq) {
          pending_->decryptor_views[id] = req;
          pending_->decryptor_aborts.pop_back();
        }
      }
      return;
    }
    case MsgType::kTssFull: {
      if (!pending_) return;
      auto view = pending_->decryptor_views.find(id);
      if (view == pending_->decryptor_views.end()) return;
      const CheckRequest& req = view->second;
      RoundConfig config = MakeRoundConfig(req.iteration, req.model_digest);
      try {
        DecryptorCheckCertificate(*verifier_, req, ParseTssCertificate(group_, body));
        Rng rng = root_rng_.Fork("release", req.iteration).Fork("decryptor", id);
        DecryptorResponse resp =
            DecryptorRespond(group_, state, req, config, rng, /*verify_signatures=*/false);
        Send(DecryptorAddress(id), kServerAddress, MsgType::kDecResp,
             SerializeDecryptorResponse(group_, resp));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kConsistencyAbort) throw;
        pending_->decryptor_aborts.push_back(id);
      }
      return;
    }
    default:
      return;
  }
}

CheckRequest Session::ViewFor(ClientId decryptor, const CheckRequest& honest) const {
  if (pending_->script.mode != AdversaryScript::Mode::kInconsistentSets ||
      !Contains(pending_->script.partition, decryptor)) {
    return honest;
  }
  CheckRequest view = honest;
  std::tie(view.survivors, view.dropouts) = ShiftedSets(honest.survivors, honest.dropouts);
  std::erase_if(view.signatures,
                [&](const SignedOnline& s) { return !Contains(view.survivors, s.id); });
  return view;
}

IterationResult Session::RunIteration(CrossCheckMode mode, const DropoutPlan& plan,
                                      const AdversaryScript& script) {
  RoundConfig config = MakeRoundConfig(iteration_ + 1, ModelDigest(iteration_ + 1));
  return RunIteration(mode, plan.For(iteration_ + 1, SelectParticipants(config)), script);
}

IterationResult Session::RunIteration(CrossCheckMode mode, const IdSet& dropouts,
                                      const AdversaryScript& script) {
  const uint64_t t = ++iteration_;
  IterationResult result;
  result.iteration = t;
  result.model_digest = ModelDigest(t);
  const RoundConfig config = MakeRoundConfig(t, result.model_digest);
  const uint64_t window = 2 * options_.delay.max_delay_us() + 1;

  pending_ = std::make_unique<Pending>();
  pending_->mode = mode;
  pending_->silent_clients = dropouts;
  pending_->script = script;
  round_state_.reset();
  network_.BeginPhase(t, Phase::kCollection);

  auto finish = [&](Outcome outcome) {
    network_.RunUntilIdle();
    result.outcome = outcome;
    result.collection_rounds = network_.EndPhase();
    result.decryptor_aborts = MakeIdSet(pending_->decryptor_aborts);
    metrics_.SetOutcome(t, outcome);
    pending_.reset();
    return result;
  };
  auto abort = [&](const Error& e) {
    result.error = e.code();
    result.error_message = e.what();
    return finish(Outcome::kAbort);
  };

  // Model broadcast.
  result.selected = SelectParticipants(config);
  Bytes alternate = script.alternate_digest;
  if (alternate.empty()) {
    Digest32 alt = Sha256({ToBytes("secagg/alternate-model"), result.model_digest});
    alternate.assign(alt.begin(), alt.end());
  }
  ServerTimed(MsgType::kModel, [&] {
    IdSet targets = config.selection == SelectionMode::kStatic ? result.selected
                                                               : roster_->ids();
    for (ClientId id : targets) {
      bool lie = script.mode == AdversaryScript::Mode::kInconsistentModel &&
                 Contains(script.partition, id);
      Bytes body = ByteWriter().U64(t).Blob(lie ? alternate : result.model_digest).Take();
      Send(kServerAddress, ClientAddress(id), MsgType::kModel, std::move(body));
    }
  });
  pending_->reports_open = true;
  network_.RunUntil(network_.now() + window);
  pending_->reports_open = false;

  // Collection and cross-check request.
  try {
    ServerTimed(MsgType::kReport, [&] {
      round_state_ = ServerCollect(group_, pending_->reports, config, *roster_);
    });
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kRoundAbort) throw;
    return abort(e);
  }
  result.survivors = round_state_->survivors;
  result.dropouts = round_state_->dropouts;
  for (ClientId i : result.survivors) {
    RingVector x = InputOf(i, t);
    if (result.expected.empty()) result.expected.assign(x.size(), 0);
    AddInto(result.expected, x);
  }
  const MsgType request_type =
      mode == CrossCheckMode::kTss ? MsgType::kTssReq : MsgType::kCheckReq;
  ServerTimed(request_type, [&] {
    CheckRequest honest = MakeCheckRequest(*round_state_, config);
    for (ClientId u : access_.AllMembers()) {
      CheckRequest view = ViewFor(u, honest);
      Send(kServerAddress, DecryptorAddress(u), request_type, SerializeCheckRequest(view));
      result.views.emplace(u, std::move(view));
    }
  });
  network_.RunUntil(network_.now() + window);

  if (mode == CrossCheckMode::kTss) {
    try {
      ServerTimed(MsgType::kTssFull, [&] {
        TssCertificate cert = ServerCrossCheck(
            group_, round_state_->survivors, round_state_->dropouts, t, pending_->partials,
            unmask_context_.msk_threshold, *verifier_);
        Bytes body = SerializeTssCertificate(group_, cert);
        for (ClientId u : access_.AllMembers()) {
          Send(kServerAddress, DecryptorAddress(u), MsgType::kTssFull, body);
        }
      });
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kCombineReject &&
          e.code() != ErrorCode::kInsufficientShares) {
        throw;
      }
      return abort(e);
    }
    network_.RunUntil(network_.now() + window);
  }

  // Unmasking.
  result.responses = pending_->responses;
  try {
    UnmaskResult unmasked;
    ServerTimed(MsgType::kDecResp, [&] {
      unmasked = ServerUnmask(group_, *round_state_, pending_->responses, config,
                              unmask_context_);
    });
    result.aggregate = std::move(unmasked.aggregate);
    result.opened = unmasked.opened;
    result.masks_recovered = unmasked.masks_recovered;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kRoundAbort) throw;
    return abort(e);
  }
  return finish(result.aggregate == result.expected ? Outcome::kSumOk : Outcome::kWrongSum);
}

JoinReport Session::JoinClients(uint64_t count) {
  JoinReport report;
  const uint64_t old_n = roster_->keys.size();
  const IdSet old_decryptors = access_.AllMembers();
  pending_ = std::make_unique<Pending>();
  network_.BeginPhase(iteration_, Phase::kJoin);
  for (ClientId id = old_n + 1; id <= old_n + count; ++id) {
    Rng rng = root_rng_.Fork("keys", id);
    keys_.emplace(id, KeygenTriple(group_, rng));
    PublicKeySet pks = PublicKeysOf(keys_.at(id));
    ByteWriter w;
    w.U64(id).Raw(group_.Encode(pks.mask)).Raw(group_.Encode(pks.auth)).Raw(
        group_.Encode(pks.decrypt));
    Send(ClientAddress(id), kServerAddress, MsgType::kPkCommit, w.Take());
    pending_->joining.push_back(id);
    report.added.push_back(id);
  }
  network_.RunUntil(network_.now() + options_.delay.max_delay_us() + 1);

  ServerTimed(MsgType::kRootSig, [&] {
    std::map<ClientId, PublicKeySet> all = roster_->keys;
    for (const auto& [id, pks] : pending_->commits) all.emplace(id, pks);
    announcement_ = CommitRoster(group_, server_keys_.sk, all);
    roster_ = std::make_shared<const Roster>(
        VerifyRoster(group_, announcement_, server_keys_.pk));
    Bytes body = SerializeRootAnnouncement(group_, announcement_);
    for (ClientId id : roster_->ids()) {
      Send(kServerAddress, ClientAddress(id), MsgType::kRootSig, body);
    }
  });
  network_.RunUntilIdle();
  network_.EndPhase();
  pending_.reset();

  const uint64_t it = iteration_;
  report.existing_client_seedshare_bytes =
      metrics_
          .Total([&](const MetricsKey& k) {
            return k.iteration == it && k.phase == Phase::kJoin &&
                   k.kind == EntityKind::kClient && k.entity <= old_n &&
                   k.type == MsgType::kSeedShare;
          })
          .bytes_sent;
  report.existing_decryptor_bytes =
      metrics_
          .Total([&](const MetricsKey& k) {
            return k.iteration == it && k.phase == Phase::kJoin &&
                   k.kind == EntityKind::kDecryptor && Contains(old_decryptors, k.entity);
          })
          .bytes_sent;
  return report;
}

JoinReport Session::JoinDecryptors(uint64_t count, size_t threshold) {
  JoinReport report;
  const IdSet old_decryptors = MakeIdSet(access_.AllMembers());
  try {
    if (threshold <= old_decryptors.size() || threshold <= access_.final_threshold()) {
      Fail(ErrorCode::kDegenerateExtension,
           "threshold " + std::to_string(threshold) + " must exceed " +
               std::to_string(old_decryptors.size()) + " existing decryptors");
    }
    IdSet pool;
    for (ClientId id : roster_->ids()) {
      if (!Contains(old_decryptors, id)) pool.push_back(id);
    }
    if (count == 0 || count > pool.size() || threshold > old_decryptors.size() + count) {
      Fail(ErrorCode::kInvalidConfig, "cannot add " + std::to_string(count) +
                                          " decryptors with threshold " +
                                          std::to_string(threshold));
    }
    IdSet picks = ChooseSetStatic(announcement_.root, access_.levels.size(), count,
                                  pool.size());
    for (ClientId p : picks) report.added.push_back(pool[p - 1]);
    report.added = MakeIdSet(report.added);

    AccessStructure next = access_;
    next.levels.push_back({report.added, threshold});
    next.Validate();
    RoundConfig probe = MakeRoundConfig(iteration_ + 1, ModelDigest(iteration_ + 1));
    probe.num_decryptors = old_decryptors.size() + count;
    probe.threshold = threshold;
    probe.Validate();
  } catch (const Error& e) {
    report.error = e.code();
    report.error_message = e.what();
    report.added.clear();
    return report;
  }

  const uint8_t level = static_cast<uint8_t>(access_.levels.size() + 1);
  access_.levels.push_back({report.added, threshold});
  decryptor_ids_.insert(decryptor_ids_.end(), report.added.begin(), report.added.end());
  unmask_context_.decryptors = access_;
  for (auto& [id, d] : decryptors_) d.decryptors = access_;
  const GroupElement mpk = decryptors_.begin()->second.mpk;
  for (ClientId id : report.added) {
    const ClientState& c = clients_.at(id);
    DecryptorState d;
    d.id = id;
    d.level = level;
    d.auth = c.keys.auth;
    d.decrypt = c.keys.decrypt;
    d.mpk = mpk;
    d.roster = roster_;
    d.decryptors = access_;
    decryptors_.emplace(id, std::move(d));
  }

  pending_ = std::make_unique<Pending>();
  network_.BeginPhase(iteration_, Phase::kJoin);
  for (auto& [id, state] : clients_) {
    Rng rng = root_rng_.Fork("extend", level).Fork("client", id);
    for (const SeedShareEnvelope& e :
         ExtendToNewLevel(group_, state, threshold, report.added, rng)) {
      Send(ClientAddress(id), kServerAddress, MsgType::kSeedShare, SerializeSeedShare(e));
    }
  }
  network_.RunUntilIdle();
  network_.EndPhase();
  pending_.reset();

  const uint64_t it = iteration_;
  report.existing_client_seedshare_bytes =
      metrics_
          .Total([&](const MetricsKey& k) {
            return k.iteration == it && k.phase == Phase::kJoin &&
                   k.kind == EntityKind::kClient && k.type == MsgType::kSeedShare;
          })
          .bytes_sent;
  report.existing_decryptor_bytes =
      metrics_
          .Total([&](const MetricsKey& k) {
            return k.iteration == it && k.phase == Phase::kJoin &&
                   k.kind == EntityKind::kDecryptor && Contains(old_decryptors, k.entity);
          })
          .bytes_sent;
  return report;
}

}  // namespace secagg
