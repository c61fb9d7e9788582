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

#ifndef SECAGG_SESSION_H_
#define SECAGG_SESSION_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "secagg/error.h"
#include "secagg/group.h"
#include "secagg/protocol.h"
#include "secagg/rng.h"
#include "secagg/simnet.h"
#include "secagg/tss.h"

namespace secagg {

enum class CrossCheckMode { kOneRound, kTss };
std::string_view CrossCheckModeName(CrossCheckMode mode);

struct SessionOptions {
  GroupBackend group = GroupBackend::kProduction;
  uint64_t clients = 10;  // N at setup
  uint64_t decryptors = 4;
  uint64_t threshold = 3;
  double corruption_rate = 0.0;
  double dropout_rate = 0.1;
  SelectionMode selection = SelectionMode::kStatic;
  uint64_t participants = 0;  // 0 selects everyone
  uint64_t select_numerator = 1;
  uint64_t select_denominator = 1;
  uint64_t expected_degree = 16;
  size_t vector_length = 16;
  AbortRule abort_rule = AbortRule::kSurvivorFraction;
  MaskingHooks hooks;
  bool full_range_inputs = false;
  bool measure_cpu = false;
  uint64_t seed = 1;
  DelayModel delay;
  SelfMaskTap self_mask_tap;
};

struct IterationResult {
  uint64_t iteration = 0;
  Outcome outcome = Outcome::kAbort;
  std::optional<ErrorCode> error;
  std::string error_message;
  Bytes model_digest;
  IdSet selected;
  IdSet survivors;
  IdSet dropouts;
  RingVector aggregate;
  RingVector expected;  // plaintext sum over the server's U_S
  uint32_t collection_rounds = 0;
  size_t masks_recovered = 0;
  IdSet opened;
  // What each decryptor was sent and what came back.
  std::map<ClientId, CheckRequest> views;
  std::vector<DecryptorResponse> responses;
  IdSet decryptor_aborts;
};

struct JoinReport {
  IdSet added;
  std::optional<ErrorCode> error;
  std::string error_message;
  // SEEDSHARE bytes sent by clients that existed before the join, and total
  // bytes sent by decryptors that existed before the join.
  uint64_t existing_client_seedshare_bytes = 0;
  uint64_t existing_decryptor_bytes = 0;
};

// A simulated deployment: one server, N clients, a decryptor committee, and
// the network between them. Construction runs key commitment, seed sharing
// and the DKG; every later iteration reuses the stored shares.
class Session {
 public:
  // Error(kInvalidConfig) for invalid options; protocol errors in the setup
  // phase propagate.
  explicit Session(SessionOptions options);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const Group& group() const { return group_; }
  const SessionOptions& options() const { return options_; }
  const Metrics& metrics() const { return metrics_; }
  Metrics& metrics() { return metrics_; }
  const IdSet& decryptor_ids() const { return decryptor_ids_; }
  const AccessStructure& access() const { return access_; }
  IdSet client_ids() const { return roster_->ids(); }
  uint64_t total_clients() const { return roster_->keys.size(); }
  uint64_t last_iteration() const { return iteration_; }

  Bytes ModelDigest(uint64_t iteration) const;
  RoundConfig MakeRoundConfig(uint64_t iteration, const Bytes& digest) const;
  RingVector InputOf(ClientId id, uint64_t iteration) const;

  // Next iteration (1, 2, ...). Aborts are reported in the result.
  IterationResult RunIteration(CrossCheckMode mode, const IdSet& dropouts,
                               const AdversaryScript& script = AdversaryScript::Honest());
  IterationResult RunIteration(CrossCheckMode mode, const DropoutPlan& plan,
                               const AdversaryScript& script = AdversaryScript::Honest());

  JoinReport JoinClients(uint64_t count);
  // Adds a decryptor level of `count` existing non-decryptor clients with
  // the given cumulative threshold.
  JoinReport JoinDecryptors(uint64_t count, size_t threshold);

  // Oracle-side state, for tests that check the cryptography directly.
  const DecryptorState& decryptor(ClientId id) const { return decryptors_.at(id); }
  const ClientState& client(ClientId id) const { return clients_.at(id); }
  const TssVerifier& verifier() const { return *verifier_; }
  const Scalar& msk() const { return msk_; }
  const UnmaskContext& unmask_context() const { return unmask_context_; }
  const RoundState* last_round_state() const {
    return round_state_ ? &*round_state_ : nullptr;
  }

 private:
  struct Pending;

  void SetupPhase();
  void Dispatch(const Delivery& d);
  void OnServer(const Delivery& d);
  void OnClient(const Delivery& d);
  void OnDecryptor(const Delivery& d);
  void Send(Address from, Address to, MsgType type, Bytes body);
  void ServerTimed(MsgType type, const std::function<void()>& step);
  // Every client verifies the same announcement bytes; the simulator does
  // the work once per distinct announcement.
  std::shared_ptr<const Roster> VerifiedRoster(const Bytes& body);
  CheckRequest ViewFor(ClientId decryptor, const CheckRequest& honest) const;

  SessionOptions options_;
  const Group& group_;
  Rng root_rng_;
  Metrics metrics_;
  Network network_;

  KeyPair server_keys_;
  std::map<ClientId, KeyTriple> keys_;
  RootAnnouncement announcement_;
  std::shared_ptr<const Roster> roster_;
  IdSet decryptor_ids_;
  AccessStructure access_;
  std::map<ClientId, ClientState> clients_;
  std::map<ClientId, DecryptorState> decryptors_;
  std::map<ClientId, std::map<uint64_t, DkgReceived>> dkg_inbox_;
  std::map<Digest32, std::shared_ptr<const Roster>> verified_rosters_;
  std::unique_ptr<TssVerifier> verifier_;
  Scalar msk_;
  UnmaskContext unmask_context_;
  uint64_t iteration_ = 0;

  // Per-iteration scratch state.
  std::unique_ptr<Pending> pending_;
  std::optional<RoundState> round_state_;
};

}  // namespace secagg

#endif  // SECAGG_SESSION_H_
