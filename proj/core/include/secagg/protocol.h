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

#ifndef SECAGG_PROTOCOL_H_
#define SECAGG_PROTOCOL_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "secagg/authcrypto.h"
#include "secagg/bytes.h"
#include "secagg/dkg.h"
#include "secagg/group.h"
#include "secagg/hash.h"
#include "secagg/masking.h"
#include "secagg/rng.h"
#include "secagg/selection.h"
#include "secagg/sharing.h"

namespace secagg {

// ---------------------------------------------------------------------------
// Configuration

enum class SelectionMode { kStatic, kDynamic };

// Which quorum rule the server applies when collecting reports. The default
// aborts below (1 - eta) n_t survivors; kThresholdCount aborts below kappa.
enum class AbortRule { kSurvivorFraction, kThresholdCount };

// Test hooks. Production runs leave both enabled.
struct MaskingHooks {
  bool self_masks = true;
  bool pairwise_masks = true;
};

// Called with every self-mask vector a client derives.
using SelfMaskTap =
    std::function<void(ClientId, uint64_t iteration, std::span<const uint32_t>)>;

// 2 kappa > (1 + eta_c - eta_d) n_I, with a small epsilon so that exact
// equality in decimal inputs is rejected.
bool ThresholdConditionHolds(uint64_t threshold, uint64_t num_decryptors,
                             double corruption_rate, double dropout_rate);

struct RoundConfig {
  uint64_t iteration = 0;
  Bytes model_digest;
  uint64_t total_clients = 0;  // N
  SelectionMode selection = SelectionMode::kStatic;
  uint64_t participants = 0;  // n_t in static mode
  uint64_t select_numerator = 1;    // n of p = n / m in dynamic mode
  uint64_t select_denominator = 1;  // m
  uint64_t num_decryptors = 0;  // n_I
  uint64_t threshold = 0;       // kappa
  double corruption_rate = 0.0;  // eta_C
  double dropout_rate = 0.0;     // eta_D
  uint64_t expected_degree = 16;  // A_t
  size_t vector_length = 1;       // l
  AbortRule abort_rule = AbortRule::kSurvivorFraction;
  MaskingHooks hooks;

  double eta() const { return corruption_rate + dropout_rate; }
  // Minimum |U_S| for a selected set of size n_t.
  size_t MinSurvivors(size_t selected) const;
  // Error(kInvalidConfig) on any violated invariant, including the
  // threshold condition.
  void Validate() const;
};

// S_t for this round.
IdSet SelectParticipants(const RoundConfig& config);

// ---------------------------------------------------------------------------
// Public-key commitment

struct PublicKeySet {
  GroupElement mask;
  GroupElement auth;
  GroupElement decrypt;
};

// Merkle leaf payload: id (8 bytes LE) || pk1 || pk2 || pk3.
Bytes RosterLeaf(const Group& group, ClientId id, const PublicKeySet& pks);
PublicKeySet PublicKeysOf(const KeyTriple& keys);

struct Roster {
  Digest32 root{};
  std::map<ClientId, PublicKeySet> keys;

  IdSet ids() const;
  const PublicKeySet& at(ClientId id) const;
};

// What the server returns after committing: the signed root and every leaf
// with its membership proof.
struct RootAnnouncement {
  Digest32 root{};
  Bytes server_signature;
  struct Entry {
    ClientId id = 0;
    PublicKeySet pks;
    std::vector<Digest32> proof;
  };
  std::vector<Entry> entries;  // ascending id, leaf index = position
};

Bytes RootSigningMessage(const Digest32& root);
RootAnnouncement CommitRoster(const Group& group, const Scalar& server_sk,
                              const std::map<ClientId, PublicKeySet>& keys);
// Checks the server's signature and every membership proof.
// Error(kMerkleVerifyFailure) on the first failure.
Roster VerifyRoster(const Group& group, const RootAnnouncement& announcement,
                    const GroupElement& server_pk);

Bytes SerializeRootAnnouncement(const Group& group, const RootAnnouncement& a);
RootAnnouncement ParseRootAnnouncement(const Group& group, ByteView bytes);

// I <- ChooseSet(root, 0, n_I, N), fixed for the whole session.
IdSet ChooseDecryptors(const Digest32& root, uint64_t num_decryptors,
                       uint64_t total_clients);

// ---------------------------------------------------------------------------
// Pre-round: key agreement and one-time seed sharing

struct ClientState {
  ClientId id = 0;
  KeyTriple keys;
  Scalar self_seed;
  std::map<ClientId, Scalar> pairwise_seeds;
  std::shared_ptr<const Roster> roster;
  AccessStructure decryptors;
  // Dealer state of every seed this client shared, kept for later levels.
  std::optional<DealerState> self_dealer;
  std::map<ClientId, DealerState> pairwise_dealers;
  // Next AE counter per (receiver, purpose).
  std::map<std::pair<ClientId, uint8_t>, uint64_t> nonce_counters;

  uint64_t NextNonce(ClientId receiver, NoncePurpose purpose);
};

// SEEDSHARE body: sender (8) || receiver (8) || blob(ciphertext).
struct SeedShareEnvelope {
  ClientId sender = 0;
  ClientId receiver = 0;
  Bytes ciphertext;
};

Bytes SerializeSeedShare(const SeedShareEnvelope& e);
SeedShareEnvelope ParseSeedShare(ByteView bytes);

struct PreRoundOutput {
  ClientState state;
  std::vector<SeedShareEnvelope> messages;  // one per decryptor
};

// Verifies the roster, agrees a pairwise seed with every peer, draws the
// self seed, and deals each seed to the decryptors under `decryptors`
// (every level). Error(kMerkleVerifyFailure) aborts.
PreRoundOutput PreRoundClient(const Group& group, ClientId id, const KeyTriple& keys,
                              const RootAnnouncement& announcement,
                              const GroupElement& server_pk,
                              const AccessStructure& decryptors, Rng& rng);

// Same, for a roster the caller already verified.
PreRoundOutput PreRoundClientWithRoster(const Group& group, ClientId id,
                                        const KeyTriple& keys,
                                        std::shared_ptr<const Roster> roster,
                                        const AccessStructure& decryptors, Rng& rng);

// Adds peers that joined after this client's pre-round. Only the pairwise
// seeds are derived; the joining side deals them.
void AddLatePeers(const Group& group, ClientState& state,
                  std::shared_ptr<const Roster> roster);

// Extends every dealt seed to a new decryptor level and encrypts the new
// shares, one envelope per new decryptor.
std::vector<SeedShareEnvelope> ExtendToNewLevel(const Group& group, ClientState& state,
                                                size_t threshold,
                                                const IdSet& new_members, Rng& rng);

struct StoredShares {
  std::optional<Scalar> self;
  std::vector<std::pair<ClientId, Scalar>> pairwise;  // ascending peer
};

struct DecryptorState {
  ClientId id = 0;
  uint8_t level = 1;
  KeyPair auth;
  KeyPair decrypt;
  // Absent for decryptors that joined after key generation.
  std::optional<Share> msk_share;
  GroupElement mpk;
  std::shared_ptr<const Roster> roster;
  AccessStructure decryptors;
  std::unordered_map<ClientId, StoredShares> shares;

  // Share of seed_{owner,peer}; falls back to the peer's dealing.
  const Scalar* FindPairwise(ClientId owner, ClientId peer) const;
};

// Decrypts and stores one client's bundle. Error(kAeAuthFailure) or
// Error(kMalformed) leave the table untouched.
void DecryptorAcceptSeedShares(const Group& group, DecryptorState& state,
                               const SeedShareEnvelope& envelope);

// ---------------------------------------------------------------------------
// Collection phase

// m_i = "online" || i (8 bytes LE) || t (8 bytes LE).
Bytes OnlineMessage(ClientId id, uint64_t iteration);

struct Report {
  ClientId sender = 0;
  uint64_t iteration = 0;
  RingVector masked;
  Bytes message;
  Bytes signature;
};

Bytes SerializeReport(const Report& r);
Report ParseReport(ByteView bytes);

// y_i = x_i + r_i + sum_{j in A, j > i} m_ij - sum_{j in A, j < i} m_ij.
// Errors: kNotParticipant, kMissingSeed, kInvalidConfig (length).
Report ClientReport(const Group& group, const ClientState& state,
                    const RoundConfig& config, std::span<const uint32_t> input,
                    const SelfMaskTap& tap = nullptr);

struct RoundState {
  uint64_t iteration = 0;
  IdSet selected;   // S_t
  IdSet survivors;  // U_S
  IdSet dropouts;   // U_D
  std::map<ClientId, Report> reports;
};

// Keeps reports from selected senders whose signature verifies; everyone else
// in S_t becomes a dropout. Error(kRoundAbort) below the quorum.
RoundState ServerCollect(const Group& group, const std::vector<Report>& reports,
                         const RoundConfig& config, const Roster& roster);

struct SignedOnline {
  ClientId id = 0;
  Bytes message;
  Bytes signature;
};

// The server's broadcast to decryptors (CHECKREQ / TSSREQ body).
struct CheckRequest {
  uint64_t iteration = 0;
  Bytes model_digest;
  IdSet survivors;
  IdSet dropouts;
  std::vector<SignedOnline> signatures;
};

CheckRequest MakeCheckRequest(const RoundState& state, const RoundConfig& config);
Bytes SerializeCheckRequest(const CheckRequest& req);
CheckRequest ParseCheckRequest(ByteView bytes);

// u32 |U_S| || ids || u32 |U_D| || ids, ids 8 bytes LE ascending.
Bytes EncodeSets(const IdSet& survivors, const IdSet& dropouts);
Scalar SetsHash(const Group& group, const IdSet& survivors, const IdSet& dropouts);

// Canonical order of the elements a decryptor releases: g_t^{seed_i} for
// i in U_S, then g_t^{seed_jk} for j in U_D, k in A_{j,t} ∩ U_S.
struct ReleasePlan {
  IdSet self_owners;
  std::vector<std::pair<ClientId, ClientId>> dropout_edges;  // (j, k)
  size_t size() const { return self_owners.size() + dropout_edges.size(); }
};
ReleasePlan MakeReleasePlan(const RoundConfig& config, const IdSet& survivors,
                            const IdSet& dropouts);

struct DecryptorResponse {
  ClientId sender = 0;
  Bytes seed_ciphertext;  // c_seed,u
  GroupElement key_ciphertext;  // c_key,u
  std::vector<std::pair<ClientId, GroupElement>> decryption_shares;  // c_{u,i}
};

Bytes SerializeDecryptorResponse(const Group& group, const DecryptorResponse& r);
DecryptorResponse ParseDecryptorResponse(const Group& group, ByteView bytes);

// Consistency checks of a check request. Error(kConsistencyAbort) when the
// sets overlap or do not partition S_t, the survivor quorum fails, or (when
// `verify_signatures`) any survivor's signature is invalid.
void DecryptorCheck(const Group& group, const DecryptorState& state,
                    const CheckRequest& req, const RoundConfig& config,
                    bool verify_signatures = true);

// Runs DecryptorCheck, draws k_u, and builds the response.
DecryptorResponse DecryptorRespond(const Group& group, const DecryptorState& state,
                                   const CheckRequest& req, const RoundConfig& config,
                                   Rng& rng, bool verify_signatures = true);
// Same with a caller-chosen k_u.
DecryptorResponse DecryptorRespondWithKey(const Group& group,
                                          const DecryptorState& state,
                                          const CheckRequest& req,
                                          const RoundConfig& config,
                                          const GroupElement& release_key,
                                          bool verify_signatures = true);

// k_u = c_key,u / prod_i c_{i,u}^{beta_i} over the helpers' decryption
// shares. Error(kMissingShare) when a helper carries no share for u.
GroupElement RecoverReleaseKey(const Group& group, const DecryptorResponse& target,
                               std::span<const DecryptorResponse* const> helpers);

// Recovers k_u from `helpers` and opens c_seed,u. nullopt on AE failure or
// an unexpected element count.
std::optional<std::vector<GroupElement>> OpenSeedRelease(
    const Group& group, const DecryptorResponse& target,
    std::span<const DecryptorResponse* const> helpers, uint64_t iteration,
    size_t expected_elements);

// Server-side knowledge needed to unmask.
struct UnmaskContext {
  AccessStructure decryptors;
  IdSet msk_holders;
  size_t msk_threshold = 0;
};

struct UnmaskResult {
  RingVector aggregate;
  IdSet opened;   // responders whose c_seed,u opened
  IdSet quorum;   // responders used for reconstruction
  size_t masks_recovered = 0;
};

// Error(kRoundAbort) when the responders, or the responders whose release
// opened, do not satisfy the decryptor access structure.
UnmaskResult ServerUnmask(const Group& group, const RoundState& state,
                          const std::vector<DecryptorResponse>& responses,
                          const RoundConfig& config, const UnmaskContext& context);

}  // namespace secagg

#endif  // SECAGG_PROTOCOL_H_
