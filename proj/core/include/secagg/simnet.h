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

#ifndef SECAGG_SIMNET_H_
#define SECAGG_SIMNET_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "secagg/rng.h"
#include "secagg/selection.h"
#include "secagg/wire.h"

namespace secagg {

enum class EntityKind : uint8_t { kServer = 0, kClient = 1, kDecryptor = 2 };
std::string_view EntityKindName(EntityKind kind);

struct Address {
  EntityKind kind = EntityKind::kServer;
  uint64_t id = 0;

  bool is_server() const { return kind == EntityKind::kServer; }
  friend bool operator==(const Address&, const Address&) = default;
  friend auto operator<=>(const Address&, const Address&) = default;
};

inline constexpr Address kServerAddress{EntityKind::kServer, 0};

enum class Phase : uint8_t { kPreRound = 0, kCollection = 1, kJoin = 2 };
std::string_view PhaseName(Phase phase);

enum class Outcome : uint8_t { kSumOk, kAbort, kWrongSum };
std::string_view OutcomeName(Outcome outcome);

// Per-message latency: base plus uniform jitter in [0, jitter].
struct DelayModel {
  uint64_t base_us = 50'000;
  uint64_t jitter_us = 20'000;
  uint64_t seed = 0;

  uint64_t max_delay_us() const { return base_us + jitter_us; }
};

struct MetricsKey {
  uint64_t iteration = 0;
  EntityKind kind = EntityKind::kServer;
  uint64_t entity = 0;
  Phase phase = Phase::kPreRound;
  MsgType type = MsgType::kModel;

  friend auto operator<=>(const MetricsKey&, const MetricsKey&) = default;
};

struct MetricsRow {
  uint64_t bytes_sent = 0;
  uint64_t bytes_recv = 0;
  uint64_t messages_sent = 0;
  uint64_t messages_recv = 0;
  uint64_t cpu_us = 0;
  uint32_t round = 0;
};

// Byte, message and round accounting on serialized envelopes.
class Metrics {
 public:
  void RecordSend(const MetricsKey& key, size_t bytes, uint32_t round);
  void RecordReceive(const MetricsKey& key, size_t bytes, uint32_t round);
  void AddCpu(const MetricsKey& key, uint64_t micros);
  void SetRounds(uint64_t iteration, Phase phase, uint32_t rounds);
  void SetOutcome(uint64_t iteration, Outcome outcome);

  const std::map<MetricsKey, MetricsRow>& rows() const { return rows_; }
  uint32_t rounds(uint64_t iteration, Phase phase) const;
  std::optional<Outcome> outcome(uint64_t iteration) const;

  // Sum over rows matching the filter.
  MetricsRow Total(const std::function<bool(const MetricsKey&)>& filter) const;

  static constexpr std::string_view kCsvHeader =
      "iter,entity_kind,entity_id,phase,msg_type,bytes_sent,bytes_recv,cpu_us,round,"
      "outcome";
  // Rows in key order. Setup-phase rows carry outcome "ok".
  void WriteCsv(std::ostream& out) const;

 private:
  std::map<MetricsKey, MetricsRow> rows_;
  std::map<std::pair<uint64_t, Phase>, uint32_t> rounds_;
  std::map<uint64_t, Outcome> outcomes_;
};

struct Delivery {
  uint64_t time_us = 0;
  Address from;
  Address to;
  Message message;
};

// Deterministic discrete-event network. Events are delivered in order of
// (time, sender, receiver, sequence number). Within a phase a round begins
// whenever a message flows toward the server after a flow in the other
// direction (or at phase start).
class Network {
 public:
  using Handler = std::function<void(const Delivery&)>;

  Network(DelayModel delay, Metrics* metrics);

  void set_handler(Handler handler) { handler_ = std::move(handler); }
  void set_measure_cpu(bool on) { measure_cpu_ = on; }
  void BeginPhase(uint64_t iteration, Phase phase);
  // Closes the current phase and records its round count.
  uint32_t EndPhase();

  void Send(Address from, Address to, Message message);
  // Delivers every event due at or before `time_us`, then advances the clock.
  void RunUntil(uint64_t time_us);
  void RunUntilIdle();

  uint64_t now() const { return now_; }
  uint32_t round() const { return round_; }
  size_t pending() const { return queue_.size(); }

  MetricsKey KeyFor(Address entity, MsgType type) const;

 private:
  struct Event {
    uint64_t time_us;
    Address from;
    Address to;
    uint64_t seq;
    uint32_t round;
    Message message;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return std::tie(a.time_us, a.from, a.to, a.seq) >
             std::tie(b.time_us, b.from, b.to, b.seq);
    }
  };

  void Deliver(const Event& e);

  DelayModel delay_;
  Rng rng_;
  Metrics* metrics_;
  Handler handler_;
  bool measure_cpu_ = false;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  uint64_t now_ = 0;
  uint64_t seq_ = 0;
  uint64_t iteration_ = 0;
  Phase phase_ = Phase::kPreRound;
  uint32_t round_ = 0;
  bool last_up_ = false;
};

// Server-side misbehaviour applied to the collection phase.
struct AdversaryScript {
  enum class Mode { kHonest, kInconsistentSets, kInconsistentModel, kDropResponses };
  Mode mode = Mode::kHonest;
  // Decryptors (inconsistent_sets), clients (inconsistent_model) or
  // silenced decryptors (drop_responses).
  IdSet partition;
  // Digest handed to `partition` in inconsistent_model; derived from the
  // true digest when empty.
  Bytes alternate_digest;

  static AdversaryScript Honest() { return {}; }
  static AdversaryScript InconsistentSets(IdSet partition_b);
  static AdversaryScript InconsistentModel(IdSet clients, Bytes digest = {});
  static AdversaryScript DropResponses(IdSet decryptors);
};

// The view handed to partition B of an inconsistent-sets attack: the
// smallest survivor is moved from U_S to U_D.
std::pair<IdSet, IdSet> ShiftedSets(const IdSet& survivors, const IdSet& dropouts);

// Pseudorandom per-iteration dropout subsets of size floor(rate * n_t).
class DropoutPlan {
 public:
  DropoutPlan(double rate, uint64_t seed) : rate_(rate), seed_(seed) {}
  double rate() const { return rate_; }
  size_t CountFor(size_t selected) const;
  IdSet For(uint64_t iteration, const IdSet& selected) const;

 private:
  double rate_;
  uint64_t seed_;
};

// Error(kInvalidPlan) when rate is negative or exceeds eta_d.
DropoutPlan InjectDropouts(double rate, double eta_d, uint64_t seed);

}  // namespace secagg

#endif  // SECAGG_SIMNET_H_
