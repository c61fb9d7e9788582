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

#include "secagg/simnet.h"

#include <chrono>
#include <cmath>
#include <string>

#include "secagg/bytes.h"
#include "secagg/error.h"
#include "secagg/hash.h"

namespace secagg {

std::string_view EntityKindName(EntityKind kind) {
  switch (kind) {
    case EntityKind::kServer: return "server";
    case EntityKind::kClient: return "client";
    case EntityKind::kDecryptor: return "decryptor";
  }
  return "unknown";
}

std::string_view PhaseName(Phase phase) {
  switch (phase) {
    case Phase::kPreRound: return "pre_round";
    case Phase::kCollection: return "collection";
    case Phase::kJoin: return "join";
  }
  return "unknown";
}

std::string_view OutcomeName(Outcome outcome) {
  switch (outcome) {
    case Outcome::kSumOk: return "sum_ok";
    case Outcome::kAbort: return "abort";
    case Outcome::kWrongSum: return "wrong_sum";
  }
  return "unknown";
}

void Metrics::RecordSend(const MetricsKey& key, size_t bytes, uint32_t round) {
  MetricsRow& row = rows_[key];
  row.bytes_sent += bytes;
  row.messages_sent += 1;
  row.round = std::max(row.round, round);
}

void Metrics::RecordReceive(const MetricsKey& key, size_t bytes, uint32_t round) {
  MetricsRow& row = rows_[key];
  row.bytes_recv += bytes;
  row.messages_recv += 1;
  row.round = std::max(row.round, round);
}

void Metrics::AddCpu(const MetricsKey& key, uint64_t micros) { rows_[key].cpu_us += micros; }

void Metrics::SetRounds(uint64_t iteration, Phase phase, uint32_t rounds) {
  rounds_[{iteration, phase}] = rounds;
}

void Metrics::SetOutcome(uint64_t iteration, Outcome outcome) {
  outcomes_[iteration] = outcome;
}

uint32_t Metrics::rounds(uint64_t iteration, Phase phase) const {
  auto it = rounds_.find({iteration, phase});
  return it == rounds_.end() ? 0 : it->second;
}

std::optional<Outcome> Metrics::outcome(uint64_t iteration) const {
  auto it = outcomes_.find(iteration);
  if (it == outcomes_.end()) return std::nullopt;
  return it->second;
}

MetricsRow Metrics::Total(const std::function<bool(const MetricsKey&)>& filter) const {
  MetricsRow total;
  for (const auto& [key, row] : rows_) {
    if (!filter(key)) continue;
    total.bytes_sent += row.bytes_sent;
    total.bytes_recv += row.bytes_recv;
    total.messages_sent += row.messages_sent;
    total.messages_recv += row.messages_recv;
    total.cpu_us += row.cpu_us;
    total.round = std::max(total.round, row.round);
  }
  return total;
}

void Metrics::WriteCsv(std::ostream& out) const {
  out << kCsvHeader << '\n';
  for (const auto& [key, row] : rows_) {
    std::string_view outcome = "ok";
    if (key.phase == Phase::kCollection) {
      auto it = outcomes_.find(key.iteration);
      outcome = it == outcomes_.end() ? "abort" : OutcomeName(it->second);
    }
    out << key.iteration << ',' << EntityKindName(key.kind) << ',' << key.entity << ','
        << PhaseName(key.phase) << ',' << MsgTypeName(key.type) << ',' << row.bytes_sent
        << ',' << row.bytes_recv << ',' << row.cpu_us << ',' << row.round << ','
        << outcome << '\n';
  }
}

Network::Network(DelayModel delay, Metrics* metrics)
    : delay_(delay), rng_(Rng(delay.seed).Fork("network")), metrics_(metrics) {}

void Network::BeginPhase(uint64_t iteration, Phase phase) {
  iteration_ = iteration;
  phase_ = phase;
  round_ = 0;
  last_up_ = false;
}

uint32_t Network::EndPhase() {
  metrics_->SetRounds(iteration_, phase_, round_);
  return round_;
}

MetricsKey Network::KeyFor(Address entity, MsgType type) const {
  return {iteration_, entity.kind, entity.id, phase_, type};
}

void Network::Send(Address from, Address to, Message message) {
  const bool up = to.is_server() && !from.is_server();
  if (up && !last_up_) ++round_;
  last_up_ = up;
  uint64_t delay = delay_.base_us + rng_.Uniform(delay_.jitter_us + 1);
  const size_t bytes = message.wire_size();
  metrics_->RecordSend(KeyFor(from, message.type), bytes, round_);
  queue_.push({now_ + delay, from, to, seq_++, round_, std::move(message)});
}

void Network::Deliver(const Event& e) {
  metrics_->RecordReceive(KeyFor(e.to, e.message.type), e.message.wire_size(), e.round);
  if (!handler_) return;
  Delivery d{e.time_us, e.from, e.to, e.message};
  if (!measure_cpu_) {
    handler_(d);
    return;
  }
  auto start = std::chrono::steady_clock::now();
  handler_(d);
  auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                std::chrono::steady_clock::now() - start)
                .count();
  metrics_->AddCpu(KeyFor(e.to, e.message.type), static_cast<uint64_t>(us));
}

void Network::RunUntil(uint64_t time_us) {
  while (!queue_.empty() && queue_.top().time_us <= time_us) {
    Event e = queue_.top();
    queue_.pop();
    now_ = e.time_us;
    Deliver(e);
  }
  now_ = std::max(now_, time_us);
}

void Network::RunUntilIdle() {
  while (!queue_.empty()) {
    Event e = queue_.top();
    queue_.pop();
    now_ = e.time_us;
    Deliver(e);
  }
}

AdversaryScript AdversaryScript::InconsistentSets(IdSet partition_b) {
  AdversaryScript s;
  s.mode = Mode::kInconsistentSets;
  s.partition = MakeIdSet(std::move(partition_b));
  return s;
}

AdversaryScript AdversaryScript::InconsistentModel(IdSet clients, Bytes digest) {
  AdversaryScript s;
  s.mode = Mode::kInconsistentModel;
  s.partition = MakeIdSet(std::move(clients));
  s.alternate_digest = std::move(digest);
  return s;
}

AdversaryScript AdversaryScript::DropResponses(IdSet decryptors) {
  AdversaryScript s;
  s.mode = Mode::kDropResponses;
  s.partition = MakeIdSet(std::move(decryptors));
  return s;
}

std::pair<IdSet, IdSet> ShiftedSets(const IdSet& survivors, const IdSet& dropouts) {
  if (survivors.empty()) return {survivors, dropouts};
  IdSet s(survivors.begin() + 1, survivors.end());
  IdSet d = dropouts;
  d.push_back(survivors.front());
  return {s, MakeIdSet(std::move(d))};
}

size_t DropoutPlan::CountFor(size_t selected) const {
  return static_cast<size_t>(std::floor(rate_ * static_cast<double>(selected) + 1e-9));
}

IdSet DropoutPlan::For(uint64_t iteration, const IdSet& selected) const {
  const size_t count = CountFor(selected.size());
  if (count == 0) return {};
  Bytes material = ByteWriter().Raw(ToBytes("secagg/dropouts")).U64(seed_).Take();
  IdSet picks = ChooseSetStatic(material, iteration, count, selected.size());
  IdSet out;
  for (ClientId p : picks) out.push_back(selected[p - 1]);
  return MakeIdSet(std::move(out));
}

DropoutPlan InjectDropouts(double rate, double eta_d, uint64_t seed) {
  if (!(rate >= 0.0) || rate > eta_d + 1e-9) {
    Fail(ErrorCode::kInvalidPlan, "dropout rate " + std::to_string(rate) +
                                      " exceeds eta_D " + std::to_string(eta_d));
  }
  return DropoutPlan(rate, seed);
}

}  // namespace secagg
