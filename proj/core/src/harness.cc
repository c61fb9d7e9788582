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

#include "secagg/harness.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include "secagg/error.h"

namespace secagg {
namespace {

uint64_t ParseU64(std::string_view key, std::string_view v) {
  uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    Fail(ErrorCode::kInvalidConfig, std::string(key) + ": not an integer: " + std::string(v));
  }
  return out;
}

double ParseDouble(std::string_view key, std::string_view v) {
  std::string s(v);
  size_t used = 0;
  double out = 0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || !std::isfinite(out)) {
    Fail(ErrorCode::kInvalidConfig, std::string(key) + ": not a number: " + s);
  }
  return out;
}

bool ParseBool(std::string_view key, std::string_view v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  Fail(ErrorCode::kInvalidConfig, std::string(key) + ": not a boolean: " + std::string(v));
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string TrialPath(const std::string& path, uint64_t trial, uint64_t trials) {
  if (trials <= 1 || path.empty()) return path;
  size_t dot = path.find_last_of('.');
  size_t slash = path.find_last_of('/');
  std::string suffix = "-" + std::to_string(trial);
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + suffix;
  }
  return path.substr(0, dot) + suffix + path.substr(dot);
}

bool WriteCsv(const Metrics& metrics, const std::string& path, std::ostream& err) {
  if (path.empty()) return true;
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "cannot open " << path << "\n";
    return false;
  }
  metrics.WriteCsv(f);
  return static_cast<bool>(f);
}

double MeanCollectionBytes(const Metrics& m, EntityKind kind) {
  std::map<std::pair<uint64_t, uint64_t>, uint64_t> per_entity;
  for (const auto& [k, row] : m.rows()) {
    if (k.phase == Phase::kCollection && k.kind == kind && row.bytes_sent > 0) {
      per_entity[{k.iteration, k.entity}] += row.bytes_sent;
    }
  }
  if (per_entity.empty()) return 0.0;
  double total = 0;
  for (const auto& [_, v] : per_entity) total += static_cast<double>(v);
  return total / static_cast<double>(per_entity.size());
}

IdSet SplitPartition(const IdSet& decryptors, uint64_t split) {
  if (split == 0) split = decryptors.size() / 2;
  return IdSet(decryptors.end() - static_cast<std::ptrdiff_t>(split), decryptors.end());
}

}  // namespace

uint64_t MinimalThreshold(uint64_t num_decryptors, double eta_c, double eta_d) {
  for (uint64_t k = 1; k <= num_decryptors; ++k) {
    if (ThresholdConditionHolds(k, num_decryptors, eta_c, eta_d)) return k;
  }
  return num_decryptors + 1;
}

uint64_t ExperimentConfig::effective_threshold() const {
  return threshold != 0 ? threshold : MinimalThreshold(decryptors, eta_c, effective_eta_d());
}

void ExperimentConfig::Validate() const {
  if (iters == 0) Fail(ErrorCode::kInvalidConfig, "iters must be >= 1");
  if (trials == 0) Fail(ErrorCode::kInvalidConfig, "trials must be >= 1");
  if (dropout < 0 || dropout > effective_eta_d() + 1e-9) {
    Fail(ErrorCode::kInvalidConfig, "dropout rate must lie in [0, eta_d]");
  }
  if (group == GroupBackend::kTest && clients >= 11) {
    Fail(ErrorCode::kInvalidConfig, "the test group supports at most 10 clients");
  }
  if (jitter_ms >= 2 * base_delay_ms) {
    Fail(ErrorCode::kInvalidConfig, "jitter must stay below twice the base delay");
  }
  RoundConfig probe;
  probe.iteration = 1;
  probe.total_clients = clients;
  probe.selection = selection;
  probe.participants = participants == 0 ? clients : participants;
  probe.select_numerator = select_numerator;
  probe.select_denominator = select_denominator;
  probe.num_decryptors = decryptors;
  probe.threshold = effective_threshold();
  probe.corruption_rate = eta_c;
  probe.dropout_rate = effective_eta_d();
  probe.expected_degree = degree;
  probe.vector_length = len;
  probe.Validate();
}

SessionOptions ExperimentConfig::ToSessionOptions(uint64_t seed_offset) const {
  SessionOptions o;
  o.group = group;
  o.clients = clients;
  o.decryptors = decryptors;
  o.threshold = effective_threshold();
  o.corruption_rate = eta_c;
  o.dropout_rate = effective_eta_d();
  o.selection = selection;
  o.participants = participants;
  o.select_numerator = select_numerator;
  o.select_denominator = select_denominator;
  o.expected_degree = degree;
  o.vector_length = len;
  o.abort_rule = abort_rule;
  o.full_range_inputs = full_range;
  o.measure_cpu = measure_cpu;
  o.seed = seed + seed_offset;
  o.delay.base_us = base_delay_ms * 1000;
  o.delay.jitter_us = jitter_ms * 1000;
  o.delay.seed = 0;
  return o;
}

void ApplyConfigValue(ExperimentConfig& c, std::string_view key, std::string_view value) {
  const std::string v(Trim(value));
  const std::string k(Trim(key));
  if (k == "clients") c.clients = ParseU64(k, v);
  else if (k == "participants") c.participants = ParseU64(k, v);
  else if (k == "probability") {
    size_t slash = v.find('/');
    if (slash == std::string::npos) Fail(ErrorCode::kInvalidConfig, "probability must be n/m");
    c.select_numerator = ParseU64(k, std::string_view(v).substr(0, slash));
    c.select_denominator = ParseU64(k, std::string_view(v).substr(slash + 1));
  } else if (k == "decryptors") c.decryptors = ParseU64(k, v);
  else if (k == "threshold") c.threshold = ParseU64(k, v);
  else if (k == "dropout") c.dropout = ParseDouble(k, v);
  else if (k == "eta-c" || k == "eta_c") c.eta_c = ParseDouble(k, v);
  else if (k == "eta-d" || k == "eta_d") c.eta_d = ParseDouble(k, v);
  else if (k == "len") c.len = ParseU64(k, v);
  else if (k == "iters") c.iters = ParseU64(k, v);
  else if (k == "mode") {
    if (v == "oneround") c.mode = CrossCheckMode::kOneRound;
    else if (v == "tss") c.mode = CrossCheckMode::kTss;
    else Fail(ErrorCode::kInvalidConfig, "mode must be oneround or tss");
  } else if (k == "selection") {
    if (v == "static") c.selection = SelectionMode::kStatic;
    else if (v == "dynamic") c.selection = SelectionMode::kDynamic;
    else Fail(ErrorCode::kInvalidConfig, "selection must be static or dynamic");
  } else if (k == "group") {
    if (v == "production" || v == "ristretto255") c.group = GroupBackend::kProduction;
    else if (v == "test") c.group = GroupBackend::kTest;
    else Fail(ErrorCode::kInvalidConfig, "group must be production or test");
  } else if (k == "abort-rule" || k == "abort_rule") {
    if (v == "survivors") c.abort_rule = AbortRule::kSurvivorFraction;
    else if (v == "threshold") c.abort_rule = AbortRule::kThresholdCount;
    else Fail(ErrorCode::kInvalidConfig, "abort-rule must be survivors or threshold");
  } else if (k == "degree") c.degree = ParseU64(k, v);
  else if (k == "seed") c.seed = ParseU64(k, v);
  else if (k == "trials") c.trials = ParseU64(k, v);
  else if (k == "full-range" || k == "full_range") c.full_range = ParseBool(k, v);
  else if (k == "cpu") c.measure_cpu = ParseBool(k, v);
  else if (k == "base-delay-ms") c.base_delay_ms = ParseU64(k, v);
  else if (k == "jitter-ms") c.jitter_ms = ParseU64(k, v);
  else if (k == "out") c.out = v;
  else if (k == "scenario") c.scenario = v;
  else if (k == "split") c.split = ParseU64(k, v);
  else if (k == "new-clients") c.new_clients = ParseU64(k, v);
  else if (k == "new-decryptors") c.new_decryptors = ParseU64(k, v);
  else if (k == "new-threshold") c.new_threshold = ParseU64(k, v);
  else Fail(ErrorCode::kInvalidConfig, "unknown key: " + k);
}

void LoadConfigFile(ExperimentConfig& config, const std::string& path) {
  std::ifstream f(path);
  if (!f) Fail(ErrorCode::kInvalidConfig, "cannot read config file " + path);
  std::string line;
  int number = 0;
  while (std::getline(f, line)) {
    ++number;
    std::string_view l = line;
    if (size_t hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = Trim(l);
    if (l.empty()) continue;
    size_t eq = l.find('=');
    if (eq == std::string_view::npos) {
      Fail(ErrorCode::kInvalidConfig,
           path + ":" + std::to_string(number) + ": expected key = value");
    }
    ApplyConfigValue(config, l.substr(0, eq), l.substr(eq + 1));
  }
}

int CmdRun(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.Validate();
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  std::map<Outcome, uint64_t> outcomes;
  for (uint64_t trial = 0; trial < config.trials; ++trial) {
    Session session(config.ToSessionOptions(trial));
    DropoutPlan plan = InjectDropouts(config.dropout, config.effective_eta_d(),
                                      config.seed + trial);
    for (uint64_t t = 0; t < config.iters; ++t) {
      IterationResult r = session.RunIteration(config.mode, plan);
      ++outcomes[r.outcome];
      if (r.outcome != Outcome::kSumOk) {
        err << "iteration " << r.iteration << ": " << OutcomeName(r.outcome);
        if (r.error) err << " (" << r.error_message << ")";
        err << "\n";
      }
    }
    const Metrics& m = session.metrics();
    if (!WriteCsv(m, TrialPath(config.out, trial, config.trials), err)) return kExitConfig;
    out << "trial " << trial << " seed " << config.seed + trial << ": N="
        << config.clients << " n_I=" << config.decryptors
        << " kappa=" << config.effective_threshold() << " l=" << config.len
        << " mode=" << CrossCheckModeName(config.mode) << "\n";
    out << std::fixed << std::setprecision(1);
    out << "  mean collection bytes sent per iteration: client "
        << MeanCollectionBytes(m, EntityKind::kClient) << ", decryptor "
        << MeanCollectionBytes(m, EntityKind::kDecryptor) << ", server "
        << MeanCollectionBytes(m, EntityKind::kServer) << "\n";
    out << "  collection rounds: " << m.rounds(session.last_iteration(), Phase::kCollection)
        << "\n";
  }
  out << "outcomes: sum_ok " << outcomes[Outcome::kSumOk] << ", abort "
      << outcomes[Outcome::kAbort] << ", wrong_sum " << outcomes[Outcome::kWrongSum] << "\n";
  return outcomes[Outcome::kSumOk] == config.trials * config.iters ? kExitOk : kExitAbort;
}

namespace {

// Tries to unmask one partition's view using only that partition's
// responses, the way a server holding both views would.
bool RecoverView(const Session& session, const IterationResult& r, const IdSet& partition,
                 const IdSet& survivors, const IdSet& dropouts) {
  const RoundState* honest = session.last_round_state();
  if (!honest) return false;
  RoundState view = *honest;
  view.survivors = survivors;
  view.dropouts = dropouts;
  std::vector<DecryptorResponse> subset;
  for (const auto& resp : r.responses) {
    if (Contains(partition, resp.sender)) subset.push_back(resp);
  }
  RoundConfig config = session.MakeRoundConfig(r.iteration, r.model_digest);
  try {
    UnmaskResult u =
        ServerUnmask(session.group(), view, subset, config, session.unmask_context());
    RingVector expected(config.vector_length, 0);
    for (ClientId i : survivors) AddInto(expected, session.InputOf(i, r.iteration));
    return u.aggregate == expected;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kRoundAbort) throw;
    return false;
  }
}

int AttackInconsistentSets(const ExperimentConfig& config, std::ostream& out) {
  Session session(config.ToSessionOptions());
  const IdSet& committee = session.decryptor_ids();
  IdSet b = SplitPartition(committee, config.split);
  IdSet a;
  std::set_difference(committee.begin(), committee.end(), b.begin(), b.end(),
                      std::back_inserter(a));
  IterationResult r = session.RunIteration(config.mode, IdSet{},
                                           AdversaryScript::InconsistentSets(b));
  const uint64_t kappa = config.effective_threshold();
  out << "partitions: |A| = " << a.size() << ", |B| = " << b.size() << ", kappa = " << kappa
      << "\n";
  out << "server unmask: " << OutcomeName(r.outcome);
  if (r.error) out << " (" << ErrorCodeName(*r.error) << ")";
  out << "\n";
  if (session.last_round_state() == nullptr) {
    out << "collection aborted before the cross-check\n";
    return kExitAttackFailed;
  }
  auto [bs, bd] = ShiftedSets(r.survivors, r.dropouts);
  bool rec_a = RecoverView(session, r, a, r.survivors, r.dropouts);
  bool rec_b = RecoverView(session, r, b, bs, bd);
  out << "view A masks recovered: " << (rec_a ? "yes" : "no") << "\n";
  out << "view B masks recovered: " << (rec_b ? "yes" : "no") << "\n";
  bool holds = !(rec_a && rec_b) && (a.size() > kappa || !rec_a) && (b.size() > kappa || !rec_b);
  if (a.size() <= kappa && b.size() <= kappa) {
    holds = holds && r.outcome == Outcome::kAbort && r.masks_recovered == 0;
  }
  out << "assertion " << (holds ? "holds" : "FAILED") << "\n";
  return holds ? kExitOk : kExitAttackFailed;
}

int AttackInconsistentModel(const ExperimentConfig& config, std::ostream& out) {
  uint64_t wrong = 0;
  for (uint64_t trial = 0; trial < config.trials; ++trial) {
    Session session(config.ToSessionOptions(trial));
    RoundConfig next = session.MakeRoundConfig(1, session.ModelDigest(1));
    IdSet selected = SelectParticipants(next);
    IdSet partition;
    for (size_t i = 0; i < selected.size(); i += 2) partition.push_back(selected[i]);
    IterationResult r = session.RunIteration(config.mode, IdSet{},
                                             AdversaryScript::InconsistentModel(partition));
    if (r.outcome == Outcome::kWrongSum) ++wrong;
    out << "trial " << trial << ": " << OutcomeName(r.outcome) << "\n";
  }
  out << "wrong_sum in " << wrong << "/" << config.trials << " trials\n";
  bool holds = static_cast<double>(wrong) >= 0.99 * static_cast<double>(config.trials);
  out << "assertion " << (holds ? "holds" : "FAILED") << "\n";
  return holds ? kExitOk : kExitAttackFailed;
}

}  // namespace

int CmdAttack(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.Validate();
    if (config.scenario != "inconsistent-sets" && config.scenario != "inconsistent-model") {
      Fail(ErrorCode::kInvalidConfig, "scenario must be inconsistent-sets or inconsistent-model");
    }
    if (config.split >= config.decryptors) {
      Fail(ErrorCode::kInvalidConfig, "split must be smaller than the committee");
    }
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (config.scenario == "inconsistent-sets") return AttackInconsistentSets(config, out);
  return AttackInconsistentModel(config, out);
}

int CmdJoin(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.Validate();
    if (config.selection != SelectionMode::kDynamic) {
      Fail(ErrorCode::kInvalidConfig, "join requires --selection dynamic");
    }
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  Session session(config.ToSessionOptions());
  bool ok = true;
  auto iterate = [&](std::string_view label) {
    IterationResult r = session.RunIteration(config.mode, IdSet{});
    out << label << ": iteration " << r.iteration << " " << OutcomeName(r.outcome)
        << " over " << r.survivors.size() << " survivors\n";
    ok = ok && r.outcome == Outcome::kSumOk;
  };
  iterate("before join");
  if (config.new_clients > 0) {
    JoinReport j = session.JoinClients(config.new_clients);
    out << "joined clients:";
    for (ClientId id : j.added) out << ' ' << id;
    out << "\n  seed-share bytes from existing clients: " << j.existing_client_seedshare_bytes
        << "\n  bytes from existing decryptors: " << j.existing_decryptor_bytes << "\n";
    ok = ok && j.existing_client_seedshare_bytes == 0 && j.existing_decryptor_bytes == 0;
    iterate("after client join");
  }
  if (config.new_decryptors > 0) {
    uint64_t kappa2 = config.new_threshold != 0 ? config.new_threshold
                                                : session.access().AllMembers().size() + 1;
    JoinReport j = session.JoinDecryptors(config.new_decryptors, kappa2);
    if (j.error) {
      out << "decryptor join rejected: " << j.error_message << "\n";
      return *j.error == ErrorCode::kDegenerateExtension || *j.error == ErrorCode::kInvalidConfig
                 ? kExitConfig
                 : kExitAbort;
    }
    out << "joined decryptors (threshold " << kappa2 << "):";
    for (ClientId id : j.added) out << ' ' << id;
    out << "\n  bytes from existing decryptors: " << j.existing_decryptor_bytes << "\n";
    ok = ok && j.existing_decryptor_bytes == 0;
    iterate("after decryptor join");
  }
  if (!WriteCsv(session.metrics(), config.out, err)) return kExitConfig;
  return ok ? kExitOk : kExitAbort;
}

}  // namespace secagg
