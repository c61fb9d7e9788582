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

#ifndef SECAGG_HARNESS_H_
#define SECAGG_HARNESS_H_

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <string_view>

#include "secagg/session.h"

namespace secagg {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitAbort = 3;
inline constexpr int kExitAttackFailed = 4;

struct ExperimentConfig {
  uint64_t clients = 100;
  uint64_t participants = 0;  // 0: every client
  uint64_t select_numerator = 1;
  uint64_t select_denominator = 1;
  uint64_t decryptors = 40;
  uint64_t threshold = 0;  // 0: smallest value passing the threshold gate
  double dropout = 0.05;
  double eta_c = 0.0;
  double eta_d = -1.0;  // negative: equal to the dropout rate
  size_t len = 16000;
  uint64_t iters = 1;
  CrossCheckMode mode = CrossCheckMode::kOneRound;
  SelectionMode selection = SelectionMode::kStatic;
  GroupBackend group = GroupBackend::kProduction;
  uint64_t degree = 16;
  uint64_t seed = 1;
  uint64_t trials = 1;
  bool full_range = false;
  bool measure_cpu = false;
  AbortRule abort_rule = AbortRule::kSurvivorFraction;
  uint64_t base_delay_ms = 50;
  uint64_t jitter_ms = 20;
  std::string out;

  // attack
  std::string scenario = "inconsistent-sets";
  uint64_t split = 0;  // size of decryptor partition B; 0: half

  // join
  uint64_t new_clients = 2;
  uint64_t new_decryptors = 0;
  uint64_t new_threshold = 0;  // 0: N_1 + 1

  double effective_eta_d() const { return eta_d < 0 ? dropout : eta_d; }
  uint64_t effective_threshold() const;
  // Error(kInvalidConfig) for any invalid field, including the threshold gate.
  void Validate() const;
  SessionOptions ToSessionOptions(uint64_t seed_offset = 0) const;
};

// Smallest kappa with 2 kappa > (1 + eta_c - eta_d) n_I.
uint64_t MinimalThreshold(uint64_t num_decryptors, double eta_c, double eta_d);

// One "key = value" assignment; keys are the long flag names without
// dashes. Error(kInvalidConfig) for unknown keys or bad values.
void ApplyConfigValue(ExperimentConfig& config, std::string_view key,
                      std::string_view value);
// Flat key=value file; '#' starts a comment.
void LoadConfigFile(ExperimentConfig& config, const std::string& path);

int CmdRun(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int CmdAttack(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int CmdJoin(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace secagg

#endif  // SECAGG_HARNESS_H_
