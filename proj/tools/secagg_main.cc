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

// Command-line driver: secagg run | attack | join.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "secagg/error.h"
#include "secagg/harness.h"

namespace {

struct FlagSpec {
  const char* name;
  const char* help;
};

constexpr FlagSpec kValueFlags[] = {
    {"clients", "number of clients N"},
    {"participants", "clients selected per iteration (static selection; 0 = all)"},
    {"probability", "selection probability n/m (dynamic selection)"},
    {"decryptors", "committee size n_I"},
    {"threshold", "reconstruction threshold kappa (0 = smallest valid)"},
    {"dropout", "per-iteration client dropout rate"},
    {"eta-c", "corruption bound eta_C"},
    {"eta-d", "dropout bound eta_D (default: the dropout rate)"},
    {"len", "vector length l"},
    {"iters", "iterations T"},
    {"mode", "cross-check mode: oneround | tss"},
    {"selection", "participant selection: static | dynamic"},
    {"group", "group backend: production | test"},
    {"abort-rule", "server quorum rule: survivors | threshold"},
    {"degree", "expected neighbour degree"},
    {"seed", "session seed"},
    {"trials", "independent sessions with consecutive seeds"},
    {"base-delay-ms", "network base delay"},
    {"jitter-ms", "network jitter bound"},
    {"out", "CSV output path"},
};

void AddCommonFlags(CLI::App* app, std::map<std::string, std::string>& values,
                    std::vector<std::string>& order, bool& full_range, bool& cpu) {
  for (const FlagSpec& f : kValueFlags) {
    std::string name = f.name;
    app->add_option("--" + name, values[name], f.help)
        ->each([&order, name](const std::string&) { order.push_back(name); });
  }
  app->add_flag("--full-range", full_range, "draw inputs from the whole ring");
  app->add_flag("--cpu", cpu, "record handler CPU time (makes CSVs host-dependent)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated secure aggregation with one-round dropout recovery"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key=value configuration file");

  std::map<std::string, std::string> values;
  std::vector<std::string> order;
  bool full_range = false;
  bool cpu = false;

  CLI::App* run = app.add_subcommand("run", "run a session and export metrics");
  AddCommonFlags(run, values, order, full_range, cpu);

  CLI::App* attack = app.add_subcommand("attack", "run a scripted malicious-server scenario");
  AddCommonFlags(attack, values, order, full_range, cpu);
  attack->add_option("--scenario", values["scenario"], "inconsistent-sets | inconsistent-model")
      ->each([&order](const std::string&) { order.push_back("scenario"); });
  attack->add_option("--split", values["split"], "size of decryptor partition B")
      ->each([&order](const std::string&) { order.push_back("split"); });

  CLI::App* join = app.add_subcommand("join", "add clients and decryptors mid-session");
  AddCommonFlags(join, values, order, full_range, cpu);
  for (const char* name : {"new-clients", "new-decryptors", "new-threshold"}) {
    std::string key = name;
    join->add_option("--" + key, values[key], "")
        ->each([&order, key](const std::string&) { order.push_back(key); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : secagg::kExitConfig;
  }

  secagg::ExperimentConfig config;
  if (attack->parsed()) {
    // Attack scenarios default to a small committee that splits below kappa.
    config.clients = 20;
    config.decryptors = 6;
    config.threshold = 4;
    config.len = 64;
    config.dropout = 0.0;
    config.eta_d = 0.1;
  }
  if (join->parsed()) {
    config.clients = 10;
    config.decryptors = 4;
    config.threshold = 3;
    config.len = 64;
    config.dropout = 0.0;
    config.eta_d = 0.0;
    config.selection = secagg::SelectionMode::kDynamic;
  }
  try {
    if (!config_path.empty()) secagg::LoadConfigFile(config, config_path);
    for (const std::string& key : order) secagg::ApplyConfigValue(config, key, values[key]);
    if (full_range) config.full_range = true;
    if (cpu) config.measure_cpu = true;
  } catch (const secagg::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return secagg::kExitConfig;
  }

  try {
    if (run->parsed()) return secagg::CmdRun(config, std::cout, std::cerr);
    if (attack->parsed()) return secagg::CmdAttack(config, std::cout, std::cerr);
    return secagg::CmdJoin(config, std::cout, std::cerr);
  } catch (const secagg::Error& e) {
    std::cerr << e.what() << "\n";
    return secagg::kExitAbort;
  }
}
