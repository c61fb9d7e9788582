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


#include <cstdint>
#include <map>
#include <vector>

#include "benchmark/benchmark.h"
#include "secagg/authcrypto.h"
#include "secagg/group.h"
#include "secagg/groupmath.h"
#include "secagg/rng.h"
#include "secagg/session.h"
#include "secagg/sharing.h"

namespace secagg {
namespace {

const Group& Prod() { return GetGroup(GroupBackend::kProduction); }

void BM_Exp(benchmark::State& state) {
  const Group& g = Prod();
  Rng rng(1);
  const GroupElement base = g.ExpBase(g.RandomScalar(rng));
  const Scalar e = g.RandomScalar(rng);
  for (auto _ : state) benchmark::DoNotOptimize(g.Exp(base, e));
}
BENCHMARK(BM_Exp);

void BM_MapToPoint(benchmark::State& state) {
  const Group& g = Prod();
  Bytes input(40, 7);
  uint64_t i = 0;
  for (auto _ : state) {
    input[0] = static_cast<uint8_t>(++i);
    benchmark::DoNotOptimize(MapToPoint(g, input));
  }
}
BENCHMARK(BM_MapToPoint);

void BM_KaAgreeSeed(benchmark::State& state) {
  const Group& g = Prod();
  Rng rng(2);
  const Scalar sk = g.RandomScalar(rng);
  const GroupElement pk = g.ExpBase(g.RandomScalar(rng));
  for (auto _ : state) benchmark::DoNotOptimize(KaAgreeSeed(g, sk, pk));
}
BENCHMARK(BM_KaAgreeSeed);

void BM_DsVerify(benchmark::State& state) {
  const Group& g = Prod();
  Rng rng(3);
  const Scalar sk = g.RandomScalar(rng);
  const GroupElement pk = g.ExpBase(sk);
  const Bytes m = ToBytes("online");
  const Bytes sig = DsSign(g, sk, m);
  for (auto _ : state) benchmark::DoNotOptimize(DsVerify(g, pk, sig, m));
}
BENCHMARK(BM_DsVerify);

void BM_PrgExpand(benchmark::State& state) {
  const Group& g = Prod();
  const GroupElement seed = g.Generator();
  const size_t length = static_cast<size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(PrgExpand(g, seed, length));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * length * 4));
}
BENCHMARK(BM_PrgExpand)->Arg(1000)->Arg(16000);

void BM_InterpolateInExponent(benchmark::State& state) {
  const Group& g = Prod();
  Rng rng(4);
  const uint64_t k = static_cast<uint64_t>(state.range(0));
  std::vector<uint64_t> ids;
  std::map<uint64_t, GroupElement> shares;
  for (uint64_t i = 1; i <= k; ++i) {
    ids.push_back(i);
    shares.emplace(i, g.ExpBase(g.RandomScalar(rng)));
  }
  const LagrangeCoefficients beta = LagrangeAtZero(g, ids);
  for (auto _ : state) benchmark::DoNotOptimize(InterpolateInExponent(g, shares, beta));
}
BENCHMARK(BM_InterpolateInExponent)->Arg(7)->Arg(20);

void BM_ShamirShare(benchmark::State& state) {
  const Group& g = Prod();
  Rng rng(5);
  const Scalar secret = g.RandomScalar(rng);
  std::vector<uint64_t> holders;
  for (uint64_t i = 1; i <= 40; ++i) holders.push_back(i);
  for (auto _ : state) benchmark::DoNotOptimize(ShamirShare(g, secret, 20, holders, rng));
}
BENCHMARK(BM_ShamirShare);

// One collection iteration end to end, setup excluded.
void BM_Iteration(benchmark::State& state) {
  SessionOptions o;
  o.clients = static_cast<uint64_t>(state.range(0));
  o.decryptors = 10;
  o.threshold = 6;
  o.dropout_rate = 0.05;
  o.vector_length = 1000;
  Session session(o);
  const DropoutPlan plan(0.05, 1);
  for (auto _ : state) {
    IterationResult r = session.RunIteration(CrossCheckMode::kOneRound, plan);
    if (r.outcome != Outcome::kSumOk) state.SkipWithError("iteration did not sum");
  }
}
BENCHMARK(BM_Iteration)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace secagg

BENCHMARK_MAIN();
