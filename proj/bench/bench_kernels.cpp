// Copyright 2026 The geomgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference vs OpenMP kernels: the angle-grid fidelity average and
// the sweep worker pool.

#include <benchmark/benchmark.h>

#include "geomgate/experiments.hpp"
#include "geomgate/metrics.hpp"

using namespace geomgate;

namespace {

InitialStateFamily blockade_family(int grid) {
  InitialStateFamily fam;
  fam.kind = FamilyKind::BlockadePair4Angle;
  fam.grid_points_per_angle = grid;
  fam.carriers = blockade_carriers(Frame::Full);
  return fam;
}

const Matrix& bench_unitary() {
  static const Matrix u = [] {
    GateSpec g;
    g.theta = kPi / 2.0;
    const auto s = loop_schedule(4.0, g, true);
    return run_loop_unitary(s, {Scheme::BlockadePair, Frame::Full, 50.0})
        .final;
  }();
  return u;
}

void BM_AverageFidelityReference(benchmark::State& state) {
  const auto fam = blockade_family(static_cast<int>(state.range(0)));
  const Matrix target =
      blockade_gate_target({kPi / 2.0, 0.0, 0.0, 0.0}).topLeftCorner(3, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        average_fidelity_reference(bench_unitary(), target, fam));
  }
}

void BM_AverageFidelityParallel(benchmark::State& state) {
  const auto fam = blockade_family(static_cast<int>(state.range(0)));
  const Matrix target =
      blockade_gate_target({kPi / 2.0, 0.0, 0.0, 0.0}).topLeftCorner(3, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(average_fidelity(bench_unitary(), target, fam));
  }
}

double sweep_point(int index) {
  GateSpec g;
  g.theta = kPi;
  const auto s = loop_schedule(1.0 + 0.25 * index, g, true);
  const auto run =
      run_loop_unitary(s, {Scheme::SingleThreeLevel, Frame::Effective});
  InitialStateFamily fam;
  fam.kind = FamilyKind::SingleQubit2Angle;
  fam.carriers = single_bright_frame_carriers(g.theta, g.psi);
  return average_fidelity(run.final, single_gate_target(g), fam);
}

void BM_SweepSerial(benchmark::State& state) {
  const int points = static_cast<int>(state.range(0));
  std::vector<double> out(points);
  for (auto _ : state) {
    sweep_map(points, [&](int i) { out[i] = sweep_point(i); }, 1);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_SweepParallel(benchmark::State& state) {
  const int points = static_cast<int>(state.range(0));
  std::vector<double> out(points);
  for (auto _ : state) {
    sweep_map(points, [&](int i) { out[i] = sweep_point(i); }, 0);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_AverageFidelityReference)->Arg(8)->Arg(16);
BENCHMARK(BM_AverageFidelityParallel)->Arg(8)->Arg(16);
BENCHMARK(BM_SweepSerial)->Arg(16);
BENCHMARK(BM_SweepParallel)->Arg(16);

BENCHMARK_MAIN();
