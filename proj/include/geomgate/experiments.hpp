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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geomgate/metrics.hpp"
#include "geomgate/minitoml.hpp"

namespace geomgate {

// The named experiments map one-to-one onto the reproduced studies:
//   fig2   single qubit, final fidelity vs loop time, 4 gates x TQD on/off
//   fig3   single qubit, fidelity dynamics at ET=6
//   fig4   single qubit, F(T) vs decay rate, one channel at a time, ET=14
//   fig5   single qubit, F(T) map over (gamma-, gamma_z), sigma_z, ET=14
//   fig6   blockade pair, final fidelity vs loop time, theta in {pi/2, pi}
//   fig6b  blockade pair, fidelity dynamics at ET=20
//   fig7   blockade pair, final fidelity vs interaction V at ET=20
//   fig8   blockade pair, F(T) map over (gamma-, gamma_z) at ET=20
//   fig9   mediated pair, SWAP fidelity vs loop time plus dynamics at ET=20
//   custom user-defined single sweep
enum class ExperimentKind {
  Fig2FinalFidelityVsT,
  Fig3FidelityDynamics,
  Fig4NoiseLines,
  Fig5NoiseMap,
  Fig6DoubleFinalVsT,
  Fig6bDoubleDynamics,
  Fig7VSweep,
  Fig8DoubleNoiseMap,
  Fig9MediatedSwap,
  Custom,
};

const char* experiment_name(ExperimentKind kind);
std::optional<ExperimentKind> experiment_from_name(const std::string& name);

enum class NamedGate { SigmaX, SigmaY, SigmaZ, Pi8 };
GateSpec named_gate(NamedGate gate);
const char* named_gate_label(NamedGate gate);

// Schedule for one closed loop implementing the given gate angles.
PulseSchedule loop_schedule(double total_time, const GateSpec& gate, bool tqd);

struct SweepSpec {
  std::string variable = "T";  // T | V | gamma_minus | gamma_z
  double min = 0.0;
  double max = 0.0;
  int points = 1;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Custom;
  PulseSchedule schedule;
  SchemeConfig scheme;
  std::optional<NoiseConfig> noise;
  GateSpec gate;
  SweepSpec sweep;
  std::string output = "out";
  int workers = 0;  // 0 = one per hardware thread
  int fidelity_grid = 8;
  int store_samples = 600;
  bool dump_amplitudes = false;
};

// Reads a config; figure experiments fill unset keys with the studied
// parameter values.  Throws std::invalid_argument / minitoml::ParseError.
ExperimentConfig config_from_toml(const minitoml::Document& doc);
ExperimentConfig config_from_file(const std::string& path);

// All violations, without running anything.  Empty means well-formed.
std::vector<std::string> validate(const ExperimentConfig& cfg);

struct ExperimentResult {
  // (file name, CSV content) pairs; deterministic for a fixed config.
  std::vector<std::pair<std::string, std::string>> files;
  std::vector<std::string> band_lines;  // per-band pass/fail messages
  bool band_pass = true;
  std::string summary;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Deterministic parallel map: evaluates fn(0..n-1) on a worker pool
// (workers = 1 runs the plain serial loop, 0 uses all cores); results must
// be written by index so serial and parallel sweeps agree byte-for-byte.
void sweep_map(int n, const std::function<void(int)>& fn, int workers);

// FNV-1a over the canonical config dump; printed in every CSV row.
std::uint64_t fnv1a64(const std::string& text);
std::string format_sig(double value);  // %.12g, the CSV float format

}  // namespace geomgate
