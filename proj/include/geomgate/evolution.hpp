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

#include <functional>
#include <utility>
#include <vector>

#include "geomgate/hamiltonians.hpp"
#include "geomgate/types.hpp"

namespace geomgate {

using HamFn = std::function<Matrix(double)>;

// Classical fixed-step RK4.  Breakpoints are always grid points: the
// integration is split so no step straddles a drive discontinuity, and the
// right endpoint of each segment is evaluated as a left limit (the schedule
// jumps pi -> 0 and phi1 -> phi2 exactly at t_f).  No renormalization is
// performed; drift beyond 1e-6 throws IntegrationError.
template <class StateT>
struct EvolutionResult {
  std::vector<double> times;       // sample times, when storing
  std::vector<StateT> trajectory;  // one entry per sample time
  StateT final;
  double drift = 0.0;  // max |norm - 1| (states/unitaries) or |tr - 1| (rho)
};

using StateResult = EvolutionResult<Vector>;
using MatrixResult = EvolutionResult<Matrix>;

// Step selection: (max_t |H(t)|_2) * step <= norm_budget, step <= cap * T,
// and fast_frequency * step <= phase_budget when an oscillating coupling
// (frequency V) is not visible in the matrix norm.  RK4 damps the norm by
// (|H| h)^6 / 144 per step, so runs with a monitored norm additionally cap
// the accumulated damping T |H|^6 h^5 / 144 at drift_budget (0 disables;
// Lindblad runs do, the RK4 stages preserve the trace identically).
struct StepPolicy {
  double norm_budget = 0.05;
  double time_fraction_cap = 1e-3;
  double phase_budget = 0.1;
  double drift_budget = 1e-9;
};

double choose_step(const HamFn& h, double total_time,
                   const std::vector<double>& breakpoints,
                   double fast_frequency, const StepPolicy& policy = {});

// i d(psi)/dt = H(t) psi, hbar = 1.
StateResult propagate_state(const HamFn& h, const Vector& psi0,
                            double total_time,
                            const std::vector<double>& breakpoints, double step,
                            int store_samples = 0);

// Full propagator from the identity; unitary to integration accuracy.
MatrixResult propagate_unitary(const HamFn& h, int dim, double total_time,
                               const std::vector<double>& breakpoints,
                               double step, int store_samples = 0);

// d(rho)/dt = -i[H, rho] + sum_k rate_k (A rho A+ - 1/2 {A+A, rho}).
MatrixResult propagate_lindblad(
    const HamFn& h, const Matrix& rho0,
    const std::vector<std::pair<Matrix, double>>& ops, double total_time,
    const std::vector<double>& breakpoints, double step,
    int store_samples = 0);

// Density-matrix sanity numbers (trace, Hermiticity, positivity floor).
struct DensityChecks {
  double trace_error = 0.0;
  double hermiticity_residual = 0.0;
  double min_eigenvalue = 0.0;
};
DensityChecks density_checks(const Matrix& rho);

// Scheme dispatch.  master_frame selects the frame the two-atom master
// equation is written in (V on the diagonal instead of e^{+-iVt} factors);
// it only affects BlockadePair/Full.
struct SchemeHamiltonian {
  HamFn h;
  int dim = 0;
  double fast_frequency = 0.0;
};
SchemeHamiltonian scheme_hamiltonian(const SchemeConfig& c,
                                     const PulseSchedule& s,
                                     bool master_frame = false);

// Two-stage loop runners.  step_override = 0 picks the step automatically.
StateResult run_loop(const PulseSchedule& s, const SchemeConfig& c,
                     const Vector& psi0, int store_samples = 0,
                     double step_override = 0.0);
MatrixResult run_loop_unitary(const PulseSchedule& s, const SchemeConfig& c,
                              int store_samples = 0,
                              double step_override = 0.0);
MatrixResult run_loop(const PulseSchedule& s, const SchemeConfig& c,
                      const NoiseConfig& noise, const Matrix& rho0,
                      int store_samples = 0, double step_override = 0.0);

}  // namespace geomgate
