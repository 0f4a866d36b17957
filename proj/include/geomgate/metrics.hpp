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

#include <utility>
#include <vector>

#include "geomgate/evolution.hpp"
#include "geomgate/hamiltonians.hpp"
#include "geomgate/types.hpp"

namespace geomgate {

// Families of parameterized initial states averaged over in the effective
// fidelity.  Carrier columns embed the computational states in the
// simulation frame; the coefficient patterns are
//   SingleQubit2Angle:   (cos a1, sin a1 e^{i a2})            on (|0>, |2>)
//   BlockadePair4Angle:  (cos a1, sin a1 cos a2 e^{i a3},
//                         sin a1 sin a2 e^{i a4})             on (|gg>,|ge>,|eg>)
//   MediatedSwap2Angle:  (cos a1, sin a1 e^{i a2})            on (|20g>,|02g>)
// with every angle uniform over [0, 2*pi).  The integrand is a trigonometric
// polynomial of degree <= 4 per angle, so any uniform grid with >= 5 points
// per angle integrates it exactly.
enum class FamilyKind { SingleQubit2Angle, BlockadePair4Angle, MediatedSwap2Angle };

struct InitialStateFamily {
  FamilyKind kind = FamilyKind::SingleQubit2Angle;
  int grid_points_per_angle = 8;
  Matrix carriers;  // ambient_dim x k, orthonormal columns

  int angle_count() const;
  int carrier_count() const;
  void validate() const;
};

// Mean of |<Psi_U| u_sim |Psi(0)>|^2 over the family's angle grid.
// u_target_block is k x k on the family's carrier order.  The sum is
// blocked over the first angle index and combined in index order, so the
// result is bitwise identical for any thread count.
double average_fidelity(const Matrix& u_sim, const Matrix& u_target_block,
                        const InitialStateFamily& family);

// Plain serial double loop kept as the reference implementation for the
// blocked kernel; agreement to ~1e-12 (summation order differs).
double average_fidelity_reference(const Matrix& u_sim,
                                  const Matrix& u_target_block,
                                  const InitialStateFamily& family);

// <target| rho |target>, clipped to [0, 1].
double state_fidelity(const Matrix& rho, const Vector& target);

// Average fidelity at every stored trajectory sample (the trajectory must
// hold propagators from run_loop_unitary).
std::vector<std::pair<double, double>> fidelity_timeseries(
    const MatrixResult& trajectory, const Matrix& u_target_block,
    const InitialStateFamily& family);

// One dissipative gate study: the loop is run with rho0 = |psi0><psi0| and
// scored by <target| rho(T) |target>.
struct NoiseStudy {
  PulseSchedule schedule;
  SchemeConfig scheme;
  Vector psi0;
  Vector target;
};

enum class RateAxis { Dissipation, Dephasing };

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
  std::vector<double> fidelities;
};

// Least-squares line through F(T) vs rate; rates must hold >= 3
// non-negative increasing values starting at 0.
SlopeFit decoherence_slopes(const NoiseStudy& study, RateAxis axis,
                            const std::vector<double>& rates);

}  // namespace geomgate
