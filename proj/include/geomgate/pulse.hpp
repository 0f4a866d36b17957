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

#include "geomgate/types.hpp"

namespace geomgate {

// Drive schedule for one closed two-segment loop.
//
// The loop runs over [0, T] and is cut into two equal halves at
// t_f = T/2.  Within each half the polar angle phi(t) sweeps 0 -> pi
// along the cubic ramp; the constant drive phase is phi1 on the first
// half and phi2 on the second (t = t_f itself belongs to the second
// half).  All energies are in units of energy_scale, times in units of
// 1/energy_scale.
enum class PhiProfile { CubicPaper };

struct PulseSchedule {
  double energy_scale = 1.0;
  double total_time = 1.0;
  double theta = 0.0;
  double psi = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  bool tqd_enabled = false;
  PhiProfile profile = PhiProfile::CubicPaper;

  double t_f() const { return 0.5 * total_time; }
  // Throws std::invalid_argument on T <= 0 or E <= 0.
  void validate() const;
};

// One sample of the drive pair.  lambda_cd always carries the
// counterdiabatic amplitude Lambda(t); it enters omega1/omega2 only
// when the schedule has tqd_enabled set.
struct DriveSample {
  Complex omega1;
  Complex omega2;
  double delta = 0.0;
  double lambda_cd = 0.0;
  double phi_now = 0.0;
};

// Segment-wise cubic ramp 3*pi*tau^2 - 2*pi*tau^3 with tau the
// segment-local t/t_f.  Domain [0, 2*t_f]; throws std::domain_error
// outside.
double phi_profile(double t, double t_f);

// Analytic d(phi)/dt of the cubic ramp: (6*pi/t_f) * (tau - tau^2).
double phi_profile_rate(double t, double t_f);

// (Omega, Delta) = E * (sin phi, cos phi); Omega^2 + Delta^2 = E^2.
std::pair<double, double> omega_delta(double t, const PulseSchedule& s);

// Counterdiabatic amplitude Lambda = (dOmega*Delta - Omega*dDelta) / (2 E^2)
// from the analytic profile derivatives (never finite differences: the ramp
// is discontinuous at t_f and differencing across it would break the
// Lambda(t_f) = 0 boundary property).
double lambda_cd(double t, const PulseSchedule& s);

// Complex Rabi pair at time t.  Without TQD:
//   omega1 = Omega sin(theta/2) e^{-i phi},
//   omega2 = Omega cos(theta/2) e^{-i phi + i psi};
// with TQD the real amplitude Omega is replaced by Omega - i*Lambda.
DriveSample drive_pair(double t, const PulseSchedule& s);

// Accumulated dynamical phase
//   beta = -( int_0^{t_f} E_+ dt + int_{t_f}^{T} E_- dt )
// with E_+ = +E on the first segment and E_- = -E on the second.
// Zero for any schedule with constant E and equal segments.
double dynamical_phase(const PulseSchedule& s);

// Overload with explicit per-segment energy magnitudes (segment-local
// time in [0, t_f]); used to exercise non-cancelling splits.
double dynamical_phase(const std::function<double(double)>& energy_seg1,
                       const std::function<double(double)>& energy_seg2,
                       double t_f);

// Quadrature of Delta(t) over segment 1 or 2.  Vanishes for the cubic
// ramp: phi(t) + phi(t_f - t) = pi makes cos(phi) antisymmetric about
// the segment midpoint.
double detuning_integral(const PulseSchedule& s, int segment);

namespace detail {
// Composite Simpson rule; panels is rounded up to the next even count.
double simpson(const std::function<double(double)>& f, double a, double b,
               int panels);
}  // namespace detail

}  // namespace geomgate
