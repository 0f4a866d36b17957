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

#include "geomgate/pulse.hpp"

#include <cmath>
#include <stdexcept>

namespace geomgate {

namespace {
constexpr int kPhasePanels = 10000;  // per segment
}

void PulseSchedule::validate() const {
  if (!(total_time > 0.0)) {
    throw std::invalid_argument("PulseSchedule: total_time must be > 0");
  }
  if (!(energy_scale > 0.0)) {
    throw std::invalid_argument("PulseSchedule: energy_scale must be > 0");
  }
}

double phi_profile(double t, double t_f) {
  if (!(t_f > 0.0)) {
    throw std::domain_error("phi_profile: t_f must be > 0");
  }
  if (t < 0.0 || t > 2.0 * t_f) {
    throw std::domain_error("phi_profile: t outside [0, 2*t_f]");
  }
  const double local = (t < t_f) ? t : t - t_f;
  const double tau = local / t_f;
  return kPi * tau * tau * (3.0 - 2.0 * tau);
}

double phi_profile_rate(double t, double t_f) {
  if (!(t_f > 0.0)) {
    throw std::domain_error("phi_profile_rate: t_f must be > 0");
  }
  if (t < 0.0 || t > 2.0 * t_f) {
    throw std::domain_error("phi_profile_rate: t outside [0, 2*t_f]");
  }
  const double local = (t < t_f) ? t : t - t_f;
  const double tau = local / t_f;
  return 6.0 * kPi / t_f * (tau - tau * tau);
}

std::pair<double, double> omega_delta(double t, const PulseSchedule& s) {
  const double phi = phi_profile(t, s.t_f());
  const double e = s.energy_scale;
  return {e * std::sin(phi), e * std::cos(phi)};
}

double lambda_cd(double t, const PulseSchedule& s) {
  const double t_f = s.t_f();
  const double phi = phi_profile(t, t_f);
  const double rate = phi_profile_rate(t, t_f);
  const double e = s.energy_scale;
  const double omega = e * std::sin(phi);
  const double delta = e * std::cos(phi);
  const double omega_dot = e * std::cos(phi) * rate;
  const double delta_dot = -e * std::sin(phi) * rate;
  return (omega_dot * delta - omega * delta_dot) / (2.0 * e * e);
}

DriveSample drive_pair(double t, const PulseSchedule& s) {
  const auto [omega, delta] = omega_delta(t, s);
  const double lambda = lambda_cd(t, s);
  const double phi_now = (t < s.t_f()) ? s.phi1 : s.phi2;
  const Complex amp(omega, s.tqd_enabled ? -lambda : 0.0);

  DriveSample d;
  d.omega1 = amp * std::sin(0.5 * s.theta) * std::polar(1.0, -phi_now);
  d.omega2 = amp * std::cos(0.5 * s.theta) * std::polar(1.0, -phi_now + s.psi);
  d.delta = delta;
  d.lambda_cd = lambda;
  d.phi_now = phi_now;
  return d;
}

double dynamical_phase(const PulseSchedule& s) {
  s.validate();
  const double e = s.energy_scale;
  return dynamical_phase([e](double) { return e; }, [e](double) { return e; },
                         s.t_f());
}

double dynamical_phase(const std::function<double(double)>& energy_seg1,
                       const std::function<double(double)>& energy_seg2,
                       double t_f) {
  const double first = detail::simpson(energy_seg1, 0.0, t_f, kPhasePanels);
  const double second = detail::simpson(energy_seg2, 0.0, t_f, kPhasePanels);
  return -(first - second);
}

double detuning_integral(const PulseSchedule& s, int segment) {
  s.validate();
  if (segment != 1 && segment != 2) {
    throw std::invalid_argument("detuning_integral: segment must be 1 or 2");
  }
  // Both segments run the same segment-local ramp.
  const double t_f = s.t_f();
  const double e = s.energy_scale;
  auto delta = [&](double local) {
    const double tau = local / t_f;
    return e * std::cos(kPi * tau * tau * (3.0 - 2.0 * tau));
  };
  return detail::simpson(delta, 0.0, t_f, kPhasePanels);
}

namespace detail {

double simpson(const std::function<double(double)>& f, double a, double b,
               int panels) {
  if (panels < 2) panels = 2;
  if (panels % 2 != 0) ++panels;
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) {
    sum += f(a + i * h) * ((i % 2 == 0) ? 2.0 : 4.0);
  }
  return sum * h / 3.0;
}

}  // namespace detail

}  // namespace geomgate
