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

#include "geomgate/hamiltonians.hpp"

#include <cmath>
#include <stdexcept>

#include "geomgate/evolution.hpp"

namespace geomgate {

namespace {

// A e^{-i phi_now} with A = Omega (- i Lambda when TQD is on).
Complex bright_drive(double t, const PulseSchedule& s) {
  const auto [omega, delta] = omega_delta(t, s);
  (void)delta;
  const double lambda = s.tqd_enabled ? lambda_cd(t, s) : 0.0;
  const double phi_now = (t < s.t_f()) ? s.phi1 : s.phi2;
  return Complex(omega, -lambda) * std::polar(1.0, -phi_now);
}

}  // namespace

int SchemeConfig::dimension() const {
  switch (scheme) {
    case Scheme::SingleThreeLevel:
      return 3;  // the effective frame keeps the decoupled dark row
    case Scheme::BlockadePair:
      return frame == Frame::Effective ? 3 : 4;
    case Scheme::Mediated:
      return frame == Frame::Effective ? 3 : 5;
  }
  return 0;
}

void SchemeConfig::validate() const {
  if (scheme == Scheme::BlockadePair && !(V > 0.0)) {
    throw std::invalid_argument("SchemeConfig: blockade requires V > 0");
  }
  if (scheme == Scheme::Mediated && (!(g1 > 0.0) || !(g2 > 0.0))) {
    throw std::invalid_argument(
        "SchemeConfig: mediated requires g1 > 0 and g2 > 0 (the drive map "
        "divides by both)");
  }
}

void NoiseConfig::validate() const {
  if (gamma_minus < 0.0 || gamma_z < 0.0) {
    throw std::invalid_argument("NoiseConfig: rates must be >= 0");
  }
}

Matrix single_rotating(double t, const PulseSchedule& s) {
  const DriveSample d = drive_pair(t, s);
  Matrix h = Matrix::Zero(3, 3);
  h(0, 1) = d.omega1;
  h(1, 0) = std::conj(d.omega1);
  h(2, 1) = d.omega2;
  h(1, 2) = std::conj(d.omega2);
  h(1, 1) = -2.0 * d.delta;
  return h;
}

Matrix single_bright_block(double t, const PulseSchedule& s) {
  const auto [omega, delta] = omega_delta(t, s);
  (void)omega;
  const Complex a = bright_drive(t, s);
  Matrix h(2, 2);
  h(0, 0) = delta;
  h(0, 1) = a;
  h(1, 0) = std::conj(a);
  h(1, 1) = -delta;
  return h;
}

BasisSet bright_dark_basis(double theta, double psi, const Matrix& mapping) {
  if (mapping.cols() != 2) {
    throw std::invalid_argument("bright_dark_basis: mapping needs 2 columns");
  }
  const Matrix gram = mapping.adjoint() * mapping;
  if ((gram - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument(
        "bright_dark_basis: mapping columns are not orthonormal");
  }
  const double sn = std::sin(0.5 * theta);
  const double cs = std::cos(0.5 * theta);
  const Complex phase = std::polar(1.0, psi);

  BasisSet out;
  out.labels = {"b", "d"};
  out.vectors.resize(mapping.rows(), 2);
  out.vectors.col(0) = sn * mapping.col(0) + cs * phase * mapping.col(1);
  out.vectors.col(1) = cs * mapping.col(0) - sn * phase * mapping.col(1);
  return out;
}

InstantEigen instantaneous_eigenstates(double t, const PulseSchedule& s) {
  const double phi = phi_profile(t, s.t_f());
  const double phi_now = (t < s.t_f()) ? s.phi1 : s.phi2;
  const double c = std::cos(0.5 * phi);
  const double sn = std::sin(0.5 * phi);

  InstantEigen e;
  e.plus << c, sn * std::polar(1.0, phi_now);
  e.minus << -sn * std::polar(1.0, -phi_now), c;
  e.energy = s.energy_scale;
  return e;
}

Matrix single_gate_target(const GateSpec& g) {
  const double eta = g.eta();
  const double ch = std::cos(0.5 * eta);
  const double sh = std::sin(0.5 * eta);
  const double ct = std::cos(g.theta);
  const double st = std::sin(g.theta);

  Matrix u(2, 2);
  u(0, 0) = ch - kI * sh * ct;
  u(0, 1) = kI * sh * st * std::polar(1.0, -g.psi);
  u(1, 0) = kI * sh * st * std::polar(1.0, g.psi);
  u(1, 1) = ch + kI * sh * ct;
  return u;
}

Matrix blockade_full(double t, const PulseSchedule& s, double V) {
  if (!(V > 0.0)) {
    throw std::invalid_argument("blockade_full: V must be > 0");
  }
  const DriveSample d = drive_pair(t, s);
  const Complex ee_phase = std::polar(1.0, -V * t);

  Matrix h = Matrix::Zero(4, 4);
  h(0, 1) = d.omega2;
  h(0, 2) = d.omega1;
  h(1, 3) = d.omega1 * ee_phase;
  h(2, 3) = d.omega2 * ee_phase;
  h(1, 0) = std::conj(h(0, 1));
  h(2, 0) = std::conj(h(0, 2));
  h(3, 1) = std::conj(h(1, 3));
  h(3, 2) = std::conj(h(2, 3));
  h(1, 1) = -2.0 * d.delta;
  h(2, 2) = -2.0 * d.delta;
  h(3, 3) = -4.0 * d.delta;
  return h;
}

Matrix blockade_master(double t, const PulseSchedule& s, double V) {
  if (!(V > 0.0)) {
    throw std::invalid_argument("blockade_master: V must be > 0");
  }
  const DriveSample d = drive_pair(t, s);

  Matrix h = Matrix::Zero(4, 4);
  h(0, 1) = d.omega2;
  h(0, 2) = d.omega1;
  h(1, 3) = d.omega1;
  h(2, 3) = d.omega2;
  h(1, 0) = std::conj(h(0, 1));
  h(2, 0) = std::conj(h(0, 2));
  h(3, 1) = std::conj(h(1, 3));
  h(3, 2) = std::conj(h(2, 3));
  h(1, 1) = -2.0 * d.delta;
  h(2, 2) = -2.0 * d.delta;
  h(3, 3) = V - 4.0 * d.delta;
  return h;
}

Matrix blockade_effective(double t, const PulseSchedule& s) {
  const DriveSample d = drive_pair(t, s);
  Matrix h = Matrix::Zero(3, 3);
  h(0, 1) = d.omega2;
  h(0, 2) = d.omega1;
  h(1, 0) = std::conj(d.omega2);
  h(2, 0) = std::conj(d.omega1);
  h(1, 1) = -2.0 * d.delta;
  h(2, 2) = -2.0 * d.delta;
  return h;
}

Matrix blockade_gate_target(const GateSpec& g) {
  const Complex ep = std::polar(1.0, g.eta());    // e^{i eta_+}
  const Complex em = std::polar(1.0, -g.eta());   // e^{i eta_-}
  const double s2 = std::sin(0.5 * g.theta) * std::sin(0.5 * g.theta);
  const double c2 = std::cos(0.5 * g.theta) * std::cos(0.5 * g.theta);
  const Complex mix = 0.5 * std::sin(g.theta) * (ep - 1.0);

  Matrix u = Matrix::Zero(4, 4);
  u(0, 0) = em;
  u(1, 1) = s2 + c2 * ep;
  u(1, 2) = mix * std::polar(1.0, g.psi);
  u(2, 1) = mix * std::polar(1.0, -g.psi);
  u(2, 2) = c2 + s2 * ep;
  u(3, 3) = 1.0;
  return u;
}

std::pair<Complex, Complex> mediated_drive_pair(double t,
                                                const PulseSchedule& s,
                                                double g1, double g2) {
  if (!(g1 > 0.0) || !(g2 > 0.0)) {
    throw std::invalid_argument("mediated_drive_pair: g1, g2 must be > 0");
  }
  const auto [omega, delta] = omega_delta(t, s);
  (void)delta;
  const double lambda = s.tqd_enabled ? lambda_cd(t, s) : 0.0;
  const double phi_now = (t < s.t_f()) ? s.phi1 : s.phi2;
  const Complex amp(omega, -lambda);
  const double big_g = std::hypot(g1, g2);

  const Complex omega1 = (big_g / g2) * amp * std::cos(0.5 * s.theta) *
                         std::polar(1.0, -phi_now + s.psi);
  const Complex omega2 =
      -(big_g / g1) * amp * std::sin(0.5 * s.theta) * std::polar(1.0, -phi_now);
  return {omega1, omega2};
}

Matrix mediated_sub5(double t, const PulseSchedule& s, double g1, double g2) {
  const auto [omega1, omega2] = mediated_drive_pair(t, s, g1, g2);
  const auto [omega, delta] = omega_delta(t, s);
  (void)omega;

  Matrix h = Matrix::Zero(5, 5);
  h(0, 1) = g1;
  h(0, 2) = g2;
  h(1, 0) = g1;
  h(2, 0) = g2;
  h(1, 3) = std::conj(omega1);
  h(3, 1) = omega1;
  h(2, 4) = std::conj(omega2);
  h(4, 2) = omega2;
  h(1, 1) = -2.0 * delta;
  h(2, 2) = -2.0 * delta;
  return h;
}

Matrix mediated_effective(double t, const PulseSchedule& s, double g1,
                          double g2) {
  const auto [omega1, omega2] = mediated_drive_pair(t, s, g1, g2);
  const auto [omega, delta] = omega_delta(t, s);
  (void)omega;
  const double big_g = std::hypot(g1, g2);

  Matrix h = Matrix::Zero(3, 3);
  h(0, 1) = -omega2 * g1 / big_g;
  h(1, 0) = std::conj(h(0, 1));
  h(2, 1) = omega1 * g2 / big_g;
  h(1, 2) = std::conj(h(2, 1));
  h(1, 1) = -2.0 * delta;
  return h;
}

BasisSet mediated_dark_sector(double g1, double g2) {
  if (!(g1 > 0.0) || !(g2 > 0.0)) {
    throw std::invalid_argument("mediated_dark_sector: g1, g2 must be > 0");
  }
  const double big_g = std::hypot(g1, g2);
  const double r2 = std::sqrt(2.0);

  BasisSet out;
  out.labels = {"phi0", "phi+", "phi-"};
  out.vectors = Matrix::Zero(5, 3);
  // {|00e>, |10g>, |01g>, |20g>, |02g>}
  out.vectors(1, 0) = g2 / big_g;
  out.vectors(2, 0) = -g1 / big_g;
  out.vectors(0, 1) = 1.0 / r2;
  out.vectors(1, 1) = g1 / (r2 * big_g);
  out.vectors(2, 1) = g2 / (r2 * big_g);
  out.vectors(0, 2) = -1.0 / r2;
  out.vectors(1, 2) = g1 / (r2 * big_g);
  out.vectors(2, 2) = g2 / (r2 * big_g);
  return out;
}

Matrix mediated_sub8_raw(const Complex& omega1, const Complex& omega2,
                         double delta, double g1, double g2) {
  // {|01e>, |02e>, |10e>, |11g>, |12g>, |20e>, |21g>, |22g>}
  Matrix h = Matrix::Zero(8, 8);
  h(0, 3) = g1;  // |01e> <-> |11g>
  h(2, 3) = g2;  // |10e> <-> |11g>
  h(1, 4) = g1;  // |02e> <-> |12g>
  h(5, 6) = g2;  // |20e> <-> |21g>
  h(1, 0) = omega2;  // |01e> -> |02e>
  h(5, 2) = omega1;  // |10e> -> |20e>
  h(6, 3) = omega1;  // |11g> -> |21g>
  h(4, 3) = omega2;  // |11g> -> |12g>
  h(7, 4) = omega1;  // |12g> -> |22g>
  h(7, 6) = omega2;  // |21g> -> |22g>
  Matrix full = h + Matrix(h.adjoint());
  full(0, 0) = -2.0 * delta;
  full(2, 2) = -2.0 * delta;
  full(3, 3) = -4.0 * delta;
  full(4, 4) = -2.0 * delta;
  full(6, 6) = -2.0 * delta;
  return full;
}

Matrix mediated_sub8(double t, const PulseSchedule& s, double g1, double g2) {
  const auto [omega1, omega2] = mediated_drive_pair(t, s, g1, g2);
  const auto [omega, delta] = omega_delta(t, s);
  (void)omega;
  return mediated_sub8_raw(omega1, omega2, delta, g1, g2);
}

SectorReport verify_22g_sector(const PulseSchedule& s, double g1, double g2) {
  s.validate();
  if (!(g1 > 0.0) || !(g2 > 0.0)) {
    throw std::invalid_argument("verify_22g_sector: g1, g2 must be > 0");
  }

  // Peak physical drive magnitude over the loop.
  double max_drive = 0.0;
  const int samples = 512;
  for (int i = 0; i <= samples; ++i) {
    double t = s.total_time * i / samples;
    if (t >= s.total_time) t = std::nextafter(s.total_time, 0.0);
    const auto [o1, o2] = mediated_drive_pair(t, s, g1, g2);
    max_drive = std::max({max_drive, std::abs(o1), std::abs(o2)});
  }

  auto h = [&](double t) { return mediated_sub8(t, s, g1, g2); };
  Vector psi0 = Vector::Zero(8);
  psi0(7) = 1.0;  // |22g>
  const double step = choose_step(h, s.total_time, {s.t_f()}, 0.0);
  const auto run = propagate_state(h, psi0, s.total_time, {s.t_f()}, step);

  SectorReport report;
  report.leakage = 1.0 - std::norm(run.final(7));
  report.drive_to_coupling_ratio = max_drive / std::min(g1, g2);
  report.coupling_dominates = report.drive_to_coupling_ratio < 0.1;
  return report;
}

Matrix mediated_gate_target(const GateSpec& g) {
  const Complex ph = std::polar(1.0, g.eta());
  const double s2 = std::sin(0.5 * g.theta) * std::sin(0.5 * g.theta);
  const double c2 = std::cos(0.5 * g.theta) * std::cos(0.5 * g.theta);
  const Complex mix = 0.5 * std::sin(g.theta) * (ph - 1.0);

  Matrix u = Matrix::Zero(4, 4);
  u(0, 0) = 1.0;
  u(1, 1) = c2 + s2 * ph;
  u(1, 2) = mix * std::polar(1.0, -g.psi);
  u(2, 1) = mix * std::polar(1.0, g.psi);
  u(2, 2) = s2 + c2 * ph;
  u(3, 3) = 1.0;
  return u;
}

std::vector<std::pair<Matrix, double>> collapse_ops(const SchemeConfig& c,
                                                    const NoiseConfig& n) {
  n.validate();
  std::vector<std::pair<Matrix, double>> ops;
  auto push = [&ops](Matrix m, double rate) {
    if (rate > 0.0) ops.emplace_back(std::move(m), rate);
  };

  switch (c.scheme) {
    case Scheme::SingleThreeLevel: {
      Matrix low0 = Matrix::Zero(3, 3);
      low0(0, 1) = 1.0;
      Matrix low2 = Matrix::Zero(3, 3);
      low2(1, 2) = 1.0;
      Matrix z0 = Matrix::Zero(3, 3);
      z0(1, 1) = 1.0;
      z0(0, 0) = -1.0;
      Matrix z2 = Matrix::Zero(3, 3);
      z2(2, 2) = 1.0;
      z2(1, 1) = -1.0;
      push(low0, n.gamma_minus);
      push(low2, n.gamma_minus);
      push(z0, n.gamma_z);
      push(z2, n.gamma_z);
      break;
    }
    case Scheme::BlockadePair: {
      Matrix lower = Matrix::Zero(2, 2);
      lower(0, 1) = 1.0;  // |g><e|
      Matrix dephase = Matrix::Zero(2, 2);
      dephase(1, 1) = 1.0;
      dephase(0, 0) = -1.0;  // |e><e| - |g><g|
      const Matrix id = Matrix::Identity(2, 2);
      auto kron = [](const Matrix& a, const Matrix& b) {
        Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
        for (int i = 0; i < a.rows(); ++i)
          for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
        return out;
      };
      push(kron(lower, id), n.gamma_minus);
      push(kron(id, lower), n.gamma_minus);
      push(kron(dephase, id), n.gamma_z);
      push(kron(id, dephase), n.gamma_z);
      break;
    }
    case Scheme::Mediated:
      throw std::invalid_argument(
          "collapse_ops: no noise model defined by the paper for the mediated "
          "scheme");
  }
  return ops;
}

Matrix single_bright_frame_carriers(double theta, double psi) {
  const double sn = std::sin(0.5 * theta);
  const double cs = std::cos(0.5 * theta);
  const Complex phase = std::polar(1.0, -psi);

  // Inverse of the bright/dark map: |0> = sin|b> + cos|d>,
  // |2> = e^{-i psi} (cos|b> - sin|d>).
  Matrix carriers = Matrix::Zero(3, 2);
  carriers(0, 0) = sn;
  carriers(2, 0) = cs;
  carriers(0, 1) = phase * cs;
  carriers(2, 1) = -phase * sn;
  return carriers;
}

Matrix single_full_frame_carriers() {
  Matrix carriers = Matrix::Zero(3, 2);
  carriers(0, 0) = 1.0;
  carriers(2, 1) = 1.0;
  return carriers;
}

Matrix blockade_carriers(Frame frame) {
  const int dim = frame == Frame::Effective ? 3 : 4;
  Matrix carriers = Matrix::Zero(dim, 3);
  carriers(0, 0) = 1.0;
  carriers(1, 1) = 1.0;
  carriers(2, 2) = 1.0;
  return carriers;
}

Matrix mediated_carriers(Frame frame) {
  if (frame == Frame::Effective) {
    // {|02g>, |phi0>, |20g>}: carriers (|20g>, |02g>)
    Matrix carriers = Matrix::Zero(3, 2);
    carriers(2, 0) = 1.0;
    carriers(0, 1) = 1.0;
    return carriers;
  }
  // {|00e>,|10g>,|01g>,|20g>,|02g>}: carriers (|20g>, |02g>)
  Matrix carriers = Matrix::Zero(5, 2);
  carriers(3, 0) = 1.0;
  carriers(4, 1) = 1.0;
  return carriers;
}

}  // namespace geomgate
