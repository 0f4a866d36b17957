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

#include <string>
#include <utility>
#include <vector>

#include "geomgate/pulse.hpp"
#include "geomgate/types.hpp"

namespace geomgate {

// Fixed basis orderings.  Every matrix, state vector and CSV column in the
// project uses these; do not reorder.
//
//   single, full frame      {|0>, |1>, |2>}
//   single, bright frame    {|b>, |1>, |d>}
//   blockade, full frame    {|gg>, |ge>, |eg>, |ee>}   (atom1 is the slow index)
//   blockade, effective     {|gg>, |ge>, |eg>}
//   mediated, 5-dim         {|00e>, |10g>, |01g>, |20g>, |02g>}
//   mediated, effective     {|02g>, |phi0>, |20g>}
//   mediated, 8-dim sector  {|01e>, |02e>, |10e>, |11g>, |12g>, |20e>, |21g>, |22g>}
//
// Gate targets: single on {|0>, |2>}; blockade on {|gg>, |ge>, |eg>, |ee>};
// mediated on {|00>, |02>, |20>, |22>}.

enum class Scheme { SingleThreeLevel, BlockadePair, Mediated };
enum class Frame { Effective, Full };

struct SchemeConfig {
  Scheme scheme = Scheme::SingleThreeLevel;
  Frame frame = Frame::Full;
  double V = 0.0;        // blockade interaction
  double g1 = 0.0;       // mediated couplings
  double g2 = 0.0;

  double coupling_scale() const { return std::hypot(g1, g2); }  // G
  int dimension() const;
  // Throws std::invalid_argument on V <= 0 (blockade) or g1,g2 <= 0 (mediated).
  void validate() const;
};

struct GateSpec {
  double theta = 0.0;
  double psi = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;

  double eta() const { return kPi + phi1 - phi2; }
  static GateSpec from_schedule(const PulseSchedule& s) {
    return GateSpec{s.theta, s.psi, s.phi1, s.phi2};
  }
};

struct BasisSet {
  std::vector<std::string> labels;
  Matrix vectors;  // ambient_dim x n, one orthonormal column per label
};

struct NoiseConfig {
  double gamma_minus = 0.0;
  double gamma_z = 0.0;
  void validate() const;
};

// --- single-qubit scheme -------------------------------------------------

// Rotating-frame three-level Hamiltonian on {|0>,|1>,|2>}: drive couplings
// on the off-diagonals, diag(0, -2*Delta, 0).  TQD-aware through drive_pair.
Matrix single_rotating(double t, const PulseSchedule& s);

// Traceless bright-sector block on {|b>,|1>}:
//   [[Delta, A e^{-i phi}], [A* e^{i phi}, -Delta]],  A = Omega (- i Lambda).
// The full three-level matrix in {|b>,|1>,|d>} equals
// (this block - Delta*I) (+) [0].
Matrix single_bright_block(double t, const PulseSchedule& s);

// |b> = sin(theta/2) c0 + cos(theta/2) e^{i psi} c2,
// |d> = cos(theta/2) c0 - sin(theta/2) e^{i psi} c2,
// with c0, c2 the two orthonormal carrier columns of `mapping`.
BasisSet bright_dark_basis(double theta, double psi, const Matrix& mapping);

// Instantaneous eigenvectors of the bright block (TQD off) in {|b>,|1>}:
//   |E+> = cos(phi/2)|b> + sin(phi/2) e^{i phi_now} |1>,
//   |E-> = -sin(phi/2) e^{-i phi_now} |b> + cos(phi/2)|1>,
// with eigenvalues +-E.
struct InstantEigen {
  Eigen::Vector2cd plus;
  Eigen::Vector2cd minus;
  double energy = 0.0;
};
InstantEigen instantaneous_eigenstates(double t, const PulseSchedule& s);

// exp(i (eta/2) n.sigma) on {|0>,|2>} with
// n = (sin th cos psi, sin th sin psi, -cos th), eta = pi + phi1 - phi2.
Matrix single_gate_target(const GateSpec& g);

// --- blockade pair scheme ------------------------------------------------

// Frame rotated by exp(i V t |ee><ee|): couplings into |ee> carry
// e^{-+ i V t}, diagonal (0, -2D, -2D, -4D).
Matrix blockade_full(double t, const PulseSchedule& s, double V);

// Frame used by the two-atom master equation: no oscillating factors,
// V stays on the diagonal, (0, -2D, -2D, V - 4D).
Matrix blockade_master(double t, const PulseSchedule& s, double V);

// Blockade-regime effective Hamiltonian on {|gg>,|ge>,|eg>},
// diagonal (0, -2D, -2D).
Matrix blockade_effective(double t, const PulseSchedule& s);

// Two-qubit gate on {|gg>,|ge>,|eg>,|ee>} with phases eta_{+-} = +-eta.
Matrix blockade_gate_target(const GateSpec& g);

// --- mediated scheme -----------------------------------------------------

// Physical drive pair (omega1, omega2) that makes the effective frame see
// the canonical (Omega, phi, theta, psi) parameterization:
//   omega1 =  (G/g2) (Omega - i Lambda) cos(theta/2) e^{-i phi + i psi},
//   omega2 = -(G/g1) (Omega - i Lambda) sin(theta/2) e^{-i phi}.
std::pair<Complex, Complex> mediated_drive_pair(double t,
                                                const PulseSchedule& s,
                                                double g1, double g2);

// Five-dimensional invariant subspace {|00e>,|10g>,|01g>,|20g>,|02g>}.
Matrix mediated_sub5(double t, const PulseSchedule& s, double g1, double g2);

// Effective Hamiltonian on {|02g>,|phi0>,|20g>}; form-identical to
// single_rotating after the drive substitution.
Matrix mediated_effective(double t, const PulseSchedule& s, double g1,
                          double g2);

// Eigenstates {|phi0>, |phi+>, |phi->} of the static coupling Hamiltonian
// in the 5-dim subspace, with eigenvalues {0, +G, -G}.
BasisSet mediated_dark_sector(double g1, double g2);

// Eight-dimensional sector reachable from |22g>, with explicit drives.
Matrix mediated_sub8_raw(const Complex& omega1, const Complex& omega2,
                         double delta, double g1, double g2);
Matrix mediated_sub8(double t, const PulseSchedule& s, double g1, double g2);

// Propagates |22g> over one loop and reports 1 - |<22g|psi(T)>|^2.
struct SectorReport {
  double leakage = 0.0;
  double drive_to_coupling_ratio = 0.0;  // max |omega| / min(g1, g2)
  bool coupling_dominates = true;        // false => ratio warning
};
SectorReport verify_22g_sector(const PulseSchedule& s, double g1, double g2);

// Two-qubit gate on {|00>,|02>,|20>,|22>} with eta = pi + phi1 - phi2.
Matrix mediated_gate_target(const GateSpec& g);

// --- dissipation ----------------------------------------------------------

// Collapse operators with their rates, embedded in the scheme's full space.
// Single: sigma0- = |0><1|, sigma2- = |1><2|, sigma0z = |1><1| - |0><0|,
// sigma2z = |2><2| - |1><1|.  Blockade: per-atom sigma- and sigmaz tensored
// with the identity.  Zero-rate channels are dropped.  Mediated: throws
// (no noise model is defined for it).
std::vector<std::pair<Matrix, double>> collapse_ops(const SchemeConfig& c,
                                                    const NoiseConfig& n);

// --- carrier embeddings for the fidelity families --------------------------

// Columns are the computational carrier states in the simulation frame.
Matrix single_bright_frame_carriers(double theta, double psi);  // {|0>,|2>} in {b,1,d}
Matrix single_full_frame_carriers();                            // {|0>,|2>} in {0,1,2}
Matrix blockade_carriers(Frame frame);                          // {|gg>,|ge>,|eg>}
Matrix mediated_carriers(Frame frame);                          // {|20g>,|02g>}

}  // namespace geomgate
