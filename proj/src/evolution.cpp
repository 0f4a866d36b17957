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

#include "geomgate/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace geomgate {

namespace {

constexpr double kDriftFailure = 1e-6;

std::vector<std::pair<double, double>> split_segments(
    double total_time, const std::vector<double>& breakpoints) {
  std::vector<double> cuts = breakpoints;
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<double, double>> segments;
  double left = 0.0;
  for (double c : cuts) {
    if (c <= left || c >= total_time) continue;
    segments.emplace_back(left, c);
    left = c;
  }
  segments.emplace_back(left, total_time);
  return segments;
}

// Generic RK4 driver shared by the three propagators.  `deriv(t, y, dy)`
// writes the derivative; `measure(y)` returns the conserved quantity
// (norm or trace) whose drift is monitored.
template <class StateT, class Deriv, class Measure>
void rk4_propagate(Deriv&& deriv, Measure&& measure, StateT& y,
                   double total_time, const std::vector<double>& breakpoints,
                   double step, int store_samples,
                   std::vector<double>* times_out,
                   std::vector<StateT>* traj_out, double* drift_out) {
  if (!(total_time > 0.0)) {
    throw std::invalid_argument("propagate: total_time must be > 0");
  }
  if (!(step > 0.0)) {
    throw std::invalid_argument("propagate: step must be > 0");
  }
  const auto segments = split_segments(total_time, breakpoints);

  long total_steps = 0;
  for (const auto& [a, b] : segments) {
    total_steps += std::max<long>(1, std::lround(std::ceil((b - a) / step)));
  }
  const long stride =
      store_samples > 0 ? std::max<long>(1, total_steps / store_samples) : 0;

  if (store_samples > 0) {
    times_out->push_back(0.0);
    traj_out->push_back(y);
  }

  StateT k1, k2, k3, k4, work;
  double drift = 0.0;
  long global_step = 0;

  for (const auto& [a, b] : segments) {
    const long n = std::max<long>(1, std::lround(std::ceil((b - a) / step)));
    const double h = (b - a) / static_cast<double>(n);
    // The right endpoint is evaluated as a left limit so the final RK4
    // stage of the segment never reads the next segment's branch.
    const double right_eval = std::nextafter(b, a);

    for (long i = 0; i < n; ++i) {
      const double t0 = a + i * h;
      const double t1 = (i + 1 == n) ? b : a + (i + 1) * h;
      const double tm = 0.5 * (t0 + t1);
      const double te = (i + 1 == n) ? right_eval : t1;

      deriv(t0, y, k1);
      work = y + (0.5 * h) * k1;
      deriv(tm, work, k2);
      work = y + (0.5 * h) * k2;
      deriv(tm, work, k3);
      work = y + h * k3;
      deriv(te, work, k4);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

      ++global_step;
      const double dev = std::abs(measure(y) - 1.0);
      drift = std::max(drift, dev);
      if (dev > kDriftFailure) {
        throw IntegrationError(
            "propagate: norm/trace drift exceeded 1e-6; reduce the step size");
      }
      if (stride > 0 && global_step % stride == 0 &&
          global_step != total_steps) {
        times_out->push_back(t1);
        traj_out->push_back(y);
      }
    }
  }

  if (store_samples > 0) {
    times_out->push_back(total_time);
    traj_out->push_back(y);
  }
  *drift_out = drift;
}

}  // namespace

double choose_step(const HamFn& h, double total_time,
                   const std::vector<double>& breakpoints,
                   double fast_frequency, const StepPolicy& policy) {
  const auto segments = split_segments(total_time, breakpoints);
  double max_norm = 0.0;
  const int samples = 256;
  for (const auto& [a, b] : segments) {
    for (int i = 0; i <= samples; ++i) {
      double t = a + (b - a) * i / samples;
      if (t >= b) t = std::nextafter(b, a);
      max_norm = std::max(max_norm, h(t).operatorNorm());
    }
  }

  double step = policy.time_fraction_cap * total_time;
  if (max_norm > 0.0) {
    step = std::min(step, policy.norm_budget / max_norm);
    if (policy.drift_budget > 0.0) {
      const double h5 = 144.0 * policy.drift_budget /
                        (total_time * std::pow(max_norm, 6.0));
      step = std::min(step, std::pow(h5, 0.2));
    }
  }
  if (fast_frequency > 0.0) {
    step = std::min(step, policy.phase_budget / fast_frequency);
  }
  return step;
}

StateResult propagate_state(const HamFn& h, const Vector& psi0,
                            double total_time,
                            const std::vector<double>& breakpoints, double step,
                            int store_samples) {
  if (std::abs(psi0.norm() - 1.0) > 1e-8) {
    throw std::invalid_argument("propagate_state: psi0 must be normalized");
  }
  StateResult result;
  result.final = psi0;
  auto deriv = [&h](double t, const Vector& y, Vector& dy) {
    dy = -kI * (h(t) * y);
  };
  auto measure = [](const Vector& y) { return y.norm(); };
  rk4_propagate(deriv, measure, result.final, total_time, breakpoints, step,
                store_samples, &result.times, &result.trajectory,
                &result.drift);
  return result;
}

MatrixResult propagate_unitary(const HamFn& h, int dim, double total_time,
                               const std::vector<double>& breakpoints,
                               double step, int store_samples) {
  MatrixResult result;
  result.final = Matrix::Identity(dim, dim);
  auto deriv = [&h](double t, const Matrix& y, Matrix& dy) {
    dy = -kI * (h(t) * y);
  };
  // Column norms stay 1 for unitary evolution; track the first column.
  auto measure = [](const Matrix& y) { return y.col(0).norm(); };
  rk4_propagate(deriv, measure, result.final, total_time, breakpoints, step,
                store_samples, &result.times, &result.trajectory,
                &result.drift);
  return result;
}

MatrixResult propagate_lindblad(
    const HamFn& h, const Matrix& rho0,
    const std::vector<std::pair<Matrix, double>>& ops, double total_time,
    const std::vector<double>& breakpoints, double step, int store_samples) {
  if (rho0.rows() != rho0.cols()) {
    throw std::invalid_argument("propagate_lindblad: rho0 must be square");
  }
  if (std::abs(rho0.trace().real() - 1.0) > 1e-8 ||
      std::abs(rho0.trace().imag()) > 1e-12) {
    throw std::invalid_argument("propagate_lindblad: tr(rho0) must be 1");
  }
  for (const auto& [a, rate] : ops) {
    if (a.rows() != rho0.rows() || a.cols() != rho0.cols()) {
      throw std::invalid_argument(
          "propagate_lindblad: collapse operator dimension mismatch");
    }
    if (rate < 0.0) {
      throw std::invalid_argument("propagate_lindblad: negative rate");
    }
  }

  struct Channel {
    Matrix a;
    Matrix ada;  // A+ A
    double rate;
  };
  std::vector<Channel> channels;
  channels.reserve(ops.size());
  for (const auto& [a, rate] : ops) {
    if (rate > 0.0) channels.push_back({a, a.adjoint() * a, rate});
  }

  MatrixResult result;
  result.final = rho0;
  auto deriv = [&](double t, const Matrix& rho, Matrix& drho) {
    const Matrix ham = h(t);
    drho = -kI * (ham * rho - rho * ham);
    for (const auto& ch : channels) {
      drho += ch.rate * (ch.a * rho * ch.a.adjoint() -
                         0.5 * (ch.ada * rho + rho * ch.ada));
    }
  };
  auto measure = [](const Matrix& rho) { return rho.trace().real(); };
  rk4_propagate(deriv, measure, result.final, total_time, breakpoints, step,
                store_samples, &result.times, &result.trajectory,
                &result.drift);
  return result;
}

DensityChecks density_checks(const Matrix& rho) {
  DensityChecks checks;
  checks.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  checks.hermiticity_residual = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      Matrix(0.5 * (rho + rho.adjoint())));
  checks.min_eigenvalue = solver.eigenvalues().minCoeff();
  return checks;
}

SchemeHamiltonian scheme_hamiltonian(const SchemeConfig& c,
                                     const PulseSchedule& s,
                                     bool master_frame) {
  s.validate();
  c.validate();
  SchemeHamiltonian out;
  out.dim = c.dimension();

  switch (c.scheme) {
    case Scheme::SingleThreeLevel:
      if (c.frame == Frame::Effective) {
        // bright-block frame {|b>,|1>,|d>}: traceless block plus the
        // exactly decoupled dark state
        out.h = [s](double t) {
          Matrix h = Matrix::Zero(3, 3);
          h.topLeftCorner(2, 2) = single_bright_block(t, s);
          return h;
        };
      } else {
        out.h = [s](double t) { return single_rotating(t, s); };
      }
      break;
    case Scheme::BlockadePair:
      if (c.frame == Frame::Effective) {
        out.h = [s](double t) { return blockade_effective(t, s); };
      } else if (master_frame) {
        const double v = c.V;
        out.h = [s, v](double t) { return blockade_master(t, s, v); };
        out.fast_frequency = v;
      } else {
        const double v = c.V;
        out.h = [s, v](double t) { return blockade_full(t, s, v); };
        out.fast_frequency = v;
      }
      break;
    case Scheme::Mediated: {
      const double g1 = c.g1, g2 = c.g2;
      if (c.frame == Frame::Effective) {
        out.h = [s, g1, g2](double t) {
          return mediated_effective(t, s, g1, g2);
        };
      } else {
        out.h = [s, g1, g2](double t) { return mediated_sub5(t, s, g1, g2); };
      }
      break;
    }
  }
  return out;
}

StateResult run_loop(const PulseSchedule& s, const SchemeConfig& c,
                     const Vector& psi0, int store_samples,
                     double step_override) {
  const auto sh = scheme_hamiltonian(c, s);
  if (psi0.size() != sh.dim) {
    throw std::invalid_argument("run_loop: initial state dimension mismatch");
  }
  const double step =
      step_override > 0.0
          ? step_override
          : choose_step(sh.h, s.total_time, {s.t_f()}, sh.fast_frequency);
  return propagate_state(sh.h, psi0, s.total_time, {s.t_f()}, step,
                         store_samples);
}

MatrixResult run_loop_unitary(const PulseSchedule& s, const SchemeConfig& c,
                              int store_samples, double step_override) {
  const auto sh = scheme_hamiltonian(c, s);
  const double step =
      step_override > 0.0
          ? step_override
          : choose_step(sh.h, s.total_time, {s.t_f()}, sh.fast_frequency);
  return propagate_unitary(sh.h, sh.dim, s.total_time, {s.t_f()}, step,
                           store_samples);
}

MatrixResult run_loop(const PulseSchedule& s, const SchemeConfig& c,
                      const NoiseConfig& noise, const Matrix& rho0,
                      int store_samples, double step_override) {
  if (c.scheme == Scheme::Mediated) {
    throw std::invalid_argument(
        "run_loop: no noise model defined by the paper for the mediated "
        "scheme");
  }
  if (c.frame != Frame::Full) {
    throw std::invalid_argument(
        "run_loop: dissipative runs require the full frame (the collapse "
        "operators live there)");
  }
  const auto sh = scheme_hamiltonian(c, s, /*master_frame=*/true);
  if (rho0.rows() != sh.dim || rho0.cols() != sh.dim) {
    throw std::invalid_argument("run_loop: rho0 dimension mismatch");
  }
  StepPolicy policy;
  policy.drift_budget = 0.0;  // RK4 stages are exactly trace-free
  const double step =
      step_override > 0.0
          ? step_override
          : choose_step(sh.h, s.total_time, {s.t_f()}, sh.fast_frequency,
                        policy);
  return propagate_lindblad(sh.h, rho0, collapse_ops(c, noise), s.total_time,
                            {s.t_f()}, step, store_samples);
}

}  // namespace geomgate
