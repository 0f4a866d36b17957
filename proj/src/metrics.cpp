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

#include "geomgate/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace geomgate {

namespace {

struct AngleTable {
  std::vector<double> cos_v;
  std::vector<double> sin_v;
  std::vector<Complex> phase;  // e^{i alpha}
};

AngleTable make_table(int n) {
  AngleTable t;
  t.cos_v.resize(n);
  t.sin_v.resize(n);
  t.phase.resize(n);
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * kPi * i / n;
    t.cos_v[i] = std::cos(a);
    t.sin_v[i] = std::sin(a);
    t.phase[i] = std::polar(1.0, a);
  }
  return t;
}

// Sum of |c^dagger M c|^2 over the sub-grid with the first angle fixed.
double block_sum_2angle(const Matrix& m, const AngleTable& t, int i0) {
  const int n = static_cast<int>(t.cos_v.size());
  const Complex m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
  const double c1 = t.cos_v[i0];
  const double s1 = t.sin_v[i0];
  double acc = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    const Complex b = s1 * t.phase[i1];
    const Complex v0 = m00 * c1 + m01 * b;
    const Complex v1 = m10 * c1 + m11 * b;
    const Complex overlap = c1 * v0 + std::conj(b) * v1;
    acc += std::norm(overlap);
  }
  return acc;
}

double block_sum_4angle(const Matrix& m, const AngleTable& t, int i0) {
  const int n = static_cast<int>(t.cos_v.size());
  const double c1 = t.cos_v[i0];
  const double s1 = t.sin_v[i0];
  double acc = 0.0;
  Eigen::Vector3cd c, v;
  for (int i1 = 0; i1 < n; ++i1) {
    const double a2c = s1 * t.cos_v[i1];
    const double a2s = s1 * t.sin_v[i1];
    for (int i2 = 0; i2 < n; ++i2) {
      const Complex b1 = a2c * t.phase[i2];
      for (int i3 = 0; i3 < n; ++i3) {
        c << Complex(c1, 0.0), b1, a2s * t.phase[i3];
        c.normalize();  // guard rounding; the parameterization is unit-norm
        v.noalias() = m * c;
        acc += std::norm(c.dot(v));  // dot conjugates the left argument
      }
    }
  }
  return acc;
}

double grid_average(const Matrix& m, FamilyKind kind, int n) {
  const AngleTable table = make_table(n);
  std::vector<double> partials(n, 0.0);

#pragma omp parallel for schedule(static)
  for (int i0 = 0; i0 < n; ++i0) {
    partials[i0] = (kind == FamilyKind::BlockadePair4Angle)
                       ? block_sum_4angle(m, table, i0)
                       : block_sum_2angle(m, table, i0);
  }

  double total = 0.0;
  for (double p : partials) total += p;  // fixed combine order
  const int angles = (kind == FamilyKind::BlockadePair4Angle) ? 4 : 2;
  return total / std::pow(static_cast<double>(n), angles);
}

}  // namespace

int InitialStateFamily::angle_count() const {
  return kind == FamilyKind::BlockadePair4Angle ? 4 : 2;
}

int InitialStateFamily::carrier_count() const {
  return kind == FamilyKind::BlockadePair4Angle ? 3 : 2;
}

void InitialStateFamily::validate() const {
  if (grid_points_per_angle < 5) {
    throw std::invalid_argument(
        "InitialStateFamily: need >= 5 grid points per angle (quadrature "
        "exactness)");
  }
  if (carriers.cols() != carrier_count()) {
    throw std::invalid_argument(
        "InitialStateFamily: carrier count does not match the family kind");
  }
  const Matrix gram = carriers.adjoint() * carriers;
  if ((gram - Matrix::Identity(gram.rows(), gram.cols()))
          .cwiseAbs()
          .maxCoeff() > 1e-10) {
    throw std::invalid_argument(
        "InitialStateFamily: carriers are not orthonormal");
  }
}

double average_fidelity(const Matrix& u_sim, const Matrix& u_target_block,
                        const InitialStateFamily& family) {
  family.validate();
  const int k = family.carrier_count();
  if (u_sim.rows() != family.carriers.rows() ||
      u_sim.cols() != family.carriers.rows()) {
    throw std::invalid_argument("average_fidelity: u_sim dimension mismatch");
  }
  if (u_target_block.rows() != k || u_target_block.cols() != k) {
    throw std::invalid_argument(
        "average_fidelity: target block dimension mismatch");
  }
  // <Psi_U| U |Psi0> = c^+ [Ut^+ (C^+ U C)] c over coefficient vectors c.
  const Matrix m = u_target_block.adjoint() *
                   (family.carriers.adjoint() * u_sim * family.carriers);
  return grid_average(m, family.kind, family.grid_points_per_angle);
}

double average_fidelity_reference(const Matrix& u_sim,
                                  const Matrix& u_target_block,
                                  const InitialStateFamily& family) {
  family.validate();
  const Matrix m = u_target_block.adjoint() *
                   (family.carriers.adjoint() * u_sim * family.carriers);
  const int n = family.grid_points_per_angle;
  const int angles = family.angle_count();
  const int k = family.carrier_count();

  std::vector<int> idx(angles, 0);
  Vector c(k), v(k);
  double acc = 0.0;
  long count = 1;
  for (int a = 0; a < angles; ++a) count *= n;

  for (long flat = 0; flat < count; ++flat) {
    long rest = flat;
    for (int a = angles - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rest % n);
      rest /= n;
    }
    const double a1 = 2.0 * kPi * idx[0] / n;
    if (family.kind == FamilyKind::BlockadePair4Angle) {
      const double a2 = 2.0 * kPi * idx[1] / n;
      const double a3 = 2.0 * kPi * idx[2] / n;
      const double a4 = 2.0 * kPi * idx[3] / n;
      c << Complex(std::cos(a1), 0.0),
          std::sin(a1) * std::cos(a2) * std::polar(1.0, a3),
          std::sin(a1) * std::sin(a2) * std::polar(1.0, a4);
    } else {
      const double a2 = 2.0 * kPi * idx[1] / n;
      c << Complex(std::cos(a1), 0.0), std::sin(a1) * std::polar(1.0, a2);
    }
    c.normalize();  // guard rounding; the parameterization is unit-norm
    v.noalias() = m * c;
    acc += std::norm(c.dot(v));
  }
  return acc / static_cast<double>(count);
}

double state_fidelity(const Matrix& rho, const Vector& target) {
  if (rho.rows() != rho.cols() || rho.rows() != target.size()) {
    throw std::invalid_argument("state_fidelity: dimension mismatch");
  }
  const Complex raw = target.dot(rho * target);
  return std::clamp(raw.real(), 0.0, 1.0);
}

std::vector<std::pair<double, double>> fidelity_timeseries(
    const MatrixResult& trajectory, const Matrix& u_target_block,
    const InitialStateFamily& family) {
  if (trajectory.trajectory.empty()) {
    throw std::invalid_argument("fidelity_timeseries: trajectory not stored");
  }
  std::vector<std::pair<double, double>> series;
  series.reserve(trajectory.times.size());
  for (size_t i = 0; i < trajectory.times.size(); ++i) {
    series.emplace_back(
        trajectory.times[i],
        average_fidelity(trajectory.trajectory[i], u_target_block, family));
  }
  return series;
}

SlopeFit decoherence_slopes(const NoiseStudy& study, RateAxis axis,
                            const std::vector<double>& rates) {
  if (rates.size() < 3) {
    throw std::invalid_argument(
        "decoherence_slopes: need >= 3 rate points for a line fit");
  }
  if (rates.front() != 0.0) {
    throw std::invalid_argument("decoherence_slopes: rates must start at 0");
  }
  for (size_t i = 0; i < rates.size(); ++i) {
    if (rates[i] < 0.0 || (i > 0 && rates[i] <= rates[i - 1])) {
      throw std::invalid_argument(
          "decoherence_slopes: rates must be non-negative and increasing");
    }
  }

  const Matrix rho0 = study.psi0 * study.psi0.adjoint();
  const int n = static_cast<int>(rates.size());
  std::vector<double> f(n, 0.0);

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    NoiseConfig noise;
    (axis == RateAxis::Dissipation ? noise.gamma_minus : noise.gamma_z) =
        rates[i];
    const auto run = run_loop(study.schedule, study.scheme, noise, rho0);
    f[i] = state_fidelity(run.final, study.target);
  }

  // Closed-form least squares.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sx += rates[i];
    sy += f[i];
    sxx += rates[i] * rates[i];
    sxy += rates[i] * f[i];
  }
  SlopeFit fit;
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  for (int i = 0; i < n; ++i) {
    fit.max_residual = std::max(
        fit.max_residual,
        std::abs(f[i] - (fit.intercept + fit.slope * rates[i])));
  }
  fit.fidelities = std::move(f);
  return fit;
}

}  // namespace geomgate
