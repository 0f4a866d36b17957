#include <doctest.h>

#include <cmath>
#include <complex>

#include "geomgate/pulse.hpp"
#include "test_common.hpp"

using namespace geomgate;

namespace {

PulseSchedule make_schedule(double total_time, double theta, double psi,
                            double phi1, double phi2, bool tqd,
                            double e = 1.0) {
  PulseSchedule s;
  s.energy_scale = e;
  s.total_time = total_time;
  s.theta = theta;
  s.psi = psi;
  s.phi1 = phi1;
  s.phi2 = phi2;
  s.tqd_enabled = tqd;
  return s;
}

}  // namespace

TEST_CASE("phi_profile: cubic ramp endpoints and branch restart") {
  const double t_f = 1.3;
  CHECK(phi_profile(0.0, t_f) == doctest::Approx(0.0));
  CHECK(phi_profile(0.5 * t_f, t_f) == doctest::Approx(kPi / 2.0));
  // left limit at t_f is pi, the point itself restarts the second branch
  CHECK(phi_profile(std::nextafter(t_f, 0.0), t_f) ==
        doctest::Approx(kPi).epsilon(1e-12));
  CHECK(phi_profile(t_f, t_f) == doctest::Approx(0.0));
  CHECK(phi_profile(1.5 * t_f, t_f) == doctest::Approx(kPi / 2.0));
  CHECK(phi_profile(2.0 * t_f, t_f) == doctest::Approx(kPi));

  CHECK_THROWS_AS(phi_profile(-1e-9, t_f), std::domain_error);
  CHECK_THROWS_AS(phi_profile(2.0 * t_f + 1e-9, t_f), std::domain_error);

  // range stays inside [0, pi]
  for (int i = 0; i <= 1000; ++i) {
    const double phi = phi_profile(2.0 * t_f * i / 1000.0, t_f);
    CHECK(phi >= -1e-15);
    CHECK(phi <= kPi + 1e-15);
  }
}

TEST_CASE("phi_profile symmetry phi(t) + phi(t_f - t) = pi") {
  const double t_f = 0.7;
  for (int i = 0; i < 1000; ++i) {
    const double t = testutil::uniform(0.0, t_f);
    CHECK(phi_profile(t, t_f) + phi_profile(t_f - t, t_f) ==
          doctest::Approx(kPi).epsilon(1e-12));
  }
}

TEST_CASE("phi_profile_rate: analytic derivative values") {
  const double t_f = 2.0;
  CHECK(phi_profile_rate(0.0, t_f) == doctest::Approx(0.0));
  CHECK(phi_profile_rate(0.5 * t_f, t_f) ==
        doctest::Approx(1.5 * kPi / t_f));  // max of tau - tau^2 is 1/4
  CHECK(phi_profile_rate(std::nextafter(t_f, 0.0), t_f) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(phi_profile_rate(2.0 * t_f, t_f) == doctest::Approx(0.0));

  // cross-check against central differences away from the breakpoint
  for (int i = 0; i < 50; ++i) {
    const double t = testutil::uniform(1e-3, t_f - 1e-3);
    const double h = 1e-6;
    const double fd = (phi_profile(t + h, t_f) - phi_profile(t - h, t_f)) /
                      (2.0 * h);
    CHECK(phi_profile_rate(t, t_f) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("omega_delta: parameterization identity") {
  const auto s = make_schedule(3.0, kPi / 2.0, 0.0, 0.0, 0.0, false, 1.0);
  auto [o0, d0] = omega_delta(0.0, s);
  CHECK(o0 == doctest::Approx(0.0));
  CHECK(d0 == doctest::Approx(1.0));
  auto [om, dm] = omega_delta(0.25 * s.total_time, s);
  CHECK(om == doctest::Approx(1.0));
  CHECK(dm == doctest::Approx(0.0).epsilon(1e-12));
  auto [of, df] = omega_delta(s.t_f(), s);
  CHECK(of == doctest::Approx(0.0));
  CHECK(df == doctest::Approx(1.0));

  const auto s2 = make_schedule(5.0, 1.0, 0.5, 0.1, 0.2, true, 1.7);
  for (int i = 0; i < 1000; ++i) {
    const double t = testutil::uniform(0.0, s2.total_time);
    auto [omega, delta] = omega_delta(t, s2);
    CHECK(omega * omega + delta * delta ==
          doctest::Approx(1.7 * 1.7).epsilon(1e-13));
  }
}

TEST_CASE("lambda_cd: phi_rate/2 identity and boundary zeros") {
  // For constant E the Lambda formula reduces to phi_rate / 2; the
  // implementation goes through dOmega*Delta - Omega*dDelta, so this is a
  // real algebraic cross-check.
  const auto s = make_schedule(4.6, 0.3, 0.1, 0.0, 1.0, true, 2.3);
  for (int i = 0; i < 100; ++i) {
    const double t = testutil::uniform(0.0, s.total_time);
    CHECK(lambda_cd(t, s) ==
          doctest::Approx(0.5 * phi_profile_rate(t, s.t_f())).epsilon(1e-12));
  }

  const auto s1 = make_schedule(2.0, 0.0, 0.0, 0.0, 0.0, true, 1.0);
  CHECK(lambda_cd(0.5, s1) == doctest::Approx(0.75 * kPi));  // t_f = 1

  CHECK(lambda_cd(0.0, s1) == doctest::Approx(0.0));
  CHECK(std::abs(lambda_cd(std::nextafter(s1.t_f(), 0.0), s1)) < 1e-10);
  CHECK(lambda_cd(s1.t_f(), s1) == doctest::Approx(0.0));
  CHECK(lambda_cd(s1.total_time, s1) == doctest::Approx(0.0));
}

TEST_CASE("drive_pair: structure, TQD composition, phase switch") {
  SUBCASE("theta = pi kills omega2") {
    const auto s = make_schedule(2.0, kPi, 0.4, 0.2, 0.9, true);
    for (int i = 0; i < 50; ++i) {
      const double t = testutil::uniform(0.0, s.total_time);
      CHECK(std::abs(drive_pair(t, s).omega2) < 1e-15);
    }
  }

  SUBCASE("both drives vanish at t = 0 with TQD on") {
    const auto s = make_schedule(2.0, kPi / 2.0, 0.0, 0.0, 0.0, true);
    const auto d = drive_pair(0.0, s);
    CHECK(std::abs(d.omega1) < 1e-15);
    CHECK(std::abs(d.omega2) < 1e-15);
  }

  SUBCASE("TQD magnitude at the ramp midpoint") {
    const auto s = make_schedule(2.0, kPi / 2.0, 0.0, 0.0, 0.0, true);
    const auto d = drive_pair(0.5, s);  // t_f = 1, E = 1
    const double expected = (1.0 + 9.0 * kPi * kPi / 16.0) / 2.0;
    CHECK(std::norm(d.omega1) == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("|omega1|^2 + |omega2|^2 = Omega^2 + Lambda_used^2") {
    for (bool tqd : {false, true}) {
      const auto s = make_schedule(3.7, 1.1, 2.2, 0.4, 1.9, tqd, 1.3);
      for (int i = 0; i < 1000; ++i) {
        const double t = testutil::uniform(0.0, s.total_time);
        const auto d = drive_pair(t, s);
        const auto [omega, delta] = omega_delta(t, s);
        (void)delta;
        const double lam = tqd ? d.lambda_cd : 0.0;
        CHECK(std::norm(d.omega1) + std::norm(d.omega2) ==
              doctest::Approx(omega * omega + lam * lam).epsilon(1e-12));
      }
    }
  }

  SUBCASE("TQD off plus manual Lambda equals TQD on") {
    auto off = make_schedule(2.4, 0.8, 0.3, 0.1, 0.7, false);
    auto on = off;
    on.tqd_enabled = true;
    for (int i = 0; i < 200; ++i) {
      const double t = testutil::uniform(0.0, off.total_time);
      const auto d_off = drive_pair(t, off);
      const auto d_on = drive_pair(t, on);
      const Complex scale(1.0, 0.0);
      // rebuild the TQD drive from the plain one:
      // omega_tqd = omega_plain * (Omega - i Lambda) / Omega  (Omega != 0)
      const auto [omega, delta] = omega_delta(t, off);
      (void)delta;
      if (std::abs(omega) < 1e-9) continue;
      const Complex factor = Complex(omega, -d_off.lambda_cd) / omega;
      CHECK(std::abs(d_on.omega1 - factor * d_off.omega1) < 1e-12);
      CHECK(std::abs(d_on.omega2 - factor * d_off.omega2) < 1e-12);
    }
  }

  SUBCASE("phi_now switches at t_f (half-open segments)") {
    const auto s = make_schedule(2.0, 1.0, 0.0, 0.25, 1.75, false);
    CHECK(drive_pair(std::nextafter(s.t_f(), 0.0), s).phi_now ==
          doctest::Approx(0.25));
    CHECK(drive_pair(s.t_f(), s).phi_now == doctest::Approx(1.75));
  }
}

TEST_CASE("dynamical_phase: cancellation and negative control") {
  const auto s = make_schedule(10.0, 1.0, 0.0, 0.3, 1.1, true);
  CHECK(std::abs(dynamical_phase(s)) < 1e-10);

  // second-segment energy doubled: beta = -(E - 2E) t_f = E t_f
  const double t_f = 3.0, e = 1.4;
  const double beta = dynamical_phase([e](double) { return e; },
                                      [e](double) { return 2.0 * e; }, t_f);
  CHECK(beta == doctest::Approx(e * t_f).epsilon(1e-10));
}

TEST_CASE("detuning_integral: vanishes per segment for the cubic ramp") {
  for (double total : {2.0, 10.0, 17.0}) {
    const auto s = make_schedule(total, 1.0, 0.0, 0.0, 0.0, false, 1.0);
    CHECK(std::abs(detuning_integral(s, 1)) < 1e-9);
    CHECK(std::abs(detuning_integral(s, 2)) < 1e-9);
  }
  const auto s = make_schedule(4.0, 1.0, 0.0, 0.0, 0.0, false, 2.0);
  CHECK(std::abs(detuning_integral(s, 1)) < 1e-9);
  CHECK_THROWS_AS(detuning_integral(s, 3), std::invalid_argument);
}

TEST_CASE("detuning integral oracle: a one-sided ramp does not cancel") {
  // Replace the ramp by phi = pi tau^2 (test-side quadrature only): the
  // integral of cos(phi) is strictly positive and linear in E.
  const double t_f = 1.7;
  auto delta_e1 = [t_f](double t) {
    const double tau = t / t_f;
    return std::cos(kPi * tau * tau);
  };
  const double base = testutil::simpson(delta_e1, 0.0, t_f, 20000);
  CHECK(base > 0.1 * t_f);  // ~0.37 * t_f
  auto delta_e2 = [&](double t) { return 2.0 * delta_e1(t); };
  CHECK(testutil::simpson(delta_e2, 0.0, t_f, 20000) ==
        doctest::Approx(2.0 * base).epsilon(1e-12));
}

TEST_CASE("schedule validation") {
  PulseSchedule s;
  s.total_time = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.total_time = 1.0;
  s.energy_scale = -1.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.energy_scale = 1.0;
  CHECK_NOTHROW(s.validate());
  CHECK(s.t_f() == doctest::Approx(0.5));
}
