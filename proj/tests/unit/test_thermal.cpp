#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <biphoton/errors.hpp>
#include <biphoton/thermal.hpp>

using namespace biphoton;

namespace {
constexpr double kPi = std::numbers::pi;

HeaterDrive square(double rate_hz, double tau_us) {
  HeaterDrive d;
  d.waveform = SquareWave{2.0, 7.0, rate_hz};
  d.tau_thermal_us = tau_us;
  return d;
}

// Fraction of the step left at the end of a half period.
double residual_fraction(const PhaseTrajectory& t) {
  const double half = 0.5 * t.period_us();
  return (t.phase_at(half) - t.first_asymptote()) / (t.second_asymptote() - t.first_asymptote());
}
}  // namespace

TEST_CASE("phase grows with heater power") {
  const PhaseVoltageLaw law{0.0, 0.1};
  CHECK(phase_of_voltage(law, 3.0) == doctest::Approx(0.9));
  CHECK(phase_of_voltage({0.5, 0.1}, 0.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(phase_of_voltage(law, -1.0), std::invalid_argument);
}

TEST_CASE("voltage_for_phase inverts the law modulo 2 pi") {
  const PhaseVoltageLaw law{1.0, 0.07};
  for (double phase : {0.0, 1.0, 2.5, 6.0, 9.0}) {
    const double v = voltage_for_phase(law, phase);
    CHECK(v >= 0.0);
    CHECK(std::remainder(phase_of_voltage(law, v) - phase, 2 * kPi) == doctest::Approx(0.0).epsilon(1e-12));
  }
  CHECK(voltage_for_phase(law, 1.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(voltage_for_phase({0.0, 0.0}, 1.0), std::invalid_argument);
}

TEST_CASE("calibration recovers the law from a clean fringe") {
  const PhaseVoltageLaw truth{1.0, 0.07};
  std::vector<Sample> s;
  for (int i = 0; i < 50; ++i) {
    const double v = 12.0 * i / 49.0;
    s.push_back({v, 500.0 + 400.0 * std::cos(phase_of_voltage(truth, v))});
  }
  const auto c = calibrate_law(s);
  CHECK(c.law.kappa == doctest::Approx(0.07).epsilon(1e-6));
  CHECK(c.law.phi0 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(c.offset == doctest::Approx(500.0).epsilon(1e-6));
  CHECK(c.amplitude == doctest::Approx(400.0).epsilon(1e-6));
}

TEST_CASE("calibration tolerates counting noise") {
  const PhaseVoltageLaw truth{1.0, 0.07};
  std::mt19937_64 rng(3);
  std::vector<Sample> s;
  for (int i = 0; i < 50; ++i) {
    const double v = 12.0 * i / 49.0;
    const double mean = 5000.0 + 4000.0 * std::cos(phase_of_voltage(truth, v));
    s.push_back({v, static_cast<double>(std::poisson_distribution<long>(mean)(rng))});
  }
  const auto c = calibrate_law(s);
  CHECK(std::abs(c.law.kappa - 0.07) <= 0.02 * 0.07);
  CHECK(std::abs(std::remainder(c.law.phi0 - 1.0, 2 * kPi)) <= 0.02 * 2 * kPi);
}

TEST_CASE("calibration needs enough samples") {
  const std::vector<Sample> s = {{0.0, 1.0}, {1.0, 2.0}, {2.0, 1.0}};
  CHECK_THROWS_AS(calibrate_law(s), FitError);
}

TEST_CASE("1 kHz drive settles within each half period") {
  const PhaseTrajectory t(square(1e3, 10.0), 400);
  const double expect = std::exp(-50.0) / (1.0 + std::exp(-50.0));
  CHECK(std::abs(residual_fraction(t) - expect) <= 1e-15);
}

TEST_CASE("20 kHz drive does not settle") {
  const PhaseTrajectory t(square(20e3, 10.0), 400);
  const double r = std::exp(-2.5);
  CHECK(residual_fraction(t) == doctest::Approx(r / (1.0 + r)).epsilon(1e-12));
}

TEST_CASE("trajectory is continuous and periodic") {
  for (double rate : {1e3, 20e3, 100e3}) {
    const PhaseTrajectory t(square(rate, 10.0), 200);
    const double T = t.period_us();
    const auto& ph = t.phases();
    CHECK(std::abs(ph.front() - ph.back()) <= 1e-9);
    CHECK(std::abs(t.phase_at(0.3 * T) - t.phase_at(2.3 * T)) <= 1e-9);
    for (double edge : {0.0, 0.5 * T, T}) {
      const double eps = 1e-9 * T;
      CHECK(std::abs(t.phase_at(edge + eps) - t.phase_at(edge - eps)) <= 1e-6);
    }
  }
}

TEST_CASE("phase approaches each asymptote monotonically") {
  const PhaseTrajectory t(square(20e3, 10.0), 200);
  const auto& ph = t.phases();
  const std::size_t mid = ph.size() / 2;
  for (std::size_t i = 1; i <= mid; ++i) CHECK(ph[i] <= ph[i - 1]);
  for (std::size_t i = mid + 1; i < ph.size(); ++i) CHECK(ph[i] >= ph[i - 1]);
  for (double p : ph) {
    CHECK(p >= t.first_asymptote() - 1e-12);
    CHECK(p <= t.second_asymptote() + 1e-12);
  }
}

TEST_CASE("fast heaters follow the drive") {
  const PhaseTrajectory t(square(20e3, 1e-3), 200);
  const double T = t.period_us();
  CHECK(std::abs(t.phase_at(0.25 * T) - t.first_asymptote()) <= 1e-6);
  CHECK(std::abs(t.phase_at(0.75 * T) - t.second_asymptote()) <= 1e-6);
}

TEST_CASE("constant drive gives a flat trajectory") {
  HeaterDrive d;
  d.waveform = ConstantVoltage{3.0};
  const auto t = phase_trajectory(d, 10);
  for (double p : t.phases()) CHECK(p == doctest::Approx(0.9));
}

TEST_CASE("drive validation") {
  CHECK_THROWS_AS(phase_trajectory(square(1e3, 10.0), 1), std::invalid_argument);
  CHECK_THROWS_AS(phase_trajectory(square(0.0, 10.0), 10), std::invalid_argument);
  CHECK_THROWS_AS(phase_trajectory(square(1e3, 0.0), 10), std::invalid_argument);
  HeaterDrive d;
  d.waveform = ConstantVoltage{-1.0};
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}
