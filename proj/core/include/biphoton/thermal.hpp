#pragma once

// Thermo-optic phase shifters: phase versus heater voltage and the first-order
// thermal response to a square-wave drive.

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "biphoton/fitting.hpp"

namespace biphoton {

/// phi(v) = phi0 + kappa * v^2 (heater power ~ v^2).
struct PhaseVoltageLaw {
  double phi0 = 0.0;
  double kappa = 0.1;  // rad / V^2

  void validate() const;
};

/// Unreduced phase; throws std::invalid_argument for v < 0.
double phase_of_voltage(const PhaseVoltageLaw& law, double v);

/// Smallest v >= 0 whose phase equals `phase` modulo 2 pi.
double voltage_for_phase(const PhaseVoltageLaw& law, double phase);

struct LawCalibration {
  PhaseVoltageLaw law;
  double offset = 0.0;     // a in C(v) = a + b cos(phi0 + kappa v^2)
  double amplitude = 0.0;  // b >= 0
  double residual_rms = 0.0;
};

/// Least-squares fit of coincidence samples (x = voltage) to
/// a + b cos(phi0 + kappa v^2). Needs >= 6 samples spanning one period in v^2.
LawCalibration calibrate_law(std::span<const Sample> fringe);

struct ConstantVoltage {
  double v = 0.0;
};

/// 50% duty cycle: v_first during [0, T/2), v_second during [T/2, T).
struct SquareWave {
  double v_first = 0.0;
  double v_second = 0.0;
  double rate_hz = 1e3;
};

struct HeaterDrive {
  std::variant<ConstantVoltage, SquareWave> waveform;
  PhaseVoltageLaw law;
  double tau_thermal_us = 10.0;

  void validate() const;
  /// Drive period; a constant drive reports tau_thermal_us as nominal period.
  double period_us() const;
};

/// Steady-state periodic phase response. The heater power v^2 passes through a
/// single-pole low-pass with time constant tau; within each half period the
/// filtered power relaxes exponentially towards the applied level.
class PhaseTrajectory {
 public:
  PhaseTrajectory(HeaterDrive drive, std::size_t samples_per_period);

  const HeaterDrive& drive() const { return drive_; }
  double period_us() const { return period_us_; }
  /// Sample times 0, T/N, ..., T (both ends included).
  const std::vector<double>& times_us() const { return times_; }
  const std::vector<double>& phases() const { return phases_; }

  /// Closed-form phase at any time (periodic extension).
  double phase_at(double t_us) const;
  /// Phase the drive approaches during the first / second half period.
  double first_asymptote() const;
  double second_asymptote() const;

 private:
  HeaterDrive drive_;
  double period_us_;
  double p_first_ = 0.0;
  double p_second_ = 0.0;
  double p_start_ = 0.0;  // filtered power at t = 0
  double p_mid_ = 0.0;    // filtered power at t = T/2
  std::vector<double> times_;
  std::vector<double> phases_;
};

/// Throws std::invalid_argument when samples_per_period < 2.
PhaseTrajectory phase_trajectory(const HeaterDrive& drive, std::size_t samples_per_period);

}  // namespace biphoton
