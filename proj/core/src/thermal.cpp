#include "biphoton/thermal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "biphoton/errors.hpp"

namespace biphoton {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void PhaseVoltageLaw::validate() const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("phase law kappa must be > 0");
  if (!std::isfinite(phi0)) throw std::invalid_argument("phase law phi0 must be finite");
}

double phase_of_voltage(const PhaseVoltageLaw& law, double v) {
  if (!(v >= 0.0)) throw std::invalid_argument("heater voltage must be >= 0");
  return law.phi0 + law.kappa * v * v;
}

double voltage_for_phase(const PhaseVoltageLaw& law, double phase) {
  law.validate();
  double d = std::fmod(phase - law.phi0, kTwoPi);
  if (d < 0.0) d += kTwoPi;
  return std::sqrt(d / law.kappa);
}

LawCalibration calibrate_law(std::span<const Sample> fringe) {
  if (fringe.size() < 6)
    throw FitError("phase-law calibration needs at least 6 samples, got " + std::to_string(fringe.size()));
  std::vector<Sample> squared;
  squared.reserve(fringe.size());
  for (const auto& s : fringe) {
    if (!(s.x >= 0.0)) throw FitError("phase-law calibration: negative voltage");
    squared.push_back({s.x * s.x, s.y});
  }
  const auto fit = fit_sinusoid(squared, 6);
  LawCalibration c;
  c.law.kappa = fit.omega;
  c.law.phi0 = std::atan2(-fit.c2, fit.c1);
  if (c.law.phi0 < 0.0) c.law.phi0 += kTwoPi;
  c.offset = fit.c0;
  c.amplitude = std::hypot(fit.c1, fit.c2);
  c.residual_rms = fit.residual_rms;
  return c;
}

void HeaterDrive::validate() const {
  law.validate();
  if (!(tau_thermal_us > 0.0)) throw std::invalid_argument("tau_thermal must be > 0");
  if (const auto* c = std::get_if<ConstantVoltage>(&waveform)) {
    if (!(c->v >= 0.0)) throw std::invalid_argument("heater voltage must be >= 0");
  } else {
    const auto& s = std::get<SquareWave>(waveform);
    if (!(s.v_first >= 0.0 && s.v_second >= 0.0)) throw std::invalid_argument("heater voltage must be >= 0");
    if (!(s.rate_hz > 0.0)) throw std::invalid_argument("drive rate must be > 0");
  }
}

double HeaterDrive::period_us() const {
  if (const auto* s = std::get_if<SquareWave>(&waveform)) return 1e6 / s->rate_hz;
  return tau_thermal_us;
}

PhaseTrajectory::PhaseTrajectory(HeaterDrive drive, std::size_t samples_per_period)
    : drive_(std::move(drive)), period_us_(0.0) {
  if (samples_per_period < 2) throw std::invalid_argument("samples_per_period must be >= 2");
  drive_.validate();
  period_us_ = drive_.period_us();
  if (const auto* c = std::get_if<ConstantVoltage>(&drive_.waveform)) {
    p_first_ = p_second_ = p_start_ = p_mid_ = c->v * c->v;
  } else {
    const auto& s = std::get<SquareWave>(drive_.waveform);
    p_first_ = s.v_first * s.v_first;
    p_second_ = s.v_second * s.v_second;
    // Periodic fixed point of two exponential relaxations of length T/2.
    const double r = std::exp(-0.5 * period_us_ / drive_.tau_thermal_us);
    p_start_ = (p_second_ + r * p_first_) / (1.0 + r);
    p_mid_ = p_first_ + (p_start_ - p_first_) * r;
  }
  times_.resize(samples_per_period + 1);
  phases_.resize(samples_per_period + 1);
  for (std::size_t i = 0; i <= samples_per_period; ++i) {
    times_[i] = period_us_ * static_cast<double>(i) / static_cast<double>(samples_per_period);
    phases_[i] = phase_at(times_[i]);
  }
}

double PhaseTrajectory::phase_at(double t_us) const {
  double t = std::fmod(t_us, period_us_);
  if (t < 0.0) t += period_us_;
  const double tau = drive_.tau_thermal_us;
  const double half = 0.5 * period_us_;
  double p;
  if (t < half)
    p = p_first_ + (p_start_ - p_first_) * std::exp(-t / tau);
  else
    p = p_second_ + (p_mid_ - p_second_) * std::exp(-(t - half) / tau);
  return drive_.law.phi0 + drive_.law.kappa * p;
}

double PhaseTrajectory::first_asymptote() const { return drive_.law.phi0 + drive_.law.kappa * p_first_; }
double PhaseTrajectory::second_asymptote() const { return drive_.law.phi0 + drive_.law.kappa * p_second_; }

PhaseTrajectory phase_trajectory(const HeaterDrive& drive, std::size_t samples_per_period) {
  return PhaseTrajectory(drive, samples_per_period);
}

}  // namespace biphoton
