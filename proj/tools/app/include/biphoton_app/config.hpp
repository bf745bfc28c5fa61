#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <biphoton/chip.hpp>
#include <biphoton/detection.hpp>
#include <biphoton/noise.hpp>
#include <biphoton/spectral.hpp>
#include <biphoton/thermal.hpp>

namespace biphoton::app {

/// Invalid or unreadable experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { FringeVsVoltage, Hom, PolarizationFringe, BsmPhaseSweep, BsmDelay, Modulation };

std::string_view to_string(ExperimentKind k);
/// Accepts the hyphenated names ("bsm-delay") and their underscore spellings.
ExperimentKind parse_experiment(std::string_view name);
const std::vector<ExperimentKind>& all_experiments();
std::string_view describe(ExperimentKind k);

/// Inclusive grid start, start + step, ..., stop.
struct SweepGrid {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  std::vector<double> values() const;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Hom;
  std::string reproduces;
  std::uint64_t seed = 1;
  std::string output;
  BsConvention convention = BsConvention::Symmetric;
  unsigned workers = 0;

  double pump1_nm = 1555.7;
  double pump2_nm = 1549.3;
  PumpInjection injection = PumpInjection::Port3;
  SpectralEnvelope filter;

  PhaseVoltageLaw tps1_law;
  PhaseVoltageLaw tps2_law;
  double tau_thermal_us = 10.0;

  std::string noise_preset;
  NoiseModel noise;
  DetectorModel detector_1;
  DetectorModel detector_2;
  double pair_rate_hz = 1e5;
  double integration_time_s = 1.0;

  SweepGrid sweep;
  double hom_visibility = 0.910;
  double hwp1_deg = 0.0;
  /// Bell phase of the delay sweep (0 = Psi+, pi = Psi-).
  double bsm_alpha = 3.14159265358979323846;
  double modulation_rate_hz = 1e3;
  double modulation_total_time_s = 600.0;
  std::size_t modulation_bins = 40;

  void validate() const;
};

/// Defaults for one experiment: every key of a config file is optional.
ExperimentConfig default_config(ExperimentKind kind);

ExperimentConfig parse_config(std::string_view yaml_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Pump-filter energy mismatch |nu_p1 + nu_p2 - 2 nu_s| in GHz.
double energy_mismatch_ghz(double pump1_nm, double pump2_nm, double signal_nm);
inline constexpr double kEnergyToleranceGhz = 0.1;

}  // namespace biphoton::app
