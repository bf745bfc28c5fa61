#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <biphoton/chip.hpp>
#include <biphoton/detection.hpp>
#include <biphoton/fitting.hpp>

#include "biphoton_app/config.hpp"

namespace biphoton::app {

/// Table written to CSV. Values are stored already rounded to the 9
/// significant digits of the file format, so analysis of a run and of its CSV
/// sees identical numbers.
struct Dataset {
  ExperimentKind kind = ExperimentKind::Hom;
  std::uint64_t seed = 0;
  std::string reproduces;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
  std::vector<Sample> samples(const std::string& x, const std::string& y) const;
};

/// Rounds to the value printed with %.9g.
double round_9g(double v);

struct SweepPoint {
  double x = 0.0;
  DetectionProbabilities probabilities;
  Rates expected;
  CountRecord counts;
};

using Summary = std::vector<std::pair<std::string, std::string>>;

struct ExperimentResult {
  Dataset data;
  std::vector<SweepPoint> points;
  std::optional<CoincidenceHistogram> histogram;
  Summary summary;
  /// Set when the fit matching the experiment failed; data are still valid.
  std::optional<std::string> fit_error;
};

/// Per-pair probabilities of one sweep point (x in the sweep's unit:
/// volts, ps, or degrees).
DetectionProbabilities point_probabilities(const ExperimentConfig& c, const BellChip& chip, double x);

/// Expected rates over the sweep grid, computed on `c.workers` threads.
std::vector<SweepPoint> expected_sweep(const ExperimentConfig& c);
/// Poisson draws for each point; point i uses stream i of `seed`.
void sample_sweep(std::vector<SweepPoint>& points, double integration_time_s, std::uint64_t seed);

/// Square-wave TPS1 drive between the Psi+ and Psi- voltages.
HeaterDrive modulation_drive(const ExperimentConfig& c);
PhaseModel bsm_phase_model(const ExperimentConfig& c, const BellChip& chip);
CoincidenceHistogram run_modulation(const ExperimentConfig& c, std::uint64_t seed);

struct Plateaus {
  double low_mean = 0.0;   // settled Psi+ bins
  double high_mean = 0.0;  // settled Psi- bins
  std::size_t low_bins = 0;
  std::size_t high_bins = 0;
  double ratio() const { return high_mean / low_mean; }
};

/// Means of the bins that start at least five thermal time constants after an
/// edge and end before the next one.
Plateaus settled_plateaus(const CoincidenceHistogram& h, double tau_thermal_us);

/// Expected counts per bin for the static states (the asymptotic plateaus).
std::pair<double, double> asymptotic_levels(const ExperimentConfig& c, const BellChip& chip);

/// (C- - C+) / (C- + C+) from expected rates of Psi- and Psi+ at zero delay.
double bsm_discrimination(const ExperimentConfig& c, const BellChip& chip);

Dataset make_dataset(const ExperimentConfig& c, const std::vector<SweepPoint>& points);
Dataset make_dataset(const ExperimentConfig& c, const CoincidenceHistogram& h);

/// Fit summary of a dataset. Throws FitError when the matching fit fails.
Summary analyze(const Dataset& d);
/// Fit of an external table with an explicitly chosen model ("fringe" or "hom").
Summary fit_dataset(const Dataset& d, const std::string& model);

ExperimentResult run_experiment(const ExperimentConfig& c);

}  // namespace biphoton::app
