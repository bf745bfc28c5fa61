#pragma once

// From per-pair probabilities to detector count rates and Poisson-sampled
// counts. Sampling is keyed by (seed, stream) so every measurement point is
// reproducible on its own, whatever order points are computed in.

#include <cstdint>
#include <functional>
#include <vector>

#include "biphoton/observables.hpp"
#include "biphoton/thermal.hpp"

namespace biphoton {

struct DetectorModel {
  double efficiency = 0.2;
  double dark_rate_hz = 100.0;
  double coincidence_window_ns = 1.0;

  void validate() const;
};

struct Rates {
  double singles_1 = 0.0;
  double singles_2 = 0.0;
  double coincidences = 0.0;
  /// Accidental part of `coincidences`.
  double accidentals = 0.0;
};

/// singles_i = pair_rate * eta_i * p.single_i + dark_i
/// coinc     = pair_rate * eta_1 * eta_2 * p.coincidence + singles_1 * singles_2 * window
/// Polarization-dependent loss, mode overlap and the accidental floor are
/// already part of `p`. The window of detector 1 is used.
Rates expected_rates(const DetectionProbabilities& p, double pair_rate_hz, const DetectorModel& d1,
                     const DetectorModel& d2);
/// Same with both single-detection probabilities equal to one.
Rates expected_rates(double p_coincidence, double pair_rate_hz, const DetectorModel& d1,
                     const DetectorModel& d2);

struct CountRecord {
  std::uint64_t singles_1 = 0;
  std::uint64_t singles_2 = 0;
  std::uint64_t coincidences = 0;
  double integration_time_s = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Poisson draw of one measurement point. Coincidences are drawn first and the
/// singles add an independent draw for the non-coincident part, so
/// coincidences never exceed either singles count.
CountRecord sample_counts(const Rates& rates, double integration_time_s, std::uint64_t seed,
                          std::uint64_t stream);

/// Poisson(mean) from the (seed, stream) generator; mean 0 gives 0.
std::uint64_t sample_poisson(double mean, std::uint64_t seed, std::uint64_t stream);

struct CoincidenceHistogram {
  std::vector<std::uint64_t> bin_counts;
  std::vector<double> expected;  // mean counts per bin
  std::vector<double> t_center_us;
  double period_us = 0.0;
  double total_time_s = 0.0;

  std::size_t n_bins() const { return bin_counts.size(); }
  std::uint64_t total() const;
};

/// Probabilities of one measurement at Bell phase alpha.
using PhaseModel = std::function<DetectionProbabilities(double alpha)>;

/// Folds the time-resolved coincidences of a periodically driven state into
/// n_bins bins of one period. The rate in each bin is the average over
/// `sub_samples` evenly spaced phases inside the bin; bin b is drawn from
/// stream b.
CoincidenceHistogram modulation_histogram(const PhaseTrajectory& trajectory, const PhaseModel& model,
                                          double pair_rate_hz, const DetectorModel& d1,
                                          const DetectorModel& d2, std::size_t n_bins,
                                          double total_time_s, std::uint64_t seed,
                                          std::size_t sub_samples = 16);

}  // namespace biphoton
