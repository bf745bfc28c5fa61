#include "biphoton/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "biphoton/rng.hpp"

namespace biphoton {

void DetectorModel::validate() const {
  if (!(efficiency > 0.0 && efficiency <= 1.0)) throw std::invalid_argument("detector efficiency must lie in (0,1]");
  if (!(dark_rate_hz >= 0.0)) throw std::invalid_argument("dark rate must be >= 0");
  if (!(coincidence_window_ns > 0.0)) throw std::invalid_argument("coincidence window must be > 0");
}

Rates expected_rates(const DetectionProbabilities& p, double pair_rate_hz, const DetectorModel& d1,
                     const DetectorModel& d2) {
  if (!(pair_rate_hz >= 0.0)) throw std::invalid_argument("pair rate must be >= 0");
  d1.validate();
  d2.validate();
  Rates r;
  r.singles_1 = pair_rate_hz * d1.efficiency * p.single_1 + d1.dark_rate_hz;
  r.singles_2 = pair_rate_hz * d2.efficiency * p.single_2 + d2.dark_rate_hz;
  r.accidentals = r.singles_1 * r.singles_2 * d1.coincidence_window_ns * 1e-9;
  r.coincidences = pair_rate_hz * d1.efficiency * d2.efficiency * p.coincidence + r.accidentals;
  return r;
}

Rates expected_rates(double p_coincidence, double pair_rate_hz, const DetectorModel& d1,
                     const DetectorModel& d2) {
  return expected_rates(DetectionProbabilities{p_coincidence, 1.0, 1.0}, pair_rate_hz, d1, d2);
}

namespace {
std::uint64_t poisson(double mean, PhiloxStream& gen) {
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(gen);
}
}  // namespace

std::uint64_t sample_poisson(double mean, std::uint64_t seed, std::uint64_t stream) {
  PhiloxStream gen(seed, stream);
  return poisson(mean, gen);
}

CountRecord sample_counts(const Rates& rates, double integration_time_s, std::uint64_t seed,
                          std::uint64_t stream) {
  if (!(integration_time_s > 0.0)) throw std::invalid_argument("integration time must be > 0");
  PhiloxStream gen(seed, stream);
  CountRecord c;
  c.integration_time_s = integration_time_s;
  c.seed = seed;
  c.stream = stream;
  c.coincidences = poisson(rates.coincidences * integration_time_s, gen);
  c.singles_1 = c.coincidences + poisson(std::max(rates.singles_1 - rates.coincidences, 0.0) * integration_time_s, gen);
  c.singles_2 = c.coincidences + poisson(std::max(rates.singles_2 - rates.coincidences, 0.0) * integration_time_s, gen);
  return c;
}

std::uint64_t CoincidenceHistogram::total() const {
  return std::accumulate(bin_counts.begin(), bin_counts.end(), std::uint64_t{0});
}

CoincidenceHistogram modulation_histogram(const PhaseTrajectory& trajectory, const PhaseModel& model,
                                          double pair_rate_hz, const DetectorModel& d1,
                                          const DetectorModel& d2, std::size_t n_bins,
                                          double total_time_s, std::uint64_t seed,
                                          std::size_t sub_samples) {
  if (n_bins < 2) throw std::invalid_argument("histogram needs at least 2 bins");
  if (sub_samples < 1) throw std::invalid_argument("sub_samples must be >= 1");
  if (!(total_time_s >= 0.0)) throw std::invalid_argument("total time must be >= 0");
  if (trajectory.phases().empty()) throw std::invalid_argument("empty phase trajectory");
  CoincidenceHistogram h;
  h.period_us = trajectory.period_us();
  h.total_time_s = total_time_s;
  h.bin_counts.resize(n_bins);
  h.expected.resize(n_bins);
  h.t_center_us.resize(n_bins);
  const double width = h.period_us / static_cast<double>(n_bins);
  const double dwell_s = total_time_s / static_cast<double>(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) {
    double rate = 0.0;
    for (std::size_t j = 0; j < sub_samples; ++j) {
      const double t = width * (static_cast<double>(b) + (static_cast<double>(j) + 0.5) / static_cast<double>(sub_samples));
      rate += expected_rates(model(trajectory.phase_at(t)), pair_rate_hz, d1, d2).coincidences;
    }
    rate /= static_cast<double>(sub_samples);
    h.t_center_us[b] = width * (static_cast<double>(b) + 0.5);
    h.expected[b] = rate * dwell_s;
    h.bin_counts[b] = sample_poisson(h.expected[b], seed, b);
  }
  return h;
}

}  // namespace biphoton
