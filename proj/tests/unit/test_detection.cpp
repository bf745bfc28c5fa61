#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <biphoton/detection.hpp>

using namespace biphoton;

namespace {
DetectorModel detector(double eta, double dark) {
  DetectorModel d;
  d.efficiency = eta;
  d.dark_rate_hz = dark;
  return d;
}
}  // namespace

TEST_CASE("expected rates examples") {
  const auto lossless = expected_rates(0.5, 1000.0, detector(1.0, 0.0), detector(1.0, 0.0));
  CHECK(lossless.coincidences == doctest::Approx(500.0 + 1000.0 * 1000.0 * 1e-9));
  CHECK(lossless.coincidences - lossless.accidentals == doctest::Approx(500.0));

  const auto eta = expected_rates(DetectionProbabilities{0.5, 0.0, 0.0}, 1e6, detector(0.2, 0.0), detector(0.2, 0.0));
  CHECK(eta.coincidences == doctest::Approx(2e4));
  CHECK(eta.accidentals == 0.0);

  const auto dark = expected_rates(0.5, 0.0, detector(0.2, 100.0), detector(0.2, 100.0));
  CHECK(dark.accidentals == doctest::Approx(1e-5));
  CHECK(dark.coincidences == doctest::Approx(1e-5));
}

TEST_CASE("doubling both singles quadruples accidentals") {
  for (double dark : {100.0, 5e3, 2e5}) {
    const auto a = expected_rates(0.0, 0.0, detector(0.2, dark), detector(0.2, dark));
    const auto b = expected_rates(0.0, 0.0, detector(0.2, 2 * dark), detector(0.2, 2 * dark));
    CHECK(b.accidentals == doctest::Approx(4.0 * a.accidentals).epsilon(1e-14));
  }
}

TEST_CASE("invalid detector and rate inputs") {
  CHECK_THROWS_AS(expected_rates(0.5, -1.0, {}, {}), std::invalid_argument);
  CHECK_THROWS_AS(expected_rates(0.5, 1.0, detector(0.0, 0.0), {}), std::invalid_argument);
  CHECK_THROWS_AS(expected_rates(0.5, 1.0, {}, detector(0.5, -1.0)), std::invalid_argument);
}

TEST_CASE("zero rate gives zero counts") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto c = sample_counts(Rates{}, 10.0, s, 0);
    CHECK(c.coincidences == 0);
    CHECK(c.singles_1 == 0);
    CHECK(c.singles_2 == 0);
  }
  CHECK(sample_poisson(0.0, 1, 1) == 0);
  CHECK_THROWS_AS(sample_counts(Rates{}, 0.0, 1, 1), std::invalid_argument);
}

TEST_CASE("Poisson sample mean within 5 sigma") {
  Rates r;
  r.coincidences = 1e3;
  r.singles_1 = r.singles_2 = 2e3;
  double sum = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) sum += static_cast<double>(sample_counts(r, 10.0, 77, s).coincidences);
  // Tolerance: five standard deviations of a single draw.
  CHECK(std::abs(sum / 100.0 - 1e4) <= 5.0 * 100.0);
}

TEST_CASE("count records are deterministic and consistent") {
  Rates r;
  r.coincidences = 300.0;
  r.singles_1 = 900.0;
  r.singles_2 = 1200.0;
  const auto a = sample_counts(r, 1.0, 11, 4);
  const auto b = sample_counts(r, 1.0, 11, 4);
  CHECK(a.coincidences == b.coincidences);
  CHECK(a.singles_1 == b.singles_1);
  CHECK(a.singles_2 == b.singles_2);
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto c = sample_counts(r, 1.0, 3, s);
    CHECK(c.coincidences <= c.singles_1);
    CHECK(c.coincidences <= c.singles_2);
  }
}

namespace {
PhaseTrajectory test_trajectory() {
  HeaterDrive d;
  d.waveform = SquareWave{1.0, 3.0, 1e3};
  return PhaseTrajectory(d, 100);
}

DetectionProbabilities toy_model(double alpha) { return {0.5 * (1.0 - std::cos(alpha)), 1.0, 1.0}; }
}  // namespace

TEST_CASE("histogram with zero total time is empty") {
  const auto h = modulation_histogram(test_trajectory(), toy_model, 1e5, {}, {}, 40, 0.0, 5);
  CHECK(h.n_bins() == 40);
  CHECK(h.total() == 0);
  for (auto c : h.bin_counts) CHECK(c == 0);
}

TEST_CASE("histogram totals and determinism") {
  const auto a = modulation_histogram(test_trajectory(), toy_model, 1e5, {}, {}, 40, 60.0, 5);
  const auto b = modulation_histogram(test_trajectory(), toy_model, 1e5, {}, {}, 40, 60.0, 5);
  CHECK(a.bin_counts == b.bin_counts);
  std::uint64_t sum = 0;
  for (auto c : a.bin_counts) sum += c;
  CHECK(a.total() == sum);
  CHECK(a.t_center_us.front() == doctest::Approx(0.5 * a.period_us / 40.0));
  CHECK_THROWS_AS(modulation_histogram(test_trajectory(), toy_model, 1e5, {}, {}, 1, 1.0, 5), std::invalid_argument);
}

TEST_CASE("polarization-dependent loss modulates singles with a 90 degree period") {
  const BellChip chip;
  NoiseModel pdl;
  pdl.pdl["P5"] = {1.0, 0.93};
  pdl.pdl["P6"] = {1.0, 0.93};
  std::vector<double> s;
  for (int i = 0; i < 36; ++i) s.push_back(analyzer_probabilities(chip, {}, 0.0, 5.0 * i, pdl).single_2);
  double lo = s[0], hi = s[0];
  for (double v : s) lo = std::min(lo, v), hi = std::max(hi, v);
  CHECK(hi - lo > 1e-3);
  for (int i = 0; i + 18 < 36; ++i) CHECK(std::abs(s[i] - s[i + 18]) <= 1e-12);
  // Half a period apart the modulation reverses sign about the mean.
  CHECK(std::abs(s[0] + s[9] - (hi + lo)) <= 1e-12);

  NoiseModel flat;
  flat.pdl["P6"] = {0.93, 0.93};
  const double ref = analyzer_probabilities(chip, {}, 0.0, 0.0, flat).single_2;
  for (int i = 0; i < 36; ++i)
    CHECK(std::abs(analyzer_probabilities(chip, {}, 0.0, 5.0 * i, flat).single_2 - ref) <= 1e-12);
}
