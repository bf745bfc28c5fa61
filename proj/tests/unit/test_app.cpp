#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include <biphoton_app/config.hpp>
#include <biphoton_app/csv.hpp>
#include <biphoton_app/experiments.hpp>
#include <biphoton_app/noise_fit.hpp>
#include <biphoton_app/presets.hpp>

using namespace biphoton;
using namespace biphoton::app;

namespace {
std::vector<std::filesystem::path> config_files() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(BIPHOTON_CONFIG_DIR))
    if (e.path().extension() == ".yaml") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

ExperimentConfig small_hom() {
  auto c = default_config(ExperimentKind::Hom);
  c.sweep = {-40.0, 40.0, 2.0};
  return c;
}

// True when every count lies within five Poisson standard deviations.
bool within_5_sigma(double count, double mean) { return std::abs(count - mean) <= 5.0 * std::sqrt(std::max(mean, 1.0)); }
}  // namespace

TEST_CASE("every experiment has valid defaults") {
  for (auto k : all_experiments()) {
    const auto c = default_config(k);
    CHECK_NOTHROW(c.validate());
    CHECK(c.experiment == k);
    CHECK_FALSE(describe(k).empty());
    CHECK(parse_experiment(to_string(k)) == k);
  }
  CHECK(parse_experiment("bsm_delay") == ExperimentKind::BsmDelay);
  CHECK_THROWS(parse_experiment("nope"));
}

TEST_CASE("config parsing rejects unknown keys and bad values") {
  CHECK_NOTHROW(parse_config("experiment: hom\n"));
  CHECK_THROWS_AS(parse_config("experiment: hom\nbogus: 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment: hom\nfilter:\n  colour: red\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("seed: 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment: hom\nconvention: diagonal\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment: hom\nsweep:\n  step: -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment: [\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST_CASE("pump wavelengths must conserve energy with the filter") {
  CHECK(energy_mismatch_ghz(1555.7, 1549.3, 1552.4934) < kEnergyToleranceGhz);
  CHECK(energy_mismatch_ghz(1555.7, 1549.0, 1552.4934) > kEnergyToleranceGhz);
  CHECK_THROWS_AS(parse_config("experiment: hom\nsource:\n  pump_wavelengths_nm: [1555.7, 1549.0]\n"), ConfigError);
}

TEST_CASE("shipped configs load and keep the counting budget") {
  const auto files = config_files();
  CHECK(files.size() == 10);
  for (const auto& f : files) {
    CAPTURE(f.string());
    const auto c = load_config(f);
    CHECK_FALSE(c.reproduces.empty());
    // The delay scan counts less on purpose so its sinc^2 side lobes stay below the noise.
    if (c.experiment == ExperimentKind::Modulation || c.experiment == ExperimentKind::BsmDelay) continue;
    double lowest = 1e300;
    for (const auto& p : expected_sweep(c)) lowest = std::min(lowest, p.expected.coincidences * c.integration_time_s);
    CHECK(lowest >= 2500.0);
  }
}

TEST_CASE("CSV round trip preserves the dataset") {
  const auto r = run_experiment(small_hom());
  const auto text = to_csv(r.data);
  CHECK(text.rfind("# experiment=hom seed=", 0) == 0);
  const auto d = parse_csv(text);
  CHECK(d.kind == r.data.kind);
  CHECK(d.seed == r.data.seed);
  CHECK(d.reproduces == r.data.reproduces);
  CHECK(d.columns == r.data.columns);
  CHECK(d.rows == r.data.rows);
  CHECK(to_csv(d) == text);
}

TEST_CASE("malformed CSV reports the offending line") {
  CHECK_THROWS_AS(parse_csv(""), CsvError);
  try {
    parse_csv("# experiment=hom seed=1 version=0.1.0\ndelay_ps,coincidences\n1,2\n3,x\n");
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    CHECK(e.line() == 4);
  }
  try {
    parse_csv("experiment=hom\n");
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    CHECK(e.line() == 1);
  }
  try {
    parse_csv("# experiment=hom seed=1 version=0.1.0\ndelay_ps,coincidences\n1,2,3\n");
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("fitting a run and fitting its CSV agree exactly") {
  for (auto k : {ExperimentKind::Hom, ExperimentKind::BsmPhaseSweep, ExperimentKind::FringeVsVoltage}) {
    const auto r = run_experiment(default_config(k));
    REQUIRE_FALSE(r.fit_error.has_value());
    CHECK(analyze(parse_csv(to_csv(r.data))) == analyze(r.data));
  }
}

TEST_CASE("results do not depend on the worker count") {
  for (auto k : {ExperimentKind::Hom, ExperimentKind::PolarizationFringe}) {
    auto c = default_config(k);
    c.workers = 1;
    const auto a = to_csv(run_experiment(c).data);
    c.workers = 4;
    CHECK(to_csv(run_experiment(c).data) == a);
  }
}

TEST_CASE("sampled counts stay within 5 sigma of the expectation") {
  for (auto k : all_experiments()) {
    CAPTURE(to_string(k));
    const auto c = default_config(k);
    int good = 0;
    if (k == ExperimentKind::Modulation) {
      const auto h = run_modulation(c, 1);
      for (std::uint64_t t = 0; t < 1000; ++t) {
        bool ok = true;
        for (std::size_t b = 0; b < h.n_bins(); ++b)
          ok = ok && within_5_sigma(double(sample_poisson(h.expected[b], t, b)), h.expected[b]);
        good += ok;
      }
    } else {
      auto points = expected_sweep(c);
      for (std::uint64_t t = 0; t < 1000; ++t) {
        sample_sweep(points, c.integration_time_s, t);
        bool ok = true;
        for (const auto& p : points)
          ok = ok && within_5_sigma(double(p.counts.coincidences), p.expected.coincidences * c.integration_time_s);
        good += ok;
      }
    }
    CHECK(good >= 990);
  }
}

TEST_CASE("BSM discrimination rises with mode overlap") {
  auto c = default_config(ExperimentKind::BsmDelay);
  const BellChip chip(c.convention);
  double prev = -1.0;
  for (double mu = 0.5; mu <= 1.0001; mu += 0.05) {
    c.noise.mode_overlap_mu = std::min(mu, 1.0);
    const double f = bsm_discrimination(c, chip);
    CHECK(f > prev);
    prev = f;
  }
}

TEST_CASE("noise presets sit at the least-squares optimum") {
  const auto fit = fit_noise_model();
  CHECK(fit.converged);
  CHECK(std::abs(fit.mode_overlap_mu - kFittedModeOverlap) <= 1e-3);
  CHECK(std::abs(fit.polarization_floor - kFittedPolarizationFloor) <= 1e-4);
  CHECK(std::abs(fit.bsm_floor - kFittedBsmFloor) <= 1e-4);
  const auto v = model_visibilities(noise_preset("polarization"), noise_preset("bsm"));
  CHECK(std::abs(v.polarization_hv - 0.895) <= 0.02);
  CHECK(std::abs(v.polarization_diag - 0.777) <= 0.02);
  CHECK(std::abs(v.bsm - 0.872) <= 0.03);
  CHECK_THROWS(noise_preset("loud"));
}
