#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <biphoton/errors.hpp>
#include <biphoton/fitting.hpp>

using namespace biphoton;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<Sample> fringe(double offset, double v, double omega, double phase, int n, double span) {
  std::vector<Sample> s;
  for (int i = 0; i < n; ++i) {
    const double x = span * i / (n - 1);
    s.push_back({x, offset * (1.0 + v * std::cos(omega * x + phase))});
  }
  return s;
}

std::vector<Sample> dip(double baseline, double v, double dnu, double tau0, SpectralShape shape) {
  SpectralEnvelope e;
  e.shape = shape;
  e.fwhm_ghz = dnu;
  std::vector<Sample> s;
  for (int i = -50; i <= 50; ++i) s.push_back({double(i), baseline * (1.0 - v * overlap(e, i - tau0))});
  return s;
}

void poissonize(std::vector<Sample>& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (auto& p : s) p.y = static_cast<double>(std::poisson_distribution<long>(p.y)(rng));
}
}  // namespace

TEST_CASE("fringe fit recovers a noiseless fringe") {
  const auto f = fit_fringe(fringe(3000.0, 0.895, 0.7, 1.1, 60, 30.0));
  CHECK(f.raw_visibility == doctest::Approx(0.895).epsilon(1e-6));
  CHECK(f.omega == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(f.period == doctest::Approx(2 * kPi / 0.7).epsilon(1e-6));
  CHECK(f.amplitude >= 0.0);
  CHECK(f.residual_rms < 1e-6);
}

TEST_CASE("fringe fit round trip over random parameters") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int recovered = 0;
  for (int i = 0; i < 100; ++i) {
    const double v = 0.1 + 0.89 * u(rng);
    const double phase = 2 * kPi * u(rng);
    const double period = 2.0 + 4.0 * u(rng);
    const double offset = 100.0 + 1e4 * u(rng);
    const auto f = fit_fringe(fringe(offset, v, 2 * kPi / period, phase, 60, 10.0));
    if (std::abs(f.raw_visibility - v) <= 1e-6) ++recovered;
  }
  CHECK(recovered == 100);
}

TEST_CASE("fringe fit with counting noise") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto s = fringe(25000.0, 0.895, 0.7, 0.3, 40, 20.0);
    poissonize(s, seed);
    CHECK(std::abs(fit_fringe(s).raw_visibility - 0.895) <= 0.02);
  }
}

TEST_CASE("fringe fit rejects data without a fringe") {
  std::vector<Sample> flat;
  for (int i = 0; i < 20; ++i) flat.push_back({double(i), 100.0});
  CHECK_THROWS_AS(fit_fringe(flat), FitError);
  CHECK_THROWS_AS(fit_fringe(fringe(100.0, 0.5, 1.0, 0.0, 5, 10.0)), FitError);
  // Less than one period in the sampled range.
  CHECK_THROWS_AS(fit_fringe(fringe(100.0, 0.5, 0.1, 0.0, 30, 10.0)), FitError);
}

TEST_CASE("HOM fit recovers a noiseless dip") {
  const auto f = fit_hom(dip(10000.0, 0.910, 60.0, 0.0, SpectralShape::Rectangular));
  CHECK(f.visibility == doctest::Approx(0.910).epsilon(1e-6));
  CHECK(f.delta_nu_ghz == doctest::Approx(60.0).epsilon(1e-6));
  CHECK(std::abs(f.tau0_ps) < 1e-6);
  CHECK(f.baseline == doctest::Approx(10000.0).epsilon(1e-6));

  const auto g = fit_hom(dip(10000.0, 0.8, 40.0, 3.0, SpectralShape::Gaussian), SpectralShape::Gaussian);
  CHECK(g.visibility == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(g.delta_nu_ghz == doctest::Approx(40.0).epsilon(1e-6));
  CHECK(g.tau0_ps == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("HOM fit with counting noise") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto s = dip(40000.0, 0.939, 60.0, 0.0, SpectralShape::Rectangular);
    poissonize(s, seed);
    const auto f = fit_hom(s);
    CHECK(std::abs(f.visibility - 0.939) <= 0.02);
    CHECK(f.normalized_residual_rms < 2.0);
  }
}

TEST_CASE("HOM fit rejects flat data") {
  std::vector<Sample> flat;
  for (int i = -50; i <= 50; ++i) flat.push_back({double(i), 5000.0});
  CHECK_THROWS_AS(fit_hom(flat), FitError);
}

TEST_CASE("HOM fit rejects a peak") {
  auto s = dip(5000.0, 0.9, 60.0, 0.0, SpectralShape::Rectangular);
  for (auto& p : s) p.y = 10000.0 - p.y;
  CHECK_THROWS_AS(fit_hom(s), FitError);
}

TEST_CASE("mismatched spectral family fits worse") {
  const auto s = dip(100.0, 0.9, 60.0, 0.0, SpectralShape::Gaussian);
  const auto matched = fit_hom(s, SpectralShape::Gaussian);
  const auto mismatched = fit_hom(s, SpectralShape::Rectangular);
  CHECK(mismatched.residual_rms > matched.residual_rms);
}

TEST_CASE("general least squares") {
  // Rosenbrock as residuals: (1 - a, 10 (b - a^2)).
  const auto res = least_squares(
      [](const Eigen::VectorXd& p) {
        Eigen::VectorXd r(2);
        r << 1.0 - p[0], 10.0 * (p[1] - p[0] * p[0]);
        return r;
      },
      Eigen::Vector2d(-1.2, 1.0));
  CHECK(res.converged);
  CHECK(res.params[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(res.params[1] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("contrast visibility") {
  CHECK(contrast_visibility(1000.0, 0.0) == 1.0);
  CHECK(contrast_visibility(420.0, 420.0) == 0.0);
  for (double k : {0.5, 2.0, 8.0, 1024.0})
    CHECK(contrast_visibility(k * 1300.0, k * 90.0) == contrast_visibility(1300.0, 90.0));
  CHECK_THROWS_AS(contrast_visibility(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(contrast_visibility(10.0, 20.0), std::invalid_argument);
}

TEST_CASE("Bell criterion threshold") {
  CHECK(bell_criterion(0.895) == BellVerdict::ViolationSupported);
  CHECK(bell_criterion(0.777) == BellVerdict::ViolationSupported);
  CHECK(bell_criterion(0.70) == BellVerdict::NotSupported);
  CHECK(kBellVisibilityThreshold == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(bell_criterion(1.5), std::invalid_argument);
}
