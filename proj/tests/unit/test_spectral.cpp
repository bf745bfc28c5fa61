#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <biphoton/spectral.hpp>

using namespace biphoton;

namespace {
SpectralEnvelope envelope(SpectralShape shape, double fwhm) {
  SpectralEnvelope e;
  e.shape = shape;
  e.fwhm_ghz = fwhm;
  return e;
}
}  // namespace

TEST_CASE("overlap is one at zero delay") {
  for (auto shape : {SpectralShape::Rectangular, SpectralShape::Gaussian})
    CHECK(overlap(envelope(shape, 60.0), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("rectangular overlap vanishes at 1/dnu") {
  for (double fwhm : {30.0, 60.0, 125.0}) {
    const auto e = envelope(SpectralShape::Rectangular, fwhm);
    const double tau = 1000.0 / fwhm;
    CHECK(overlap(e, tau) < 1e-28);
    CHECK(overlap(e, 0.5 * tau) > 0.3);
  }
}

TEST_CASE("gaussian overlap is one half at the half-width") {
  const auto e = envelope(SpectralShape::Gaussian, 60.0);
  // exp(-x^2 / (2 ln 2)) = 1/2 at x = sqrt(2) ln 2.
  const double tau = std::sqrt(2.0) * std::log(2.0) / (std::numbers::pi * 60.0 * 1e-3);
  CHECK(overlap(e, tau) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("overlap is even in the delay") {
  for (auto shape : {SpectralShape::Rectangular, SpectralShape::Gaussian})
    for (double tau : {0.3, 4.0, 17.0, 55.0})
      CHECK(overlap(envelope(shape, 60.0), tau) == overlap(envelope(shape, 60.0), -tau));
}

TEST_CASE("closed forms agree with quadrature") {
  for (auto shape : {SpectralShape::Rectangular, SpectralShape::Gaussian})
    for (double fwhm : {20.0, 60.0, 200.0})
      for (int i = -50; i <= 50; ++i) {
        const auto e = envelope(shape, fwhm);
        const double tau = i * 2.0 * 1000.0 / fwhm / 50.0;
        const double a = overlap(e, tau);
        const double q = quadrature_oracle(e, tau);
        CHECK(std::abs(a - q) <= 1e-6 * a + 1e-12);
      }
}

TEST_CASE("HOM coincidence scales with visibility") {
  const auto e = envelope(SpectralShape::Rectangular, 60.0);
  CHECK(hom_coincidence(0.0, e, 0.91) == doctest::Approx(0.09));
  CHECK(hom_coincidence(1000.0 / 60.0, e, 0.91) == doctest::Approx(1.0));
  CHECK_THROWS_AS(hom_coincidence(0.0, e, 1.2), std::invalid_argument);
}

TEST_CASE("invalid envelopes are rejected") {
  CHECK_THROWS_AS(overlap(envelope(SpectralShape::Rectangular, 0.0), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(overlap(envelope(SpectralShape::Gaussian, -5.0), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(quadrature_oracle(envelope(SpectralShape::Rectangular, 60.0), 1.0, 0),
                  std::invalid_argument);
}
