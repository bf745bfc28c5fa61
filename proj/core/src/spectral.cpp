#include "biphoton/spectral.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace biphoton {
namespace {

// GHz * ps = 1e-3 (dimensionless).
constexpr double kGhzPs = 1e-3;

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

// 20-point Gauss-Legendre nodes/weights on [-1, 1] (positive half).
constexpr std::array<double, 10> kNodes = {
    0.0765265211334973, 0.2277858511416451, 0.3737060887154195, 0.5108670019508271,
    0.6360536807265150, 0.7463319064601508, 0.8391169718222188, 0.9122344282513259,
    0.9639719272779138, 0.9931285991850949};
constexpr std::array<double, 10> kWeights = {
    0.1527533871307258, 0.1491729864726037, 0.1420961093183820, 0.1316886384491766,
    0.1181945319615184, 0.1019301198172404, 0.0832767415767048, 0.0626720483341091,
    0.0406014298003869, 0.0176140071391521};

}  // namespace

void SpectralEnvelope::validate() const {
  if (!(fwhm_ghz > 0.0)) throw std::invalid_argument("spectral FWHM must be positive");
  if (!(center_wavelength_nm > 0.0))
    throw std::invalid_argument("spectral center wavelength must be positive");
}

double overlap(const SpectralEnvelope& envelope, double tau_ps) {
  envelope.validate();
  const double x = std::numbers::pi * envelope.fwhm_ghz * tau_ps * kGhzPs;
  if (envelope.shape == SpectralShape::Rectangular) {
    const double s = sinc(std::abs(x));
    return s * s;
  }
  return std::exp(-x * x / (2.0 * std::numbers::ln2));
}

double hom_coincidence(double tau_ps, const SpectralEnvelope& envelope, double visibility) {
  if (!(visibility >= 0.0 && visibility <= 1.0))
    throw std::invalid_argument("HOM visibility must lie in [0,1]");
  return 1.0 - visibility * overlap(envelope, tau_ps);
}

double quadrature_oracle(const SpectralEnvelope& envelope, double tau_ps, int panels) {
  envelope.validate();
  if (panels < 1) throw std::invalid_argument("quadrature needs at least one panel");
  const double w = envelope.fwhm_ghz;
  const bool rect = envelope.shape == SpectralShape::Rectangular;
  const double lo = rect ? -0.5 * w : -5.0 * w;
  const double hi = -lo;
  auto spectrum = [&](double nu) {
    if (rect) return 1.0;
    return std::exp(-4.0 * std::numbers::ln2 * nu * nu / (w * w));
  };
  const double omega = 2.0 * std::numbers::pi * tau_ps * kGhzPs;

  std::complex<double> acc{0.0, 0.0};
  double mass = 0.0;
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    for (std::size_t i = 0; i < kNodes.size(); ++i) {
      for (double sgn : {-1.0, 1.0}) {
        const double nu = mid + sgn * 0.5 * h * kNodes[i];
        const double wt = 0.5 * h * kWeights[i] * spectrum(nu);
        mass += wt;
        acc += wt * std::polar(1.0, omega * nu);
      }
    }
  }
  if (!(mass > 0.0) || !std::isfinite(std::abs(acc)))
    throw std::runtime_error("overlap quadrature did not converge");
  return std::norm(acc / mass);
}

}  // namespace biphoton
