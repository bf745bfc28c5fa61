#pragma once

namespace biphoton {

enum class SpectralShape { Rectangular, Gaussian };

/// Single-photon spectrum selected by the bandpass filters. For the rectangular
/// shape `fwhm_ghz` is the full passband width.
struct SpectralEnvelope {
  SpectralShape shape = SpectralShape::Rectangular;
  double center_wavelength_nm = 1552.5;
  double fwhm_ghz = 60.0;

  void validate() const;
};

/// |integral S(nu) exp(i 2 pi nu tau) dnu|^2 for the normalized intensity
/// spectrum S. Closed form: sinc^2(pi dnu tau) or exp(-(pi dnu tau)^2 / (2 ln 2)).
double overlap(const SpectralEnvelope& envelope, double tau_ps);

/// Normalized HOM coincidence 1 - V * overlap(tau).
double hom_coincidence(double tau_ps, const SpectralEnvelope& envelope, double visibility);

/// Composite Gauss-Legendre evaluation of the overlap integral, independent of
/// the closed forms. Integrates the passband exactly for the rectangular shape
/// and +-5 FWHM for the Gaussian, normalizing the spectrum numerically.
double quadrature_oracle(const SpectralEnvelope& envelope, double tau_ps, int panels = 500);

}  // namespace biphoton
