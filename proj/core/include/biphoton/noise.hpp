#pragma once

#include <map>
#include <string>

namespace biphoton {

/// Intensity transmittances of one fiber's polarization modes.
struct Transmittance {
  double h = 1.0;
  double v = 1.0;
};

/// Phenomenological imperfections of a two-photon experiment.
///
/// `mode_overlap_mu` scales the cross term of the interference under test
/// (implemented as partial which-source decoherence). `pdl` holds the
/// polarization-dependent loss of each chip output fiber. `accidental_floor`
/// is a per-pair coincidence probability added on top of the quantum term.
struct NoiseModel {
  double mode_overlap_mu = 1.0;
  std::map<std::string, Transmittance> pdl;
  double accidental_floor = 0.0;

  static NoiseModel ideal() { return {}; }
  Transmittance transmittance(const std::string& fiber) const;
  void validate() const;
};

}  // namespace biphoton
