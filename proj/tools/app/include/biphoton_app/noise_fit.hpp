#pragma once

#include <biphoton/circuit.hpp>
#include <biphoton/noise.hpp>

namespace biphoton::app {

/// Raw visibilities the noise model is fitted to.
struct VisibilityTargets {
  double polarization_hv = 0.895;    // HWP1 at 0 deg
  double polarization_diag = 0.777;  // HWP1 at 22.5 deg
  double bsm = 0.872;                // Psi- versus Psi+ at the coupler
};

struct ModelVisibilities {
  double polarization_hv = 0.0;
  double polarization_diag = 0.0;
  double bsm = 0.0;
};

/// Visibilities the pipeline reports from expected (noise-free sampling) rates
/// of the default experiment configurations under the given noise models.
ModelVisibilities model_visibilities(const NoiseModel& polarization, const NoiseModel& bsm,
                                     BsConvention convention = BsConvention::Symmetric);

struct NoiseFitResult {
  double mode_overlap_mu = 0.0;
  double polarization_floor = 0.0;
  double bsm_floor = 0.0;
  ModelVisibilities fitted;
  double cost = 0.0;
  bool converged = false;

  NoiseModel polarization_model() const;
  NoiseModel bsm_model() const;
};

/// Least-squares fit of the shared mode overlap and one accidental floor per
/// experiment family (floors parameterized as squares to stay non-negative).
/// The PDL is held at the preset transmittances: three targets cannot pin
/// four parameters.
NoiseFitResult fit_noise_model(const VisibilityTargets& targets = {},
                               BsConvention convention = BsConvention::Symmetric);

}  // namespace biphoton::app
