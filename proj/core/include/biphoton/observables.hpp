#pragma once

// Per-pair detection probabilities of the bench experiments built on the chip.
// Every function propagates the post-selected pair through the circuit and the
// fiber optics; imperfections enter through NoiseModel:
//   * mode_overlap_mu  partial which-source decoherence at the chip sources,
//   * pdl              polarization-dependent loss of each output fiber,
//   * accidental_floor added to the coincidence probability.

#include "biphoton/chip.hpp"
#include "biphoton/noise.hpp"
#include "biphoton/spectral.hpp"

namespace biphoton {

struct DetectionProbabilities {
  double coincidence = 0.0;
  double single_1 = 0.0;
  double single_2 = 0.0;
};

/// Ideal two-source interference: (1 + cos theta) / 2.
double split_probability(double theta);
double bunch_probability(double theta);

/// Coincidences between detectors on fibers P5 and P6 (both polarizations) with
/// one splitter pair pumped through an auxiliary port; theta is that
/// splitter's interference phase.
DetectionProbabilities fringe_probabilities(const BellChip& chip, double theta,
                                            const NoiseModel& noise,
                                            PumpInjection injection = PumpInjection::Port3);
/// Ideal fringe_probabilities(...).coincidence; equals split_probability(theta).
double simulated_split_probability(const BellChip& chip, double theta);

/// Half-wave plates at hwp1/hwp2 (degrees) followed by H polarizers on P5/P6.
DetectionProbabilities analyzer_probabilities(const BellChip& chip, const BellPhaseConfig& config,
                                              double hwp1_deg, double hwp2_deg,
                                              const NoiseModel& noise);
double analyzer_coincidence(const BellChip& chip, const BellPhaseConfig& config, double hwp1_deg,
                            double hwp2_deg, const NoiseModel& noise);

/// P5 and P6 combined on a 50:50 fiber coupler, P6 delayed by tau; detectors on
/// both coupler outputs. Ideal value (1 - mu O(tau) cos alpha) / 2.
DetectionProbabilities bsm_probabilities(const BellChip& chip, const BellPhaseConfig& config,
                                         double tau_ps, const SpectralEnvelope& spectral,
                                         const NoiseModel& noise);
double bsm_coincidence(const BellChip& chip, const BellPhaseConfig& config, double tau_ps,
                       const SpectralEnvelope& spectral, const NoiseModel& noise);

/// HOM interference of the two photons from one splitter pair (Port3 or Port4
/// injection, split condition), P6 polarization rotated onto P5's, P6 delayed
/// by tau. `visibility` caps the two-photon overlap.
DetectionProbabilities hom_probabilities(const BellChip& chip, PumpInjection injection,
                                         double tau_ps, const SpectralEnvelope& spectral,
                                         double visibility, const NoiseModel& noise);

}  // namespace biphoton
