#pragma once

#include <string_view>
#include <vector>

#include <biphoton/noise.hpp>

namespace biphoton::app {

// Noise parameters fitted by least squares to the measured raw visibilities
// (polarization fringes 0.895 / 0.777, BSM discrimination 0.872); see
// noise_fit.hpp for the procedure. Mode overlap and PDL are shared by all
// experiments, the accidental floor is fitted per experiment family.
inline constexpr double kFittedModeOverlap = 0.8692;
inline constexpr double kPresetTransmittanceH = 1.0;
inline constexpr double kPresetTransmittanceV = 0.93;
inline constexpr double kFittedPolarizationFloor = 0.02736;
inline constexpr double kFittedBsmFloor = 0.0;

/// "ideal", "polarization" or "bsm"; throws std::invalid_argument otherwise.
NoiseModel noise_preset(std::string_view name);
const std::vector<std::string_view>& noise_preset_names();

}  // namespace biphoton::app
