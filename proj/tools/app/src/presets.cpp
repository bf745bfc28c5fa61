#include "biphoton_app/presets.hpp"

#include <stdexcept>
#include <string>

namespace biphoton::app {

namespace {
NoiseModel fitted(double floor) {
  NoiseModel n;
  n.mode_overlap_mu = kFittedModeOverlap;
  n.pdl["P5"] = {kPresetTransmittanceH, kPresetTransmittanceV};
  n.pdl["P6"] = {kPresetTransmittanceH, kPresetTransmittanceV};
  n.accidental_floor = floor;
  return n;
}
}  // namespace

NoiseModel noise_preset(std::string_view name) {
  if (name == "ideal") return NoiseModel::ideal();
  if (name == "polarization") return fitted(kFittedPolarizationFloor);
  if (name == "bsm") return fitted(kFittedBsmFloor);
  throw std::invalid_argument("unknown noise preset '" + std::string(name) + "'");
}

const std::vector<std::string_view>& noise_preset_names() {
  static const std::vector<std::string_view> names{"ideal", "polarization", "bsm"};
  return names;
}

}  // namespace biphoton::app
