#include "biphoton/noise.hpp"

#include <stdexcept>

namespace biphoton {
namespace {
bool unit(double x) { return x >= 0.0 && x <= 1.0; }
}  // namespace

Transmittance NoiseModel::transmittance(const std::string& fiber) const {
  auto it = pdl.find(fiber);
  return it == pdl.end() ? Transmittance{} : it->second;
}

void NoiseModel::validate() const {
  if (!unit(mode_overlap_mu)) throw std::invalid_argument("noise.mode_overlap_mu must lie in [0,1]");
  if (!unit(accidental_floor)) throw std::invalid_argument("noise.accidental_floor must lie in [0,1]");
  for (const auto& [fiber, t] : pdl)
    if (!unit(t.h) || !unit(t.v))
      throw std::invalid_argument("noise.pdl." + fiber + " transmittances must lie in [0,1]");
}

}  // namespace biphoton
