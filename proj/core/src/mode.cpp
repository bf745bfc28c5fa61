#include "biphoton/mode.hpp"

#include <stdexcept>

namespace biphoton {

std::string_view to_string(Polarization p) { return p == Polarization::H ? "H" : "V"; }

std::size_t ModeRegistry::push(Mode m) {
  if (m.label.empty()) throw std::invalid_argument("mode label must not be empty");
  if (!(m.center_frequency_thz > 0.0))
    throw std::invalid_argument("mode '" + m.label + "': center frequency must be positive");
  if (find(m.label)) throw std::invalid_argument("duplicate mode label '" + m.label + "'");
  modes_.push_back(std::move(m));
  return modes_.size() - 1;
}

std::size_t ModeRegistry::add_path(std::string label, double center_frequency_thz) {
  return push(Mode{std::move(label), ModeKind::OnChipPath, std::nullopt, {}, center_frequency_thz});
}

std::size_t ModeRegistry::add_fiber(const std::string& fiber, double center_frequency_thz) {
  if (has_fiber(fiber)) throw std::invalid_argument("duplicate fiber '" + fiber + "'");
  const auto h = push(Mode{fiber + "H", ModeKind::FiberPolarization, Polarization::H, fiber,
                           center_frequency_thz});
  push(Mode{fiber + "V", ModeKind::FiberPolarization, Polarization::V, fiber, center_frequency_thz});
  return h;
}

std::optional<std::size_t> ModeRegistry::find(std::string_view label) const {
  for (std::size_t i = 0; i < modes_.size(); ++i)
    if (modes_[i].label == label) return i;
  return std::nullopt;
}

std::size_t ModeRegistry::index(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw std::invalid_argument("unknown mode label '" + std::string(label) + "'");
}

bool ModeRegistry::has_fiber(std::string_view fiber) const {
  for (const auto& m : modes_)
    if (m.kind == ModeKind::FiberPolarization && m.fiber == fiber) return true;
  return false;
}

std::pair<std::size_t, std::size_t> ModeRegistry::fiber_modes(std::string_view fiber) const {
  std::optional<std::size_t> h, v;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    const auto& m = modes_[i];
    if (m.kind != ModeKind::FiberPolarization || m.fiber != fiber) continue;
    (*m.polarization == Polarization::H ? h : v) = i;
  }
  if (!h || !v) throw std::invalid_argument("unknown fiber '" + std::string(fiber) + "'");
  return {*h, *v};
}

std::vector<std::size_t> ModeRegistry::fiber_indices(std::string_view fiber) const {
  auto [h, v] = fiber_modes(fiber);
  return {h, v};
}

bool operator==(const ModeRegistry& a, const ModeRegistry& b) {
  if (a.modes_.size() != b.modes_.size()) return false;
  for (std::size_t i = 0; i < a.modes_.size(); ++i) {
    const auto& x = a.modes_[i];
    const auto& y = b.modes_[i];
    if (x.label != y.label || x.kind != y.kind || x.polarization != y.polarization ||
        x.fiber != y.fiber || x.center_frequency_thz != y.center_frequency_thz)
      return false;
  }
  return true;
}

}  // namespace biphoton
