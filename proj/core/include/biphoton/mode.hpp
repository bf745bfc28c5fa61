#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace biphoton {

enum class ModeKind { OnChipPath, FiberPolarization };
enum class Polarization { H, V };

std::string_view to_string(Polarization p);

/// One optical mode. Fiber modes belong to a named fiber and carry a
/// polarization tag; on-chip path modes carry neither.
struct Mode {
  std::string label;
  ModeKind kind = ModeKind::OnChipPath;
  std::optional<Polarization> polarization;
  std::string fiber;
  double center_frequency_thz = 0.0;
};

/// Ordered set of modes. Indices are 0..M-1 and never change once assigned.
class ModeRegistry {
 public:
  std::size_t add_path(std::string label, double center_frequency_thz);
  /// Adds the two modes `<fiber>H` and `<fiber>V`; returns the H index (V follows).
  std::size_t add_fiber(const std::string& fiber, double center_frequency_thz);

  std::size_t size() const { return modes_.size(); }
  const Mode& operator[](std::size_t i) const { return modes_.at(i); }
  const std::vector<Mode>& modes() const { return modes_; }

  std::optional<std::size_t> find(std::string_view label) const;
  /// Throws std::invalid_argument for unknown labels.
  std::size_t index(std::string_view label) const;

  bool has_fiber(std::string_view fiber) const;
  /// (H index, V index) of a fiber.
  std::pair<std::size_t, std::size_t> fiber_modes(std::string_view fiber) const;
  /// All mode indices of a fiber, H first.
  std::vector<std::size_t> fiber_indices(std::string_view fiber) const;

  friend bool operator==(const ModeRegistry& a, const ModeRegistry& b);

 private:
  std::size_t push(Mode m);

  std::vector<Mode> modes_;
};

using RegistryPtr = std::shared_ptr<const ModeRegistry>;

inline RegistryPtr share(ModeRegistry r) {
  return std::make_shared<const ModeRegistry>(std::move(r));
}

}  // namespace biphoton
