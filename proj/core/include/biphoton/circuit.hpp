#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "biphoton/mode.hpp"

namespace biphoton {

/// 2x2 matrix convention for every 50:50 splitter in a circuit.
///   Symmetric: (1/sqrt2) [[1, i], [i, 1]]
///   Hadamard:  (1/sqrt2) [[1, 1], [1, -1]]
enum class BsConvention { Symmetric, Hadamard };

struct BeamSplitter50 {
  std::string port_a;
  std::string port_b;
};

/// Multiplies one mode by exp(i * phase).
struct PhaseShifter {
  std::string port;
  double phase = 0.0;
};

/// Marks a waveguide where photon pairs are generated. Carries no matrix.
struct SfwmSource {
  std::string port;
  std::complex<double> pair_amplitude{1.0, 0.0};
};

/// Two-dimensional grating coupler: routes one on-chip path into the H mode of
/// `out_fiber` and another into its V mode (a permutation of modes).
struct GratingMapper2D {
  std::string in_h;
  std::string in_v;
  std::string out_fiber;
};

struct HalfWavePlate {
  std::string fiber;
  double angle_deg = 0.0;
};

/// Projective analyzer in front of a detector. Carries no matrix; read by
/// detection code through `passed_mode`.
struct Polarizer {
  std::string fiber;
  Polarization pass_axis = Polarization::H;
};

/// 50:50 fiber coupler acting identically on the H and V modes of two fibers.
struct FiberCoupler50 {
  std::string fiber_a;
  std::string fiber_b;
};

/// Relative delay, handled through spectral overlap. Carries no matrix.
struct DelayLine {
  std::string fiber;
  double delay_ps = 0.0;
};

struct PolarizationRotator {
  std::string fiber;
  Eigen::Matrix2cd unitary = Eigen::Matrix2cd::Identity();
};

using CircuitComponent =
    std::variant<BeamSplitter50, PhaseShifter, SfwmSource, GratingMapper2D, HalfWavePlate,
                 Polarizer, FiberCoupler50, DelayLine, PolarizationRotator>;

Eigen::Matrix2cd beam_splitter_matrix(BsConvention convention);
/// [[cos 2h, sin 2h], [sin 2h, -cos 2h]] on (H, V).
Eigen::Matrix2cd half_wave_plate_matrix(double angle_deg);

/// Linear-optical network as an ordered list of stages. Components inside one
/// stage act on disjoint modes; stages apply in insertion order.
class CircuitGraph {
 public:
  using Stage = std::vector<CircuitComponent>;

  explicit CircuitGraph(RegistryPtr registry, BsConvention convention = BsConvention::Symmetric);

  /// Validates labels, parameter ranges and disjointness; throws std::invalid_argument.
  CircuitGraph& add_stage(Stage stage);
  CircuitGraph& add(CircuitComponent component) { return add_stage({std::move(component)}); }

  const ModeRegistry& registry() const { return *registry_; }
  const RegistryPtr& registry_ptr() const { return registry_; }
  BsConvention convention() const { return convention_; }
  const std::vector<Stage>& stages() const { return stages_; }

  /// Mode indices a component touches.
  std::vector<std::size_t> modes_of(const CircuitComponent& c) const;
  /// Mode passed by the polarizer on `fiber`, if the circuit has one.
  std::vector<std::size_t> detector_modes(const std::string& fiber) const;

 private:
  RegistryPtr registry_;
  BsConvention convention_;
  std::vector<Stage> stages_;
};

/// U_last * ... * U_first, each stage embedded as a block matrix.
Eigen::MatrixXcd compile_unitary(const CircuitGraph& graph);

/// Matrix of a single component embedded in the graph's mode space.
Eigen::MatrixXcd component_matrix(const CircuitGraph& graph, const CircuitComponent& c);

}  // namespace biphoton
