#pragma once

// The Bell-state source chip: a pump-splitting tree feeding four pair-generating
// waveguides W1..W4, two-source interference of W1/W2 and W3/W4 on 50:50
// splitters, and two 2-D grating couplers mapping the splitter outputs onto the
// H/V modes of two output fibers (P5, P6):
//
//   splitter(W1,W2) out c -> P5 H      splitter(W3,W4) out c -> P5 V
//   splitter(W1,W2) out d -> P6 V      splitter(W3,W4) out d -> P6 H

#include <array>
#include <complex>
#include <string>

#include "biphoton/circuit.hpp"
#include "biphoton/state.hpp"

namespace biphoton {

/// Effective two-photon phases. `theta_45` / `theta_45p` are the W1-W2 and W3-W4
/// interference phases (0 = both photons leave the splitter through different
/// ports); `alpha` is the phase between the |H,V> and |V,H> components.
struct BellPhaseConfig {
  double alpha = 0.0;
  double theta_45 = 0.0;
  double theta_45p = 0.0;

  void validate() const;
};

/// Wraps a phase into [0, 2 pi).
double wrap_phase(double phi);

enum class PumpInjection {
  Ports1And2,  // one pump per input, all four waveguides pumped
  Port3,       // both pumps into the auxiliary input of the W1/W2 splitter
  Port4,       // both pumps into the auxiliary input of the W3/W4 splitter
};

/// Per-photon optical phases applied by the three heaters.
struct ShifterPhases {
  double tps1 = 0.0;  // pump arm feeding the W3/W4 splitter
  double tps2 = 0.0;  // on W1
  double tps3 = 0.0;  // on W3
};

/// Classical propagation of the two pump fields through the splitting tree.
class PumpTree {
 public:
  explicit PumpTree(BsConvention convention = BsConvention::Symmetric);

  /// Product of the two pump amplitudes reaching W1..W4.
  std::array<cplx, 4> pair_amplitudes(PumpInjection injection, double tps1_phase) const;

  CircuitGraph graph(double tps1_phase) const;

 private:
  BsConvention convention_;
  RegistryPtr registry_;
};

/// Single-pair source state: sum_k c_k |2>_{Wk} with c_k from the pump tree,
/// the per-source pair amplitudes in `graph`, and the W1/W3 heater phases.
/// The graph must hold an SfwmSource on each of W1..W4.
TwoPhotonState build_source_state(const CircuitGraph& graph, const PumpTree& tree,
                                  const ShifterPhases& phases, cplx pair_amplitude,
                                  PumpInjection injection = PumpInjection::Ports1And2);

struct OutputState {
  TwoPhotonState state;           // over {P5H, P5V, P6H, P6V}
  double bunched_probability;     // both photons in the same fiber
  bool at_split_condition;
};

class BellChip {
 public:
  explicit BellChip(BsConvention convention = BsConvention::Symmetric);

  BsConvention convention() const { return convention_; }
  /// W1..W4 then P5H, P5V, P6H, P6V.
  const RegistryPtr& registry() const { return registry_; }
  /// P5H, P5V, P6H, P6V.
  const RegistryPtr& fiber_registry() const { return fiber_registry_; }
  const CircuitGraph& graph() const { return graph_; }
  const PumpTree& pump_tree() const { return tree_; }
  const Eigen::MatrixXcd& transfer_matrix() const { return transfer_; }

  /// Heater settings that realize the requested effective phases.
  ShifterPhases shifter_phases(const BellPhaseConfig& config) const;

  TwoPhotonState source_state(const BellPhaseConfig& config, cplx pair_amplitude = 1.0,
                              PumpInjection injection = PumpInjection::Ports1And2) const;

  /// Propagates a state on the chip registry to the fiber registry.
  TwoPhotonState to_fibers(const TwoPhotonState& source) const;

  OutputState output_state(const BellPhaseConfig& config) const;

 private:
  BsConvention convention_;
  RegistryPtr registry_;
  RegistryPtr fiber_registry_;
  CircuitGraph graph_;
  PumpTree tree_;
  Eigen::MatrixXcd transfer_;
  double tps2_offset_ = 0.0;
  double tps3_offset_ = 0.0;
  double alpha_offset_ = 0.0;
};

/// Analytic |H,V> + e^{i alpha} |V,H> over the fiber registry of `chip`.
TwoPhotonState bell_state(const BellChip& chip, double alpha);

}  // namespace biphoton
