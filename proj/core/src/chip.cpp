#include "biphoton/chip.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "biphoton/errors.hpp"

namespace biphoton {
namespace {

constexpr double kSignalThz = 193.1;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::array<const char*, 4> kWaveguides = {"W1", "W2", "W3", "W4"};

// Two-photon ratio a1/a2 on the inputs of a 50:50 splitter for which both
// photons leave through different outputs.
cplx split_ratio(const Eigen::Matrix2cd& u) { return -u(0, 1) * u(0, 1) / (u(0, 0) * u(0, 0)); }

}  // namespace

void BellPhaseConfig::validate() const {
  for (double p : {alpha, theta_45, theta_45p})
    if (!(p >= 0.0 && p < kTwoPi)) throw std::invalid_argument("Bell phases must lie in [0, 2 pi)");
}

double wrap_phase(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r >= kTwoPi ? 0.0 : r;
}

PumpTree::PumpTree(BsConvention convention) : convention_(convention) {
  ModeRegistry r;
  // Pump arms, named after the waveguide each finally feeds. Port 1 enters on
  // W1, port 2 on W3, the auxiliary ports 3/4 on W2/W4.
  for (const char* w : kWaveguides) r.add_path(w, kSignalThz);
  registry_ = share(std::move(r));
}

CircuitGraph PumpTree::graph(double tps1_phase) const {
  CircuitGraph g(registry_, convention_);
  g.add(BeamSplitter50{"W1", "W3"});
  g.add(PhaseShifter{"W3", tps1_phase});
  g.add_stage({BeamSplitter50{"W1", "W2"}, BeamSplitter50{"W3", "W4"}});
  return g;
}

std::array<cplx, 4> PumpTree::pair_amplitudes(PumpInjection injection, double tps1_phase) const {
  const Eigen::MatrixXcd u = compile_unitary(graph(tps1_phase));
  auto input = [](int k) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(4);
    e(k) = 1.0;
    return e;
  };
  Eigen::VectorXcd p1, p2;
  switch (injection) {
    case PumpInjection::Ports1And2:
      p1 = u * input(0);
      p2 = u * input(2);
      break;
    case PumpInjection::Port3:
      p1 = p2 = u * input(1);
      break;
    case PumpInjection::Port4:
      p1 = p2 = u * input(3);
      break;
  }
  std::array<cplx, 4> out{};
  for (int k = 0; k < 4; ++k) out[k] = p1(k) * p2(k);
  return out;
}

TwoPhotonState build_source_state(const CircuitGraph& graph, const PumpTree& tree,
                                  const ShifterPhases& phases, cplx pair_amplitude,
                                  PumpInjection injection) {
  const auto& reg = graph.registry();
  std::array<std::optional<cplx>, 4> source;
  for (const auto& stage : graph.stages())
    for (const auto& c : stage)
      if (const auto* s = std::get_if<SfwmSource>(&c))
        for (int k = 0; k < 4; ++k)
          if (s->port == kWaveguides[k]) source[k] = s->pair_amplitude;
  for (int k = 0; k < 4; ++k)
    if (!source[k])
      throw std::invalid_argument(std::string("circuit has no pair source on ") + kWaveguides[k]);

  const auto pump = tree.pair_amplitudes(injection, phases.tps1);
  const std::array<double, 4> heater = {phases.tps2, 0.0, phases.tps3, 0.0};
  Amplitudes a = Amplitudes::Zero(reg.size(), reg.size());
  for (int k = 0; k < 4; ++k) {
    const auto j = reg.index(kWaveguides[k]);
    // A heater after generation phases both photons of the pair.
    a(j, j) = pair_amplitude * *source[k] * pump[k] * std::polar(1.0, 2.0 * heater[k]);
  }
  if (a.cwiseAbs().maxCoeff() == 0.0) throw SimulationError("source state has zero pair amplitude");
  return TwoPhotonState(graph.registry_ptr(), std::move(a));
}

BellChip::BellChip(BsConvention convention)
    : convention_(convention),
      registry_([] {
        ModeRegistry r;
        for (const char* w : kWaveguides) r.add_path(w, kSignalThz);
        r.add_fiber("P5", kSignalThz);
        r.add_fiber("P6", kSignalThz);
        return share(std::move(r));
      }()),
      fiber_registry_([] {
        ModeRegistry r;
        r.add_fiber("P5", kSignalThz);
        r.add_fiber("P6", kSignalThz);
        return share(std::move(r));
      }()),
      graph_(registry_, convention),
      tree_(convention) {
  graph_.add_stage({SfwmSource{"W1"}, SfwmSource{"W2"}, SfwmSource{"W3"}, SfwmSource{"W4"}});
  graph_.add_stage({BeamSplitter50{"W1", "W2"}, BeamSplitter50{"W3", "W4"}});
  graph_.add_stage({GratingMapper2D{"W1", "W3", "P5"}, GratingMapper2D{"W4", "W2", "P6"}});
  transfer_ = compile_unitary(graph_);

  const cplx target = split_ratio(beam_splitter_matrix(convention));
  const auto pump = tree_.pair_amplitudes(PumpInjection::Ports1And2, 0.0);
  tps2_offset_ = std::arg(target) - std::arg(pump[0] / pump[1]);
  tps3_offset_ = std::arg(target) - std::arg(pump[2] / pump[3]);

  // Reference point: TPS1 idle, both splitters at the split condition.
  const auto out = to_fibers(
      build_source_state(graph_, tree_, {0.0, 0.5 * tps2_offset_, 0.5 * tps3_offset_}, 1.0));
  const auto& a = out.amplitudes();
  const auto& fr = *fiber_registry_;
  alpha_offset_ = std::arg(a(fr.index("P5V"), fr.index("P6H")) / a(fr.index("P5H"), fr.index("P6V")));
}

ShifterPhases BellChip::shifter_phases(const BellPhaseConfig& config) const {
  return {0.5 * (config.alpha - alpha_offset_), 0.5 * (config.theta_45 + tps2_offset_),
          0.5 * (config.theta_45p + tps3_offset_)};
}

TwoPhotonState BellChip::source_state(const BellPhaseConfig& config, cplx pair_amplitude,
                                      PumpInjection injection) const {
  return build_source_state(graph_, tree_, shifter_phases(config), pair_amplitude, injection);
}

TwoPhotonState BellChip::to_fibers(const TwoPhotonState& source) const {
  if (!(source.registry() == *registry_)) throw SimulationError("state is not on the chip registry");
  const auto out = apply_unitary(source, transfer_);
  const auto& a = out.amplitudes();
  constexpr Eigen::Index kFirstFiber = 4;
  double leftover = 0.0;
  for (Eigen::Index j = 0; j < a.rows(); ++j)
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      if (j < kFirstFiber || k < kFirstFiber) leftover += std::norm(a(j, k));
  if (leftover > 1e-20) throw SimulationError("photons left on chip after the grating couplers");
  return TwoPhotonState(fiber_registry_, a.bottomRightCorner(4, 4));
}

OutputState BellChip::output_state(const BellPhaseConfig& config) const {
  config.validate();
  auto state = to_fibers(source_state(config));
  const auto& fr = *fiber_registry_;
  const auto p5 = fr.fiber_indices("P5");
  const auto p6 = fr.fiber_indices("P6");
  const double split = prob_coincidence_sets(state.amplitudes(), p5, p6);
  const double bunched = std::max(0.0, 1.0 - split);
  return {std::move(state), bunched, bunched < 1e-10};
}

TwoPhotonState bell_state(const BellChip& chip, double alpha) {
  const auto& reg = chip.fiber_registry();
  Amplitudes a = Amplitudes::Zero(4, 4);
  a(reg->index("P5H"), reg->index("P6V")) = 1.0;
  a(reg->index("P5V"), reg->index("P6H")) = std::polar(1.0, alpha);
  return TwoPhotonState(reg, std::move(a));
}

}  // namespace biphoton
