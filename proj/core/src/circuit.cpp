#include "biphoton/circuit.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "biphoton/state.hpp"

namespace biphoton {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void embed(Eigen::MatrixXcd& u, std::size_t a, std::size_t b, const Eigen::Matrix2cd& m) {
  u(a, a) = m(0, 0);
  u(a, b) = m(0, 1);
  u(b, a) = m(1, 0);
  u(b, b) = m(1, 1);
}

}  // namespace

Eigen::Matrix2cd beam_splitter_matrix(BsConvention convention) {
  const double r = 1.0 / std::numbers::sqrt2;
  Eigen::Matrix2cd m;
  if (convention == BsConvention::Symmetric)
    m << r, cplx(0, r), cplx(0, r), r;
  else
    m << r, r, r, -r;
  return m;
}

Eigen::Matrix2cd half_wave_plate_matrix(double angle_deg) {
  const double h = 2.0 * angle_deg * std::numbers::pi / 180.0;
  Eigen::Matrix2cd m;
  m << std::cos(h), std::sin(h), std::sin(h), -std::cos(h);
  return m;
}

CircuitGraph::CircuitGraph(RegistryPtr registry, BsConvention convention)
    : registry_(std::move(registry)), convention_(convention) {
  if (!registry_) throw std::invalid_argument("circuit graph requires a mode registry");
}

std::vector<std::size_t> CircuitGraph::modes_of(const CircuitComponent& c) const {
  const auto& r = *registry_;
  auto path = [&](const std::string& label) {
    const auto i = r.index(label);
    if (r[i].kind != ModeKind::OnChipPath)
      throw std::invalid_argument("'" + label + "' is not an on-chip path mode");
    return i;
  };
  return std::visit(
      overloaded{
          [&](const BeamSplitter50& x) -> std::vector<std::size_t> {
            return {r.index(x.port_a), r.index(x.port_b)};
          },
          [&](const PhaseShifter& x) -> std::vector<std::size_t> { return {r.index(x.port)}; },
          [&](const SfwmSource& x) -> std::vector<std::size_t> { return {path(x.port)}; },
          [&](const GratingMapper2D& x) -> std::vector<std::size_t> {
            auto [h, v] = r.fiber_modes(x.out_fiber);
            return {path(x.in_h), path(x.in_v), h, v};
          },
          [&](const HalfWavePlate& x) { return r.fiber_indices(x.fiber); },
          [&](const Polarizer& x) { return r.fiber_indices(x.fiber); },
          [&](const FiberCoupler50& x) {
            auto a = r.fiber_indices(x.fiber_a);
            auto b = r.fiber_indices(x.fiber_b);
            a.insert(a.end(), b.begin(), b.end());
            return a;
          },
          [&](const DelayLine& x) { return r.fiber_indices(x.fiber); },
          [&](const PolarizationRotator& x) { return r.fiber_indices(x.fiber); },
      },
      c);
}

CircuitGraph& CircuitGraph::add_stage(Stage stage) {
  std::set<std::size_t> used;
  for (const auto& c : stage) {
    const auto modes = modes_of(c);
    std::set<std::size_t> own(modes.begin(), modes.end());
    if (own.size() != modes.size())
      throw std::invalid_argument("component references the same mode twice");
    for (auto m : modes)
      if (!used.insert(m).second)
        throw std::invalid_argument("mode '" + (*registry_)[m].label +
                                    "' is used by two components in one stage");
    if (const auto* hwp = std::get_if<HalfWavePlate>(&c)) {
      if (!(hwp->angle_deg >= 0.0 && hwp->angle_deg < 180.0))
        throw std::invalid_argument("half-wave plate angle must lie in [0, 180) degrees");
    }
    if (const auto* rot = std::get_if<PolarizationRotator>(&c)) {
      if (!is_unitary(rot->unitary)) throw std::invalid_argument("polarization rotator is not unitary");
    }
    if (const auto* d = std::get_if<DelayLine>(&c)) {
      if (!std::isfinite(d->delay_ps)) throw std::invalid_argument("delay must be finite");
    }
  }
  stages_.push_back(std::move(stage));
  return *this;
}

std::vector<std::size_t> CircuitGraph::detector_modes(const std::string& fiber) const {
  for (const auto& stage : stages_)
    for (const auto& c : stage)
      if (const auto* p = std::get_if<Polarizer>(&c); p && p->fiber == fiber) {
        auto [h, v] = registry_->fiber_modes(fiber);
        return {p->pass_axis == Polarization::H ? h : v};
      }
  return registry_->fiber_indices(fiber);
}

Eigen::MatrixXcd component_matrix(const CircuitGraph& graph, const CircuitComponent& c) {
  const auto n = static_cast<Eigen::Index>(graph.registry().size());
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
  const auto modes = graph.modes_of(c);
  std::visit(overloaded{
                 [&](const BeamSplitter50&) {
                   embed(u, modes[0], modes[1], beam_splitter_matrix(graph.convention()));
                 },
                 [&](const PhaseShifter& x) { u(modes[0], modes[0]) = std::polar(1.0, x.phase); },
                 [&](const SfwmSource&) {},
                 [&](const GratingMapper2D&) {
                   // Swap path <-> fiber mode so the photon ends up in the fiber.
                   Eigen::Matrix2cd swap;
                   swap << 0, 1, 1, 0;
                   embed(u, modes[0], modes[2], swap);
                   embed(u, modes[1], modes[3], swap);
                 },
                 [&](const HalfWavePlate& x) {
                   embed(u, modes[0], modes[1], half_wave_plate_matrix(x.angle_deg));
                 },
                 [&](const Polarizer&) {},
                 [&](const FiberCoupler50&) {
                   const auto bs = beam_splitter_matrix(graph.convention());
                   embed(u, modes[0], modes[2], bs);  // H_a, H_b
                   embed(u, modes[1], modes[3], bs);  // V_a, V_b
                 },
                 [&](const DelayLine&) {},
                 [&](const PolarizationRotator& x) { embed(u, modes[0], modes[1], x.unitary); },
             },
             c);
  return u;
}

Eigen::MatrixXcd compile_unitary(const CircuitGraph& graph) {
  const auto n = static_cast<Eigen::Index>(graph.registry().size());
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Identity(n, n);
  for (const auto& stage : graph.stages()) {
    Eigen::MatrixXcd block = Eigen::MatrixXcd::Identity(n, n);
    // Components in a stage touch disjoint modes, so their product is the block.
    for (const auto& c : stage) block = component_matrix(graph, c) * block;
    total = block * total;
  }
  return total;
}

}  // namespace biphoton
