#include "biphoton/observables.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace biphoton {
namespace {

constexpr double kSignalThz = 193.1;

// Fiber bench behind the chip. Each fiber mode gets a loss partner (PDL is a
// unitary dilation onto it) and, optionally, a late time-bin twin used to
// model photons made distinguishable by the delay line.
class Bench {
 public:
  Bench(const BellChip& chip, bool twins) : twins_(twins) {
    ModeRegistry r;
    r.add_fiber("P5", kSignalThz);
    r.add_fiber("P6", kSignalThz);
    if (twins) {
      r.add_fiber("P5L", kSignalThz);
      r.add_fiber("P6L", kSignalThz);
    }
    for (const char* m : {"P5H", "P5V", "P6H", "P6V"}) r.add_path(std::string("loss:") + m, kSignalThz);
    registry_ = share(std::move(r));
    const auto& fr = *chip.fiber_registry();
    for (const char* m : {"P5H", "P5V", "P6H", "P6V"}) embed_.emplace_back(fr.index(m), registry_->index(m));
  }

  const RegistryPtr& registry() const { return registry_; }

  TwoPhotonState embed(const TwoPhotonState& fiber_state) const {
    const auto n = registry_->size();
    Amplitudes a = Amplitudes::Zero(n, n);
    for (auto [fj, bj] : embed_)
      for (auto [fk, bk] : embed_) a(bj, bk) = fiber_state.amplitudes()(fj, fk);
    return TwoPhotonState(registry_, std::move(a));
  }

  Eigen::MatrixXcd pdl(const NoiseModel& noise) const {
    const auto n = static_cast<Eigen::Index>(registry_->size());
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
    for (const char* fiber : {"P5", "P6"}) {
      const auto t = noise.transmittance(fiber);
      auto [h, v] = registry_->fiber_modes(fiber);
      for (auto [m, tr] : {std::pair{h, t.h}, std::pair{v, t.v}}) {
        const auto l = registry_->index("loss:" + (*registry_)[m].label);
        const double c = std::sqrt(tr), s = std::sqrt(1.0 - tr);
        u(m, m) = c;
        u(m, l) = -s;
        u(l, m) = s;
        u(l, l) = c;
      }
    }
    return u;
  }

  /// Moves P6 into its late time bin.
  Eigen::MatrixXcd delay() const {
    const auto n = static_cast<Eigen::Index>(registry_->size());
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
    auto [h, v] = registry_->fiber_modes("P6");
    auto [hl, vl] = registry_->fiber_modes("P6L");
    for (auto [a, b] : {std::pair{h, hl}, std::pair{v, vl}}) {
      u(a, a) = 0.0;
      u(b, b) = 0.0;
      u(a, b) = 1.0;
      u(b, a) = 1.0;
    }
    return u;
  }

  /// Modes watched by the detector behind `fiber` (twins included).
  std::vector<std::size_t> detector(const std::string& fiber, std::optional<Polarization> pass) const {
    std::vector<std::size_t> out;
    std::vector<std::string> fibers{fiber};
    if (twins_) fibers.push_back(fiber + "L");
    for (const auto& f : fibers) {
      auto [h, v] = registry_->fiber_modes(f);
      if (!pass || *pass == Polarization::H) out.push_back(h);
      if (!pass || *pass == Polarization::V) out.push_back(v);
    }
    return out;
  }

 private:
  bool twins_;
  RegistryPtr registry_;
  std::vector<std::pair<std::size_t, std::size_t>> embed_;
};

DetectionProbabilities detect(const TwoPhotonState& s, const std::vector<std::size_t>& d1,
                              const std::vector<std::size_t>& d2) {
  const auto& a = s.amplitudes();
  return {prob_coincidence_sets(a, d1, d2), prob_any_in(a, d1), prob_any_in(a, d2)};
}

DetectionProbabilities mix(const DetectionProbabilities& x, const DetectionProbabilities& y, double w) {
  return {w * x.coincidence + (1.0 - w) * y.coincidence, w * x.single_1 + (1.0 - w) * y.single_1,
          w * x.single_2 + (1.0 - w) * y.single_2};
}

DetectionProbabilities average(const MixedTwoPhotonState& m,
                               const std::function<DetectionProbabilities(const TwoPhotonState&)>& f) {
  DetectionProbabilities acc;
  for (const auto& b : m.branches()) {
    const auto p = f(b.state);
    acc.coincidence += b.weight * p.coincidence;
    acc.single_1 += b.weight * p.single_1;
    acc.single_2 += b.weight * p.single_2;
  }
  return acc;
}

std::vector<std::vector<std::size_t>> groups(const BellChip& chip,
                                             std::initializer_list<std::initializer_list<const char*>> g) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& grp : g) {
    auto& v = out.emplace_back();
    for (const char* m : grp) v.push_back(chip.registry()->index(m));
  }
  return out;
}

// Coincidence on the two coupler outputs, mixing the interfering (weight w) and
// time-distinguishable propagation of the same input.
DetectionProbabilities coupler_detection(const Bench& bench, const TwoPhotonState& fiber_state,
                                         const NoiseModel& noise, const CircuitGraph& optics, double w) {
  const auto lossy = apply_unitary(bench.embed(fiber_state), bench.pdl(noise));
  const auto u = compile_unitary(optics);
  const auto d1 = bench.detector("P5", std::nullopt);
  const auto d2 = bench.detector("P6", std::nullopt);
  const auto coherent = detect(apply_unitary(lossy, u), d1, d2);
  const auto late = detect(apply_unitary(apply_unitary(lossy, bench.delay()), u), d1, d2);
  return mix(coherent, late, w);
}

CircuitGraph coupler_optics(const Bench& bench, BsConvention convention,
                            const Eigen::Matrix2cd& rotator) {
  CircuitGraph g(bench.registry(), convention);
  g.add_stage({PolarizationRotator{"P6", rotator}});
  g.add_stage({FiberCoupler50{"P5", "P6"}, FiberCoupler50{"P5L", "P6L"}});
  return g;
}

}  // namespace

double split_probability(double theta) { return 0.5 * (1.0 + std::cos(theta)); }
double bunch_probability(double theta) { return 0.5 * (1.0 - std::cos(theta)); }

DetectionProbabilities fringe_probabilities(const BellChip& chip, double theta, const NoiseModel& noise,
                                            PumpInjection injection) {
  noise.validate();
  BellPhaseConfig config;
  std::vector<std::vector<std::size_t>> dephase;
  if (injection == PumpInjection::Port3) {
    config.theta_45 = wrap_phase(theta);
    dephase = groups(chip, {{"W1"}, {"W2"}});
  } else if (injection == PumpInjection::Port4) {
    config.theta_45p = wrap_phase(theta);
    dephase = groups(chip, {{"W3"}, {"W4"}});
  } else {
    throw std::invalid_argument("fringe experiment pumps a single splitter pair (Port3 or Port4)");
  }
  const auto source = dephase_groups(chip.source_state(config, 1.0, injection), dephase,
                                     noise.mode_overlap_mu);
  Bench bench(chip, false);
  const auto d1 = bench.detector("P5", std::nullopt);
  const auto d2 = bench.detector("P6", std::nullopt);
  auto p = average(source, [&](const TwoPhotonState& s) {
    const auto lossy = apply_unitary(bench.embed(chip.to_fibers(s)), bench.pdl(noise));
    return detect(lossy, d1, d2);
  });
  p.coincidence += noise.accidental_floor;
  return p;
}

double simulated_split_probability(const BellChip& chip, double theta) {
  return fringe_probabilities(chip, theta, NoiseModel::ideal()).coincidence;
}

DetectionProbabilities analyzer_probabilities(const BellChip& chip, const BellPhaseConfig& config,
                                              double hwp1_deg, double hwp2_deg,
                                              const NoiseModel& noise) {
  config.validate();
  noise.validate();
  const auto source = dephase_groups(chip.source_state(config), groups(chip, {{"W1", "W2"}, {"W3", "W4"}}),
                                     noise.mode_overlap_mu);
  Bench bench(chip, false);
  CircuitGraph optics(bench.registry(), chip.convention());
  optics.add_stage({HalfWavePlate{"P5", hwp1_deg}, HalfWavePlate{"P6", hwp2_deg}});
  optics.add_stage({Polarizer{"P5", Polarization::H}, Polarizer{"P6", Polarization::H}});
  const auto u = compile_unitary(optics);
  const auto d1 = optics.detector_modes("P5");
  const auto d2 = optics.detector_modes("P6");
  auto p = average(source, [&](const TwoPhotonState& s) {
    const auto lossy = apply_unitary(bench.embed(chip.to_fibers(s)), bench.pdl(noise));
    return detect(apply_unitary(lossy, u), d1, d2);
  });
  p.coincidence += noise.accidental_floor;
  return p;
}

double analyzer_coincidence(const BellChip& chip, const BellPhaseConfig& config, double hwp1_deg,
                            double hwp2_deg, const NoiseModel& noise) {
  return analyzer_probabilities(chip, config, hwp1_deg, hwp2_deg, noise).coincidence;
}

DetectionProbabilities bsm_probabilities(const BellChip& chip, const BellPhaseConfig& config,
                                         double tau_ps, const SpectralEnvelope& spectral,
                                         const NoiseModel& noise) {
  config.validate();
  noise.validate();
  const auto source = dephase_groups(chip.source_state(config), groups(chip, {{"W1", "W2"}, {"W3", "W4"}}),
                                     noise.mode_overlap_mu);
  Bench bench(chip, true);
  const auto optics = coupler_optics(bench, chip.convention(), Eigen::Matrix2cd::Identity());
  const double w = overlap(spectral, tau_ps);
  auto p = average(source, [&](const TwoPhotonState& s) {
    return coupler_detection(bench, chip.to_fibers(s), noise, optics, w);
  });
  p.coincidence += noise.accidental_floor;
  return p;
}

double bsm_coincidence(const BellChip& chip, const BellPhaseConfig& config, double tau_ps,
                       const SpectralEnvelope& spectral, const NoiseModel& noise) {
  return bsm_probabilities(chip, config, tau_ps, spectral, noise).coincidence;
}

DetectionProbabilities hom_probabilities(const BellChip& chip, PumpInjection injection, double tau_ps,
                                         const SpectralEnvelope& spectral, double visibility,
                                         const NoiseModel& noise) {
  if (injection == PumpInjection::Ports1And2)
    throw std::invalid_argument("HOM experiment pumps a single splitter pair (Port3 or Port4)");
  if (!(visibility >= 0.0 && visibility <= 1.0))
    throw std::invalid_argument("HOM visibility must lie in [0,1]");
  noise.validate();
  const auto fibers = chip.to_fibers(chip.source_state(BellPhaseConfig{}, 1.0, injection));
  Bench bench(chip, true);
  Eigen::Matrix2cd swap_hv;
  swap_hv << 0, 1, 1, 0;
  const auto optics = coupler_optics(bench, chip.convention(), swap_hv);
  auto p = coupler_detection(bench, fibers, noise, optics, visibility * overlap(spectral, tau_ps));
  p.coincidence += noise.accidental_floor;
  return p;
}

}  // namespace biphoton
