#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <biphoton/circuit.hpp>
#include <biphoton/verify/operator_expansion.hpp>

#include "helpers.hpp"

using namespace biphoton;

namespace {

RegistryPtr two_fibers() {
  ModeRegistry r;
  r.add_fiber("A", 193.1);
  r.add_fiber("B", 193.1);
  r.add_path("x", 193.1);
  r.add_path("y", 193.1);
  return share(std::move(r));
}

CircuitGraph random_circuit(const RegistryPtr& reg, BsConvention conv, std::mt19937_64& rng, int max_components) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const char* labels[] = {"AH", "AV", "BH", "BV", "x", "y"};
  CircuitGraph g(reg, conv);
  const int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_components));
  for (int k = 0; k < n; ++k) {
    switch (rng() % 6) {
      case 0: {
        const auto a = rng() % 6;
        g.add(BeamSplitter50{labels[a], labels[(a + 1 + rng() % 5) % 6]});
        break;
      }
      case 1: g.add(PhaseShifter{labels[rng() % 6], 2 * std::numbers::pi * u(rng)}); break;
      case 2: g.add(HalfWavePlate{rng() % 2 ? "A" : "B", 180.0 * u(rng)}); break;
      case 3: g.add(FiberCoupler50{"A", "B"}); break;
      case 4: g.add(GratingMapper2D{"x", "y", rng() % 2 ? "A" : "B"}); break;
      default: {
        const auto q = testing::haar_unitary(2, rng);
        g.add(PolarizationRotator{rng() % 2 ? "A" : "B", Eigen::Matrix2cd(q)});
      }
    }
  }
  return g;
}

}  // namespace

TEST_CASE("splitter and wave-plate matrices are unitary") {
  CHECK(is_unitary(beam_splitter_matrix(BsConvention::Symmetric)));
  CHECK(is_unitary(beam_splitter_matrix(BsConvention::Hadamard)));
  for (double h : {0.0, 11.25, 22.5, 45.0, 67.5, 100.0}) CHECK(is_unitary(half_wave_plate_matrix(h)));
  const auto h45 = half_wave_plate_matrix(45.0);
  CHECK(std::abs(h45(0, 0)) < 1e-15);
  CHECK(std::abs(h45(1, 0) - 1.0) < 1e-15);  // H -> V
}

TEST_CASE("HOM suppression holds in both conventions") {
  ModeRegistry r;
  r.add_path("a", 193.1);
  r.add_path("b", 193.1);
  const auto reg = share(std::move(r));
  Amplitudes in = Amplitudes::Zero(2, 2);
  in(0, 1) = 1.0;
  for (auto conv : {BsConvention::Symmetric, BsConvention::Hadamard}) {
    CircuitGraph g(reg, conv);
    g.add(BeamSplitter50{"a", "b"});
    const auto out = apply_unitary(TwoPhotonState(reg, in), compile_unitary(g));
    CHECK(prob_coincidence(out, 0, 1) < 1e-30);
  }
}

TEST_CASE("stage validation") {
  const auto reg = two_fibers();
  CircuitGraph g(reg);
  CHECK_THROWS_AS(g.add_stage({BeamSplitter50{"AH", "AV"}, PhaseShifter{"AV", 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(g.add(BeamSplitter50{"AH", "AH"}), std::invalid_argument);
  CHECK_THROWS_AS(g.add(HalfWavePlate{"A", 180.0}), std::invalid_argument);
  CHECK_THROWS_AS(g.add(HalfWavePlate{"C", 10.0}), std::invalid_argument);
  CHECK_THROWS_AS(g.add(PolarizationRotator{"A", Eigen::Matrix2cd::Identity() * 2.0}), std::invalid_argument);
  CHECK_NOTHROW(g.add_stage({BeamSplitter50{"x", "y"}, HalfWavePlate{"A", 0.0}}));
}

TEST_CASE("compiled circuits are unitary") {
  std::mt19937_64 rng(5);
  const auto reg = two_fibers();
  for (int i = 0; i < 200; ++i) CHECK(is_unitary(compile_unitary(random_circuit(reg, BsConvention::Symmetric, rng, 8))));
}

TEST_CASE("matrix compiler matches the operator-expansion oracle") {
  std::mt19937_64 rng(2024);
  const auto reg = two_fibers();
  double worst = 0.0;
  for (auto conv : {BsConvention::Symmetric, BsConvention::Hadamard}) {
    for (int i = 0; i < 300; ++i) {
      const auto g = random_circuit(reg, conv, rng, 10);
      const TwoPhotonState in(reg, testing::random_amplitudes(6, rng));
      const auto compiled = apply_unitary(in, compile_unitary(g)).amplitudes();
      worst = std::max(worst, (compiled - verify::propagate(g, in)).cwiseAbs().maxCoeff());
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("grating mapper routes paths into fiber polarizations") {
  const auto reg = two_fibers();
  CircuitGraph g(reg);
  g.add(GratingMapper2D{"x", "y", "B"});
  Amplitudes a = Amplitudes::Zero(6, 6);
  a(4, 5) = 1.0;  // one photon in x, one in y
  const auto out = apply_unitary(TwoPhotonState(reg, a), compile_unitary(g));
  CHECK(prob_coincidence(out, "BH", "BV") == doctest::Approx(1.0));
}

TEST_CASE("polarizer selects its pass mode for detection") {
  const auto reg = two_fibers();
  CircuitGraph g(reg);
  CHECK(g.detector_modes("A").size() == 2);
  g.add(Polarizer{"A", Polarization::V});
  const auto m = g.detector_modes("A");
  REQUIRE(m.size() == 1);
  CHECK(m[0] == reg->index("AV"));
}
