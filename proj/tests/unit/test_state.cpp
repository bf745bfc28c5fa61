#include <doctest.h>

#include <cmath>
#include <numbers>

#include <biphoton/errors.hpp>
#include <biphoton/state.hpp>

#include "helpers.hpp"

using namespace biphoton;

TEST_CASE("construction symmetrizes and normalizes") {
  const auto reg = testing::path_registry(3);
  Amplitudes a = Amplitudes::Zero(3, 3);
  a(0, 1) = 1.0;  // only one triangle given
  const TwoPhotonState s(reg, a);
  CHECK(s.amplitudes()(0, 1) == s.amplitudes()(1, 0));
  CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(prob_coincidence(s, 0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(TwoPhotonState(reg, Amplitudes::Zero(3, 3)), SimulationError);
  CHECK_THROWS_AS(TwoPhotonState(reg, Amplitudes::Zero(2, 2)), std::invalid_argument);
}

TEST_CASE("pair in one mode is bunched") {
  const auto reg = testing::path_registry(2);
  const auto s = make_pair_in_mode(reg, "m1");
  CHECK(prob_bunched(s, "m1") == doctest::Approx(1.0));
  CHECK(prob_coincidence(s, "m0", "m1") == doctest::Approx(0.0));
}

TEST_CASE("50:50 splitter on |1,1> bunches completely") {
  const auto reg = testing::path_registry(2);
  Amplitudes a = Amplitudes::Zero(2, 2);
  a(0, 1) = 1.0;
  const TwoPhotonState in(reg, a);
  Eigen::MatrixXcd bs(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  bs << r, cplx(0, r), cplx(0, r), r;
  const auto out = apply_unitary(in, bs);
  CHECK(prob_coincidence(out, 0, 1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(prob_bunched(out, 0) == doctest::Approx(0.5));
  CHECK(prob_bunched(out, 1) == doctest::Approx(0.5));
}

TEST_CASE("probabilities are complete for random states") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 6;
    const TwoPhotonState s(testing::path_registry(n), testing::random_amplitudes(n, rng));
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      total += prob_bunched(s, static_cast<std::size_t>(j));
      for (int k = j + 1; k < n; ++k) total += prob_coincidence(s, static_cast<std::size_t>(j), static_cast<std::size_t>(k));
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("norm drift stays below 1e-10 over 10^4 Haar unitaries") {
  std::mt19937_64 rng(11);
  const int n = 6;
  TwoPhotonState s(testing::path_registry(n), testing::random_amplitudes(n, rng));
  for (int k = 0; k < 10000; ++k) s = apply_unitary(s, testing::haar_unitary(n, rng));
  CHECK(std::abs(s.norm() - 1.0) < 1e-10);
}

TEST_CASE("unitary check rejects lossy matrices") {
  const auto reg = testing::path_registry(2);
  const auto s = make_pair_in_mode(reg, "m0");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2, 2) * 0.9;
  CHECK_THROWS_AS(apply_unitary(s, m), SimulationError);
}

TEST_CASE("inner product and fidelity") {
  std::mt19937_64 rng(3);
  const auto reg = testing::path_registry(4);
  const TwoPhotonState a(reg, testing::random_amplitudes(4, rng));
  CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-14));
  const auto u = testing::haar_unitary(4, rng);
  const TwoPhotonState b(reg, testing::random_amplitudes(4, rng));
  // Unitaries preserve inner products.
  const auto before = inner_product(a, b);
  const auto after = inner_product(apply_unitary(a, u), apply_unitary(b, u));
  CHECK(std::abs(before - after) < 1e-12);
}

TEST_CASE("superpose cancels and renormalizes") {
  const auto reg = testing::path_registry(2);
  const auto p0 = make_pair_in_mode(reg, "m0");
  const auto p1 = make_pair_in_mode(reg, "m1");
  const std::pair<cplx, TwoPhotonState> terms[] = {{1.0, p0}, {1.0, p1}};
  const auto s = superpose(terms);
  CHECK(prob_bunched(s, 0) == doctest::Approx(0.5));
  const std::pair<cplx, TwoPhotonState> cancel[] = {{1.0, p0}, {-1.0, p0}};
  CHECK_THROWS_AS(superpose(cancel), SimulationError);
}

TEST_CASE("dephasing keeps populations and scales coherences") {
  const auto reg = testing::path_registry(4);
  Amplitudes a = Amplitudes::Zero(4, 4);
  a(0, 0) = 1.0;
  a(2, 2) = 1.0;
  const TwoPhotonState s(reg, a);
  const auto mixed = dephase_groups(s, {{0, 1}, {2, 3}}, 0.6);
  double weights = 0.0;
  for (const auto& b : mixed.branches()) weights += b.weight;
  CHECK(weights == doctest::Approx(1.0).epsilon(1e-15));
  // Populations unchanged.
  CHECK(mixed.expectation([](const TwoPhotonState& x) { return prob_bunched(x, 0); }) == doctest::Approx(0.5));
  // The coherence between the groups shows up after a splitter on modes 0 and 2.
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(4, 4);
  const double r = 1.0 / std::sqrt(2.0);
  u(0, 0) = r;
  u(0, 2) = r;
  u(2, 0) = r;
  u(2, 2) = -r;
  const auto split = mixed.expectation([&](const TwoPhotonState& x) { return prob_coincidence(apply_unitary(x, u), 0, 2); });
  const auto coherent = prob_coincidence(apply_unitary(s, u), 0, 2);
  const auto incoherent = 0.5;  // each |2> alone splits with probability 1/2
  CHECK(split == doctest::Approx(0.6 * coherent + 0.4 * incoherent).epsilon(1e-12));
  CHECK_THROWS_AS(dephase_groups(s, {{0, 1}, {1, 2}}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(dephase_groups(s, {{0, 1}}, 0.5), SimulationError);
}

TEST_CASE("detector set probabilities") {
  const auto reg = testing::path_registry(4);
  Amplitudes a = Amplitudes::Zero(4, 4);
  a(0, 2) = 1.0;
  a(1, 1) = 1.0;
  const TwoPhotonState s(reg, a);
  const std::size_t d1[] = {0, 1};
  const std::size_t d2[] = {2, 3};
  const double p02 = prob_coincidence(s, 0, 2);
  CHECK(prob_coincidence_sets(s.amplitudes(), d1, d2) == doctest::Approx(p02));
  CHECK(prob_any_in(s.amplitudes(), d1) == doctest::Approx(1.0));
  CHECK(prob_any_in(s.amplitudes(), d2) == doctest::Approx(p02));
}
