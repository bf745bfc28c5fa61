#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

#include <biphoton/state.hpp>

namespace testing {

// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
// R's diagonal divided out.
inline Eigen::MatrixXcd haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = {g(rng), g(rng)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR();
  for (int j = 0; j < n; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

inline biphoton::Amplitudes random_amplitudes(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  biphoton::Amplitudes a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
  return a;
}

inline biphoton::RegistryPtr path_registry(int n) {
  biphoton::ModeRegistry r;
  for (int i = 0; i < n; ++i) r.add_path("m" + std::to_string(i), 193.1);
  return biphoton::share(std::move(r));
}

}  // namespace testing
