#pragma once

// Two-photon states over a registry of optical modes.
//
// A pure state is stored as a symmetric amplitude matrix A such that
//   |psi> = sum_{j,k} A_jk a_j^dag a_k^dag |0>,
// normalized by 2 * sum_{jk} |A_jk|^2 = 1. A linear-optical network with
// mode-transfer matrix U (a_j^dag -> sum_k U_kj a_k^dag) maps A to U A U^T.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "biphoton/mode.hpp"

namespace biphoton {

using cplx = std::complex<double>;
using Amplitudes = Eigen::MatrixXcd;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-10;

class TwoPhotonState {
 public:
  /// Symmetrizes and renormalizes `amplitudes`. Throws SimulationError when the
  /// matrix is zero and std::invalid_argument on a dimension mismatch.
  TwoPhotonState(RegistryPtr registry, Amplitudes amplitudes);

  const Amplitudes& amplitudes() const { return amplitudes_; }
  const ModeRegistry& registry() const { return *registry_; }
  const RegistryPtr& registry_ptr() const { return registry_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.rows()); }

  /// 2 * sum |A_jk|^2; equals 1 for every value of this type up to rounding.
  double norm() const;

  /// Same registry, new amplitudes, no renormalization. Used by transformations,
  /// which preserve the norm themselves.
  TwoPhotonState with_amplitudes(Amplitudes a) const;

 private:
  struct Unchecked {};
  TwoPhotonState(Unchecked, RegistryPtr registry, Amplitudes amplitudes);

  RegistryPtr registry_;
  Amplitudes amplitudes_;
};

/// Finite ensemble of pure states, used for partially distinguishable photons.
class MixedTwoPhotonState {
 public:
  struct Branch {
    double weight;
    TwoPhotonState state;
  };

  explicit MixedTwoPhotonState(std::vector<Branch> branches);
  static MixedTwoPhotonState pure(TwoPhotonState s);

  const std::vector<Branch>& branches() const { return branches_; }

  /// Weighted average of a per-branch observable.
  template <typename F>
  double expectation(F&& observable) const {
    double acc = 0.0;
    for (const auto& b : branches_) acc += b.weight * observable(b.state);
    return acc;
  }

  /// Applies the same pure-state map to every branch.
  template <typename F>
  MixedTwoPhotonState transform(F&& map) const {
    std::vector<Branch> out;
    out.reserve(branches_.size());
    for (const auto& b : branches_) out.push_back({b.weight, map(b.state)});
    return MixedTwoPhotonState(std::move(out));
  }

 private:
  std::vector<Branch> branches_;
};

TwoPhotonState make_pair_in_mode(const RegistryPtr& registry, std::string_view mode_label);

/// sum_i c_i |psi_i>, renormalized. Throws on registry mismatch or total cancellation.
TwoPhotonState superpose(std::span<const std::pair<cplx, TwoPhotonState>> terms);

/// Requires ||U^dag U - I||_max <= kUnitaryTolerance.
TwoPhotonState apply_unitary(const TwoPhotonState& state, const Eigen::MatrixXcd& u);

double prob_coincidence(const TwoPhotonState& state, std::size_t j, std::size_t k);
double prob_coincidence(const TwoPhotonState& state, std::string_view j, std::string_view k);
double prob_bunched(const TwoPhotonState& state, std::size_t j);
double prob_bunched(const TwoPhotonState& state, std::string_view j);

/// |<a|b>|^2 with <a|b> = 2 sum conj(A_a) A_b.
double fidelity(const TwoPhotonState& a, const TwoPhotonState& b);
cplx inner_product(const TwoPhotonState& a, const TwoPhotonState& b);

bool is_unitary(const Eigen::MatrixXcd& u, double tol = kUnitaryTolerance);

// Detector-level probabilities on (possibly unnormalized) amplitude matrices.
// A detector watching a set of modes clicks when at least one photon lands in it.

/// Probability that one photon lands in `a` and the other in `b` (disjoint sets).
double prob_coincidence_sets(const Amplitudes& a,
                             std::span<const std::size_t> set_a,
                             std::span<const std::size_t> set_b);
/// Probability that at least one photon lands in `set`.
double prob_any_in(const Amplitudes& a, std::span<const std::size_t> set);
/// 2 * sum |A_jk|^2 without a normalization requirement.
double total_probability(const Amplitudes& a);

/// Partial which-path decoherence between groups of modes. Each group collects
/// the amplitude entries with both photons inside it; the result keeps the
/// coherent state with weight `mu` and each group's component separately with
/// weight (1 - mu) * p_group. Entries spanning two groups must vanish.
MixedTwoPhotonState dephase_groups(const TwoPhotonState& state,
                                   const std::vector<std::vector<std::size_t>>& groups,
                                   double mu);

}  // namespace biphoton
