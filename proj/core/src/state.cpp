#include "biphoton/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "biphoton/errors.hpp"

namespace biphoton {
namespace {

// Exact symmetry: the lower triangle is a copy of the averaged upper triangle.
Amplitudes symmetrized(const Amplitudes& a) {
  const auto n = a.rows();
  Amplitudes s(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    s(j, j) = a(j, j);
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const cplx v = 0.5 * (a(j, k) + a(k, j));
      s(j, k) = v;
      s(k, j) = v;
    }
  }
  return s;
}

bool same_registry(const TwoPhotonState& a, const TwoPhotonState& b) {
  return a.registry_ptr() == b.registry_ptr() || a.registry() == b.registry();
}

void require_index(const TwoPhotonState& s, std::size_t j) {
  if (j >= s.dimension())
    throw std::out_of_range("mode index " + std::to_string(j) + " out of range");
}

}  // namespace

TwoPhotonState::TwoPhotonState(RegistryPtr registry, Amplitudes amplitudes)
    : registry_(std::move(registry)) {
  if (!registry_) throw std::invalid_argument("two-photon state requires a mode registry");
  if (amplitudes.rows() != amplitudes.cols() ||
      static_cast<std::size_t>(amplitudes.rows()) != registry_->size())
    throw std::invalid_argument("amplitude matrix does not match registry size");
  amplitudes_ = symmetrized(amplitudes);
  const double n = total_probability(amplitudes_);
  if (!(n > 0.0) || !std::isfinite(n)) throw SimulationError("two-photon state has zero norm");
  amplitudes_ /= std::sqrt(n);
}

TwoPhotonState::TwoPhotonState(Unchecked, RegistryPtr registry, Amplitudes amplitudes)
    : registry_(std::move(registry)), amplitudes_(symmetrized(amplitudes)) {}

double TwoPhotonState::norm() const { return total_probability(amplitudes_); }

TwoPhotonState TwoPhotonState::with_amplitudes(Amplitudes a) const {
  if (a.rows() != amplitudes_.rows() || a.cols() != amplitudes_.cols())
    throw std::invalid_argument("amplitude matrix does not match registry size");
  return TwoPhotonState(Unchecked{}, registry_, std::move(a));
}

MixedTwoPhotonState::MixedTwoPhotonState(std::vector<Branch> branches)
    : branches_(std::move(branches)) {
  if (branches_.empty()) throw std::invalid_argument("mixed state needs at least one branch");
  double total = 0.0;
  for (const auto& b : branches_) {
    if (b.weight < 0.0) throw std::invalid_argument("mixed state branch weight is negative");
    if (!same_registry(b.state, branches_.front().state))
      throw SimulationError("mixed state branches live on different registries");
    total += b.weight;
  }
  if (std::abs(total - 1.0) > kNormTolerance)
    throw std::invalid_argument("mixed state weights sum to " + std::to_string(total));
}

MixedTwoPhotonState MixedTwoPhotonState::pure(TwoPhotonState s) {
  return MixedTwoPhotonState({{1.0, std::move(s)}});
}

TwoPhotonState make_pair_in_mode(const RegistryPtr& registry, std::string_view mode_label) {
  if (!registry) throw std::invalid_argument("null registry");
  const auto j = registry->index(mode_label);
  Amplitudes a = Amplitudes::Zero(registry->size(), registry->size());
  a(j, j) = 1.0;
  return TwoPhotonState(registry, std::move(a));
}

TwoPhotonState superpose(std::span<const std::pair<cplx, TwoPhotonState>> terms) {
  if (terms.empty()) throw std::invalid_argument("superpose needs at least one term");
  const auto& first = terms.front().second;
  Amplitudes acc = Amplitudes::Zero(first.amplitudes().rows(), first.amplitudes().cols());
  for (const auto& [c, s] : terms) {
    if (!same_registry(s, first)) throw SimulationError("superpose: states use different registries");
    acc += c * s.amplitudes();
  }
  if (acc.cwiseAbs().maxCoeff() <= 1e-15) throw SimulationError("superpose: amplitudes cancel to zero");
  return TwoPhotonState(first.registry_ptr(), std::move(acc));
}

bool is_unitary(const Eigen::MatrixXcd& u, double tol) {
  if (u.rows() != u.cols()) return false;
  const Eigen::MatrixXcd d = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return d.rows() == 0 || d.cwiseAbs().maxCoeff() <= tol;
}

TwoPhotonState apply_unitary(const TwoPhotonState& state, const Eigen::MatrixXcd& u) {
  if (u.rows() != u.cols() || static_cast<std::size_t>(u.rows()) != state.dimension())
    throw std::invalid_argument("transfer matrix dimension does not match state");
  if (!is_unitary(u)) throw SimulationError("transfer matrix is not unitary");
  return state.with_amplitudes(u * state.amplitudes() * u.transpose());
}

double prob_coincidence(const TwoPhotonState& state, std::size_t j, std::size_t k) {
  require_index(state, j);
  require_index(state, k);
  if (j == k) throw std::invalid_argument("prob_coincidence needs two distinct modes (use prob_bunched)");
  return std::norm(2.0 * state.amplitudes()(j, k));
}

double prob_coincidence(const TwoPhotonState& state, std::string_view j, std::string_view k) {
  return prob_coincidence(state, state.registry().index(j), state.registry().index(k));
}

double prob_bunched(const TwoPhotonState& state, std::size_t j) {
  require_index(state, j);
  return 2.0 * std::norm(state.amplitudes()(j, j));
}

double prob_bunched(const TwoPhotonState& state, std::string_view j) {
  return prob_bunched(state, state.registry().index(j));
}

cplx inner_product(const TwoPhotonState& a, const TwoPhotonState& b) {
  if (!same_registry(a, b)) throw SimulationError("inner product of states on different registries");
  return 2.0 * (a.amplitudes().conjugate().cwiseProduct(b.amplitudes())).sum();
}

double fidelity(const TwoPhotonState& a, const TwoPhotonState& b) {
  return std::min(1.0, std::norm(inner_product(a, b)));
}

double total_probability(const Amplitudes& a) { return 2.0 * a.cwiseAbs2().sum(); }

double prob_coincidence_sets(const Amplitudes& a, std::span<const std::size_t> set_a,
                             std::span<const std::size_t> set_b) {
  double p = 0.0;
  for (auto j : set_a)
    for (auto k : set_b) {
      if (j == k) throw std::invalid_argument("coincidence detector sets overlap");
      p += std::norm(2.0 * a(j, k));
    }
  return p;
}

double prob_any_in(const Amplitudes& a, std::span<const std::size_t> set) {
  const auto n = static_cast<std::size_t>(a.rows());
  std::vector<bool> inside(n, false);
  for (auto j : set) inside.at(j) = true;
  double p = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (inside[j]) p += 2.0 * std::norm(a(j, j));
    for (std::size_t k = j + 1; k < n; ++k)
      if (inside[j] || inside[k]) p += std::norm(2.0 * a(j, k));
  }
  return p;
}

MixedTwoPhotonState dephase_groups(const TwoPhotonState& state,
                                   const std::vector<std::vector<std::size_t>>& groups,
                                   double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("dephasing overlap must lie in [0,1]");
  const auto n = state.dimension();
  std::vector<int> owner(n, -1);
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (auto j : groups[g]) {
      if (j >= n) throw std::out_of_range("dephasing group index out of range");
      if (owner[j] != -1) throw std::invalid_argument("dephasing groups overlap");
      owner[j] = static_cast<int>(g);
    }
  const auto& a = state.amplitudes();
  std::vector<Amplitudes> parts(groups.size(), Amplitudes::Zero(a.rows(), a.cols()));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      if (a(j, k) == cplx{}) continue;
      if (owner[j] == -1 || owner[j] != owner[k])
        throw SimulationError("state has amplitude outside a single dephasing group");
      parts[owner[j]](j, k) = a(j, k);
    }

  std::vector<MixedTwoPhotonState::Branch> branches;
  if (mu > 0.0) branches.push_back({mu, state});
  double assigned = mu;
  std::vector<std::pair<double, Amplitudes>> live;
  for (auto& p : parts) {
    const double w = total_probability(p);
    if (w > 0.0) live.emplace_back(w, std::move(p));
  }
  for (std::size_t i = 0; i < live.size() && mu < 1.0; ++i) {
    // Last branch absorbs rounding so that the weights sum to one.
    const double w = (i + 1 == live.size()) ? 1.0 - assigned : (1.0 - mu) * live[i].first;
    assigned += w;
    branches.push_back({w, TwoPhotonState(state.registry_ptr(), std::move(live[i].second))});
  }
  return MixedTwoPhotonState(std::move(branches));
}

}  // namespace biphoton
