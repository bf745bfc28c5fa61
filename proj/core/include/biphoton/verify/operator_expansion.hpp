#pragma once

// Reference propagation of two-photon states by direct substitution of
// creation operators, term by term. Shares no code with the matrix compiler
// and exists to cross-check it.

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <utility>
#include <variant>
#include <vector>

#include "biphoton/circuit.hpp"
#include "biphoton/state.hpp"

namespace biphoton::verify {

/// Coefficients of a_i^dag a_j^dag with i <= j.
using Polynomial = std::map<std::pair<std::size_t, std::size_t>, std::complex<double>>;

/// One substitution rule a_m^dag -> sum_k c_k a_k^dag.
using Substitution = std::map<std::size_t, std::vector<std::pair<std::size_t, std::complex<double>>>>;

inline Polynomial from_amplitudes(const Amplitudes& a) {
  Polynomial p;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i; j < a.cols(); ++j) {
      const auto c = i == j ? a(i, i) : a(i, j) + a(j, i);
      if (c != 0.0) p[{static_cast<std::size_t>(i), static_cast<std::size_t>(j)}] = c;
    }
  return p;
}

inline Amplitudes to_amplitudes(const Polynomial& p, std::size_t n) {
  Amplitudes a = Amplitudes::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& [key, c] : p) {
    const auto i = static_cast<Eigen::Index>(key.first), j = static_cast<Eigen::Index>(key.second);
    if (i == j) {
      a(i, i) += c;
    } else {
      a(i, j) += 0.5 * c;
      a(j, i) += 0.5 * c;
    }
  }
  return a;
}

inline Polynomial substitute(const Polynomial& p, const Substitution& s) {
  auto image = [&](std::size_t m) {
    if (auto it = s.find(m); it != s.end()) return it->second;
    return std::vector<std::pair<std::size_t, std::complex<double>>>{{m, 1.0}};
  };
  Polynomial out;
  for (const auto& [key, c] : p)
    for (const auto& [x, cx] : image(key.first))
      for (const auto& [y, cy] : image(key.second)) out[{std::min(x, y), std::max(x, y)}] += c * cx * cy;
  return out;
}

namespace detail {

inline void splitter_rule(Substitution& s, std::size_t a, std::size_t b, BsConvention conv) {
  const double r = 1.0 / std::sqrt(2.0);
  const std::complex<double> i(0.0, 1.0);
  if (conv == BsConvention::Symmetric) {
    s[a] = {{a, r}, {b, i * r}};
    s[b] = {{a, i * r}, {b, r}};
  } else {
    s[a] = {{a, r}, {b, r}};
    s[b] = {{a, r}, {b, -r}};
  }
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace detail

inline Substitution rule_for(const CircuitGraph& g, const CircuitComponent& c) {
  const auto& reg = g.registry();
  Substitution s;
  std::visit(
      detail::overloaded{
          [&](const BeamSplitter50& x) {
            detail::splitter_rule(s, reg.index(x.port_a), reg.index(x.port_b), g.convention());
          },
          [&](const PhaseShifter& x) { s[reg.index(x.port)] = {{reg.index(x.port), std::polar(1.0, x.phase)}}; },
          [&](const SfwmSource&) {},
          [&](const GratingMapper2D& x) {
            const auto h = reg.index(x.out_fiber + "H"), v = reg.index(x.out_fiber + "V");
            const auto ph = reg.index(x.in_h), pv = reg.index(x.in_v);
            s[ph] = {{h, 1.0}};
            s[h] = {{ph, 1.0}};
            s[pv] = {{v, 1.0}};
            s[v] = {{pv, 1.0}};
          },
          [&](const HalfWavePlate& x) {
            const double t = 2.0 * x.angle_deg * std::numbers::pi / 180.0;
            const auto h = reg.index(x.fiber + "H"), v = reg.index(x.fiber + "V");
            s[h] = {{h, std::cos(t)}, {v, std::sin(t)}};
            s[v] = {{h, std::sin(t)}, {v, -std::cos(t)}};
          },
          [&](const Polarizer&) {},
          [&](const FiberCoupler50& x) {
            detail::splitter_rule(s, reg.index(x.fiber_a + "H"), reg.index(x.fiber_b + "H"), g.convention());
            detail::splitter_rule(s, reg.index(x.fiber_a + "V"), reg.index(x.fiber_b + "V"), g.convention());
          },
          [&](const DelayLine&) {},
          [&](const PolarizationRotator& x) {
            const auto h = reg.index(x.fiber + "H"), v = reg.index(x.fiber + "V");
            s[h] = {{h, x.unitary(0, 0)}, {v, x.unitary(1, 0)}};
            s[v] = {{h, x.unitary(0, 1)}, {v, x.unitary(1, 1)}};
          },
      },
      c);
  return s;
}

/// Pushes `input` through every component of `g` in order.
inline Polynomial expand(const CircuitGraph& g, Polynomial input) {
  for (const auto& stage : g.stages())
    for (const auto& c : stage) input = substitute(input, rule_for(g, c));
  return input;
}

/// Output amplitude matrix for an input state, via operator expansion.
inline Amplitudes propagate(const CircuitGraph& g, const TwoPhotonState& input) {
  return to_amplitudes(expand(g, from_amplitudes(input.amplitudes())), g.registry().size());
}

}  // namespace biphoton::verify
