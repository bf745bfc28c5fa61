#include "biphoton/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "biphoton/errors.hpp"

namespace biphoton {
namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Fills residuals r = y - f(p) and Jacobian J = df/dp.
using ModelFn = std::function<void(const Vec& p, Vec& r, Mat& j)>;

struct LmResult {
  Vec params;
  double cost;
  int iterations;
  bool converged;
};

// Converged when the step is below kFitStepTolerance (relative to |p|) or,
// with cost_tolerance > 0, when an accepted step lowers the cost by less than
// that fraction.
LmResult levenberg_marquardt(const ModelFn& model, Vec p, std::size_t n, double cost_tolerance = 0.0) {
  const auto m = p.size();
  Vec r(n);
  Mat j(n, m);
  model(p, r, j);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  for (int it = 1; it <= kMaxFitIterations; ++it) {
    const Mat jtj = j.transpose() * j;
    const Vec g = j.transpose() * r;
    bool improved = false;
    Vec step;
    while (lambda < 1e20) {
      Mat a = jtj;
      for (Eigen::Index k = 0; k < m; ++k) a(k, k) += lambda * std::max(jtj(k, k), 1e-300);
      step = a.ldlt().solve(g);
      Vec trial = p + step;
      Vec rt(n);
      Mat jt(n, m);
      model(trial, rt, jt);
      const double ct = rt.squaredNorm();
      if (std::isfinite(ct) && ct <= cost) {
        if (cost_tolerance > 0.0 && cost - ct <= cost_tolerance * cost) return {trial, ct, it, true};
        p = trial;
        r = rt;
        j = jt;
        cost = ct;
        lambda = std::max(lambda / 3.0, 1e-12);
        improved = true;
        break;
      }
      lambda *= 2.0;
    }
    // No decrease even with a vanishing step: p is a minimum to rounding.
    if (!improved) return {p, cost, it, true};
    if (step.norm() < kFitStepTolerance * (p.norm() + kFitStepTolerance)) return {p, cost, it, true};
  }
  return {p, cost, kMaxFitIterations, false};
}

LmResult converged_or_throw(LmResult r) {
  if (!r.converged)
    throw FitError("least-squares fit did not converge within " + std::to_string(kMaxFitIterations) +
                   " iterations");
  return r;
}

struct LinearSinusoid {
  double c0, c1, c2, sse;
};

LinearSinusoid linear_sinusoid(std::span<const Sample> s, double omega) {
  Mat a(s.size(), 3);
  Vec y(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = std::cos(omega * s[i].x);
    a(i, 2) = std::sin(omega * s[i].x);
    y(i) = s[i].y;
  }
  const Vec c = a.colPivHouseholderQr().solve(y);
  return {c(0), c(1), c(2), (a * c - y).squaredNorm()};
}

double variance_sum(std::span<const Sample> s) {
  const double mean =
      std::accumulate(s.begin(), s.end(), 0.0, [](double a, const Sample& p) { return a + p.y; }) /
      static_cast<double>(s.size());
  double v = 0.0;
  for (const auto& p : s) v += (p.y - mean) * (p.y - mean);
  return v;
}

void check_finite(std::span<const Sample> s) {
  for (const auto& p : s)
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw FitError("non-finite sample");
}

// Overlap profile and its derivative in the scaled delay x = dnu * tau * 1e-3.
struct Profile {
  double value, slope;
};

Profile hom_profile(SpectralShape family, double x) {
  const double pi = std::numbers::pi;
  if (family == SpectralShape::Gaussian) {
    const double o = std::exp(-(pi * x) * (pi * x) / (2.0 * std::numbers::ln2));
    return {o, -(pi * pi * x / std::numbers::ln2) * o};
  }
  if (std::abs(x) < 1e-8) return {1.0 - (pi * x) * (pi * x) / 3.0, -2.0 * pi * pi * x / 3.0};
  const double g = std::sin(pi * x) / (pi * x);
  const double dg = (std::cos(pi * x) - g) / x;
  return {g * g, 2.0 * g * dg};
}

}  // namespace

double SinusoidFit::operator()(double x) const {
  return c0 + c1 * std::cos(omega * x) + c2 * std::sin(omega * x);
}

SinusoidFit fit_sinusoid(std::span<const Sample> samples, std::size_t min_samples) {
  if (samples.size() < std::max<std::size_t>(min_samples, 4))
    throw FitError("sinusoid fit needs at least " + std::to_string(std::max<std::size_t>(min_samples, 4)) +
                   " samples, got " + std::to_string(samples.size()));
  check_finite(samples);
  std::vector<double> xs;
  for (const auto& s : samples) xs.push_back(s.x);
  std::sort(xs.begin(), xs.end());
  const double span = xs.back() - xs.front();
  if (!(span > 0.0)) throw FitError("samples do not span a range");
  const double total = variance_sum(samples);
  const double scale = std::max(std::abs(samples[0].y), 1.0);
  if (total <= 1e-24 * scale * scale * static_cast<double>(samples.size()))
    throw FitError("flat data: no fringe to fit");

  std::vector<double> dx;
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] > xs[i - 1]) dx.push_back(xs[i] - xs[i - 1]);
  std::nth_element(dx.begin(), dx.begin() + static_cast<std::ptrdiff_t>(dx.size() / 2), dx.end());
  const double median_dx = dx[dx.size() / 2];

  // Trial frequencies from half a period over the range up to the Nyquist
  // frequency of the median spacing, stepped at 1/16 of the Fourier resolution.
  const double base = 2.0 * std::numbers::pi / span;
  const double omega_max = std::numbers::pi / median_dx;
  const double d_omega = base / 16.0;
  double best_omega = 0.5 * base;
  LinearSinusoid best = linear_sinusoid(samples, best_omega);
  for (double w = 0.5 * base + d_omega; w <= omega_max; w += d_omega) {
    const auto c = linear_sinusoid(samples, w);
    if (c.sse < best.sse) {
      best = c;
      best_omega = w;
    }
  }
  if (best.sse > 0.5 * total) throw FitError("no dominant sinusoidal component in the data");

  const auto n = samples.size();
  const ModelFn model = [&](const Vec& p, Vec& r, Mat& j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = samples[i].x;
      const double c = std::cos(p(3) * x), s = std::sin(p(3) * x);
      r(i) = samples[i].y - (p(0) + p(1) * c + p(2) * s);
      j(i, 0) = 1.0;
      j(i, 1) = c;
      j(i, 2) = s;
      j(i, 3) = x * (-p(1) * s + p(2) * c);
    }
  };
  Vec p0(4);
  p0 << best.c0, best.c1, best.c2, best_omega;
  const auto lm = converged_or_throw(levenberg_marquardt(model, p0, n));
  SinusoidFit fit{lm.params(0), lm.params(1), lm.params(2), lm.params(3),
                  std::sqrt(lm.cost / static_cast<double>(n)), lm.iterations};
  if (fit.omega < 0.0) {
    fit.omega = -fit.omega;
    fit.c2 = -fit.c2;
  }
  // 5% slack so a sweep over exactly one period survives noise in omega.
  if (fit.omega * span < 0.95 * 2.0 * std::numbers::pi)
    throw FitError("samples span less than one fitted fringe period");
  return fit;
}

FringeFit fit_fringe(std::span<const Sample> samples) {
  const auto s = fit_sinusoid(samples, 8);
  if (!(s.c0 > 0.0)) throw FitError("fringe offset is not positive");
  FringeFit f;
  f.offset = s.c0;
  f.amplitude = std::hypot(s.c1, s.c2);
  f.phase = std::atan2(-s.c2, s.c1);
  f.omega = s.omega;
  f.period = 2.0 * std::numbers::pi / s.omega;
  f.raw_visibility = f.amplitude / f.offset;
  f.residual_rms = s.residual_rms;
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end(),
                                            [](const Sample& a, const Sample& b) { return a.y < b.y; });
  f.extremal_visibility = contrast_visibility(hi->y, std::max(lo->y, 0.0));
  return f;
}

HomFit fit_hom(std::span<const Sample> samples, SpectralShape family) {
  if (samples.size() < 8) throw FitError("HOM fit needs at least 8 samples");
  check_finite(samples);
  std::vector<Sample> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end(), [](const Sample& a, const Sample& b) { return a.x < b.x; });
  const double scale = std::max(std::abs(s[0].y), 1.0);
  if (variance_sum(s) <= 1e-24 * scale * scale * static_cast<double>(s.size()))
    throw FitError("flat data: no dip to fit");

  // Baseline from the upper fifth of the values (the model never exceeds it).
  std::vector<double> ys;
  for (const auto& p : s) ys.push_back(p.y);
  std::sort(ys.begin(), ys.end());
  const std::size_t top = std::max<std::size_t>(ys.size() / 5, 1);
  const double b0 = std::accumulate(ys.end() - static_cast<std::ptrdiff_t>(top), ys.end(), 0.0) /
                    static_cast<double>(top);
  const auto imin = static_cast<std::size_t>(
      std::min_element(s.begin(), s.end(), [](const Sample& a, const Sample& b) { return a.y < b.y; }) -
      s.begin());
  if (!(b0 > 0.0)) throw FitError("HOM baseline is not positive");
  const double depth = b0 - s[imin].y;
  const double v0 = depth / b0;
  std::size_t lo = imin, hi = imin;
  while (lo > 0 && b0 - s[lo].y > 0.5 * depth) --lo;
  while (hi + 1 < s.size() && b0 - s[hi].y > 0.5 * depth) ++hi;
  const double half_width = std::max(0.5 * (s[hi].x - s[lo].x), 0.5 * (s[1].x - s[0].x));
  const double x_half = family == SpectralShape::Rectangular ? 0.44295 : 0.31196;
  const double dnu0 = x_half / (half_width * 1e-3);

  const auto n = s.size();
  const ModelFn model = [&](const Vec& p, Vec& r, Mat& j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double dt = s[i].x - p(3);
      const auto o = hom_profile(family, p(2) * dt * 1e-3);
      r(i) = s[i].y - p(0) * (1.0 - p(1) * o.value);
      j(i, 0) = 1.0 - p(1) * o.value;
      j(i, 1) = -p(0) * o.value;
      j(i, 2) = -p(0) * p(1) * o.slope * dt * 1e-3;
      j(i, 3) = p(0) * p(1) * o.slope * p(2) * 1e-3;
    }
  };
  Vec p0(4);
  p0 << b0, v0, dnu0, s[imin].x;
  const auto lm = converged_or_throw(levenberg_marquardt(model, p0, n));

  HomFit f;
  f.baseline = lm.params(0);
  f.visibility = lm.params(1);
  f.delta_nu_ghz = std::abs(lm.params(2));
  f.tau0_ps = lm.params(3);
  f.family = family;
  f.residual_rms = std::sqrt(lm.cost / static_cast<double>(n));
  Vec r(n);
  Mat j(n, 4);
  model(lm.params, r, j);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += r(i) * r(i) / std::max(s[i].y, 1.0);
  f.normalized_residual_rms = std::sqrt(acc / static_cast<double>(n));

  if (!(f.visibility > 0.0)) throw FitError("no HOM dip found (fitted visibility <= 0)");
  const double width_ps = 1e3 / f.delta_nu_ghz;
  if (f.tau0_ps - width_ps < s.front().x || f.tau0_ps + width_ps > s.back().x)
    throw FitError("HOM dip is not contained in the sampled delays");
  if (f.normalized_residual_rms > kHomMaxNormalizedRms)
    throw FitError("data do not follow a HOM dip (normalized residual RMS " +
                   std::to_string(f.normalized_residual_rms) + ")");
  return f;
}

LeastSquaresResult least_squares(const ResidualFunction& residuals, Eigen::VectorXd initial) {
  const auto n = static_cast<std::size_t>(residuals(initial).size());
  const ModelFn model = [&](const Vec& p, Vec& r, Mat& j) {
    r = -residuals(p);
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(p(k)));
      Vec hi = p, lo = p;
      hi(k) += h;
      lo(k) -= h;
      j.col(k) = (residuals(hi) - residuals(lo)) / (2.0 * h);
    }
  };
  const auto lm = levenberg_marquardt(model, std::move(initial), n, 1e-10);
  return {lm.params, lm.cost, lm.iterations, lm.converged};
}

double contrast_visibility(double c_max, double c_min) {
  if (c_max == 0.0 && c_min == 0.0) throw std::invalid_argument("visibility of two zero counts");
  if (!(c_max >= c_min && c_min >= 0.0))
    throw std::invalid_argument("visibility requires c_max >= c_min >= 0");
  return (c_max - c_min) / (c_max + c_min);
}

BellVerdict bell_criterion(double visibility) {
  if (!(visibility >= 0.0 && visibility <= 1.0))
    throw std::invalid_argument("visibility must lie in [0,1]");
  return visibility > kBellVisibilityThreshold ? BellVerdict::ViolationSupported : BellVerdict::NotSupported;
}

const char* to_string(BellVerdict v) {
  return v == BellVerdict::ViolationSupported ? "violation_supported" : "not_supported";
}

}  // namespace biphoton
