#pragma once

// Least-squares fits of fringes and HOM dips, and the derived visibility
// figures. All fits are unweighted Levenberg-Marquardt with analytic Jacobians.

#include <cstddef>
#include <functional>
#include <span>

#include <Eigen/Dense>

#include "biphoton/spectral.hpp"

namespace biphoton {

struct Sample {
  double x = 0.0;
  double y = 0.0;
};

inline constexpr int kMaxFitIterations = 200;
inline constexpr double kFitStepTolerance = 1e-10;

/// y = c0 + c1 cos(omega x) + c2 sin(omega x).
struct SinusoidFit {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double omega = 0.0;
  double residual_rms = 0.0;
  int iterations = 0;

  double operator()(double x) const;
};

/// Frequency scan (linear least squares at each trial omega) followed by a
/// joint refinement of all four parameters. Requires `min_samples` points, a
/// non-constant signal, a dominant sinusoidal component, and at least one
/// fitted period inside the sampled range. Throws FitError otherwise.
SinusoidFit fit_sinusoid(std::span<const Sample> samples, std::size_t min_samples = 8);

/// C(x) = offset * (1 + raw_visibility * cos(omega x + phase)).
struct FringeFit {
  double offset = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;
  double omega = 0.0;
  double period = 0.0;
  double raw_visibility = 0.0;
  double residual_rms = 0.0;
  /// (max - min) / (max + min) of the raw samples.
  double extremal_visibility = 0.0;
};

FringeFit fit_fringe(std::span<const Sample> samples);

struct HomFit {
  double baseline = 0.0;
  double visibility = 0.0;
  double delta_nu_ghz = 0.0;
  double tau0_ps = 0.0;
  double residual_rms = 0.0;
  /// Residual RMS in units of the Poisson standard deviation of each point.
  double normalized_residual_rms = 0.0;
  SpectralShape family = SpectralShape::Rectangular;
};

/// Largest Poisson-normalized residual RMS accepted as a dip fit.
inline constexpr double kHomMaxNormalizedRms = 5.0;

/// C(tau) = baseline * (1 - V * O(delta_nu * (tau - tau0))) with O the overlap
/// of the chosen spectral family. The samples must extend at least one dip
/// width (1 / delta_nu) beyond tau0 on both sides.
HomFit fit_hom(std::span<const Sample> samples, SpectralShape family = SpectralShape::Rectangular);

/// Residuals g(p) of a general least-squares problem, minimized over p.
using ResidualFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct LeastSquaresResult {
  Eigen::VectorXd params;
  double cost = 0.0;  // sum of squared residuals
  int iterations = 0;
  bool converged = false;
};

/// Levenberg-Marquardt with a central-difference Jacobian. Stops on a small
/// step or when an accepted step lowers the cost by less than 1e-10 of itself.
LeastSquaresResult least_squares(const ResidualFunction& residuals, Eigen::VectorXd initial);

/// (c_max - c_min) / (c_max + c_min).
double contrast_visibility(double c_max, double c_min);

enum class BellVerdict { ViolationSupported, NotSupported };

inline constexpr double kBellVisibilityThreshold = 0.70710678118654752;

/// Visibility above 1/sqrt(2) supports a Bell-inequality violation.
BellVerdict bell_criterion(double visibility);
const char* to_string(BellVerdict v);

}  // namespace biphoton
