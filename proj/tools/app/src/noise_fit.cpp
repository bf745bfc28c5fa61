#include "biphoton_app/noise_fit.hpp"

#include <algorithm>
#include <cmath>

#include <biphoton/fitting.hpp>

#include "biphoton_app/config.hpp"
#include "biphoton_app/experiments.hpp"
#include "biphoton_app/presets.hpp"

namespace biphoton::app {

namespace {

double expected_fringe_visibility(ExperimentConfig c) {
  const auto points = expected_sweep(c);
  std::vector<Sample> s;
  for (const auto& p : points) s.push_back({p.x, p.expected.coincidences});
  return fit_fringe(s).raw_visibility;
}

NoiseModel with(double mu, double floor) {
  NoiseModel n = noise_preset("polarization");
  n.mode_overlap_mu = mu;
  n.accidental_floor = floor;
  return n;
}

}  // namespace

ModelVisibilities model_visibilities(const NoiseModel& polarization, const NoiseModel& bsm,
                                     BsConvention convention) {
  ModelVisibilities v;
  auto pol = default_config(ExperimentKind::PolarizationFringe);
  pol.convention = convention;
  pol.noise = polarization;
  pol.hwp1_deg = 0.0;
  v.polarization_hv = expected_fringe_visibility(pol);
  pol.hwp1_deg = 22.5;
  v.polarization_diag = expected_fringe_visibility(pol);
  auto b = default_config(ExperimentKind::BsmPhaseSweep);
  b.convention = convention;
  b.noise = bsm;
  v.bsm = bsm_discrimination(b, BellChip(convention));
  return v;
}

NoiseModel NoiseFitResult::polarization_model() const { return with(mode_overlap_mu, polarization_floor); }
NoiseModel NoiseFitResult::bsm_model() const { return with(mode_overlap_mu, bsm_floor); }

NoiseFitResult fit_noise_model(const VisibilityTargets& t, BsConvention convention) {
  const auto residuals = [&](const Eigen::VectorXd& p) {
    const double mu = std::clamp(p(0), 0.0, 1.0);
    const auto v = model_visibilities(with(mu, std::min(p(1) * p(1), 1.0)), with(mu, std::min(p(2) * p(2), 1.0)),
                                      convention);
    Eigen::VectorXd r(3);
    r << v.polarization_hv - t.polarization_hv, v.polarization_diag - t.polarization_diag, v.bsm - t.bsm;
    return r;
  };
  Eigen::VectorXd p0(3);
  p0 << 0.9, 0.1, 0.1;
  const auto ls = least_squares(residuals, p0);
  NoiseFitResult f;
  f.mode_overlap_mu = std::clamp(ls.params(0), 0.0, 1.0);
  f.polarization_floor = ls.params(1) * ls.params(1);
  f.bsm_floor = ls.params(2) * ls.params(2);
  f.fitted = model_visibilities(f.polarization_model(), f.bsm_model(), convention);
  f.cost = ls.cost;
  f.converged = ls.converged;
  return f;
}

}  // namespace biphoton::app
