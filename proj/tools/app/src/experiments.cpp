#include "biphoton_app/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include <biphoton/errors.hpp>
#include <biphoton/parallel.hpp>

namespace biphoton::app {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Half-wave plate angles repeat every 180 degrees.
double hwp_angle(double deg) {
  double a = std::fmod(deg, 180.0);
  if (a < 0.0) a += 180.0;
  return a;
}

bool is_fringe_format(ExperimentKind k) {
  return k == ExperimentKind::FringeVsVoltage || k == ExperimentKind::PolarizationFringe ||
         k == ExperimentKind::BsmPhaseSweep;
}

}  // namespace

double round_9g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::strtod(buf, nullptr);
}

std::size_t Dataset::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw std::invalid_argument("dataset has no column '" + name + "'");
}

std::vector<Sample> Dataset::samples(const std::string& x, const std::string& y) const {
  const auto ix = column(x), iy = column(y);
  std::vector<Sample> s;
  s.reserve(rows.size());
  for (const auto& r : rows) s.push_back({r[ix], r[iy]});
  return s;
}

DetectionProbabilities point_probabilities(const ExperimentConfig& c, const BellChip& chip, double x) {
  switch (c.experiment) {
    case ExperimentKind::FringeVsVoltage:
      return fringe_probabilities(chip, phase_of_voltage(c.tps2_law, x), c.noise, c.injection);
    case ExperimentKind::Hom:
      return hom_probabilities(chip, c.injection, x, c.filter, c.hom_visibility, c.noise);
    case ExperimentKind::PolarizationFringe:
      return analyzer_probabilities(chip, {std::numbers::pi, 0.0, 0.0}, hwp_angle(c.hwp1_deg), hwp_angle(x),
                                    c.noise);
    case ExperimentKind::BsmPhaseSweep:
      return bsm_probabilities(chip, {wrap_phase(x * kDeg), 0.0, 0.0}, 0.0, c.filter, c.noise);
    case ExperimentKind::BsmDelay:
      return bsm_probabilities(chip, {wrap_phase(c.bsm_alpha), 0.0, 0.0}, x, c.filter, c.noise);
    case ExperimentKind::Modulation:
      break;
  }
  throw std::invalid_argument("modulation has no sweep points");
}

std::vector<SweepPoint> expected_sweep(const ExperimentConfig& c) {
  const BellChip chip(c.convention);
  const auto xs = c.sweep.values();
  std::vector<SweepPoint> points(xs.size());
  parallel_for(xs.size(), c.workers, [&](std::size_t i) {
    auto& p = points[i];
    p.x = round_9g(xs[i]);
    p.probabilities = point_probabilities(c, chip, p.x);
    p.expected = expected_rates(p.probabilities, c.pair_rate_hz, c.detector_1, c.detector_2);
  });
  return points;
}

void sample_sweep(std::vector<SweepPoint>& points, double integration_time_s, std::uint64_t seed) {
  for (std::size_t i = 0; i < points.size(); ++i)
    points[i].counts = sample_counts(points[i].expected, integration_time_s, seed, i);
}

HeaterDrive modulation_drive(const ExperimentConfig& c) {
  HeaterDrive d;
  d.law = c.tps1_law;
  d.tau_thermal_us = c.tau_thermal_us;
  d.waveform = SquareWave{voltage_for_phase(c.tps1_law, 0.0), voltage_for_phase(c.tps1_law, std::numbers::pi),
                          c.modulation_rate_hz};
  return d;
}

PhaseModel bsm_phase_model(const ExperimentConfig& c, const BellChip& chip) {
  return [&c, &chip](double alpha) {
    return bsm_probabilities(chip, {wrap_phase(alpha), 0.0, 0.0}, 0.0, c.filter, c.noise);
  };
}

CoincidenceHistogram run_modulation(const ExperimentConfig& c, std::uint64_t seed) {
  const BellChip chip(c.convention);
  const auto trajectory = phase_trajectory(modulation_drive(c), c.modulation_bins * 16);
  return modulation_histogram(trajectory, bsm_phase_model(c, chip), c.pair_rate_hz, c.detector_1,
                              c.detector_2, c.modulation_bins, c.modulation_total_time_s, seed);
}

Plateaus settled_plateaus(const CoincidenceHistogram& h, double tau_thermal_us) {
  Plateaus p;
  const double half = 0.5 * h.period_us;
  const double width = h.period_us / static_cast<double>(h.n_bins());
  for (std::size_t b = 0; b < h.n_bins(); ++b) {
    const double start = width * static_cast<double>(b);
    const bool second = start >= half - 1e-9;
    const double edge = second ? half : 0.0;
    if (start < edge + 5.0 * tau_thermal_us - 1e-9 || start + width > edge + half + 1e-9) continue;
    if (second) {
      p.high_mean += static_cast<double>(h.bin_counts[b]);
      ++p.high_bins;
    } else {
      p.low_mean += static_cast<double>(h.bin_counts[b]);
      ++p.low_bins;
    }
  }
  if (p.low_bins) p.low_mean /= static_cast<double>(p.low_bins);
  if (p.high_bins) p.high_mean /= static_cast<double>(p.high_bins);
  return p;
}

std::pair<double, double> asymptotic_levels(const ExperimentConfig& c, const BellChip& chip) {
  const auto model = bsm_phase_model(c, chip);
  const double dwell = c.modulation_total_time_s / static_cast<double>(c.modulation_bins);
  const auto low = expected_rates(model(0.0), c.pair_rate_hz, c.detector_1, c.detector_2).coincidences;
  const auto high = expected_rates(model(std::numbers::pi), c.pair_rate_hz, c.detector_1, c.detector_2).coincidences;
  return {low * dwell, high * dwell};
}

double bsm_discrimination(const ExperimentConfig& c, const BellChip& chip) {
  const auto model = bsm_phase_model(c, chip);
  const auto plus = expected_rates(model(0.0), c.pair_rate_hz, c.detector_1, c.detector_2).coincidences;
  const auto minus = expected_rates(model(std::numbers::pi), c.pair_rate_hz, c.detector_1, c.detector_2).coincidences;
  return contrast_visibility(minus, plus);
}

Dataset make_dataset(const ExperimentConfig& c, const std::vector<SweepPoint>& points) {
  Dataset d;
  d.kind = c.experiment;
  d.seed = c.seed;
  d.reproduces = c.reproduces;
  if (is_fringe_format(c.experiment)) {
    d.columns = {"sweep_value", "coincidences", "singles_1", "singles_2"};
    for (const auto& p : points)
      d.rows.push_back({p.x, static_cast<double>(p.counts.coincidences), static_cast<double>(p.counts.singles_1),
                        static_cast<double>(p.counts.singles_2)});
  } else {
    d.columns = {"delay_ps", "coincidences"};
    for (const auto& p : points) d.rows.push_back({p.x, static_cast<double>(p.counts.coincidences)});
  }
  return d;
}

Dataset make_dataset(const ExperimentConfig& c, const CoincidenceHistogram& h) {
  Dataset d;
  d.kind = c.experiment;
  d.seed = c.seed;
  d.reproduces = c.reproduces;
  d.columns = {"bin_index", "t_center_us", "coincidences"};
  for (std::size_t b = 0; b < h.n_bins(); ++b)
    d.rows.push_back({static_cast<double>(b), round_9g(h.t_center_us[b]), static_cast<double>(h.bin_counts[b])});
  return d;
}

Summary fit_dataset(const Dataset& d, const std::string& model) {
  if (d.rows.empty()) throw FitError("dataset has no rows");
  const auto samples = d.samples(d.columns.at(0), "coincidences");
  Summary s;
  if (model == "fringe") {
    if (d.kind == ExperimentKind::FringeVsVoltage) {
      const auto cal = calibrate_law(samples);
      s.emplace_back("model", "a + b cos(phi0 + kappa v^2)");
      s.emplace_back("phi0_rad", fmt(cal.law.phi0));
      s.emplace_back("kappa_rad_per_v2", fmt(cal.law.kappa));
      s.emplace_back("raw_visibility", fmt(cal.amplitude / cal.offset));
      s.emplace_back("peak_voltage_v", fmt(voltage_for_phase(cal.law, 0.0)));
      s.emplace_back("residual_rms", fmt(cal.residual_rms));
      return s;
    }
    const auto f = fit_fringe(samples);
    s.emplace_back("model", "offset (1 + v cos(omega x + phase))");
    s.emplace_back("raw_visibility", fmt(f.raw_visibility));
    s.emplace_back("offset", fmt(f.offset));
    s.emplace_back("period", fmt(f.period));
    s.emplace_back("phase_rad", fmt(f.phase));
    s.emplace_back("extremal_visibility", fmt(f.extremal_visibility));
    s.emplace_back("residual_rms", fmt(f.residual_rms));
    s.emplace_back("bell_criterion", to_string(bell_criterion(std::clamp(f.raw_visibility, 0.0, 1.0))));
    return s;
  }
  if (model == "hom") {
    const auto f = fit_hom(samples);
    s.emplace_back("model", "baseline (1 - V sinc^2(pi dnu (tau - tau0)))");
    s.emplace_back("visibility", fmt(f.visibility));
    s.emplace_back("baseline", fmt(f.baseline));
    s.emplace_back("delta_nu_ghz", fmt(f.delta_nu_ghz));
    s.emplace_back("tau0_ps", fmt(f.tau0_ps));
    s.emplace_back("residual_rms", fmt(f.residual_rms));
    s.emplace_back("normalized_residual_rms", fmt(f.normalized_residual_rms));
    return s;
  }
  throw std::invalid_argument("unknown fit model '" + model + "' (expected fringe or hom)");
}

Summary analyze(const Dataset& d) {
  switch (d.kind) {
    case ExperimentKind::FringeVsVoltage:
    case ExperimentKind::PolarizationFringe:
      return fit_dataset(d, "fringe");
    case ExperimentKind::BsmPhaseSweep: {
      auto s = fit_dataset(d, "fringe");
      const auto x = d.column("sweep_value"), y = d.column("coincidences");
      const auto at = [&](double deg) -> const std::vector<double>* {
        for (const auto& r : d.rows)
          if (std::abs(r[x] - deg) < 1e-9) return &r;
        return nullptr;
      };
      if (const auto *plus = at(0.0), *minus = at(180.0); plus && minus && (*minus)[y] >= (*plus)[y])
        s.emplace_back("discrimination_visibility", fmt(contrast_visibility((*minus)[y], (*plus)[y])));
      return s;
    }
    case ExperimentKind::Hom:
      return fit_dataset(d, "hom");
    case ExperimentKind::BsmDelay: {
      const auto x = d.column("delay_ps"), y = d.column("coincidences");
      double reach = 0.0;
      for (const auto& r : d.rows) reach = std::max(reach, std::abs(r[x]));
      double wing = 0.0, centre = 0.0, best = 1e300;
      std::size_t n = 0;
      for (const auto& r : d.rows) {
        if (std::abs(r[x]) >= 0.5 * reach) {
          wing += r[y];
          ++n;
        }
        if (std::abs(r[x]) < best) {
          best = std::abs(r[x]);
          centre = r[y];
        }
      }
      return {{"zero_delay_coincidences", fmt(centre)}, {"wing_mean_coincidences", fmt(n ? wing / static_cast<double>(n) : 0.0)}};
    }
    case ExperimentKind::Modulation: {
      const auto y = d.column("coincidences");
      const std::size_t n = d.rows.size();
      // Last quarter of each half period.
      double first = 0.0, second = 0.0;
      std::size_t nf = 0, ns = 0;
      for (std::size_t b = 0; b < n; ++b) {
        const double pos = (static_cast<double>(b) + 0.5) / static_cast<double>(n);
        if (pos > 0.375 && pos < 0.5) first += d.rows[b][y], ++nf;
        if (pos > 0.875) second += d.rows[b][y], ++ns;
      }
      Summary s{{"total_coincidences", fmt([&] {
                   double t = 0.0;
                   for (const auto& r : d.rows) t += r[y];
                   return t;
                 }())}};
      if (nf && ns) {
        s.emplace_back("first_half_late_mean", fmt(first / static_cast<double>(nf)));
        s.emplace_back("second_half_late_mean", fmt(second / static_cast<double>(ns)));
      }
      return s;
    }
  }
  return {};
}

ExperimentResult run_experiment(const ExperimentConfig& c) {
  c.validate();
  ExperimentResult r;
  if (c.experiment == ExperimentKind::Modulation) {
    r.histogram = run_modulation(c, c.seed);
    r.data = make_dataset(c, *r.histogram);
    r.summary = analyze(r.data);
    const auto p = settled_plateaus(*r.histogram, c.tau_thermal_us);
    if (p.low_bins && p.high_bins && p.low_mean > 0.0) {
      r.summary.emplace_back("settled_plateau_ratio", fmt(p.ratio()));
      const double f = bsm_discrimination(c, BellChip(c.convention));
      r.summary.emplace_back("expected_ratio", fmt((1.0 + f) / (1.0 - f)));
    } else {
      r.summary.emplace_back("settled_plateau_ratio", "n/a (no settled bins)");
    }
    return r;
  }
  r.points = expected_sweep(c);
  sample_sweep(r.points, c.integration_time_s, c.seed);
  r.data = make_dataset(c, r.points);
  try {
    r.summary = analyze(r.data);
  } catch (const FitError& e) {
    r.fit_error = e.what();
  }
  return r;
}

}  // namespace biphoton::app
