#include "biphoton_app/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "biphoton_app/presets.hpp"

namespace biphoton::app {

namespace {

constexpr double kLightSpeed = 299792458.0;

struct KindInfo {
  ExperimentKind kind;
  std::string_view name;
  std::string_view description;
};

constexpr KindInfo kKinds[] = {
    {ExperimentKind::FringeVsVoltage, "fringe-vs-voltage",
     "split/bunch coincidence fringe versus TPS2 heater voltage"},
    {ExperimentKind::Hom, "hom", "HOM dip between the two photons of one splitter pair"},
    {ExperimentKind::PolarizationFringe, "polarization-fringe",
     "Psi- coincidences versus HWP2 angle behind fixed HWP1 and H polarizers"},
    {ExperimentKind::BsmPhaseSweep, "bsm-phase-sweep",
     "coupler coincidences versus Bell phase alpha at zero delay"},
    {ExperimentKind::BsmDelay, "bsm-delay", "coupler coincidences versus delay for a fixed Bell state"},
    {ExperimentKind::Modulation, "modulation",
     "time-binned coincidences under square-wave switching between Psi+ and Psi-"},
};

// Reads `node` as T, naming the dotted key on failure.
template <typename T>
T get(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("config key '" + key + "' has an invalid value");
  }
}

void check_keys(const YAML::Node& node, const std::string& section, std::set<std::string> allowed) {
  if (!node.IsMap()) throw ConfigError("config key '" + section + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key))
      throw ConfigError("unknown config key '" + (section.empty() ? key : section + "." + key) + "'");
  }
}

void read(const YAML::Node& n, const char* key, const std::string& section, double& out) {
  if (n[key]) out = get<double>(n[key], section + key);
}

PhaseVoltageLaw read_law(const YAML::Node& n, const std::string& name, PhaseVoltageLaw law) {
  check_keys(n, name, {"phi0", "kappa"});
  read(n, "phi0", name + ".", law.phi0);
  read(n, "kappa", name + ".", law.kappa);
  return law;
}

DetectorModel read_detector(const YAML::Node& n, const std::string& name, DetectorModel d) {
  check_keys(n, name, {"efficiency", "dark_rate_hz", "window_ns"});
  read(n, "efficiency", name + ".", d.efficiency);
  read(n, "dark_rate_hz", name + ".", d.dark_rate_hz);
  read(n, "window_ns", name + ".", d.coincidence_window_ns);
  return d;
}

PumpInjection parse_injection(const std::string& s) {
  if (s == "port3") return PumpInjection::Port3;
  if (s == "port4") return PumpInjection::Port4;
  if (s == "ports12") return PumpInjection::Ports1And2;
  throw ConfigError("config key 'source.injection' must be port3, port4 or ports12");
}

ExperimentConfig from_yaml(const YAML::Node& root) {
  if (!root.IsMap()) throw ConfigError("config must be a mapping");
  check_keys(root, "",
             {"experiment", "reproduces", "seed", "output", "convention", "workers", "source", "filter",
              "heaters", "noise", "detectors", "counting", "sweep", "hom", "polarization", "bsm",
              "modulation"});
  if (!root["experiment"]) throw ConfigError("missing config key 'experiment'");
  ExperimentKind kind;
  try {
    kind = parse_experiment(get<std::string>(root["experiment"], "experiment"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config key 'experiment': ") + e.what());
  }
  auto c = default_config(kind);

  if (root["reproduces"]) c.reproduces = get<std::string>(root["reproduces"], "reproduces");
  if (root["seed"]) c.seed = get<std::uint64_t>(root["seed"], "seed");
  if (root["output"]) c.output = get<std::string>(root["output"], "output");
  if (root["workers"]) c.workers = get<unsigned>(root["workers"], "workers");
  if (root["convention"]) {
    const auto s = get<std::string>(root["convention"], "convention");
    if (s == "symmetric") c.convention = BsConvention::Symmetric;
    else if (s == "hadamard") c.convention = BsConvention::Hadamard;
    else throw ConfigError("config key 'convention' must be symmetric or hadamard");
  }
  if (const auto n = root["source"]) {
    check_keys(n, "source", {"pump_wavelengths_nm", "injection"});
    if (n["pump_wavelengths_nm"]) {
      const auto v = get<std::vector<double>>(n["pump_wavelengths_nm"], "source.pump_wavelengths_nm");
      if (v.size() != 2) throw ConfigError("config key 'source.pump_wavelengths_nm' needs two values");
      c.pump1_nm = v[0];
      c.pump2_nm = v[1];
    }
    if (n["injection"]) c.injection = parse_injection(get<std::string>(n["injection"], "source.injection"));
  }
  if (const auto n = root["filter"]) {
    check_keys(n, "filter", {"shape", "center_nm", "fwhm_ghz"});
    if (n["shape"]) {
      const auto s = get<std::string>(n["shape"], "filter.shape");
      if (s == "rectangular") c.filter.shape = SpectralShape::Rectangular;
      else if (s == "gaussian") c.filter.shape = SpectralShape::Gaussian;
      else throw ConfigError("config key 'filter.shape' must be rectangular or gaussian");
    }
    read(n, "center_nm", "filter.", c.filter.center_wavelength_nm);
    read(n, "fwhm_ghz", "filter.", c.filter.fwhm_ghz);
  }
  if (const auto n = root["heaters"]) {
    check_keys(n, "heaters", {"tps1", "tps2", "tau_thermal_us"});
    if (n["tps1"]) c.tps1_law = read_law(n["tps1"], "heaters.tps1", c.tps1_law);
    if (n["tps2"]) c.tps2_law = read_law(n["tps2"], "heaters.tps2", c.tps2_law);
    read(n, "tau_thermal_us", "heaters.", c.tau_thermal_us);
  }
  if (const auto n = root["noise"]) {
    check_keys(n, "noise", {"preset", "mode_overlap_mu", "accidental_floor", "pdl"});
    if (n["preset"]) {
      c.noise_preset = get<std::string>(n["preset"], "noise.preset");
      try {
        c.noise = noise_preset(c.noise_preset);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config key 'noise.preset': ") + e.what());
      }
    }
    read(n, "mode_overlap_mu", "noise.", c.noise.mode_overlap_mu);
    read(n, "accidental_floor", "noise.", c.noise.accidental_floor);
    if (const auto pdl = n["pdl"]) {
      check_keys(pdl, "noise.pdl", {"P5", "P6"});
      for (const char* fiber : {"P5", "P6"}) {
        if (!pdl[fiber]) continue;
        const std::string section = std::string("noise.pdl.") + fiber;
        check_keys(pdl[fiber], section, {"h", "v"});
        auto t = c.noise.transmittance(fiber);
        read(pdl[fiber], "h", section + ".", t.h);
        read(pdl[fiber], "v", section + ".", t.v);
        c.noise.pdl[fiber] = t;
      }
    }
  }
  if (const auto n = root["detectors"]) {
    check_keys(n, "detectors", {"d1", "d2"});
    if (n["d1"]) c.detector_1 = read_detector(n["d1"], "detectors.d1", c.detector_1);
    if (n["d2"]) c.detector_2 = read_detector(n["d2"], "detectors.d2", c.detector_2);
  }
  if (const auto n = root["counting"]) {
    check_keys(n, "counting", {"pair_rate_hz", "integration_time_s"});
    read(n, "pair_rate_hz", "counting.", c.pair_rate_hz);
    read(n, "integration_time_s", "counting.", c.integration_time_s);
  }
  if (const auto n = root["sweep"]) {
    check_keys(n, "sweep", {"start", "stop", "step"});
    read(n, "start", "sweep.", c.sweep.start);
    read(n, "stop", "sweep.", c.sweep.stop);
    read(n, "step", "sweep.", c.sweep.step);
  }
  if (const auto n = root["hom"]) {
    check_keys(n, "hom", {"visibility"});
    read(n, "visibility", "hom.", c.hom_visibility);
  }
  if (const auto n = root["polarization"]) {
    check_keys(n, "polarization", {"hwp1_deg"});
    read(n, "hwp1_deg", "polarization.", c.hwp1_deg);
  }
  if (const auto n = root["bsm"]) {
    check_keys(n, "bsm", {"state"});
    if (n["state"]) {
      const auto s = get<std::string>(n["state"], "bsm.state");
      if (s == "psi-plus") c.bsm_alpha = 0.0;
      else if (s == "psi-minus") c.bsm_alpha = std::numbers::pi;
      else throw ConfigError("config key 'bsm.state' must be psi-plus or psi-minus");
    }
  }
  if (const auto n = root["modulation"]) {
    check_keys(n, "modulation", {"rate_hz", "total_time_s", "bins"});
    read(n, "rate_hz", "modulation.", c.modulation_rate_hz);
    read(n, "total_time_s", "modulation.", c.modulation_total_time_s);
    if (n["bins"]) c.modulation_bins = get<std::size_t>(n["bins"], "modulation.bins");
  }
  c.validate();
  return c;
}

}  // namespace

std::string_view to_string(ExperimentKind k) {
  for (const auto& i : kKinds)
    if (i.kind == k) return i.name;
  return "?";
}

std::string_view describe(ExperimentKind k) {
  for (const auto& i : kKinds)
    if (i.kind == k) return i.description;
  return "";
}

ExperimentKind parse_experiment(std::string_view name) {
  std::string s(name);
  for (auto& ch : s)
    if (ch == '_') ch = '-';
  for (const auto& i : kKinds)
    if (i.name == s) return i.kind;
  throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
}

const std::vector<ExperimentKind>& all_experiments() {
  static const std::vector<ExperimentKind> v = [] {
    std::vector<ExperimentKind> out;
    for (const auto& i : kKinds) out.push_back(i.kind);
    return out;
  }();
  return v;
}

std::vector<double> SweepGrid::values() const {
  std::vector<double> v;
  const double n = std::floor((stop - start) / step + 1e-9);
  for (long i = 0; i <= static_cast<long>(n); ++i) v.push_back(start + static_cast<double>(i) * step);
  return v;
}

double energy_mismatch_ghz(double pump1_nm, double pump2_nm, double signal_nm) {
  const auto ghz = [](double nm) { return kLightSpeed / nm; };  // c / (nm * 1e-9) in GHz
  return std::abs(ghz(pump1_nm) + ghz(pump2_nm) - 2.0 * ghz(signal_nm));
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.experiment = kind;
  c.reproduces = std::string(describe(kind));
  c.output = std::string(to_string(kind)) + ".csv";
  // Signal frequency at the mean of the two pump frequencies.
  c.filter.center_wavelength_nm = 1552.4934;
  c.filter.fwhm_ghz = 60.0;
  // TPS2 reaches the split condition (2 pi) at 7.47 V.
  c.tps2_law = {2.0 * std::numbers::pi - 0.1 * 7.47 * 7.47, 0.1};
  c.tps1_law = {0.5, 0.1};
  switch (kind) {
    case ExperimentKind::FringeVsVoltage:
      c.sweep = {0.0, 9.0, 0.09};
      c.noise_preset = "polarization";
      c.integration_time_s = 8.0;
      break;
    case ExperimentKind::Hom:
      c.sweep = {-50.0, 50.0, 1.0};
      c.noise_preset = "ideal";
      c.integration_time_s = 25.0;
      break;
    case ExperimentKind::PolarizationFringe:
      c.sweep = {0.0, 180.0, 5.0};
      c.noise_preset = "polarization";
      c.integration_time_s = 25.0;
      break;
    case ExperimentKind::BsmPhaseSweep:
      c.sweep = {0.0, 360.0, 10.0};
      c.noise_preset = "bsm";
      c.integration_time_s = 12.0;
      break;
    case ExperimentKind::BsmDelay:
      c.sweep = {-100.0, 100.0, 4.0};
      c.noise_preset = "bsm";
      // Modest counts: the sinc^2 side lobes must stay below the Poisson noise.
      c.integration_time_s = 0.2;
      break;
    case ExperimentKind::Modulation:
      c.noise_preset = "bsm";
      break;
  }
  c.noise = noise_preset(c.noise_preset);
  return c;
}

void ExperimentConfig::validate() const {
  const auto fail = [](const std::string& key, const std::string& why) {
    throw ConfigError("config key '" + key + "' " + why);
  };
  try {
    filter.validate();
  } catch (const std::invalid_argument& e) {
    fail("filter", e.what());
  }
  if (!(pump1_nm > 0.0 && pump2_nm > 0.0)) fail("source.pump_wavelengths_nm", "must be positive");
  const double mismatch = energy_mismatch_ghz(pump1_nm, pump2_nm, filter.center_wavelength_nm);
  if (!(mismatch <= kEnergyToleranceGhz)) {
    std::ostringstream os;
    os << "violates energy conservation with filter.center_nm (mismatch " << mismatch << " GHz > "
       << kEnergyToleranceGhz << " GHz)";
    fail("source.pump_wavelengths_nm", os.str());
  }
  try {
    tps1_law.validate();
  } catch (const std::invalid_argument& e) {
    fail("heaters.tps1", e.what());
  }
  try {
    tps2_law.validate();
  } catch (const std::invalid_argument& e) {
    fail("heaters.tps2", e.what());
  }
  if (!(tau_thermal_us > 0.0)) fail("heaters.tau_thermal_us", "must be > 0");
  try {
    noise.validate();
  } catch (const std::invalid_argument& e) {
    fail("noise", e.what());
  }
  try {
    detector_1.validate();
  } catch (const std::invalid_argument& e) {
    fail("detectors.d1", e.what());
  }
  try {
    detector_2.validate();
  } catch (const std::invalid_argument& e) {
    fail("detectors.d2", e.what());
  }
  if (!(pair_rate_hz >= 0.0)) fail("counting.pair_rate_hz", "must be >= 0");
  if (!(integration_time_s > 0.0)) fail("counting.integration_time_s", "must be > 0");
  if (experiment != ExperimentKind::Modulation) {
    if (!(sweep.step > 0.0)) fail("sweep.step", "must be > 0");
    if (!(sweep.stop >= sweep.start)) fail("sweep.stop", "must be >= sweep.start");
    if (sweep.values().size() > 100000) fail("sweep", "has more than 100000 points");
  }
  if (experiment == ExperimentKind::FringeVsVoltage && sweep.start < 0.0)
    fail("sweep.start", "voltages must be >= 0");
  if ((experiment == ExperimentKind::FringeVsVoltage || experiment == ExperimentKind::Hom) &&
      injection == PumpInjection::Ports1And2)
    fail("source.injection", "must be port3 or port4 for this experiment");
  if (!(hom_visibility >= 0.0 && hom_visibility <= 1.0)) fail("hom.visibility", "must lie in [0,1]");
  if (!std::isfinite(hwp1_deg)) fail("polarization.hwp1_deg", "must be finite");
  if (!(modulation_rate_hz > 0.0)) fail("modulation.rate_hz", "must be > 0");
  if (!(modulation_total_time_s >= 0.0)) fail("modulation.total_time_s", "must be >= 0");
  if (modulation_bins < 2) fail("modulation.bins", "must be >= 2");
}

ExperimentConfig parse_config(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  return from_yaml(root);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace biphoton::app
