#include <algorithm>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <biphoton/errors.hpp>
#include <biphoton/version.hpp>
#include <biphoton_app/acceptance.hpp>
#include <biphoton_app/config.hpp>
#include <biphoton_app/csv.hpp>
#include <biphoton_app/experiments.hpp>

namespace app = biphoton::app;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kConfigError = 2;

void print_summary(const app::Summary& s) {
  for (const auto& [k, v] : s) std::cout << "  " << k << ": " << v << '\n';
}

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed, std::optional<std::string> out,
            std::optional<unsigned> workers) {
  app::ExperimentConfig c;
  try {
    c = app::load_config(path);
  } catch (const app::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  if (seed) c.seed = *seed;
  if (out) c.output = *out;
  if (workers) c.workers = *workers;
  const auto result = app::run_experiment(c);
  try {
    app::write_csv(c.output, result.data);
  } catch (const std::runtime_error& e) {
    std::cerr << "error: output: " << e.what() << '\n';
    return kConfigError;
  }
  std::cout << "experiment: " << app::to_string(c.experiment) << "\nseed: " << c.seed << "\nrows: "
            << result.data.rows.size() << "\noutput: " << c.output << '\n';
  print_summary(result.summary);
  if (result.fit_error) {
    std::cerr << "fit failed: " << *result.fit_error << '\n';
    return kFailure;
  }
  return kOk;
}

int cmd_accept(std::uint64_t seed, double tau, const std::string& convention, const std::vector<int>& only) {
  app::AcceptanceOptions o;
  o.seed = seed;
  o.tau_thermal_us = tau;
  if (convention == "hadamard") o.convention = biphoton::BsConvention::Hadamard;
  bool all = true;
  for (int id = 1; id <= app::kCriterionCount; ++id) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto r = app::run_criterion(id, o);
    std::cout << app::format_result(r) << std::endl;
    all = all && r.pass;
  }
  return all ? kOk : kFailure;
}

int cmd_fit(const std::string& path, const std::string& model) {
  app::Dataset d;
  try {
    d = app::read_csv(path);
  } catch (const app::CsvError& e) {
    std::cerr << "error: " << path << ": " << e.what() << '\n';
    return kFailure;
  }
  try {
    const auto s = app::fit_dataset(d, model);
    std::cout << "file: " << path << "\nexperiment: " << app::to_string(d.kind) << "\nfit: " << model << '\n';
    print_summary(s);
  } catch (const biphoton::FitError& e) {
    std::cerr << "fit failed: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}

int cmd_list() {
  for (auto k : app::all_experiments()) {
    const auto c = app::default_config(k);
    std::printf("%-20s %s\n", std::string(app::to_string(k)).c_str(), std::string(app::describe(k)).c_str());
    if (k == app::ExperimentKind::Modulation)
      std::printf("%-20s default: %g Hz drive, %g s, %zu bins, noise preset %s\n", "", c.modulation_rate_hz,
                  c.modulation_total_time_s, c.modulation_bins, c.noise_preset.c_str());
    else
      std::printf("%-20s default: sweep %g..%g step %g, %g s per point, noise preset %s\n", "", c.sweep.start,
                  c.sweep.stop, c.sweep.step, c.integration_time_s, c.noise_preset.c_str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Two-photon Bell-state chip simulator"};
  cli.set_version_flag("--version", std::string(biphoton::kVersion));
  cli.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> run_seed;
  std::optional<std::string> run_out;
  std::optional<unsigned> run_workers;
  auto* run = cli.add_subcommand("run", "Run one experiment from a YAML config and write its CSV");
  run->add_option("config", config_path, "Experiment config file")->required();
  run->add_option("--seed", run_seed, "Override the master seed");
  run->add_option("--out", run_out, "Override the output CSV path");
  run->add_option("--workers", run_workers, "Worker threads (0 = all cores)");

  std::uint64_t accept_seed = app::AcceptanceOptions{}.seed;
  double accept_tau = app::AcceptanceOptions{}.tau_thermal_us;
  std::string accept_convention = "symmetric";
  std::vector<int> accept_only;
  auto* accept = cli.add_subcommand("accept", "Run the acceptance criteria");
  accept->add_option("--seed", accept_seed, "Master seed");
  accept->add_option("--tau-thermal-us", accept_tau, "Heater thermal time constant in microseconds")
      ->check(CLI::PositiveNumber);
  accept->add_option("--convention", accept_convention, "Beam-splitter convention")
      ->check(CLI::IsMember({"symmetric", "hadamard"}));
  accept->add_option("--criterion", accept_only, "Run only these criteria")->check(CLI::Range(1, app::kCriterionCount));

  std::string csv_path, model;
  auto* fit = cli.add_subcommand("fit", "Fit a CSV produced by `run` or in the same format");
  fit->add_option("csv", csv_path, "CSV file")->required();
  fit->add_option("--model", model, "Fit model")->required()->check(CLI::IsMember({"fringe", "hom"}));

  auto* list = cli.add_subcommand("list-experiments", "List experiments and their defaults");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    cli.exit(e);
    return kConfigError;
  }

  try {
    if (*run) return cmd_run(config_path, run_seed, run_out, run_workers);
    if (*accept) return cmd_accept(accept_seed, accept_tau, accept_convention, accept_only);
    if (*fit) return cmd_fit(csv_path, model);
    if (*list) return cmd_list();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
