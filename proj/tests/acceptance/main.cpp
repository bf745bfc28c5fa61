// Acceptance suite: one line per criterion, non-zero exit when any fails.
// Optional arguments: --seed <u64> --tau-thermal-us <x> --convention <symmetric|hadamard>

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>

#include <biphoton_app/acceptance.hpp>

int main(int argc, char** argv) {
  biphoton::app::AcceptanceOptions o;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string key = argv[i];
    if (key == "--seed") o.seed = std::strtoull(argv[i + 1], nullptr, 10);
    else if (key == "--tau-thermal-us") o.tau_thermal_us = std::strtod(argv[i + 1], nullptr);
    else if (key == "--convention" && std::strcmp(argv[i + 1], "hadamard") == 0)
      o.convention = biphoton::BsConvention::Hadamard;
    else {
      std::cerr << "unknown argument " << key << '\n';
      return 2;
    }
  }
  int failures = 0;
  for (int id = 1; id <= biphoton::app::kCriterionCount; ++id) {
    const auto r = biphoton::app::run_criterion(id, o);
    std::cout << biphoton::app::format_result(r) << std::endl;
    if (!r.pass) ++failures;
  }
  std::cout << (failures ? "acceptance: " + std::to_string(failures) + " criterion(s) failed" : "acceptance: all criteria passed")
            << std::endl;
  return failures ? 1 : 0;
}
