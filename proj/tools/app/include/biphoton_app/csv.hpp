#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "biphoton_app/experiments.hpp"

namespace biphoton::app {

/// Malformed CSV input; `line()` is 1-based (0 when the file is empty or unreadable).
class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Header `# experiment=<name> seed=<u64> version=<semver>`, a
/// `# reproduces=<text>` comment, the column header, then rows. Floats use
/// %.9g; count columns are written as integers.
std::string to_csv(const Dataset& d);
Dataset parse_csv(std::string_view text);
Dataset read_csv(const std::filesystem::path& path);
/// Throws std::runtime_error when the file cannot be written.
void write_csv(const std::filesystem::path& path, const Dataset& d);

}  // namespace biphoton::app
