#include "biphoton_app/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <biphoton/version.hpp>

namespace biphoton::app {

namespace {

const std::set<std::string> kIntegerColumns{"coincidences", "singles_1", "singles_2", "bin_index"};

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return std::string(s);
}

}  // namespace

CsvError::CsvError(std::size_t line, const std::string& what)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

std::string to_csv(const Dataset& d) {
  std::ostringstream os;
  os << "# experiment=" << to_string(d.kind) << " seed=" << d.seed << " version=" << kVersion << '\n';
  os << "# reproduces=" << d.reproduces << '\n';
  for (std::size_t i = 0; i < d.columns.size(); ++i) os << (i ? "," : "") << d.columns[i];
  os << '\n';
  std::vector<bool> integer;
  for (const auto& c : d.columns) integer.push_back(kIntegerColumns.contains(c));
  char buf[64];
  for (const auto& row : d.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (integer[i])
        std::snprintf(buf, sizeof buf, "%.0f", row[i]);
      else
        std::snprintf(buf, sizeof buf, "%.9g", row[i]);
      os << (i ? "," : "") << buf;
    }
    os << '\n';
  }
  return os.str();
}

Dataset parse_csv(std::string_view text) {
  if (text.empty()) throw CsvError(0, "empty CSV file");
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < text.size();) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  Dataset d;
  std::size_t ln = 0;
  // Header line.
  {
    const auto head = trim(lines[0]);
    ln = 1;
    if (head.rfind("# ", 0) != 0) throw CsvError(ln, "expected '# experiment=... seed=... version=...'");
    bool has_exp = false, has_seed = false, has_version = false;
    for (const auto& tok : split(std::string_view(head).substr(2), ' ')) {
      if (tok.empty()) continue;
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw CsvError(ln, "malformed header field '" + tok + "'");
      const auto key = tok.substr(0, eq), value = tok.substr(eq + 1);
      if (key == "experiment") {
        try {
          d.kind = parse_experiment(value);
        } catch (const std::invalid_argument& e) {
          throw CsvError(ln, e.what());
        }
        has_exp = true;
      } else if (key == "seed") {
        const auto r = std::from_chars(value.data(), value.data() + value.size(), d.seed);
        if (r.ec != std::errc() || r.ptr != value.data() + value.size()) throw CsvError(ln, "invalid seed");
        has_seed = true;
      } else if (key == "version") {
        has_version = !value.empty();
      }
    }
    if (!has_exp || !has_seed || !has_version) throw CsvError(ln, "header must name experiment, seed and version");
  }
  std::size_t i = 1;
  for (; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.rfind("#", 0) != 0) break;
    if (line.rfind("# reproduces=", 0) == 0) d.reproduces = line.substr(13);
  }
  if (i >= lines.size() || trim(lines[i]).empty()) throw CsvError(i + 1, "missing column header");
  d.columns = split(trim(lines[i]), ',');
  for (const auto& c : d.columns)
    if (c.empty()) throw CsvError(i + 1, "empty column name");
  if (std::find(d.columns.begin(), d.columns.end(), "coincidences") == d.columns.end())
    throw CsvError(i + 1, "no 'coincidences' column");
  for (++i; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) {
      if (i + 1 == lines.size()) break;
      throw CsvError(i + 1, "blank line inside data");
    }
    const auto cells = split(line, ',');
    if (cells.size() != d.columns.size())
      throw CsvError(i + 1, "expected " + std::to_string(d.columns.size()) + " fields, got " +
                                std::to_string(cells.size()));
    std::vector<double> row;
    for (const auto& cell : cells) {
      double v = 0.0;
      const auto cs = trim(cell);
      const auto r = std::from_chars(cs.data(), cs.data() + cs.size(), v);
      if (cs.empty() || r.ec != std::errc() || r.ptr != cs.data() + cs.size() || !std::isfinite(v))
        throw CsvError(i + 1, "invalid number '" + cs + "'");
      row.push_back(v);
    }
    d.rows.push_back(std::move(row));
  }
  if (d.rows.empty()) throw CsvError(i, "no data rows");
  return d;
}

Dataset read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError(0, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

void write_csv(const std::filesystem::path& path, const Dataset& d) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << to_csv(d);
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace biphoton::app
