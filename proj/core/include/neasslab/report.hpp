#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace neasslab {

inline constexpr const char* kVersion = "0.1.0";

// Shortest round-trip decimal representation; locale-independent and
// deterministic, so CSV bodies are bit-stable across runs.
std::string format_double(double v);

std::uint64_t fnv1a(const std::string& text);
std::string hex64(std::uint64_t v);

// Comma-separated, LF-terminated table with a single '#'-prefixed version
// line followed by the header row.  Cells are preformatted strings.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);

  void add_row(std::vector<std::string> cells);
  std::string str(const std::string& scenario_hash) const;
  void write(const std::string& path, const std::string& scenario_hash) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

// Summary metadata of one experiment run (meta.json).  Wall-clock time is
// informational and excluded from any determinism comparison.
struct RunReport {
  std::string experiment;
  std::string scenario_hash;
  bool pass = false;
  int exit_code = 1;
  double wall_seconds = 0.0;
  double leakage = 0.0;
  std::vector<std::pair<std::string, double>> metrics;

  std::string to_json() const;
  void write(const std::string& path) const;
};

}  // namespace neasslab
