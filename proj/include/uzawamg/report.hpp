#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace uzawamg {

/// Formats a real with 6 significant digits, '.' decimal separator.
std::string format_real(double v);

/// Tabular experiment report. Rows hold already-formatted cells; wall-clock
/// columns go last and are excluded from reproducibility comparisons.
struct RunReport {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config; // echoed configuration
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::uint64_t seed = 0;
};

/// Short build identifier baked into every report.
std::string build_id();

std::string to_csv(const RunReport& report);
std::string to_json(const RunReport& report); // includes the provenance block

void write_file(const std::string& path, const std::string& content);

} // namespace uzawamg
