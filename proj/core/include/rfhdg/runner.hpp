#pragma once

#include "rfhdg/config.hpp"
#include "rfhdg/coupled.hpp"
#include "rfhdg/metrics.hpp"

namespace rfhdg {

struct RunRecord {
  RunConfig config;
  double h = 0;  // mesh spacing, domain width / nx
  int dof = 0;
  int rows = 0;
  std::vector<ErrorReport> per_seed;
  ErrorReport mean;
};

/// Executes one configuration over its seed list. The result is
/// deterministic for a fixed seed list.
RunRecord run_single(const RunConfig& config);

/// One record per configuration row.
std::vector<RunRecord> run(const std::vector<RunConfig>& configs);
inline std::vector<RunRecord> run(const RunConfig& config) {
  return run(std::vector<RunConfig>{config});
}

/// Header plus one line per record; numeric fields carry 17 significant
/// digits, inapplicable metrics stay empty.
void write_csv(const std::vector<RunRecord>& records, const std::string& path);

/// Flat `key = value` file with '#' comments.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

std::vector<std::uint64_t> parse_seed_list(const std::string& csv);

}  // namespace rfhdg
