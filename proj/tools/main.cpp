// Benchmark CLI: `solve` runs one configuration from a flat key=value file,
// `reproduce` replays the published parameter tables. Results land in a CSV.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rfhdg/problems.hpp"
#include "rfhdg/runner.hpp"

namespace {

void print_records(const std::vector<rfhdg::RunRecord>& records) {
  for (const auto& rec : records) {
    std::printf("example %d  %s  h=%.6g  k0=%d  dof=%d  rows=%d", rec.config.example,
                rfhdg::to_string(rec.config.scheme).c_str(), rec.h, rec.config.k0,
                rec.dof, rec.rows);
    for (const auto& [key, value] : rec.mean.e0) std::printf("  e0(%s)=%.3e", key.c_str(), value);
    std::printf("\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized-feature hybridized DG flow solver benchmark"};
  app.require_subcommand(1);

  std::string config_path, out_path, dump_path, seed_list, table;
  int quad_order = 0;

  CLI::App* solve = app.add_subcommand("solve", "Run one configuration");
  solve->add_option("--config", config_path, "Flat key=value configuration file")
      ->required();
  solve->add_option("--seed-list", seed_list, "Comma-separated seeds, overrides config");
  solve->add_option("--out", out_path, "CSV output path, overrides config");
  solve->add_option("--dump-system", dump_path,
                    "Write the first seed's matrix and rhs as 'row col value' triples");
  solve->add_option("--quad-order", quad_order,
                    "Assembly quadrature points per direction");

  CLI::App* reproduce =
      app.add_subcommand("reproduce", "Replay a published parameter table");
  reproduce
      ->add_option("--table", table, "One of 1, 2, 3, 5, 6, ex3, ex4, ex5")
      ->required();
  reproduce->add_option("--out", out_path, "CSV output path");
  reproduce->add_option("--seed-list", seed_list, "Comma-separated seeds");

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<rfhdg::RunConfig> configs;
    if (solve->parsed()) {
      rfhdg::RunConfig config = rfhdg::parse_config_file(config_path);
      if (!seed_list.empty()) config.seeds = rfhdg::parse_seed_list(seed_list);
      if (!out_path.empty()) config.out_path = out_path;
      if (!dump_path.empty()) config.dump_path = dump_path;
      if (quad_order > 0) config.quad_points = quad_order;
      configs.push_back(std::move(config));
    } else {
      configs = rfhdg::preset_run_table(table);
      for (auto& config : configs) {
        if (!seed_list.empty()) config.seeds = rfhdg::parse_seed_list(seed_list);
        if (!out_path.empty()) config.out_path = out_path;
      }
    }

    const std::vector<rfhdg::RunRecord> records = rfhdg::run(configs);
    print_records(records);
    const std::string csv_path =
        !out_path.empty() ? out_path
                          : (!configs.front().out_path.empty() ? configs.front().out_path
                                                               : std::string());
    if (!csv_path.empty()) {
      rfhdg::write_csv(records, csv_path);
      std::printf("wrote %zu record(s) to %s\n", records.size(), csv_path.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
