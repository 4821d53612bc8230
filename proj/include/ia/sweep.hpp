#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ia/allocator.hpp"
#include "ia/mcsim.hpp"

namespace ia::sweep {

// One batch run: a scenario swept over an SNR grid for a set of allocation
// schemes, theory always, Monte Carlo when trials > 0.
struct SweepConfig {
  NetworkScenario base;  // power is overwritten per grid point from the SNR
  std::vector<double> snr_grid_db;
  std::vector<std::string> schemes;  // EAS | RIMS | GREEDY | JOINT
  bool select_mode = false;
  int fixed_d = 1;
  long trials = 0;  // 0 = theory only
  std::uint64_t seed = 1;
  mc::McMode mc_mode = mc::McMode::kCellApprox;
  std::string out_path = "sweep.csv";
  std::string scenario_id = "scenario";
};

// Flat key–value format, '#' comments, matrix rows as "alpha.row0 = ...".
// Throws ConfigError with a 1-based line number.
SweepConfig parse_config(std::istream& in);
SweepConfig parse_config_file(const std::string& path);

struct SweepRow {
  std::string scenario_id;
  double snr_db = 0.0;
  std::string scheme;
  int mode_d = 0;
  int b_total = 0;
  double rate_theory = 0.0;
  double rate_mc = 0.0;  // NaN when no Monte Carlo was run
  double ci95 = 0.0;     // NaN when no Monte Carlo was run
  long trials = 0;
  std::uint64_t seed = 0;
};

// Rows come back sorted by (snr, scheme); reruns of the same config are
// byte-identical.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

std::string to_csv(const std::vector<SweepRow>& rows);
void write_csv(const std::vector<SweepRow>& rows, const std::string& path);
std::vector<SweepRow> read_csv(const std::string& path);

struct SchemeDeviation {
  std::string scheme;
  double max_rel = 0.0;
  double mean_rel = 0.0;
  int rows = 0;
};

struct CompareReport {
  std::vector<SchemeDeviation> per_scheme;
  double worst = 0.0;

  bool within(double threshold_pct) const { return worst * 100.0 <= threshold_pct; }
};

// Row-by-row comparison of two sweep outputs over identical keys. Each
// file contributes its Monte Carlo rate when present, its theory rate
// otherwise. Throws KeyMismatch when the row sets differ.
CompareReport compare_report(const std::string& csv_a, const std::string& csv_b);

std::string format_report(const CompareReport& report);

}  // namespace ia::sweep
