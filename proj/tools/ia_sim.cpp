#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "ia/sweep.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "ia_sim: average-rate sweeps for K-link MIMO interference networks "
      "with limited CSI feedback (closed form + Monte Carlo)"};

  std::string config_path;
  std::string out_path;
  long trials = -1;
  long long seed = -1;
  std::string mc_mode;
  std::vector<std::string> compare_paths;
  double threshold_pct = 5.0;

  app.add_option("--config", config_path, "sweep config file (key = value)");
  app.add_option("--out", out_path, "override the config's output csv path");
  app.add_option("--trials", trials, "override Monte Carlo trials (0 = theory only)");
  app.add_option("--seed", seed, "override the RNG seed");
  app.add_option("--mc-mode", mc_mode, "Monte Carlo mode: rvq | cell")
      ->check(CLI::IsMember({"rvq", "cell"}));
  app.add_option("--compare", compare_paths,
                 "compare two sweep csv files instead of running")
      ->expected(2);
  app.add_option("--threshold", threshold_pct,
                 "max tolerated relative deviation for --compare, percent");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!compare_paths.empty()) {
      const ia::sweep::CompareReport report =
          ia::sweep::compare_report(compare_paths[0], compare_paths[1]);
      std::cout << ia::sweep::format_report(report);
      if (!report.within(threshold_pct)) {
        std::cerr << "deviation " << report.worst * 100.0 << "% exceeds threshold "
                  << threshold_pct << "%\n";
        return 2;
      }
      return 0;
    }

    if (config_path.empty()) {
      std::cerr << "error: need --config (or --compare A B)\n";
      return 1;
    }
    ia::sweep::SweepConfig cfg = ia::sweep::parse_config_file(config_path);
    if (!out_path.empty()) cfg.out_path = out_path;
    if (trials >= 0) cfg.trials = trials;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (mc_mode == "rvq") cfg.mc_mode = ia::mc::McMode::kRvq;
    if (mc_mode == "cell") cfg.mc_mode = ia::mc::McMode::kCellApprox;

    const auto rows = ia::sweep::run_sweep(cfg);
    ia::sweep::write_csv(rows, cfg.out_path);
    std::cout << rows.size() << " rows -> " << cfg.out_path << "\n";
    return 0;
  } catch (const ia::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const ia::KeyMismatch& e) {
    std::cerr << "comparison error: " << e.what() << "\n";
    return 1;
  } catch (const ia::InfeasibleNetwork& e) {
    std::cerr << "infeasible scenario: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
