#include "ia/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace ia::sweep {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& s, int line) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(line, "not a number: '" + s + "'");
  }
}

long parse_long(const std::string& s, int line) {
  try {
    size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(line, "not an integer: '" + s + "'");
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

SweepConfig parse_config(std::istream& in) {
  SweepConfig cfg;
  std::map<int, std::pair<int, std::string>> alpha_rows;  // row -> (line, text)
  int k_val = -1;
  bool have_nt = false, have_nr = false, have_sigma2 = false, have_b = false,
       have_snr = false, have_schemes = false, have_mode = false;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError(line_no, "empty value for '" + key + "'");

    if (key == "scenario_id") {
      cfg.scenario_id = value;
    } else if (key == "K") {
      k_val = static_cast<int>(parse_long(value, line_no));
      cfg.base.links = k_val;
    } else if (key == "nt") {
      cfg.base.tx_antennas = static_cast<int>(parse_long(value, line_no));
      have_nt = true;
    } else if (key == "nr") {
      cfg.base.rx_antennas = static_cast<int>(parse_long(value, line_no));
      have_nr = true;
    } else if (key == "sigma2") {
      cfg.base.noise_power = parse_double(value, line_no);
      have_sigma2 = true;
    } else if (key == "B") {
      cfg.base.feedback_budget = static_cast<int>(parse_long(value, line_no));
      have_b = true;
    } else if (key.rfind("alpha.row", 0) == 0) {
      const int row = static_cast<int>(parse_long(key.substr(9), line_no));
      alpha_rows[row] = {line_no, value};
    } else if (key == "snr_db") {
      for (const auto& t : tokens(value))
        cfg.snr_grid_db.push_back(parse_double(t, line_no));
      have_snr = true;
    } else if (key == "schemes") {
      for (const auto& t : tokens(value)) {
        if (t != "JOINT" && !alloc::parse_scheme(t))
          throw ConfigError(line_no, "unknown scheme '" + t + "'");
        cfg.schemes.push_back(t);
      }
      have_schemes = true;
    } else if (key == "mode") {
      const auto parts = tokens(value);
      if (parts.size() == 1 && parts[0] == "select") {
        cfg.select_mode = true;
      } else if (parts.size() == 2 && parts[0] == "fixed") {
        cfg.select_mode = false;
        cfg.fixed_d = static_cast<int>(parse_long(parts[1], line_no));
        if (cfg.fixed_d < 1) throw ConfigError(line_no, "fixed mode must be >= 1");
      } else {
        throw ConfigError(line_no, "mode must be 'select' or 'fixed <d>'");
      }
      have_mode = true;
    } else if (key == "trials") {
      cfg.trials = parse_long(value, line_no);
      if (cfg.trials < 0) throw ConfigError(line_no, "trials must be >= 0");
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_long(value, line_no));
    } else if (key == "mc_mode") {
      if (value == "cell")
        cfg.mc_mode = mc::McMode::kCellApprox;
      else if (value == "rvq")
        cfg.mc_mode = mc::McMode::kRvq;
      else
        throw ConfigError(line_no, "mc_mode must be 'cell' or 'rvq'");
    } else if (key == "out") {
      cfg.out_path = value;
    } else {
      throw ConfigError(line_no, "unknown key '" + key + "'");
    }
  }

  if (k_val < 1) throw ConfigError(0, "missing or invalid K");
  if (!have_nt || !have_nr) throw ConfigError(0, "missing nt/nr");
  if (!have_sigma2) throw ConfigError(0, "missing sigma2");
  if (!have_b) throw ConfigError(0, "missing B");
  if (!have_snr || cfg.snr_grid_db.empty()) throw ConfigError(0, "missing snr_db grid");
  if (!have_schemes || cfg.schemes.empty()) throw ConfigError(0, "missing schemes");
  if (!have_mode) throw ConfigError(0, "missing mode (select | fixed <d>)");

  cfg.base.path_loss.assign(static_cast<size_t>(k_val),
                            std::vector<double>(static_cast<size_t>(k_val), 0.0));
  for (int r = 0; r < k_val; ++r) {
    const auto it = alpha_rows.find(r);
    if (it == alpha_rows.end())
      throw ConfigError(0, "missing alpha.row" + std::to_string(r));
    const auto vals = tokens(it->second.second);
    if (static_cast<int>(vals.size()) != k_val)
      throw ConfigError(it->second.first,
                        "alpha.row" + std::to_string(r) + " needs K entries");
    for (int c = 0; c < k_val; ++c)
      cfg.base.path_loss[static_cast<size_t>(r)][static_cast<size_t>(c)] =
          parse_double(vals[static_cast<size_t>(c)], it->second.first);
  }
  if (static_cast<int>(alpha_rows.size()) != k_val)
    throw ConfigError(0, "unexpected alpha rows beyond K");

  cfg.base.power = 1.0;  // placeholder; set per grid point
  try {
    cfg.base.validate();
  } catch (const std::exception& e) {
    throw ConfigError(0, e.what());
  }
  return cfg;
}

SweepConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
  return parse_config(in);
}

namespace {

SweepRow run_point(const SweepConfig& cfg, double snr_db,
                   const std::string& scheme, std::uint64_t row_seed) {
  NetworkScenario net = cfg.base;
  net.power = net.noise_power * std::pow(10.0, snr_db / 10.0);

  SweepRow row;
  row.scenario_id = cfg.scenario_id;
  row.snr_db = snr_db;
  row.scheme = scheme;
  row.b_total = net.feedback_budget;
  row.trials = cfg.trials;
  row.seed = cfg.seed;
  row.rate_mc = std::numeric_limits<double>::quiet_NaN();
  row.ci95 = std::numeric_limits<double>::quiet_NaN();

  StreamProfile streams;
  FeedbackSplit split;
  if (scheme == "JOINT") {
    const alloc::OptimizationResult res = alloc::joint_optimize(net);
    streams = res.streams;
    split = res.split;
    row.rate_theory = res.sum_rate;
  } else {
    const alloc::Scheme policy = *alloc::parse_scheme(scheme);
    streams = cfg.select_mode ? alloc::select_mode(net, policy)
                              : StreamProfile::uniform(net.links, cfg.fixed_d);
    validate_streams(net, streams);
    split = alloc::allocate(policy, net, streams);
    row.rate_theory = rate::sum_rate(net, streams, split).sum;
  }
  row.mode_d = streams.d.front();

  if (cfg.trials > 0) {
    mc::McOptions opts;
    opts.trials = cfg.trials;
    opts.mode = cfg.mc_mode;
    opts.seed = row_seed;
    const mc::McRateReport mc_report =
        mc::estimate_avg_rate(net, streams, split, opts);
    row.rate_mc = mc_report.rates.sum;
    row.ci95 = mc_report.ci95_sum;
  }
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  struct Point {
    int snr_index;
    int scheme_index;
  };
  std::vector<Point> points;
  for (size_t s = 0; s < config.snr_grid_db.size(); ++s)
    for (size_t c = 0; c < config.schemes.size(); ++c)
      points.push_back({static_cast<int>(s), static_cast<int>(c)});

  std::vector<SweepRow> rows(points.size());
  std::exception_ptr failure = nullptr;
  // Monte Carlo points parallelize internally; theory-only grids fan out here.
  [[maybe_unused]] const bool parallel_grid = config.trials == 0;
#pragma omp parallel for schedule(dynamic) if (parallel_grid)
  for (long p = 0; p < static_cast<long>(points.size()); ++p) {
    try {
      const auto [snr_index, scheme_index] = points[static_cast<size_t>(p)];
      const std::uint64_t row_seed = mc::mix_seed(
          config.seed,
          (static_cast<std::uint64_t>(snr_index) << 8) |
              static_cast<std::uint64_t>(scheme_index));
      rows[static_cast<size_t>(p)] =
          run_point(config, config.snr_grid_db[static_cast<size_t>(snr_index)],
                    config.schemes[static_cast<size_t>(scheme_index)], row_seed);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.snr_db != b.snr_db) return a.snr_db < b.snr_db;
    return a.scheme < b.scheme;
  });
  return rows;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "scenario_id,snr_db,scheme,mode_d,B_total,rate_theory_bps_hz,"
      "rate_mc_bps_hz,ci95_halfwidth,trials,seed\n";
  for (const auto& r : rows) {
    out += r.scenario_id;
    out += ',';
    out += format_double(r.snr_db);
    out += ',';
    out += r.scheme;
    out += ',';
    out += std::to_string(r.mode_d);
    out += ',';
    out += std::to_string(r.b_total);
    out += ',';
    out += format_double(r.rate_theory);
    out += ',';
    if (!std::isnan(r.rate_mc)) out += format_double(r.rate_mc);
    out += ',';
    if (!std::isnan(r.ci95)) out += format_double(r.ci95);
    out += ',';
    out += std::to_string(r.trials);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

void write_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // keep LF endings everywhere
  if (!out) throw ConfigError(0, "cannot open output file '" + path + "'");
  out << to_csv(rows);
}

std::vector<SweepRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open csv file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(0, "empty csv file " + path);
  std::vector<SweepRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    while (fields.size() < 10) fields.emplace_back();
    SweepRow r;
    r.scenario_id = fields[0];
    r.snr_db = parse_double(fields[1], line_no);
    r.scheme = fields[2];
    r.mode_d = static_cast<int>(parse_long(fields[3], line_no));
    r.b_total = static_cast<int>(parse_long(fields[4], line_no));
    r.rate_theory = parse_double(fields[5], line_no);
    r.rate_mc = fields[6].empty() ? std::numeric_limits<double>::quiet_NaN()
                                  : parse_double(fields[6], line_no);
    r.ci95 = fields[7].empty() ? std::numeric_limits<double>::quiet_NaN()
                               : parse_double(fields[7], line_no);
    r.trials = parse_long(fields[8], line_no);
    r.seed = static_cast<std::uint64_t>(parse_long(fields[9], line_no));
    rows.push_back(std::move(r));
  }
  return rows;
}

CompareReport compare_report(const std::string& csv_a, const std::string& csv_b) {
  const auto rows_a = read_csv(csv_a);
  const auto rows_b = read_csv(csv_b);

  auto key = [](const SweepRow& r) {
    return r.scenario_id + '|' + format_double(r.snr_db) + '|' + r.scheme + '|' +
           std::to_string(r.mode_d) + '|' + std::to_string(r.b_total);
  };
  auto value = [](const SweepRow& r) {
    return std::isnan(r.rate_mc) ? r.rate_theory : r.rate_mc;
  };

  std::map<std::string, const SweepRow*> index_b;
  for (const auto& r : rows_b) index_b[key(r)] = &r;
  if (index_b.size() != rows_b.size())
    throw KeyMismatch("duplicate row keys in " + csv_b);
  if (rows_a.size() != rows_b.size())
    throw KeyMismatch("row counts differ: " + std::to_string(rows_a.size()) +
                      " vs " + std::to_string(rows_b.size()));

  std::map<std::string, SchemeDeviation> stats;
  CompareReport report;
  for (const auto& ra : rows_a) {
    const auto it = index_b.find(key(ra));
    if (it == index_b.end())
      throw KeyMismatch("no matching row for key '" + key(ra) + "'");
    const double va = value(ra);
    const double vb = value(*it->second);
    double dev = 0.0;
    if (std::abs(va) > 1e-12 || std::abs(vb) > 1e-12)
      dev = std::abs(vb - va) / std::max(std::abs(va), 1e-12);
    auto& s = stats[ra.scheme];
    s.scheme = ra.scheme;
    s.max_rel = std::max(s.max_rel, dev);
    s.mean_rel += dev;
    ++s.rows;
    report.worst = std::max(report.worst, dev);
  }
  for (auto& [name, s] : stats) {
    s.mean_rel /= std::max(1, s.rows);
    report.per_scheme.push_back(s);
  }
  return report;
}

std::string format_report(const CompareReport& report) {
  std::ostringstream out;
  out << "scheme,rows,max_rel_dev,mean_rel_dev\n";
  for (const auto& s : report.per_scheme)
    out << s.scheme << ',' << s.rows << ',' << format_double(s.max_rel) << ','
        << format_double(s.mean_rel) << '\n';
  out << "worst," << format_double(report.worst) << '\n';
  return out.str();
}

}  // namespace ia::sweep
