#include "ia/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ia::alloc {

namespace {

// Compositions of `total` into `parts` nonnegative integers:
// C(total+parts-1, parts-1). Saturates instead of overflowing.
long composition_count(int total, int parts) {
  long double count = 1.0L;
  for (int j = 1; j < parts; ++j) count = count * (total + j) / j;
  if (count > 4e18L) return std::numeric_limits<long>::max();
  return static_cast<long>(std::llroundl(count));
}

// Advances a composition in lexicographic order; false after the last one.
bool next_composition(std::vector<int>& c) {
  const int K = static_cast<int>(c.size());
  if (c[static_cast<size_t>(K - 1)] > 0) {
    int j = K - 2;
    // nothing to carry: move one unit left from the tail
    if (j < 0) return false;
    ++c[static_cast<size_t>(j)];
    --c[static_cast<size_t>(K - 1)];
    return true;
  }
  int j = K - 2;
  while (j >= 1 && c[static_cast<size_t>(j)] == 0) --j;
  if (j < 1) return false;
  const int v = c[static_cast<size_t>(j)];
  c[static_cast<size_t>(j)] = 0;
  ++c[static_cast<size_t>(j - 1)];
  c[static_cast<size_t>(K - 1)] = v - 1;
  return true;
}

// Rate of link k when receiver k's row is `row`. Other receivers' rows do
// not enter link k's rate; they are set to the same row only to satisfy the
// per-row budget invariant.
double row_stream_rate(const NetworkScenario& net, const StreamProfile& streams,
                       const std::vector<int>& row, int k) {
  NetworkScenario work = net;
  work.feedback_budget = std::accumulate(row.begin(), row.end(), 0);
  FeedbackSplit split;
  split.bits.assign(static_cast<size_t>(net.links), row);
  return rate::stream_rate(work, streams, split, k);
}

// Residual weight of channel i at receiver k: expected interference mass
// kappa_{k,i} * omega_{k,i} before any feedback reduction.
std::vector<double> residual_weights(const NetworkScenario& net,
                                     const StreamProfile& streams, int k) {
  std::vector<double> c(static_cast<size_t>(net.links));
  for (int i = 0; i < net.links; ++i) {
    const int omega = (i == k) ? streams.d[static_cast<size_t>(i)] - 1
                               : streams.d[static_cast<size_t>(i)];
    const double kappa =
        net.power *
        net.path_loss[static_cast<size_t>(k)][static_cast<size_t>(i)] /
        streams.d[static_cast<size_t>(i)];
    c[static_cast<size_t>(i)] = kappa * omega;
  }
  return c;
}

std::vector<int> equal_row(const NetworkScenario& net, int k) {
  const int K = net.links;
  const int base = net.feedback_budget / K;
  const int rem = net.feedback_budget % K;
  std::vector<int> row(static_cast<size_t>(K), base);
  std::vector<int> order(static_cast<size_t>(K));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return net.path_loss[static_cast<size_t>(k)][static_cast<size_t>(a)] >
           net.path_loss[static_cast<size_t>(k)][static_cast<size_t>(b)];
  });
  for (int r = 0; r < rem; ++r)
    ++row[static_cast<size_t>(order[static_cast<size_t>(r)])];
  return row;
}

// Round nonnegative reals to integers preserving their (integer) sum,
// largest fractional parts first; ties by larger target, then lower index.
std::vector<int> round_preserving_sum(const std::vector<double>& target, int sum) {
  const size_t n = target.size();
  std::vector<int> out(n);
  std::vector<std::pair<double, size_t>> frac(n);
  int assigned = 0;
  for (size_t i = 0; i < n; ++i) {
    out[i] = static_cast<int>(std::floor(target[i]));
    assigned += out[i];
    frac[i] = {target[i] - out[i], i};
  }
  std::stable_sort(frac.begin(), frac.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return target[a.second] > target[b.second];
  });
  for (int r = 0; r < sum - assigned; ++r)
    ++out[frac[static_cast<size_t>(r)].second];
  return out;
}

std::vector<int> rims_row(const NetworkScenario& net, const std::vector<double>& c,
                          int k) {
  const int K = net.links;
  const int B = net.feedback_budget;
  const int m = net.quantizer_dim() - 1;
  const bool degenerate =
      m < 1 || std::all_of(c.begin(), c.end(), [](double v) { return v <= 0.0; });
  if (degenerate) return equal_row(net, k);

  // Water-filling on the active set: B_i = B/|A| + m*log2(c_i/geomean_A(c)),
  // dropping channels whose continuous share goes negative.
  std::vector<int> active;
  for (int i = 0; i < K; ++i)
    if (c[static_cast<size_t>(i)] > 0.0) active.push_back(i);

  std::vector<double> share(static_cast<size_t>(K), 0.0);
  while (!active.empty()) {
    double log2_gm = 0.0;
    for (int i : active) log2_gm += std::log2(c[static_cast<size_t>(i)]);
    log2_gm /= static_cast<double>(active.size());

    bool all_nonneg = true;
    for (int i : active) {
      share[static_cast<size_t>(i)] =
          static_cast<double>(B) / static_cast<double>(active.size()) +
          m * (std::log2(c[static_cast<size_t>(i)]) - log2_gm);
      if (share[static_cast<size_t>(i)] < 0.0) all_nonneg = false;
    }
    if (all_nonneg) break;
    std::vector<int> next;
    for (int i : active) {
      if (share[static_cast<size_t>(i)] >= 0.0)
        next.push_back(i);
      else
        share[static_cast<size_t>(i)] = 0.0;
    }
    active = std::move(next);
  }
  return round_preserving_sum(share, B);
}

}  // namespace

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::kEqual: return "EAS";
    case Scheme::kResidualMin: return "RIMS";
    case Scheme::kGreedy: return "GREEDY";
    case Scheme::kExhaustive: return "EXHAUSTIVE";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  if (name == "EAS" || name == "eas" || name == "equal") return Scheme::kEqual;
  if (name == "RIMS" || name == "rims") return Scheme::kResidualMin;
  if (name == "GREEDY" || name == "greedy" || name == "PAS" || name == "pas")
    return Scheme::kGreedy;
  if (name == "EXHAUSTIVE" || name == "exhaustive") return Scheme::kExhaustive;
  return std::nullopt;
}

FeedbackSplit allocate_equal(const NetworkScenario& net) {
  net.validate();
  FeedbackSplit split = FeedbackSplit::zeros(net.links);
  for (int k = 0; k < net.links; ++k)
    split.bits[static_cast<size_t>(k)] = equal_row(net, k);
  return split;
}

FeedbackSplit allocate_rims(const NetworkScenario& net,
                            const StreamProfile& streams) {
  net.validate();
  validate_streams(net, streams);
  FeedbackSplit split = FeedbackSplit::zeros(net.links);
  for (int k = 0; k < net.links; ++k)
    split.bits[static_cast<size_t>(k)] =
        rims_row(net, residual_weights(net, streams, k), k);
  return split;
}

FeedbackSplit allocate_greedy(const NetworkScenario& net,
                              const StreamProfile& streams) {
  net.validate();
  validate_streams(net, streams);
  const int K = net.links;
  FeedbackSplit split = FeedbackSplit::zeros(K);

#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < K; ++k) {
    std::vector<int> row(static_cast<size_t>(K), 0);
    for (int bit = 0; bit < net.feedback_budget; ++bit) {
      int best_i = 0;
      double best_rate = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < K; ++i) {
        ++row[static_cast<size_t>(i)];
        const double r = row_stream_rate(net, streams, row, k);
        --row[static_cast<size_t>(i)];
        if (r > best_rate) {
          best_rate = r;
          best_i = i;
        }
      }
      ++row[static_cast<size_t>(best_i)];
    }
    split.bits[static_cast<size_t>(k)] = row;
  }
  return split;
}

FeedbackSplit allocate_exhaustive(const NetworkScenario& net,
                                  const StreamProfile& streams,
                                  long max_candidates) {
  net.validate();
  validate_streams(net, streams);
  const int K = net.links;
  const int B = net.feedback_budget;
  const long count = composition_count(B, K);
  if (count > max_candidates)
    throw BudgetTooLarge("exhaustive search needs " + std::to_string(count) +
                         " evaluations per receiver, cap is " +
                         std::to_string(max_candidates));

  constexpr size_t kBlock = 1 << 14;
  FeedbackSplit split = FeedbackSplit::zeros(K);
  for (int k = 0; k < K; ++k) {
    std::vector<int> comp(static_cast<size_t>(K), 0);
    comp[static_cast<size_t>(K - 1)] = B;
    std::vector<std::vector<int>> block;
    std::vector<double> rates;
    std::vector<int> best_row = comp;
    double best_rate = -std::numeric_limits<double>::infinity();

    bool more = true;
    while (more) {
      block.clear();
      do {
        block.push_back(comp);
        more = next_composition(comp);
      } while (more && block.size() < kBlock);

      rates.assign(block.size(), 0.0);
#pragma omp parallel for schedule(static)
      for (long c = 0; c < static_cast<long>(block.size()); ++c)
        rates[static_cast<size_t>(c)] =
            row_stream_rate(net, streams, block[static_cast<size_t>(c)], k);

      // first strict maximum in lexicographic enumeration order
      for (size_t c = 0; c < block.size(); ++c) {
        if (rates[c] > best_rate) {
          best_rate = rates[c];
          best_row = block[c];
        }
      }
    }
    split.bits[static_cast<size_t>(k)] = best_row;
  }
  return split;
}

FeedbackSplit allocate(Scheme scheme, const NetworkScenario& net,
                       const StreamProfile& streams) {
  switch (scheme) {
    case Scheme::kEqual: return allocate_equal(net);
    case Scheme::kResidualMin: return allocate_rims(net, streams);
    case Scheme::kGreedy: return allocate_greedy(net, streams);
    case Scheme::kExhaustive: return allocate_exhaustive(net, streams);
  }
  throw DomainError("unknown allocation scheme");
}

StreamProfile select_mode(const NetworkScenario& net, Scheme split_policy) {
  const int d_max = max_feasible_mode(net);
  StreamProfile best_streams = StreamProfile::uniform(net.links, 1);
  double best_rate = -std::numeric_limits<double>::infinity();
  for (int d = 1; d <= d_max; ++d) {
    const StreamProfile streams = StreamProfile::uniform(net.links, d);
    const FeedbackSplit split = allocate(split_policy, net, streams);
    const double r = rate::sum_rate(net, streams, split).sum;
    if (r > best_rate) {
      best_rate = r;
      best_streams = streams;
    }
  }
  return best_streams;
}

OptimizationResult joint_optimize(const NetworkScenario& net,
                                  Scheme split_policy) {
  const int d_max = max_feasible_mode(net);
  constexpr int kMaxRounds = 20;

  OptimizationResult best;
  best.sum_rate = -std::numeric_limits<double>::infinity();

  int d = 1;
  FeedbackSplit prev_split;
  int prev_d = -1;
  bool converged = false;
  int round = 0;
  while (round < kMaxRounds) {
    ++round;
    const StreamProfile streams = StreamProfile::uniform(net.links, d);
    const FeedbackSplit split = allocate(split_policy, net, streams);

    int d_next = 1;
    double d_rate = -std::numeric_limits<double>::infinity();
    for (int cand = 1; cand <= d_max; ++cand) {
      const double r =
          rate::sum_rate(net, StreamProfile::uniform(net.links, cand), split).sum;
      if (r > d_rate) {
        d_rate = r;
        d_next = cand;
      }
    }

    if (d_rate > best.sum_rate) {
      best.split = split;
      best.streams = StreamProfile::uniform(net.links, d_next);
      best.sum_rate = d_rate;
    }
    if (prev_d == d_next && prev_split.bits == split.bits) {
      converged = true;
      break;
    }
    prev_d = d_next;
    prev_split = split;
    d = d_next;
  }

  best.iterations = round;
  best.converged = converged;
  // Recompute at the returned operating point so the reported rate always
  // matches the reported (split, streams) pair exactly.
  best.sum_rate = rate::sum_rate(net, best.streams, best.split).sum;
  return best;
}

}  // namespace ia::alloc
