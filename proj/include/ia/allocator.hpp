#pragma once

#include <optional>
#include <string_view>

#include "ia/netmodel.hpp"
#include "ia/rate_engine.hpp"

namespace ia::alloc {

enum class Scheme { kEqual, kResidualMin, kGreedy, kExhaustive };

std::string_view scheme_name(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view name);

// Equal split: floor(B/K) everywhere, remainder bits to the strongest
// channels of each row (largest path gain, ties by index).
FeedbackSplit allocate_equal(const NetworkScenario& net);

// Residual-interference minimization: per row, minimize
// sum_i c_i 2^{-B_i/m} with c_i the mean residual weight of channel i,
// by the continuous water-filling optimum rounded back to integers.
FeedbackSplit allocate_rims(const NetworkScenario& net,
                            const StreamProfile& streams);

// Greedy rate-maximizing split: per receiver, hand out the budget one bit
// at a time to whichever channel raises stream_rate the most.
FeedbackSplit allocate_greedy(const NetworkScenario& net,
                              const StreamProfile& streams);

inline constexpr long kExhaustiveCap = 10'000'000;

// Brute-force optimum over all compositions of B into K parts per receiver.
// Throws BudgetTooLarge when the candidate count exceeds the cap.
FeedbackSplit allocate_exhaustive(const NetworkScenario& net,
                                  const StreamProfile& streams,
                                  long max_candidates = kExhaustiveCap);

FeedbackSplit allocate(Scheme scheme, const NetworkScenario& net,
                       const StreamProfile& streams);

// Best symmetric stream count in [1, d_max] by total rate, with the split
// recomputed under the given scheme for every candidate mode.
StreamProfile select_mode(const NetworkScenario& net, Scheme split_policy);

struct OptimizationResult {
  FeedbackSplit split;
  StreamProfile streams;
  double sum_rate = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Alternates greedy allocation and mode selection from d=1 until both are
// fixed (at most 20 rounds); returns the best pair seen.
OptimizationResult joint_optimize(const NetworkScenario& net,
                                  Scheme split_policy = Scheme::kGreedy);

}  // namespace ia::alloc
