#pragma once

#include <stdexcept>
#include <string>

namespace ia {

// Argument outside the mathematical domain of an operation.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// floor((Nt+Nr)/(K+1)) == 0: no stream count satisfies the alignment
// feasibility condition.
struct InfeasibleNetwork : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// No Erlang components survive construction (all shapes zero).
struct EmptyMixture : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Asked for an interference-limited quantity on a link with no interferers.
struct NoInterference : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exhaustive search would exceed the candidate-evaluation cap.
struct BudgetTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Explicit codebook would exceed the per-channel bit cap.
struct BitsTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sweep config file problem; line is 1-based, 0 when not tied to a line.
struct ConfigError : std::runtime_error {
  ConfigError(int line_no, const std::string& what)
      : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + what
                                       : what),
        line(line_no) {}
  int line;
};

// CSV comparison inputs do not describe the same set of rows.
struct KeyMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ia
