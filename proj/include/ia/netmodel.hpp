#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ia/errors.hpp"

namespace ia {

// Static description of a K-link MIMO interference network with limited
// CSI feedback. All powers are linear (not dB). path_loss[k][i] is the
// large-scale gain of the channel from transmitter i to receiver k.
struct NetworkScenario {
  int links = 0;         // K
  int tx_antennas = 0;   // Nt
  int rx_antennas = 0;   // Nr
  double power = 0.0;    // P, per transmitter
  double noise_power = 0.0;
  std::vector<std::vector<double>> path_loss;  // K x K, diagonal > 0
  int feedback_budget = 0;  // B, bits per receiver per slot

  // Dimension of the vectorized channel a receiver quantizes.
  int quantizer_dim() const { return tx_antennas * rx_antennas; }

  // Throws DomainError on any malformed field.
  void validate() const;
};

// Per-link stream counts d_k ("transmission mode").
struct StreamProfile {
  std::vector<int> d;

  static StreamProfile uniform(int links, int streams);
  bool symmetric() const;
  int max_streams() const;
};

// bits[k][i]: feedback bits receiver k spends quantizing the channel from
// transmitter i. Every row must sum to the scenario budget.
struct FeedbackSplit {
  std::vector<std::vector<int>> bits;

  static FeedbackSplit zeros(int links);
};

// Largest symmetric stream count satisfying Nt+Nr-(K+1)d >= 0.
// Throws InfeasibleNetwork when even d=1 does not fit.
int max_feasible_mode(const NetworkScenario& net);

// True iff the symmetric profile d passes the feasibility condition.
bool symmetric_mode_feasible(const NetworkScenario& net, int d);

// Validates a stream profile against the scenario. Symmetric profiles are
// checked against the feasibility condition; asymmetric profiles only get
// basic bounds checks (no known closed feasibility test).
void validate_streams(const NetworkScenario& net, const StreamProfile& streams);

struct SplitViolation {
  int row = -1;
  std::string message;
};

// nullopt when the split is valid; otherwise describes the first bad row.
std::optional<SplitViolation> validate_split(const FeedbackSplit& split,
                                             const NetworkScenario& net);

// Convenience: throws DomainError built from the violation, if any.
void require_valid_split(const FeedbackSplit& split, const NetworkScenario& net);

}  // namespace ia
