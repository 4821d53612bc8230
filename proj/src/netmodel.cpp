#include "ia/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ia {

void NetworkScenario::validate() const {
  if (links < 1) throw DomainError("link count must be >= 1");
  if (tx_antennas < 1 || rx_antennas < 1)
    throw DomainError("antenna counts must be >= 1");
  if (!(power > 0.0) || !std::isfinite(power))
    throw DomainError("transmit power must be finite and > 0");
  if (!(noise_power > 0.0) || !std::isfinite(noise_power))
    throw DomainError("noise power must be finite and > 0");
  if (feedback_budget < 0) throw DomainError("feedback budget must be >= 0");
  if (static_cast<int>(path_loss.size()) != links)
    throw DomainError("path-loss matrix must have K rows");
  for (int k = 0; k < links; ++k) {
    if (static_cast<int>(path_loss[k].size()) != links)
      throw DomainError("path-loss matrix must be K x K");
    for (int i = 0; i < links; ++i) {
      const double a = path_loss[k][i];
      if (!std::isfinite(a) || a < 0.0)
        throw DomainError("path-loss entries must be finite and >= 0");
    }
    if (!(path_loss[k][k] > 0.0))
      throw DomainError("direct path-loss (diagonal) must be > 0");
  }
}

StreamProfile StreamProfile::uniform(int links, int streams) {
  return StreamProfile{std::vector<int>(static_cast<size_t>(links), streams)};
}

bool StreamProfile::symmetric() const {
  return std::all_of(d.begin(), d.end(), [&](int v) { return v == d.front(); });
}

int StreamProfile::max_streams() const {
  return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

FeedbackSplit FeedbackSplit::zeros(int links) {
  return FeedbackSplit{std::vector<std::vector<int>>(
      static_cast<size_t>(links), std::vector<int>(static_cast<size_t>(links), 0))};
}

int max_feasible_mode(const NetworkScenario& net) {
  net.validate();
  const int d = (net.tx_antennas + net.rx_antennas) / (net.links + 1);
  if (d < 1)
    throw InfeasibleNetwork("no feasible symmetric mode: floor((Nt+Nr)/(K+1)) = 0");
  return d;
}

bool symmetric_mode_feasible(const NetworkScenario& net, int d) {
  return d >= 1 && net.tx_antennas + net.rx_antennas - (net.links + 1) * d >= 0;
}

void validate_streams(const NetworkScenario& net, const StreamProfile& streams) {
  if (static_cast<int>(streams.d.size()) != net.links)
    throw DomainError("stream profile must have K entries");
  for (int v : streams.d)
    if (v < 1) throw DomainError("stream counts must be >= 1");
  if (streams.symmetric() && !symmetric_mode_feasible(net, streams.d.front()))
    throw InfeasibleNetwork("symmetric mode d=" + std::to_string(streams.d.front()) +
                            " violates Nt+Nr-(K+1)d >= 0");
}

std::optional<SplitViolation> validate_split(const FeedbackSplit& split,
                                             const NetworkScenario& net) {
  if (static_cast<int>(split.bits.size()) != net.links)
    return SplitViolation{-1, "split must have K rows"};
  for (int k = 0; k < net.links; ++k) {
    const auto& row = split.bits[k];
    if (static_cast<int>(row.size()) != net.links)
      return SplitViolation{k, "row " + std::to_string(k) + " must have K entries"};
    int sum = 0;
    for (int b : row) {
      if (b < 0)
        return SplitViolation{k, "row " + std::to_string(k) + " has a negative entry"};
      sum += b;
    }
    if (sum != net.feedback_budget) {
      std::ostringstream msg;
      msg << "row " << k << " sums to " << sum << ", budget is "
          << net.feedback_budget;
      return SplitViolation{k, msg.str()};
    }
  }
  return std::nullopt;
}

void require_valid_split(const FeedbackSplit& split, const NetworkScenario& net) {
  if (auto v = validate_split(split, net)) throw DomainError(v->message);
}

}  // namespace ia
