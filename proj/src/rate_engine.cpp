#include "ia/rate_engine.hpp"

#include <cmath>
#include <numbers>

namespace ia::rate {

namespace {

using specfun::ErlangComponent;
using specfun::ErlangMixture;

constexpr double kLn2 = std::numbers::ln2;

// Interference components at receiver k: one Erlang group per interfering
// transmitter (shape d_i, scale rho_i) plus the own-link inter-stream group
// (shape d_k - 1, scale rho_k). Zero-shape and zero-power groups drop out.
// A scale that underflows to zero means that interferer is fully canceled.
std::vector<ErlangComponent> interference_components(const LinkRateInputs& in,
                                                     const StreamProfile& streams,
                                                     int k) {
  std::vector<ErlangComponent> parts;
  const int links = static_cast<int>(in.kappa.size());
  for (int i = 0; i < links; ++i) {
    const int shape = (i == k) ? streams.d[static_cast<size_t>(i)] - 1
                               : streams.d[static_cast<size_t>(i)];
    if (shape == 0) continue;
    if (!(in.rho[static_cast<size_t>(i)] > 0.0)) continue;
    parts.push_back({shape, in.rho[static_cast<size_t>(i)]});
  }
  return parts;
}

void check_link_args(const NetworkScenario& net, const StreamProfile& streams,
                     const FeedbackSplit& split, int k) {
  validate_streams(net, streams);
  require_valid_split(split, net);
  if (k < 0 || k >= net.links) throw DomainError("link index out of range");
}

}  // namespace

LinkRateInputs link_rate_inputs(const NetworkScenario& net,
                                const StreamProfile& streams,
                                const FeedbackSplit& split, int k) {
  check_link_args(net, streams, split, k);
  const int m = net.quantizer_dim() - 1;
  LinkRateInputs in;
  in.sigma2 = net.noise_power;
  in.kappa.resize(static_cast<size_t>(net.links));
  in.rho.resize(static_cast<size_t>(net.links));
  for (int i = 0; i < net.links; ++i) {
    const double kap = net.power * net.path_loss[static_cast<size_t>(k)]
                                               [static_cast<size_t>(i)] /
                       streams.d[static_cast<size_t>(i)];
    const double reduction =
        m > 0 ? std::exp2(-static_cast<double>(
                    split.bits[static_cast<size_t>(k)][static_cast<size_t>(i)]) /
                m)
              : 1.0;
    in.kappa[static_cast<size_t>(i)] = kap;
    in.rho[static_cast<size_t>(i)] = kap * reduction;
  }
  in.kappa_signal = in.kappa[static_cast<size_t>(k)];
  return in;
}

bool has_interference(const NetworkScenario& net, const StreamProfile& streams,
                      int k) {
  if (streams.d[static_cast<size_t>(k)] > 1) return true;
  for (int i = 0; i < net.links; ++i)
    if (i != k &&
        net.path_loss[static_cast<size_t>(k)][static_cast<size_t>(i)] > 0.0)
      return true;
  return false;
}

LinkMixtures build_link_mixtures(const NetworkScenario& net,
                                 const StreamProfile& streams,
                                 const FeedbackSplit& split, int k) {
  const LinkRateInputs in = link_rate_inputs(net, streams, split, k);
  auto parts = interference_components(in, streams, k);
  if (parts.empty())
    throw EmptyMixture("link " + std::to_string(k) + " has no interference");
  const ErlangMixture interf = specfun::mixture_weights(parts);
  parts.push_back({1, in.kappa_signal});
  return LinkMixtures{specfun::mixture_weights(parts), interf};
}

double stream_rate(const NetworkScenario& net, const StreamProfile& streams,
                   const FeedbackSplit& split, int k) {
  const LinkRateInputs in = link_rate_inputs(net, streams, split, k);
  auto parts = interference_components(in, streams, k);
  if (parts.empty())
    return noise_limited_stream_rate(in.kappa_signal, in.sigma2);

  const ErlangMixture interf = specfun::mixture_weights(parts);
  parts.push_back({1, in.kappa_signal});
  const ErlangMixture signal = specfun::mixture_weights(parts);

  const double s2 = in.sigma2;
  auto log_moment = [s2](int t, double z) { return specfun::z_integral(s2, t, z); };
  return (signal.expect(log_moment) - interf.expect(log_moment)) / kLn2;
}

RateReport sum_rate(const NetworkScenario& net, const StreamProfile& streams,
                    const FeedbackSplit& split) {
  RateReport report;
  report.per_stream.resize(static_cast<size_t>(net.links));
  report.per_link.resize(static_cast<size_t>(net.links));
  for (int k = 0; k < net.links; ++k) {
    double r = stream_rate(net, streams, split, k);
    if (r < 0.0 && r > -1e-9) r = 0.0;  // clip numerical residue
    const int dk = streams.d[static_cast<size_t>(k)];
    report.per_stream[static_cast<size_t>(k)].assign(static_cast<size_t>(dk), r);
    report.per_link[static_cast<size_t>(k)] = dk * r;
    report.sum += dk * r;
  }
  return report;
}

double interference_limited_stream_rate(const NetworkScenario& net,
                                        const StreamProfile& streams,
                                        const FeedbackSplit& split, int k) {
  const LinkRateInputs in = link_rate_inputs(net, streams, split, k);
  auto parts = interference_components(in, streams, k);
  if (parts.empty())
    throw NoInterference("link " + std::to_string(k) +
                         " is interference-free; no high-power limit exists");
  const ErlangMixture interf = specfun::mixture_weights(parts);
  parts.push_back({1, in.kappa_signal});
  const ErlangMixture signal = specfun::mixture_weights(parts);

  auto mean_log = [](int t, double z) {
    return specfun::digamma_int(t) + std::log(z);
  };
  return (signal.expect(mean_log) - interf.expect(mean_log)) / kLn2;
}

double noise_limited_stream_rate(double kappa_signal, double sigma2) {
  if (!(kappa_signal > 0.0)) throw DomainError("kappa must be > 0");
  if (!(sigma2 > 0.0)) throw DomainError("sigma2 must be > 0");
  return specfun::exp_integral_e1_scaled(sigma2 / kappa_signal) / kLn2;
}

namespace {

ErlangMixture interference_mixture_or_throw(const NetworkScenario& net,
                                            const StreamProfile& streams,
                                            const FeedbackSplit& split, int k) {
  const LinkRateInputs in = link_rate_inputs(net, streams, split, k);
  auto parts = interference_components(in, streams, k);
  if (parts.empty())
    throw NoInterference("link " + std::to_string(k) + " has no interference");
  return specfun::mixture_weights(parts);
}

}  // namespace

double high_power_rate_loss(const NetworkScenario& net,
                            const StreamProfile& streams,
                            const FeedbackSplit& split, int k) {
  const ErlangMixture interf =
      interference_mixture_or_throw(net, streams, split, k);
  return interf.expect([](int, double z) { return std::log(z); }) / kLn2;
}

double mean_log2_interference(const NetworkScenario& net,
                              const StreamProfile& streams,
                              const FeedbackSplit& split, int k) {
  const ErlangMixture interf =
      interference_mixture_or_throw(net, streams, split, k);
  return interf.expect([](int t, double z) {
           return specfun::digamma_int(t) + std::log(z);
         }) /
         kLn2;
}

double total_high_power_rate_loss(const NetworkScenario& net,
                                  const StreamProfile& streams,
                                  const FeedbackSplit& split) {
  double acc = 0.0;
  for (int k = 0; k < net.links; ++k)
    acc += streams.d[static_cast<size_t>(k)] *
           high_power_rate_loss(net, streams, split, k);
  return acc;
}

double LossCoefficients::symmetric_total(int d) const {
  return d * (zeta1 - zeta2 * std::log(static_cast<double>(d)));
}

LossCoefficients rate_loss_coefficients(const NetworkScenario& net,
                                        const StreamProfile& streams,
                                        const FeedbackSplit& split) {
  if (!streams.symmetric())
    throw DomainError("loss coefficients are defined for symmetric modes only");
  const double ln_d = std::log(static_cast<double>(streams.d.front()));
  LossCoefficients coeff;
  for (int k = 0; k < net.links; ++k) {
    const ErlangMixture interf =
        interference_mixture_or_throw(net, streams, split, k);
    // ln(P 2^{-B/m} alpha) = ln(rho) + ln(d) per component
    coeff.zeta1 += interf.expect([ln_d](int, double z) {
                     return std::log(z) + ln_d;
                   }) /
                   kLn2;
    coeff.zeta2 += interf.weight_sum() / kLn2;
  }
  return coeff;
}

ConstantGapBits feedback_bits_for_constant_gap(const NetworkScenario& net,
                                               double power, double theta) {
  if (!(power > 0.0) || !(theta > 0.0))
    throw DomainError("power and theta must be > 0");
  if (power < theta)
    throw DomainError("P below theta would need negative feedback bits");
  const int m = net.quantizer_dim() - 1;
  if (m < 1) throw DomainError("single-antenna channels have no direction to feed back");
  ConstantGapBits bits;
  bits.per_channel = m * std::log2(power / theta);
  bits.total = net.links * bits.per_channel;
  return bits;
}

}  // namespace ia::rate
