#pragma once

#include <vector>

#include "ia/netmodel.hpp"
#include "ia/specfun.hpp"

namespace ia::rate {

// Scale parameters of link k's SINR model. kappa[i] is the per-stream power
// P*alpha_{k,i}/d_i reaching receiver k from transmitter i; rho[i] is the
// residual-interference scale kappa[i]*2^{-B_{k,i}/(Nt*Nr-1)} left after
// quantized-CSI alignment.
struct LinkRateInputs {
  std::vector<double> kappa;
  std::vector<double> rho;
  double kappa_signal = 0.0;
  double sigma2 = 0.0;
};

LinkRateInputs link_rate_inputs(const NetworkScenario& net,
                                const StreamProfile& streams,
                                const FeedbackSplit& split, int k);

struct LinkMixtures {
  specfun::ErlangMixture signal_plus_interference;
  specfun::ErlangMixture interference;
};

// True when link k sees any interference term (own-link inter-stream or a
// cross link with nonzero path loss).
bool has_interference(const NetworkScenario& net, const StreamProfile& streams,
                      int k);

// Mixture of the desired-plus-interference power and of the interference
// power alone at receiver k. Throws EmptyMixture when the link has no
// interference at all; callers branch to the noise-limited formula.
LinkMixtures build_link_mixtures(const NetworkScenario& net,
                                 const StreamProfile& streams,
                                 const FeedbackSplit& split, int k);

// Average rate of one data stream of link k, bits/s/Hz.
double stream_rate(const NetworkScenario& net, const StreamProfile& streams,
                   const FeedbackSplit& split, int k);

struct RateReport {
  std::vector<std::vector<double>> per_stream;  // [k][j]
  std::vector<double> per_link;                 // d_k * stream rate
  double sum = 0.0;
};

RateReport sum_rate(const NetworkScenario& net, const StreamProfile& streams,
                    const FeedbackSplit& split);

// High-power limit of stream_rate; independent of P by construction.
// Throws NoInterference when the interference mixture is empty.
double interference_limited_stream_rate(const NetworkScenario& net,
                                        const StreamProfile& streams,
                                        const FeedbackSplit& split, int k);

// Interference-free average stream rate E[log2(1 + kappa X / sigma2)],
// X ~ Exp(1). This is also the perfect-CSI reference rate.
double noise_limited_stream_rate(double kappa_signal, double sigma2);

// High-power per-stream rate loss of link k versus perfect CSI, evaluated as
// the mean log residual interference with the psi terms dropped.
double high_power_rate_loss(const NetworkScenario& net,
                            const StreamProfile& streams,
                            const FeedbackSplit& split, int k);

// Exact mean log2 of the residual interference power of link k (the psi
// terms kept); what a Monte Carlo E[log2 I] estimate converges to.
double mean_log2_interference(const NetworkScenario& net,
                              const StreamProfile& streams,
                              const FeedbackSplit& split, int k);

// Network total of the high-power loss: sum_k d_k * high_power_rate_loss.
double total_high_power_rate_loss(const NetworkScenario& net,
                                  const StreamProfile& streams,
                                  const FeedbackSplit& split);

// Coefficients of the symmetric-mode total loss d*(zeta1 - zeta2*ln d).
// Requires a symmetric stream profile. symmetric_total(d) evaluates the
// literal expression; comparing it with total_high_power_rate_loss exposes
// how far the fixed-weight reading drifts from the per-link sum.
struct LossCoefficients {
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  double symmetric_total(int d) const;
};

LossCoefficients rate_loss_coefficients(const NetworkScenario& net,
                                        const StreamProfile& streams,
                                        const FeedbackSplit& split);

// Feedback needed to hold the gap to perfect CSI constant while the
// transmit power grows: per-channel (Nt*Nr-1)*log2(P/theta), total K times
// that. Values are real; callers round. Throws DomainError when P < theta.
struct ConstantGapBits {
  double per_channel = 0.0;
  double total = 0.0;
};

ConstantGapBits feedback_bits_for_constant_gap(const NetworkScenario& net,
                                               double power, double theta);

}  // namespace ia::rate
