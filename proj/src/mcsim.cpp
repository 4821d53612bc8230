#include "ia/mcsim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ia::mc {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double phi = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(phi);
  have_spare_ = true;
  return r * std::cos(phi);
}

std::complex<double> Rng::cnormal() {
  const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
  const double re = normal();
  const double im = normal();
  return {re * inv_sqrt2, im * inv_sqrt2};
}

double Rng::exponential() { return -std::log(uniform()); }

double Rng::gamma_int(int shape) {
  double acc = 0.0;
  for (int i = 0; i < shape; ++i) acc += exponential();
  return acc;
}

Eigen::VectorXcd Rng::isotropic_unit(int dim) {
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cnormal();
  const double norm = v.norm();
  if (norm == 0.0) {  // unreachable in practice; keep the draw well-defined
    v.setZero();
    v(0) = 1.0;
    return v;
  }
  return v / norm;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t st = seed ^ (0xD1B54A32D192ED03ULL * (stream + 1));
  (void)splitmix64(st);
  return splitmix64(st);
}

ChannelSet sample_channels(const NetworkScenario& net, Rng& rng) {
  ChannelSet set;
  set.links = net.links;
  set.rx = net.rx_antennas;
  set.tx = net.tx_antennas;
  set.H.resize(static_cast<size_t>(net.links) * net.links);
  for (int k = 0; k < net.links; ++k) {
    for (int i = 0; i < net.links; ++i) {
      Eigen::MatrixXcd& h = set.at(k, i);
      h.resize(net.rx_antennas, net.tx_antennas);
      for (int c = 0; c < net.tx_antennas; ++c)
        for (int r = 0; r < net.rx_antennas; ++r) h(r, c) = rng.cnormal();
    }
  }
  return set;
}

ChannelSet sample_channels(const NetworkScenario& net, std::uint64_t seed) {
  Rng rng(seed);
  return sample_channels(net, rng);
}

Codebook make_codebook(int bits, int dim, std::uint64_t seed) {
  if (bits < 0) throw DomainError("codebook bits must be >= 0");
  if (bits > kMaxCodebookBits)
    throw BitsTooLarge("explicit codebooks are capped at " +
                       std::to_string(kMaxCodebookBits) + " bits per channel");
  if (dim < 1) throw DomainError("codebook dimension must be >= 1");
  Rng rng(seed);
  Codebook cb;
  cb.bits = bits;
  const long size = 1L << bits;
  cb.words.resize(dim, size);
  for (long b = 0; b < size; ++b) cb.words.col(b) = rng.isotropic_unit(dim);
  return cb;
}

namespace {

// Deterministic unit vector orthogonal to q, for the measure-zero case of a
// perfectly quantized direction.
Eigen::VectorXcd fallback_orthogonal(const Eigen::VectorXcd& q) {
  const int dim = static_cast<int>(q.size());
  int weakest = 0;
  for (int i = 1; i < dim; ++i)
    if (std::norm(q(i)) < std::norm(q(weakest))) weakest = i;
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
  e(weakest) = 1.0;
  e -= q * (q.adjoint() * e)(0);
  return e.normalized();
}

}  // namespace

QuantizedCSI quantize_rvq(const Eigen::MatrixXcd& h, const Codebook& codebook) {
  const Eigen::Map<const Eigen::VectorXcd> vec(h.data(), h.size());
  const double gain = vec.squaredNorm();
  if (!(gain > 0.0)) throw DomainError("cannot quantize a zero channel");
  if (codebook.words.rows() != vec.size())
    throw DimensionMismatch("codebook dimension does not match vec(h)");
  const Eigen::VectorXcd htilde = vec / std::sqrt(gain);

  const Eigen::VectorXcd corr = codebook.words.adjoint() * htilde;
  int best = 0;
  double best_metric = std::norm(corr(0));
  for (int b = 1; b < corr.size(); ++b) {
    const double metric = std::norm(corr(b));
    if (metric > best_metric) {
      best_metric = metric;
      best = b;
    }
  }

  QuantizedCSI q;
  q.index = best;
  q.hhat = codebook.words.col(best);
  q.gain = gain;
  q.a = std::clamp(1.0 - best_metric, 0.0, 1.0);
  Eigen::VectorXcd res = htilde - q.hhat * corr(best);
  const double rnorm = res.norm();
  q.s = rnorm > 1e-12 ? Eigen::VectorXcd(res / rnorm) : fallback_orthogonal(q.hhat);
  return q;
}

QuantizedCSI quantize_rvq(const Eigen::MatrixXcd& h, int bits,
                          std::uint64_t codebook_seed) {
  return quantize_rvq(
      h, make_codebook(bits, static_cast<int>(h.size()), codebook_seed));
}

CellSample sample_cell_approx(int bits, int dim, Rng& rng) {
  if (dim < 2) throw DomainError("cell approximation needs dim >= 2");
  if (bits < 0) throw DomainError("bits must be >= 0");
  const int m = dim - 1;
  CellSample cs;
  cs.a_times_gain =
      std::exp2(-static_cast<double>(bits) / m) * rng.gamma_int(m);
  cs.s = rng.isotropic_unit(m);
  return cs;
}

namespace {

using MatGrid = std::vector<std::vector<Eigen::MatrixXcd>>;

double interlink_leakage(const MatGrid& ch,
                         const std::vector<Eigen::MatrixXcd>& W,
                         const std::vector<Eigen::MatrixXcd>& V) {
  const int K = static_cast<int>(ch.size());
  double leak = 0.0;
  for (int k = 0; k < K; ++k)
    for (int i = 0; i < K; ++i)
      if (i != k)
        leak += (V[static_cast<size_t>(k)].adjoint() * ch[static_cast<size_t>(k)][static_cast<size_t>(i)] *
                 W[static_cast<size_t>(i)])
                    .squaredNorm();
  return leak;
}

// Total design-CSI residual of concrete vectors, inter-stream terms included.
double total_leakage(const MatGrid& ch, const std::vector<Eigen::MatrixXcd>& W,
                     const std::vector<Eigen::MatrixXcd>& V) {
  const int K = static_cast<int>(ch.size());
  double leak = 0.0;
  for (int k = 0; k < K; ++k) {
    const int dk = static_cast<int>(V[static_cast<size_t>(k)].cols());
    for (int i = 0; i < K; ++i) {
      const int di = static_cast<int>(W[static_cast<size_t>(i)].cols());
      const Eigen::MatrixXcd eff = V[static_cast<size_t>(k)].adjoint() *
                                   ch[static_cast<size_t>(k)][static_cast<size_t>(i)] *
                                   W[static_cast<size_t>(i)];
      for (int j = 0; j < dk; ++j)
        for (int l = 0; l < di; ++l)
          if (!(i == k && l == j)) leak += std::norm(eff(j, l));
    }
  }
  return leak;
}

Eigen::MatrixXcd smallest_eigvecs(const Eigen::MatrixXcd& cov, int count) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cov);
  return es.eigenvectors().leftCols(count);
}

// Re-point combiner columns inside their span so the design direct channel
// becomes stream-diagonal; no-op for single-stream links.
void zero_force_streams(const MatGrid& ch, const std::vector<Eigen::MatrixXcd>& W,
                        std::vector<Eigen::MatrixXcd>& V) {
  const int K = static_cast<int>(ch.size());
  for (int k = 0; k < K; ++k) {
    const int dk = static_cast<int>(V[static_cast<size_t>(k)].cols());
    if (dk < 2) continue;
    const Eigen::MatrixXcd eff = V[static_cast<size_t>(k)].adjoint() *
                                 ch[static_cast<size_t>(k)][static_cast<size_t>(k)] *
                                 W[static_cast<size_t>(k)];
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(eff);
    if (!lu.isInvertible()) continue;
    const Eigen::MatrixXcd mix = lu.inverse().adjoint();
    Eigen::MatrixXcd refreshed = V[static_cast<size_t>(k)] * mix;
    for (int j = 0; j < dk; ++j) refreshed.col(j).normalize();
    V[static_cast<size_t>(k)] = refreshed;
  }
}

}  // namespace

IASolution solve_ia(const MatGrid& channels, const StreamProfile& streams,
                    const IaOptions& opts) {
  const int K = static_cast<int>(channels.size());
  if (K < 1) throw DimensionMismatch("empty channel grid");
  if (static_cast<int>(streams.d.size()) != K)
    throw DimensionMismatch("stream profile does not match channel grid");
  const int Nr = static_cast<int>(channels[0][0].rows());
  const int Nt = static_cast<int>(channels[0][0].cols());
  for (const auto& row : channels) {
    if (static_cast<int>(row.size()) != K)
      throw DimensionMismatch("channel grid must be K x K");
    for (const auto& h : row)
      if (h.rows() != Nr || h.cols() != Nt)
        throw DimensionMismatch("inconsistent channel dimensions");
  }
  for (int k = 0; k < K; ++k)
    if (streams.d[static_cast<size_t>(k)] > std::min(Nr, Nt))
      throw DimensionMismatch("more streams than antennas on link " +
                              std::to_string(k));

  IASolution sol;
  sol.precoders.resize(static_cast<size_t>(K));
  sol.combiners.resize(static_cast<size_t>(K));

  for (int i = 0; i < K; ++i) {
    const int di = streams.d[static_cast<size_t>(i)];
    const Eigen::MatrixXcd direct = channels[static_cast<size_t>(i)][static_cast<size_t>(i)].adjoint();
    if (direct.norm() > 0.0) {
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(direct);
      sol.precoders[static_cast<size_t>(i)] =
          qr.householderQ() * Eigen::MatrixXcd::Identity(Nt, di);
    } else {
      sol.precoders[static_cast<size_t>(i)] =
          Eigen::MatrixXcd::Identity(Nt, di);
    }
    sol.combiners[static_cast<size_t>(i)] = Eigen::MatrixXcd::Identity(Nr, di);
  }

  auto rx_cov = [&](int k) {
    Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(Nr, Nr);
    for (int i = 0; i < K; ++i) {
      if (i == k) continue;
      const Eigen::MatrixXcd eff =
          channels[static_cast<size_t>(k)][static_cast<size_t>(i)] *
          sol.precoders[static_cast<size_t>(i)];
      cov += eff * eff.adjoint();
    }
    return cov;
  };
  auto tx_cov = [&](int i) {
    Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(Nt, Nt);
    for (int k = 0; k < K; ++k) {
      if (k == i) continue;
      const Eigen::MatrixXcd eff =
          channels[static_cast<size_t>(k)][static_cast<size_t>(i)].adjoint() *
          sol.combiners[static_cast<size_t>(k)];
      cov += eff * eff.adjoint();
    }
    return cov;
  };

  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_iterations; ++it) {
    for (int k = 0; k < K; ++k)
      sol.combiners[static_cast<size_t>(k)] =
          smallest_eigvecs(rx_cov(k), streams.d[static_cast<size_t>(k)]);
    for (int i = 0; i < K; ++i)
      sol.precoders[static_cast<size_t>(i)] =
          smallest_eigvecs(tx_cov(i), streams.d[static_cast<size_t>(i)]);

    const double leak = interlink_leakage(channels, sol.precoders, sol.combiners);
    sol.leakage_history.push_back(leak);
    if (std::abs(prev - leak) < opts.leakage_change_tol || leak < 1e-30) {
      sol.converged = true;
      break;
    }
    prev = leak;
  }
  sol.iterations = static_cast<int>(sol.leakage_history.size());

  zero_force_streams(channels, sol.precoders, sol.combiners);
  sol.leakage = total_leakage(channels, sol.precoders, sol.combiners);
  return sol;
}

std::vector<std::vector<Eigen::MatrixXcd>> scaled_true_channels(
    const NetworkScenario& net, const StreamProfile& streams,
    const ChannelSet& channels) {
  MatGrid grid(static_cast<size_t>(net.links),
               std::vector<Eigen::MatrixXcd>(static_cast<size_t>(net.links)));
  for (int k = 0; k < net.links; ++k)
    for (int i = 0; i < net.links; ++i) {
      const double kappa =
          net.power * net.path_loss[static_cast<size_t>(k)][static_cast<size_t>(i)] /
          streams.d[static_cast<size_t>(i)];
      grid[static_cast<size_t>(k)][static_cast<size_t>(i)] =
          std::sqrt(kappa) * channels.at(k, i);
    }
  return grid;
}

std::vector<std::vector<Eigen::MatrixXcd>> scaled_quantized_channels(
    const NetworkScenario& net, const StreamProfile& streams,
    const QuantizedGrid& csi) {
  MatGrid grid(static_cast<size_t>(net.links),
               std::vector<Eigen::MatrixXcd>(static_cast<size_t>(net.links)));
  for (int k = 0; k < net.links; ++k)
    for (int i = 0; i < net.links; ++i) {
      const double kappa =
          net.power * net.path_loss[static_cast<size_t>(k)][static_cast<size_t>(i)] /
          streams.d[static_cast<size_t>(i)];
      const auto& q = csi[static_cast<size_t>(k)][static_cast<size_t>(i)];
      const Eigen::Map<const Eigen::MatrixXcd> dir(q.hhat.data(), net.rx_antennas,
                                                   net.tx_antennas);
      grid[static_cast<size_t>(k)][static_cast<size_t>(i)] = std::sqrt(kappa) * dir;
    }
  return grid;
}

LinkEval evaluate_link(const ChannelSet& channels_true, const QuantizedGrid* csi,
                       const IASolution& ia, const NetworkScenario& net,
                       const StreamProfile& streams, int k, int j) {
  const int K = net.links;
  if (channels_true.links != K || static_cast<int>(ia.precoders.size()) != K ||
      static_cast<int>(ia.combiners.size()) != K)
    throw DimensionMismatch("channel set / IA solution / scenario disagree on K");
  if (k < 0 || k >= K) throw DomainError("link index out of range");
  if (j < 0 || j >= streams.d[static_cast<size_t>(k)])
    throw DomainError("stream index out of range");
  if (channels_true.rx != net.rx_antennas || channels_true.tx != net.tx_antennas)
    throw DimensionMismatch("channel dimensions do not match the scenario");
  for (int i = 0; i < K; ++i) {
    if (ia.precoders[static_cast<size_t>(i)].rows() != net.tx_antennas ||
        ia.combiners[static_cast<size_t>(i)].rows() != net.rx_antennas ||
        ia.precoders[static_cast<size_t>(i)].cols() !=
            streams.d[static_cast<size_t>(i)] ||
        ia.combiners[static_cast<size_t>(i)].cols() !=
            streams.d[static_cast<size_t>(i)])
      throw DimensionMismatch("beamformer dimensions do not match the profile");
  }

  auto kappa = [&](int i) {
    return net.power * net.path_loss[static_cast<size_t>(k)][static_cast<size_t>(i)] /
           streams.d[static_cast<size_t>(i)];
  };
  const Eigen::VectorXcd v = ia.combiners[static_cast<size_t>(k)].col(j);

  double signal = 0.0;
  double residual = 0.0;
  for (int i = 0; i < K; ++i) {
    const Eigen::RowVectorXcd eff =
        v.adjoint() * channels_true.at(k, i) * ia.precoders[static_cast<size_t>(i)];
    for (int l = 0; l < streams.d[static_cast<size_t>(i)]; ++l) {
      const double p = kappa(i) * std::norm(eff(l));
      if (i == k && l == j)
        signal = p;
      else
        residual += p;
    }
  }
  LinkEval out;
  out.residual = residual;
  out.sinr = signal / (residual + net.noise_power);
  out.inst_rate = std::log2(1.0 + out.sinr);

#ifndef NDEBUG
  // identity residual grows like sqrt(leakage); only arm once the design
  // alignment is essentially exact
  if (csi != nullptr && ia.leakage < 1e-12) {
    const double gap =
        quantization_identity_gap(channels_true, *csi, ia, net, streams);
    assert(gap < 1e-6);
  }
#else
  (void)csi;
#endif
  return out;
}

double quantization_identity_gap(const ChannelSet& channels_true,
                                 const QuantizedGrid& csi, const IASolution& ia,
                                 const NetworkScenario& net,
                                 const StreamProfile& streams) {
  const int K = net.links;
  double gap = 0.0;
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < K; ++i) {
      const auto& q = csi[static_cast<size_t>(k)][static_cast<size_t>(i)];
      const Eigen::MatrixXcd htilde = channels_true.at(k, i) / std::sqrt(q.gain);
      const Eigen::Map<const Eigen::MatrixXcd> serr(q.s.data(), net.rx_antennas,
                                                    net.tx_antennas);
      for (int j = 0; j < streams.d[static_cast<size_t>(k)]; ++j) {
        const Eigen::VectorXcd v = ia.combiners[static_cast<size_t>(k)].col(j);
        for (int l = 0; l < streams.d[static_cast<size_t>(i)]; ++l) {
          if (i == k && l == j) continue;
          const Eigen::VectorXcd w = ia.precoders[static_cast<size_t>(i)].col(l);
          const double lhs = std::norm((v.adjoint() * htilde * w)(0));
          const double rhs = q.a * std::norm((v.adjoint() * serr * w)(0));
          gap = std::max(gap, std::abs(lhs - rhs));
        }
      }
    }
  }
  return gap;
}

namespace {

struct StreamLayout {
  std::vector<int> offset;
  int total = 0;
};

StreamLayout layout_streams(const StreamProfile& streams) {
  StreamLayout lay;
  lay.offset.resize(streams.d.size());
  for (size_t k = 0; k < streams.d.size(); ++k) {
    lay.offset[k] = lay.total;
    lay.total += streams.d[k];
  }
  return lay;
}

void refit_combiners_from(const MatGrid& scaled, const StreamProfile& streams,
                          IASolution& sol) {
  const int K = static_cast<int>(scaled.size());
  const int Nr = static_cast<int>(scaled[0][0].rows());
  for (int k = 0; k < K; ++k) {
    Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(Nr, Nr);
    for (int i = 0; i < K; ++i) {
      if (i == k) continue;
      const Eigen::MatrixXcd eff =
          scaled[static_cast<size_t>(k)][static_cast<size_t>(i)] *
          sol.precoders[static_cast<size_t>(i)];
      cov += eff * eff.adjoint();
    }
    sol.combiners[static_cast<size_t>(k)] =
        smallest_eigvecs(cov, streams.d[static_cast<size_t>(k)]);
  }
  zero_force_streams(scaled, sol.precoders, sol.combiners);
}

}  // namespace

McRateReport estimate_avg_rate(const NetworkScenario& net,
                               const StreamProfile& streams,
                               const FeedbackSplit& split,
                               const McOptions& opts) {
  net.validate();
  validate_streams(net, streams);
  require_valid_split(split, net);
  if (opts.trials < 1) throw DomainError("trials must be >= 1");

  const int K = net.links;
  const int dim = net.quantizer_dim();
  const StreamLayout lay = layout_streams(streams);

  bool needs_interference_draws = false;
  for (int k = 0; k < K; ++k)
    if (rate::has_interference(net, streams, k)) needs_interference_draws = true;
  if (opts.mode == McMode::kCellApprox && needs_interference_draws && dim < 2)
    throw DomainError("cell approximation needs Nt*Nr >= 2");

  std::vector<std::vector<Codebook>> codebooks;
  if (opts.mode == McMode::kRvq) {
    const std::uint64_t cb_seed =
        opts.codebook_seed != 0 ? opts.codebook_seed : mix_seed(opts.seed, 0xC0DEB00C);
    codebooks.resize(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) {
      codebooks[static_cast<size_t>(k)].reserve(static_cast<size_t>(K));
      for (int i = 0; i < K; ++i) {
        const int bits = split.bits[static_cast<size_t>(k)][static_cast<size_t>(i)];
        if (bits > kMaxCodebookBits)
          throw BitsTooLarge("RVQ mode is capped at " +
                             std::to_string(kMaxCodebookBits) + " bits/channel");
        codebooks[static_cast<size_t>(k)].push_back(make_codebook(
            bits, dim, mix_seed(cb_seed, static_cast<std::uint64_t>(k) * K + i)));
      }
    }
  }

  Eigen::MatrixXd samples(opts.trials, lay.total);

  auto run_trial = [&](long t) {
    Rng rng(mix_seed(opts.seed, static_cast<std::uint64_t>(t)));
    if (opts.mode == McMode::kRvq) {
      const ChannelSet ch = sample_channels(net, rng);
      QuantizedGrid csi(static_cast<size_t>(K),
                        std::vector<QuantizedCSI>(static_cast<size_t>(K)));
      for (int k = 0; k < K; ++k)
        for (int i = 0; i < K; ++i)
          csi[static_cast<size_t>(k)][static_cast<size_t>(i)] = quantize_rvq(
              ch.at(k, i), codebooks[static_cast<size_t>(k)][static_cast<size_t>(i)]);
      IASolution ia =
          solve_ia(scaled_quantized_channels(net, streams, csi), streams, opts.ia);
      if (opts.true_csi_combiners)
        refit_combiners_from(scaled_true_channels(net, streams, ch), streams, ia);
      for (int k = 0; k < K; ++k)
        for (int j = 0; j < streams.d[static_cast<size_t>(k)]; ++j)
          samples(t, lay.offset[static_cast<size_t>(k)] + j) =
              evaluate_link(ch, &csi, ia, net, streams, k, j).inst_rate;
    } else {
      for (int k = 0; k < K; ++k) {
        const double kappa_sig =
            net.power * net.path_loss[static_cast<size_t>(k)][static_cast<size_t>(k)] /
            streams.d[static_cast<size_t>(k)];
        for (int j = 0; j < streams.d[static_cast<size_t>(k)]; ++j) {
          const double signal = kappa_sig * rng.exponential();
          double interference = 0.0;
          for (int i = 0; i < K; ++i) {
            const int omega = (i == k) ? streams.d[static_cast<size_t>(i)] - 1
                                       : streams.d[static_cast<size_t>(i)];
            if (omega == 0) continue;
            const double kappa =
                net.power *
                net.path_loss[static_cast<size_t>(k)][static_cast<size_t>(i)] /
                streams.d[static_cast<size_t>(i)];
            if (!(kappa > 0.0)) continue;
            const int bits =
                split.bits[static_cast<size_t>(k)][static_cast<size_t>(i)];
            for (int l = 0; l < omega; ++l) {
              const CellSample cs = sample_cell_approx(bits, dim, rng);
              const double beta = std::norm(cs.s(0));
              interference += kappa * cs.a_times_gain * beta;
            }
          }
          samples(t, lay.offset[static_cast<size_t>(k)] + j) =
              std::log2(1.0 + signal / (interference + net.noise_power));
        }
      }
    }
  };

  std::exception_ptr failure = nullptr;
  if (opts.exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (long t = 0; t < opts.trials; ++t) {
      try {
        run_trial(t);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
  } else {
    for (long t = 0; t < opts.trials; ++t) run_trial(t);
  }
  if (failure) std::rethrow_exception(failure);

  McRateReport report;
  report.trials = opts.trials;
  report.reliable = opts.trials >= 2;
  report.rates.per_stream.resize(static_cast<size_t>(K));
  report.rates.per_link.assign(static_cast<size_t>(K), 0.0);
  report.ci95_per_stream.resize(static_cast<size_t>(K));

  const double n = static_cast<double>(opts.trials);
  for (int k = 0; k < K; ++k) {
    const int dk = streams.d[static_cast<size_t>(k)];
    auto& means = report.rates.per_stream[static_cast<size_t>(k)];
    auto& cis = report.ci95_per_stream[static_cast<size_t>(k)];
    means.resize(static_cast<size_t>(dk));
    cis.resize(static_cast<size_t>(dk));
    for (int j = 0; j < dk; ++j) {
      const auto col = samples.col(lay.offset[static_cast<size_t>(k)] + j);
      const double mean = col.sum() / n;
      means[static_cast<size_t>(j)] = mean;
      if (opts.trials >= 2) {
        const double var = (col.array() - mean).square().sum() / (n - 1.0);
        cis[static_cast<size_t>(j)] = 1.96 * std::sqrt(var / n);
      } else {
        cis[static_cast<size_t>(j)] = std::numeric_limits<double>::infinity();
      }
      report.rates.per_link[static_cast<size_t>(k)] += mean;
    }
    report.rates.sum += report.rates.per_link[static_cast<size_t>(k)];
  }

  if (opts.trials >= 2) {
    const Eigen::VectorXd trial_sums = samples.rowwise().sum();
    const double mean = trial_sums.sum() / n;
    const double var = (trial_sums.array() - mean).square().sum() / (n - 1.0);
    report.ci95_sum = 1.96 * std::sqrt(var / n);
  } else {
    report.ci95_sum = std::numeric_limits<double>::infinity();
  }
  return report;
}

}  // namespace ia::mc
