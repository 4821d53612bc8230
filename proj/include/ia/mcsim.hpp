#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "ia/netmodel.hpp"
#include "ia/rate_engine.hpp"

namespace ia::mc {

// Deterministic generator: every distribution is hand-rolled on top of a
// splitmix64 stream, so runs are bit-reproducible across compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double uniform();  // strictly inside (0,1)
  double normal();
  std::complex<double> cnormal();  // CN(0,1)
  double exponential();            // mean 1
  double gamma_int(int shape);     // integer shape, unit scale
  Eigen::VectorXcd isotropic_unit(int dim);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Decorrelated child seed for a numbered stream (trial, codebook, ...).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// One fading realization: H[k][i] is the Nr x Nt small-scale channel from
// transmitter i to receiver k, i.i.d. CN(0,1) entries (path loss lives in
// the scenario, not here).
struct ChannelSet {
  int links = 0;
  int rx = 0;
  int tx = 0;
  std::vector<Eigen::MatrixXcd> H;

  const Eigen::MatrixXcd& at(int k, int i) const {
    return H[static_cast<size_t>(k * links + i)];
  }
  Eigen::MatrixXcd& at(int k, int i) {
    return H[static_cast<size_t>(k * links + i)];
  }
};

ChannelSet sample_channels(const NetworkScenario& net, std::uint64_t seed);
ChannelSet sample_channels(const NetworkScenario& net, Rng& rng);

inline constexpr int kMaxCodebookBits = 16;

// 2^bits isotropic unit vectors, shared by both ends of one feedback link.
struct Codebook {
  Eigen::MatrixXcd words;  // dim x 2^bits
  int bits = 0;
};

Codebook make_codebook(int bits, int dim, std::uint64_t seed);

// Quantized direction of one vectorized channel plus the error geometry:
// htilde = sqrt(1-a) hhat (up to phase) + sqrt(a) s with s unit, s ⊥ hhat.
struct QuantizedCSI {
  Eigen::VectorXcd hhat;
  Eigen::VectorXcd s;
  double a = 0.0;     // sin^2 of the quantization angle
  double gain = 0.0;  // ||vec h||^2
  int index = 0;
};

QuantizedCSI quantize_rvq(const Eigen::MatrixXcd& h, const Codebook& codebook);
QuantizedCSI quantize_rvq(const Eigen::MatrixXcd& h, int bits,
                          std::uint64_t codebook_seed);

// Quantization-cell draw: a*||h||^2 ~ Gamma(dim-1, 2^{-bits/(dim-1)}) and an
// isotropic unit error direction expressed in the (dim-1)-dimensional
// complement of the quantized direction.
struct CellSample {
  double a_times_gain = 0.0;
  Eigen::VectorXcd s;  // dim-1 entries
};

CellSample sample_cell_approx(int bits, int dim, Rng& rng);

struct IaOptions {
  int max_iterations = 500;
  double leakage_change_tol = 1e-10;
};

struct IASolution {
  std::vector<Eigen::MatrixXcd> precoders;  // Nt x d_k, unit-norm columns
  std::vector<Eigen::MatrixXcd> combiners;  // Nr x d_k, unit-norm columns
  double leakage = 0.0;  // total design-CSI residual of the returned vectors
  bool converged = false;
  int iterations = 0;
  std::vector<double> leakage_history;  // alternating-minimization objective
};

// Alternating leakage minimization over the reciprocal network. channels
// must already carry the design amplitudes (sqrt of per-stream receive
// power); for links with d_k > 1 the combiners are re-pointed inside the
// interference-free subspace to also null inter-stream terms.
IASolution solve_ia(const std::vector<std::vector<Eigen::MatrixXcd>>& channels,
                    const StreamProfile& streams, const IaOptions& opts = {});

// sqrt(kappa_{k,i}) H_{k,i} for a true fading realization.
std::vector<std::vector<Eigen::MatrixXcd>> scaled_true_channels(
    const NetworkScenario& net, const StreamProfile& streams,
    const ChannelSet& channels);

using QuantizedGrid = std::vector<std::vector<QuantizedCSI>>;

// sqrt(kappa_{k,i}) times the quantized direction, reshaped to Nr x Nt.
std::vector<std::vector<Eigen::MatrixXcd>> scaled_quantized_channels(
    const NetworkScenario& net, const StreamProfile& streams,
    const QuantizedGrid& csi);

struct LinkEval {
  double sinr = 0.0;
  double residual = 0.0;
  double inst_rate = 0.0;  // log2(1+sinr)
};

// SINR, residual interference and instantaneous rate of stream j of link k
// under the true channels and the designed vectors. csi may be null; when
// present it enables the quantization-identity diagnostic in debug builds.
LinkEval evaluate_link(const ChannelSet& channels_true, const QuantizedGrid* csi,
                       const IASolution& ia, const NetworkScenario& net,
                       const StreamProfile& streams, int k, int j);

// Largest | |htilde^H T|^2 - a |s^H T|^2 | over all interference terms; only
// meaningful when the IA solution nulls the quantized-CSI interference.
double quantization_identity_gap(const ChannelSet& channels_true,
                                 const QuantizedGrid& csi, const IASolution& ia,
                                 const NetworkScenario& net,
                                 const StreamProfile& streams);

enum class McMode { kRvq, kCellApprox };
enum class Execution { kParallel, kSerial };

struct McOptions {
  long trials = 10000;
  McMode mode = McMode::kCellApprox;
  std::uint64_t seed = 1;
  std::uint64_t codebook_seed = 0;  // 0: derived from seed
  bool true_csi_combiners = false;
  Execution exec = Execution::kParallel;
  IaOptions ia;
};

struct McRateReport {
  rate::RateReport rates;
  std::vector<std::vector<double>> ci95_per_stream;  // [k][j]
  double ci95_sum = 0.0;
  bool reliable = false;  // false for trials < 2 (CI is meaningless)
  long trials = 0;
};

// Empirical average rates with 95% normal confidence intervals. kRvq runs
// the explicit codebook + IA pipeline (all B_{k,i} <= 16); kCellApprox
// draws the distribution model directly, bypassing beamformer design.
McRateReport estimate_avg_rate(const NetworkScenario& net,
                               const StreamProfile& streams,
                               const FeedbackSplit& split,
                               const McOptions& opts);

}  // namespace ia::mc
