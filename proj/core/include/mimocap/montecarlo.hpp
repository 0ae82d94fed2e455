#pragma once

// Monte-Carlo estimation of the ergodic capacity, valid for any antenna
// configuration (including far beyond the closed-form envelope).
//
// Reproducibility contract: estimates are bit-identical across runs and
// across thread counts.  Trials are split into fixed-size shards, each shard
// draws from its own counter-seeded generator, and shard results are merged
// in index order regardless of which thread computed them.

#include <complex>
#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "mimocap/model.hpp"

namespace mimocap {

using ChannelMatrix = Eigen::MatrixXcd;  // nr x nt, i.i.d. CN(0,1) entries

// xoshiro256++ stream, seeded from (seed, stream) through splitmix64 so that
// distinct shards get decorrelated, platform-independent sequences.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  // Uniform on (0, 1].
  double next_unit();
  // Two independent N(0,1) variates (Box-Muller).
  std::pair<double, double> next_normal_pair();
  // CN(0,1): circularly-symmetric complex Gaussian, unit variance.
  std::complex<double> next_cgauss();

 private:
  std::uint64_t s_[4];
};

// Draws an nr x nt channel with i.i.d. CN(0,1) entries.
ChannelMatrix sample_channel(const AntennaConfig& ant, RngStream& rng);

// Mutual information in bits/s/Hz of one channel realization under a
// diagonal input covariance with the given diagonal (entries >= 0):
//   log2 det(Phi + H Q H^*) - log2 det(Phi),
//   Phi = delta_t^2 H diag(q) H^* + (delta_r^2 tr(Q) + 1) I.
double mutual_information(const ChannelMatrix& h, const Eigen::VectorXd& q_diag,
                          const ImpairmentConfig& imp);

// Mutual information of one realization under isotropic signalling
// Q = (rho/Nt) I, computed from the eigenvalues of the smaller-side Gram
// matrix.  Agrees with mutual_information to floating-point accuracy.
double capacity_realization(const ChannelMatrix& h, double rho,
                            const AntennaConfig& ant,
                            const ImpairmentConfig& imp);

struct CapacityEstimate {
  double mean = 0.0;       // bits/s/Hz
  double std_error = 0.0;  // standard error of the mean
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

// Averages capacity_realization over `trials` independent channel draws.
// threads == 0 picks std::thread::hardware_concurrency(); the result does
// not depend on the thread count.
CapacityEstimate estimate_ergodic_capacity(double rho, const AntennaConfig& ant,
                                           const ImpairmentConfig& imp,
                                           std::uint64_t trials,
                                           std::uint64_t seed,
                                           int threads = 0);

}  // namespace mimocap
