#pragma once

// Channel and impairment model shared by every capacity routine.
//
// The link is y = H(s + eta_t) + eta_r + nu where the residual transmit
// distortion eta_t has per-stream variance delta_t^2 * q_i and the aggregate
// receive distortion eta_r has variance delta_r^2 * tr(Q).  Under isotropic
// signalling Q = (rho/Nt) I the post-combining SINR attached to a channel
// Gram eigenvalue lambda is
//
//   sinr(lambda) = (rho lambda / Nt) / (rho delta_t^2 lambda / Nt
//                                       + rho delta_r^2 + 1).

#include <stdexcept>

namespace mimocap {

// Residual transceiver impairment levels.  delta_t and delta_r are the
// transmit/receive error-vector magnitudes; (0, 0) is ideal hardware.
struct ImpairmentConfig {
  double delta_t = 0.0;
  double delta_r = 0.0;

  ImpairmentConfig() = default;
  ImpairmentConfig(double dt, double dr);
};

// Transmit EVM in the conventional percentage-free form (equals delta_t).
double evm_of(const ImpairmentConfig& imp);

// Antenna counts.  q/p are the smaller/larger of (nt, nr); beta = nr/nt is
// kept as a reduced integer ratio so equal ratios evaluate identically.
struct AntennaConfig {
  int nt = 1;
  int nr = 1;

  AntennaConfig() = default;
  AntennaConfig(int nt_, int nr_);

  int q() const { return nt < nr ? nt : nr; }
  int p() const { return nt < nr ? nr : nt; }
  double beta() const;
};

// Average SNR, stored on the linear scale.
struct SnrSpec {
  double rho = 1.0;

  static SnrSpec from_linear(double rho);
  static SnrSpec from_db(double db);
  double db() const;
};

// Per-eigenvalue SINR under isotropic signalling (see header comment).
// lambda is an eigenvalue of the channel Gram matrix, rho the average SNR.
double effective_sinr(double lambda, double rho, const AntennaConfig& ant,
                      const ImpairmentConfig& imp);

// Slopes of the two log-det factors the ergodic capacity decomposes into:
//   log2(1 + sinr(lambda)) = log2(1 + total*lambda) - log2(1 + distortion*lambda)
// with total > distortion >= 0.
struct EffectiveGains {
  double total = 0.0;
  double distortion = 0.0;
};

EffectiveGains effective_gains(double rho, const AntennaConfig& ant,
                               const ImpairmentConfig& imp);

}  // namespace mimocap
