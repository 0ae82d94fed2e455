#pragma once

// Limit regimes: low-SNR (wideband) metrics, large-antenna ceilings, and the
// large-system deterministic equivalent of the ergodic capacity.

#include "mimocap/model.hpp"

namespace mimocap {

// Wideband regime descriptors.  eb_n0_min is the minimum energy-per-bit over
// noise level at which reliable communication is possible; wideband_slope
// (S0) is the capacity slope in bits/s/Hz per 3 dB at that point.
// capacity_slope / capacity_curvature are the first/second derivatives of
// C(rho) at rho = 0 (bits).
struct LowSnrMetrics {
  double eb_n0_min = 0.0;
  double eb_n0_min_db = 0.0;
  double wideband_slope = 0.0;
  double capacity_slope = 0.0;
  double capacity_curvature = 0.0;
};

LowSnrMetrics low_snr_metrics(const AntennaConfig& ant,
                              const ImpairmentConfig& imp);

// First-order wideband expansion C ~= S0 * log2(eb_n0 / eb_n0_min), with
// eb_n0 on the linear scale.  Below the crossing point the value is negative
// and returned as-is; interpret it as "zero capacity" when plotting.
double low_snr_capacity_approx(double eb_n0, const LowSnrMetrics& m);

// Capacity limit as Nt -> inf with Nr fixed:
//   Nr * log2(1 + rho / (rho delta_t^2 + rho delta_r^2 + 1)).
double capacity_large_nt(double rho, int nr, const ImpairmentConfig& imp);

// Capacity limit as Nr -> inf with Nt fixed: Nt * log2(1 + 1/delta_t^2),
// independent of delta_r and of rho.  Throws std::domain_error when
// delta_t == 0 (capacity is unbounded in Nr on ideal hardware).
double capacity_large_nr(int nt, const ImpairmentConfig& imp);

// Large-system deterministic equivalent with Nt, Nr -> inf at fixed ratio
// beta = Nr/Nt.  rho1/rho2 are the fixed-point gains of the
// signal-plus-distortion and distortion-only log-det factors (rho1 > rho2,
// both nonnegative; rho2 == 0 on ideal transmit hardware).
struct DeterministicEquivalent {
  double rho1 = 0.0;
  double rho2 = 0.0;
  double l_param = 0.0;          // 1 - 1/beta
  double capacity_approx = 0.0;  // bits/s/Hz for the given finite (nt, nr)
};

DeterministicEquivalent deterministic_equivalent(double rho,
                                                 const AntennaConfig& ant,
                                                 const ImpairmentConfig& imp);

}  // namespace mimocap
