#pragma once

// Exact ergodic capacity of the impaired MIMO link under isotropic
// signalling, via the eigenvalue density of the channel Gram matrix.
//
// For an uncorrelated Rayleigh channel with q = min(Nt, Nr) and
// p = max(Nt, Nr), the marginal density of an unordered Gram eigenvalue is a
// finite mixture of gamma-shaped terms
//
//   p(lambda) = sum_k  sign_k * exp(log_mag_k) * lambda^{power_k} * e^{-lambda},
//
// and the ergodic capacity reduces to scaled-exponential-integral sums over
// those same coefficients.  Coefficients are kept in sign/log-magnitude form;
// the alternating sum is evaluated with compensated long-double accumulation
// because individual terms reach ~4e5 while the total is O(1).

#include <vector>

#include "mimocap/model.hpp"

namespace mimocap {

// One mixture term: sign * exp(log_mag) * lambda^power * e^{-lambda}.
// log_mag already folds in the global normalization constant.
struct SpectrumTerm {
  double sign = 1.0;   // +1 or -1
  double log_mag = 0.0;
  int power = 0;       // >= 0
};

struct SpectrumCoefficients {
  int q = 1;
  int p = 1;
  std::vector<SpectrumTerm> terms;  // q^2 entries
};

// Builds the mixture coefficients for the given antenna configuration.
// Throws envelope_error when min(nt,nr) > 8 or max(nt,nr) > 12, the range in
// which the construction is validated; use the Monte-Carlo estimator beyond.
SpectrumCoefficients build_spectrum_coefficients(const AntennaConfig& ant);

// Marginal density of an unordered Gram eigenvalue at lambda >= 0.
// Throws std::domain_error for lambda < 0 and numerical_error if alternating-
// sum cancellation produces a value below -1e-10 (values in [-1e-10, 0) are
// clamped to 0).
double eigen_pdf(double lambda, const SpectrumCoefficients& coef);

// Ergodic capacity in bits/s/Hz at average SNR rho (linear scale).
double ergodic_capacity_closed(double rho, const AntennaConfig& ant,
                               const ImpairmentConfig& imp);

// High-SNR capacity ceiling imposed by the impairments.  Requires
// delta_t > 0 or delta_r > 0 (ideal hardware has no ceiling: throws
// std::domain_error).  With delta_r == 0 the ceiling is the analytic
// q * log2(1 + 1/delta_t^2).
double capacity_ceiling(const AntennaConfig& ant, const ImpairmentConfig& imp);

// Same quantity as ergodic_capacity_closed but evaluated by adaptive
// numerical integration of log2(1 + sinr(lambda)) against eigen_pdf.  Kept
// deliberately independent of the closed-form path so the two can
// cross-validate each other.
double ergodic_capacity_quadrature(double rho, const AntennaConfig& ant,
                                   const ImpairmentConfig& imp);

}  // namespace mimocap
