#include "mimocap/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "mimocap/errors.hpp"

namespace mimocap {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void require_snr(double rho) {
  if (!std::isfinite(rho) || rho < 0.0) {
    throw std::domain_error("rho must be finite and >= 0");
  }
}

}  // namespace

LowSnrMetrics low_snr_metrics(const AntennaConfig& ant,
                              const ImpairmentConfig& imp) {
  const double nt = ant.nt;
  const double nr = ant.nr;
  const double dt2 = imp.delta_t * imp.delta_t;
  const double dr2 = imp.delta_r * imp.delta_r;

  LowSnrMetrics m;
  // Each quantity from its own closed formula; see the consistency notes in
  // the tests (the cross-identities hold to the last ulp, not bitwise).
  m.eb_n0_min = kLn2 / nr;
  m.eb_n0_min_db = 10.0 * std::log10(m.eb_n0_min);
  m.capacity_slope = nr / kLn2;
  m.capacity_curvature =
      -(nr / kLn2) * ((2.0 * dt2 + 1.0) * (nt + nr) / nt + 2.0 * dr2);
  m.wideband_slope =
      2.0 * nt * nr / ((2.0 * dt2 + 1.0) * (nt + nr) + 2.0 * dr2 * nt);
  return m;
}

double low_snr_capacity_approx(double eb_n0, const LowSnrMetrics& m) {
  if (!std::isfinite(eb_n0) || eb_n0 <= 0.0) {
    throw std::domain_error("low_snr_capacity_approx: eb_n0 must be > 0");
  }
  return m.wideband_slope * std::log2(eb_n0 / m.eb_n0_min);
}

double capacity_large_nt(double rho, int nr, const ImpairmentConfig& imp) {
  if (nr < 1) throw std::domain_error("capacity_large_nt: nr must be >= 1");
  require_snr(rho);
  const double dt2 = imp.delta_t * imp.delta_t;
  const double dr2 = imp.delta_r * imp.delta_r;
  return nr * std::log1p(rho / (rho * dt2 + rho * dr2 + 1.0)) / kLn2;
}

double capacity_large_nr(int nt, const ImpairmentConfig& imp) {
  if (nt < 1) throw std::domain_error("capacity_large_nr: nt must be >= 1");
  if (imp.delta_t == 0.0) {
    throw std::domain_error(
        "capacity_large_nr: unbounded on ideal transmit hardware "
        "(delta_t == 0)");
  }
  const double dt2 = imp.delta_t * imp.delta_t;
  return nt * std::log1p(1.0 / dt2) / kLn2;
}

DeterministicEquivalent deterministic_equivalent(double rho,
                                                 const AntennaConfig& ant,
                                                 const ImpairmentConfig& imp) {
  require_snr(rho);
  if (rho == 0.0) {
    throw std::domain_error("deterministic_equivalent: rho must be > 0");
  }
  const double dt2 = imp.delta_t * imp.delta_t;
  const double dr2 = imp.delta_r * imp.delta_r;

  // beta = nr/nt as a reduced integer ratio so that equal ratios evaluate
  // identically regardless of the absolute array size.
  const int g = std::gcd(ant.nt, ant.nr);
  const double nt_r = ant.nt / g;
  const double nr_r = ant.nr / g;
  const double beta = nr_r / nt_r;
  const double inv_beta = nt_r / nr_r;

  const double s = 1.0 + rho * dr2;        // receive-side noise inflation
  const double a = rho * (1.0 + dt2);      // signal-plus-distortion slope
  const double b = rho * dt2;              // distortion-only slope
  const double l_param = 1.0 - inv_beta;

  // Fixed-point gain: the positive root of x^2 - (A*L - 1/beta)x - A/beta = 0
  // with A the slope normalized by the noise inflation.  For t < 0 the naive
  // 0.5*(t + disc) cancels catastrophically as A -> 0 (it collapses to zero
  // once 4*A/beta drops below t^2 * eps), so use the product-of-roots form
  // there: the root must stay ~A/|t| for the corrections below to be stable.
  auto gain_root = [&](double slope) {
    const double A = slope / s;
    const double t = A * l_param - inv_beta;
    const double disc = std::sqrt(t * t + 4.0 * A * inv_beta);
    return t >= 0.0 ? 0.5 * (t + disc) : 2.0 * A * inv_beta / (disc - t);
  };

  DeterministicEquivalent de;
  de.l_param = l_param;
  de.rho1 = gain_root(a);
  de.rho2 = (dt2 > 0.0) ? gain_root(b) : 0.0;

  const double denom1 = 1.0 + beta * de.rho1;
  const double denom2 = 1.0 + beta * de.rho2;
  const double term1 =
      std::log2((s + a / denom1) / (s + (dt2 > 0.0 ? b / denom2 : 0.0)));
  const double term2 = inv_beta * std::log2(denom1 / denom2);
  // The distortion branch of the correction tends to 1 (not 0) as
  // delta_t -> 0: rho2 ~ b/s in that limit, so rho2*s/b -> 1.
  const double corr2 = (dt2 > 0.0) ? de.rho2 * s / b : 1.0;
  const double term3 = std::log2(std::numbers::e) * (de.rho1 * s / a - corr2);

  de.capacity_approx = ant.nr * (term1 + term2 + term3);
  if (!std::isfinite(de.capacity_approx)) {
    throw numerical_error("deterministic_equivalent: result is not finite");
  }
  return de;
}

}  // namespace mimocap
