#include "mimocap/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "mimocap/errors.hpp"
#include "mimocap/specfun.hpp"

namespace mimocap {

namespace {

constexpr long double kLn2 = 0.693147180559945309417232121458176568L;

// Largest factorial argument inside the envelope is q+p-2 = 18, still exactly
// representable, so a plain product is exact.
long double factorial_ld(int k) {
  long double f = 1.0L;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

struct SignedLogDet {
  double sign = 1.0;        // +1, -1, or 0 for a singular matrix
  long double log_mag = 0.0L;
};

// Determinant of a dense n x n long-double matrix (row-major) via
// partial-pivot LU, returned as sign and log-magnitude since cofactor
// determinants here span ~100 orders of magnitude across the envelope.
SignedLogDet signed_log_det(std::vector<long double> m, int n) {
  SignedLogDet out;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::fabs(m[r * n + col]) > std::fabs(m[piv * n + col])) piv = r;
    }
    if (m[piv * n + col] == 0.0L) {
      out.sign = 0.0;
      return out;
    }
    if (piv != col) {
      for (int c = col; c < n; ++c) std::swap(m[piv * n + c], m[col * n + c]);
      out.sign = -out.sign;
    }
    const long double pivot = m[col * n + col];
    if (pivot < 0.0L) out.sign = -out.sign;
    out.log_mag += std::log(std::fabs(pivot));
    for (int r = col + 1; r < n; ++r) {
      const long double factor = m[r * n + col] / pivot;
      for (int c = col; c < n; ++c) m[r * n + c] -= factor * m[col * n + c];
    }
  }
  return out;
}

struct KahanAcc {
  long double sum = 0.0L;
  long double comp = 0.0L;
  void add(long double v) {
    const long double y = v - comp;
    const long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

// Shared tail of ergodic_capacity_closed and capacity_ceiling: capacity from
// the two log-det slopes,
//   C = (q/ln2) sum_k sign_k e^{log_mag_k} Gamma(power_k+1)
//         sum_{j=1}^{power_k+1} [ Ee_j(1/total) - Ee_j(1/distortion) ],
// with Ee_j the scaled exponential integral.  A zero slope contributes zero
// (its log factor is identically 1).
double capacity_from_gains(const SpectrumCoefficients& coef, double total,
                           double distortion) {
  int max_power = 0;
  for (const auto& t : coef.terms) max_power = std::max(max_power, t.power);
  const int jmax = max_power + 1;

  std::vector<double> pre_total(jmax + 1, 0.0), pre_dist(jmax + 1, 0.0);
  if (total > 0.0) {
    const double x = 1.0 / total;
    for (int j = 1; j <= jmax; ++j) {
      pre_total[j] = pre_total[j - 1] + exp_integral_scaled(j, x);
    }
  }
  if (distortion > 0.0) {
    const double x = 1.0 / distortion;
    for (int j = 1; j <= jmax; ++j) {
      pre_dist[j] = pre_dist[j - 1] + exp_integral_scaled(j, x);
    }
  }

  KahanAcc acc;
  for (const auto& t : coef.terms) {
    if (t.sign == 0.0) continue;
    const long double weight = static_cast<long double>(t.sign) *
                               std::exp(static_cast<long double>(t.log_mag)) *
                               factorial_ld(t.power);
    acc.add(weight * static_cast<long double>(pre_total[t.power + 1] -
                                              pre_dist[t.power + 1]));
  }

  double c = static_cast<double>(coef.q * acc.sum / kLn2);
  if (!std::isfinite(c)) {
    throw numerical_error("capacity sum is not finite");
  }
  if (c < 0.0) {
    if (c < -1e-10) {
      throw numerical_error("capacity sum collapsed to a negative value");
    }
    c = 0.0;
  }
  return c;
}

}  // namespace

SpectrumCoefficients build_spectrum_coefficients(const AntennaConfig& ant) {
  const int q = ant.q();
  const int p = ant.p();
  if (q > 8 || p > 12) {
    throw envelope_error(
        "eigenvalue-density coefficients are validated for min(nt,nr) <= 8 and "
        "max(nt,nr) <= 12; use the Monte-Carlo estimator for larger arrays");
  }

  SpectrumCoefficients coef;
  coef.q = q;
  coef.p = p;
  coef.terms.reserve(static_cast<std::size_t>(q) * q);

  long double log_norm = 0.0L;
  for (int i = 1; i <= q; ++i) {
    log_norm -= std::log(factorial_ld(p - i));
    log_norm -= std::log(factorial_ld(q - i));
  }

  for (int n = 1; n <= q; ++n) {
    for (int m = 1; m <= q; ++m) {
      SignedLogDet det;  // q == 1: determinant of an empty matrix is 1
      if (q > 1) {
        const int d = q - 1;
        std::vector<long double> mat(static_cast<std::size_t>(d) * d);
        for (int i = 1; i <= d; ++i) {
          for (int j = 1; j <= d; ++j) {
            int alpha;
            if (i < n && j < m) {
              alpha = i + j - 2;
            } else if (i >= n && j >= m) {
              alpha = i + j;
            } else {
              alpha = i + j - 1;
            }
            mat[static_cast<std::size_t>(i - 1) * d + (j - 1)] =
                factorial_ld(alpha + p - q);
          }
        }
        det = signed_log_det(std::move(mat), d);
        det.log_mag -= std::log(static_cast<long double>(q));
      }

      SpectrumTerm term;
      term.sign = (((n + m) % 2 == 0) ? 1.0 : -1.0) * det.sign;
      term.log_mag = static_cast<double>(log_norm + det.log_mag);
      term.power = n + m + p - q - 2;
      coef.terms.push_back(term);
    }
  }

  // The mixture must integrate to exactly 1 (each term integrates to
  // Gamma(power+1)); catastrophic loss here would invalidate everything
  // downstream, so fail loudly rather than return garbage.
  KahanAcc norm;
  for (const auto& t : coef.terms) {
    if (t.sign == 0.0) continue;
    norm.add(static_cast<long double>(t.sign) *
             std::exp(static_cast<long double>(t.log_mag)) *
             factorial_ld(t.power));
  }
  if (std::fabs(static_cast<double>(norm.sum) - 1.0) > 1e-8) {
    throw numerical_error(
        "eigenvalue-density normalization self-check failed for nt=" +
        std::to_string(ant.nt) + ", nr=" + std::to_string(ant.nr));
  }
  return coef;
}

double eigen_pdf(double lambda, const SpectrumCoefficients& coef) {
  if (std::isnan(lambda) || lambda < 0.0) {
    throw std::domain_error("eigen_pdf: lambda must be >= 0");
  }
  if (std::isinf(lambda)) return 0.0;

  const long double log_lambda =
      (lambda > 0.0) ? std::log(static_cast<long double>(lambda)) : 0.0L;
  KahanAcc acc;
  for (const auto& t : coef.terms) {
    if (t.sign == 0.0) continue;
    if (lambda == 0.0 && t.power != 0) continue;
    acc.add(static_cast<long double>(t.sign) *
            std::exp(static_cast<long double>(t.log_mag) +
                     t.power * log_lambda -
                     static_cast<long double>(lambda)));
  }

  double v = static_cast<double>(acc.sum);
  if (std::isnan(v)) {
    throw numerical_error("eigen_pdf: sum is not finite");
  }
  if (v < 0.0) {
    if (v < -1e-10) {
      throw numerical_error("eigen_pdf: cancellation produced " +
                            std::to_string(v) + " at lambda=" +
                            std::to_string(lambda));
    }
    v = 0.0;
  }
  return v;
}

double ergodic_capacity_closed(double rho, const AntennaConfig& ant,
                               const ImpairmentConfig& imp) {
  if (std::isinf(rho)) {
    throw std::domain_error(
        "ergodic_capacity_closed: rho must be finite; use capacity_ceiling "
        "for the infinite-SNR limit");
  }
  const SpectrumCoefficients coef = build_spectrum_coefficients(ant);
  const EffectiveGains g = effective_gains(rho, ant, imp);  // validates rho
  return capacity_from_gains(coef, g.total, g.distortion);
}

double capacity_ceiling(const AntennaConfig& ant, const ImpairmentConfig& imp) {
  const double dt2 = imp.delta_t * imp.delta_t;
  const double dr2 = imp.delta_r * imp.delta_r;
  if (dt2 == 0.0 && dr2 == 0.0) {
    throw std::domain_error(
        "capacity_ceiling: ideal hardware has no finite high-SNR ceiling");
  }
  if (dr2 == 0.0) {
    // Every stream saturates at SINR 1/delta_t^2.
    return ant.q() * (std::log1p(1.0 / dt2) / static_cast<double>(kLn2));
  }
  const SpectrumCoefficients coef = build_spectrum_coefficients(ant);
  const double denom = ant.nt * dr2;
  return capacity_from_gains(coef, (1.0 + dt2) / denom, dt2 / denom);
}

double ergodic_capacity_quadrature(double rho, const AntennaConfig& ant,
                                   const ImpairmentConfig& imp) {
  if (std::isinf(rho)) {
    throw std::domain_error("ergodic_capacity_quadrature: rho must be finite");
  }
  const SpectrumCoefficients coef = build_spectrum_coefficients(ant);
  if (!std::isfinite(rho) || rho < 0.0) {
    throw std::domain_error("rho must be finite and >= 0");
  }
  if (rho == 0.0) return 0.0;

  boost::math::quadrature::exp_sinh<double> integrator;
  auto integrand = [&](double lam) {
    return std::log1p(effective_sinr(lam, rho, ant, imp)) *
           eigen_pdf(lam, coef);
  };
  double error = 0.0;
  const double nats = integrator.integrate(integrand, 1e-9, &error);
  const double c = ant.q() * nats / static_cast<double>(kLn2);
  if (!std::isfinite(c) || c < 0.0) {
    throw numerical_error("quadrature capacity is not finite or negative");
  }
  return c;
}

}  // namespace mimocap
