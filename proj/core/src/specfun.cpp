#include "mimocap/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "mimocap/errors.hpp"

namespace mimocap {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kMachEps = std::numeric_limits<double>::epsilon() / 2.0;
constexpr double kRescaleThreshold = 1.44115188075855872e17;  // 2^57
constexpr double kAsymptoticArg = 1e10;
constexpr int kMaxIter = 2000;

// e^x E_n(x) for x > 1 by Lentz-style evaluation of the continued fraction
//   E_n(x) = e^{-x} / (x + n/(1 + 1/(x + (n+1)/(1 + 2/(x + ...))))).
// The recurrence below computes the fraction without the e^{-x} prefactor,
// which is exactly the scaled value we want.
double scaled_en_contfrac(int n, double x) {
  double pkm2 = 1.0, qkm2 = x;
  double pkm1 = 1.0, qkm1 = x + n;
  double ans = pkm1 / qkm1;
  for (int k = 2; k <= kMaxIter; ++k) {
    double yk, xk;
    if (k & 1) {
      yk = 1.0;
      xk = n + (k - 1) / 2;
    } else {
      yk = x;
      xk = k / 2;
    }
    const double pk = pkm1 * yk + pkm2 * xk;
    const double qk = qkm1 * yk + qkm2 * xk;
    double t = 1.0;
    if (qk != 0.0) {
      const double r = pk / qk;
      t = std::fabs((ans - r) / r);
      ans = r;
    }
    pkm2 = pkm1;
    pkm1 = pk;
    qkm2 = qkm1;
    qkm1 = qk;
    if (std::fabs(pk) > kRescaleThreshold) {
      pkm2 /= kRescaleThreshold;
      pkm1 /= kRescaleThreshold;
      qkm2 /= kRescaleThreshold;
      qkm1 /= kRescaleThreshold;
    }
    if (t <= kMachEps) return ans;
  }
  throw numerical_error("exp_integral_scaled: continued fraction did not converge");
}

// e^x E_n(x) for 0 < x <= 1 via the ascending series
//   E_n(x) = (-x)^{n-1}/(n-1)! [psi(n) - ln x] - sum_{k>=0, k!=n-1} (-x)^k / (k! (k-n+1))
// followed by the e^x scaling (harmless here, e^x <= e).
double scaled_en_series(int n, double x) {
  double psi = -kEulerGamma - std::log(x);
  for (int i = 1; i < n; ++i) psi += 1.0 / i;

  const double z = -x;
  double xk = 0.0, yk = 1.0, pk = 1.0 - n;
  double ans = (n != 1) ? 1.0 / pk : 0.0;
  for (int it = 0; it < kMaxIter; ++it) {
    xk += 1.0;
    yk *= z / xk;
    pk += 1.0;
    if (pk != 0.0) ans += yk / pk;
    const double t = (ans != 0.0) ? std::fabs(yk / ans) : 1.0;
    if (t <= kMachEps) {
      const double lead =
          std::pow(z, n - 1.0) * psi / boost::math::tgamma(static_cast<double>(n));
      return (lead - ans) * std::exp(x);
    }
  }
  throw numerical_error("exp_integral_scaled: series did not converge");
}

}  // namespace

double gamma_ln(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw std::domain_error("gamma_ln: x must be finite and > 0");
  }
  return boost::math::lgamma(x);
}

double upper_incomplete_gamma(double s, double x) {
  if (!std::isfinite(s) || s <= 0.0) {
    throw std::domain_error("upper_incomplete_gamma: s must be finite and > 0");
  }
  if (std::isnan(x) || x < 0.0) {
    throw std::domain_error("upper_incomplete_gamma: x must be >= 0");
  }
  if (std::isinf(x)) return 0.0;
  return boost::math::tgamma(s, x);
}

double exp_integral_scaled(int n, double x) {
  if (n < 1) {
    throw std::domain_error("exp_integral_scaled: order must be >= 1");
  }
  if (std::isnan(x) || x < 0.0) {
    throw std::domain_error("exp_integral_scaled: x must be >= 0");
  }
  if (std::isinf(x)) return 0.0;
  if (x == 0.0) {
    if (n == 1) {
      throw std::domain_error("exp_integral_scaled: E_1 diverges at x = 0");
    }
    return 1.0 / (n - 1);
  }
  // e^x E_n(x) = 1/(x+n) + O(n/x^3), so past the threshold the first term is
  // the correctly rounded value (relative error n/x^2 < eps/2), beating the
  // merely faithful continued fraction, which would also overflow internally
  // once x^2 leaves the double range.
  if (x >= kAsymptoticArg) return 1.0 / (x + n);
  return (x > 1.0) ? scaled_en_contfrac(n, x) : scaled_en_series(n, x);
}

double log_moment_integral(double a, int n, double c) {
  if (!std::isfinite(a) || a <= 0.0) {
    throw std::domain_error("log_moment_integral: a must be finite and > 0");
  }
  if (!std::isfinite(c) || c <= 0.0) {
    throw std::domain_error("log_moment_integral: c must be finite and > 0");
  }
  if (n < 1) {
    throw std::domain_error("log_moment_integral: n must be >= 1");
  }
  const double z = c / a;
  double sum = 0.0;
  for (int j = 1; j <= n; ++j) sum += exp_integral_scaled(j, z);
  // Gamma(n)/c^n in log space; n! overflows double well before n matters here.
  return std::exp(gamma_ln(n) - n * std::log(c)) * sum;
}

}  // namespace mimocap
