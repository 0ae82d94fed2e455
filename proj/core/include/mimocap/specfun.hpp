#pragma once

// Special functions underpinning the closed-form capacity expressions.
//
// Everything that feeds the capacity formulas is phrased in terms of the
// *scaled* exponential integral
//
//   exp_integral_scaled(n, x) = e^x E_n(x),   E_n(x) = int_1^inf e^{-xt}/t^n dt
//
// because e^x and E_n(x) separately overflow/underflow long before their
// product leaves the comfortable range (x up to 1e12 and beyond must work).

#include <cstdint>

namespace mimocap {

// log Gamma(x) for x > 0.  Throws std::domain_error otherwise.
double gamma_ln(double x);

// Upper incomplete gamma Gamma(s, x) = int_x^inf t^{s-1} e^{-t} dt for
// s > 0, x >= 0.  Throws std::domain_error otherwise.
double upper_incomplete_gamma(double s, double x);

// e^x E_n(x) for integer n >= 1 and x >= 0.  x == 0 requires n >= 2 (E_1
// diverges at the origin); x == +infinity returns 0.  Strictly decreasing in
// x, strictly decreasing in n, and bounded by 1/(x+n) < e^x E_n(x) <= 1/(x+n-1).
double exp_integral_scaled(int n, double x);

// int_0^inf ln(1 + a y) y^{n-1} e^{-c y} dy for a > 0, c > 0, integer n >= 1,
// evaluated through the identity
//   = (Gamma(n) / c^n) * sum_{j=1}^{n} e^{c/a} E_j(c/a).
// As a -> 0+ the value tends to 0.
double log_moment_integral(double a, int n, double c);

}  // namespace mimocap
