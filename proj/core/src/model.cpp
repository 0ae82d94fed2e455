#include "mimocap/model.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace mimocap {

namespace {

void require_finite_nonneg(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) {
    throw std::domain_error(std::string(name) + " must be finite and >= 0");
  }
}

}  // namespace

ImpairmentConfig::ImpairmentConfig(double dt, double dr)
    : delta_t(dt), delta_r(dr) {
  require_finite_nonneg(dt, "delta_t");
  require_finite_nonneg(dr, "delta_r");
}

double evm_of(const ImpairmentConfig& imp) { return imp.delta_t; }

AntennaConfig::AntennaConfig(int nt_, int nr_) : nt(nt_), nr(nr_) {
  if (nt < 1 || nr < 1) {
    throw std::domain_error("antenna counts must be >= 1");
  }
}

double AntennaConfig::beta() const {
  const int g = std::gcd(nt, nr);
  return static_cast<double>(nr / g) / static_cast<double>(nt / g);
}

SnrSpec SnrSpec::from_linear(double rho) {
  if (!std::isfinite(rho) || rho <= 0.0) {
    throw std::domain_error("SNR must be finite and > 0");
  }
  SnrSpec s;
  s.rho = rho;
  return s;
}

SnrSpec SnrSpec::from_db(double db) {
  if (!std::isfinite(db)) {
    throw std::domain_error("SNR (dB) must be finite");
  }
  return from_linear(std::pow(10.0, db / 10.0));
}

double SnrSpec::db() const { return 10.0 * std::log10(rho); }

double effective_sinr(double lambda, double rho, const AntennaConfig& ant,
                      const ImpairmentConfig& imp) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw std::domain_error("eigenvalue must be finite and >= 0");
  }
  require_finite_nonneg(rho, "rho");
  const double dt2 = imp.delta_t * imp.delta_t;
  const double dr2 = imp.delta_r * imp.delta_r;
  const double signal = rho * lambda / ant.nt;
  return signal / (dt2 * signal + rho * dr2 + 1.0);
}

EffectiveGains effective_gains(double rho, const AntennaConfig& ant,
                               const ImpairmentConfig& imp) {
  require_finite_nonneg(rho, "rho");
  const double dt2 = imp.delta_t * imp.delta_t;
  const double dr2 = imp.delta_r * imp.delta_r;
  const double denom = ant.nt * (rho * dr2 + 1.0);
  EffectiveGains g;
  g.total = rho * (dt2 + 1.0) / denom;
  g.distortion = rho * dt2 / denom;
  return g;
}

}  // namespace mimocap
