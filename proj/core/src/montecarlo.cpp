#include "mimocap/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "mimocap/errors.hpp"

namespace mimocap {

namespace {

// Trials per RNG stream.  Fixed so that the trial -> stream mapping (and
// therefore every random draw) is independent of the thread count.
constexpr std::uint64_t kShardTrials = 1024;

std::uint64_t splitmix64_next(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

double logdet_hermitian_pd(const Eigen::MatrixXcd& a) {
  Eigen::LLT<Eigen::MatrixXcd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw numerical_error("Cholesky factorization failed (matrix not PD?)");
  }
  const auto& l = llt.matrixLLT();
  double ld = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    ld += 2.0 * std::log(l(i, i).real());
  }
  return ld;
}

struct ShardMoments {
  double sum = 0.0;
  double sum_sq = 0.0;
};

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  // Hash the seed once, offset by the stream index, then expand: distinct
  // streams land in well-separated regions of the splitmix64 sequence.
  std::uint64_t sm = seed;
  sm = splitmix64_next(sm) + stream;
  for (auto& w : s_) w = splitmix64_next(sm);
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl64(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl64(s_[3], 45);
  return result;
}

double RngStream::next_unit() {
  // (0, 1]: 53 high bits, shifted away from 0 so log() below is safe.
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

std::pair<double, double> RngStream::next_normal_pair() {
  const double u1 = next_unit();
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(th), r * std::sin(th)};
}

std::complex<double> RngStream::next_cgauss() {
  const auto [a, b] = next_normal_pair();
  return {a * std::numbers::sqrt2 / 2.0, b * std::numbers::sqrt2 / 2.0};
}

ChannelMatrix sample_channel(const AntennaConfig& ant, RngStream& rng) {
  ChannelMatrix h(ant.nr, ant.nt);
  // Explicit column-major fill order: part of the reproducibility contract.
  for (Eigen::Index j = 0; j < h.cols(); ++j) {
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
      h(i, j) = rng.next_cgauss();
    }
  }
  return h;
}

double mutual_information(const ChannelMatrix& h, const Eigen::VectorXd& q_diag,
                          const ImpairmentConfig& imp) {
  if (q_diag.size() != h.cols()) {
    throw std::invalid_argument(
        "mutual_information: covariance diagonal size must equal nt");
  }
  if ((q_diag.array() < 0.0).any()) {
    throw std::domain_error(
        "mutual_information: covariance diagonal must be nonnegative");
  }
  const double dt2 = imp.delta_t * imp.delta_t;
  const double dr2 = imp.delta_r * imp.delta_r;
  const double noise = dr2 * q_diag.sum() + 1.0;

  const Eigen::MatrixXcd hqh =
      h * q_diag.asDiagonal() * h.adjoint();  // H Q H^*
  Eigen::MatrixXcd phi = dt2 * hqh;
  phi.diagonal().array() += noise;
  Eigen::MatrixXcd total = (1.0 + dt2) * hqh;
  total.diagonal().array() += noise;

  return (logdet_hermitian_pd(total) - logdet_hermitian_pd(phi)) /
         std::numbers::ln2;
}

double capacity_realization(const ChannelMatrix& h, double rho,
                            const AntennaConfig& ant,
                            const ImpairmentConfig& imp) {
  if (h.rows() != ant.nr || h.cols() != ant.nt) {
    throw std::invalid_argument(
        "capacity_realization: channel dimensions do not match the antenna "
        "configuration");
  }
  // Eigenvalues of the smaller-side Gram matrix; both sides share the
  // nonzero spectrum.
  Eigen::MatrixXcd w;
  if (ant.nr <= ant.nt) {
    w.noalias() = h * h.adjoint();
  } else {
    w.noalias() = h.adjoint() * h;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
  es.compute(w, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw numerical_error("capacity_realization: eigendecomposition failed");
  }

  const double scale = w.diagonal().real().sum() + 1.0;
  double nats = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double lam = es.eigenvalues()(i);
    if (lam < 0.0) {
      if (lam < -1e-9 * scale) {
        throw numerical_error(
            "capacity_realization: Gram matrix eigenvalue is negative beyond "
            "roundoff");
      }
      lam = 0.0;
    }
    nats += std::log1p(effective_sinr(lam, rho, ant, imp));
  }
  return nats / std::numbers::ln2;
}

CapacityEstimate estimate_ergodic_capacity(double rho, const AntennaConfig& ant,
                                           const ImpairmentConfig& imp,
                                           std::uint64_t trials,
                                           std::uint64_t seed, int threads) {
  if (trials == 0) {
    throw std::invalid_argument("estimate_ergodic_capacity: trials must be > 0");
  }
  if (!std::isfinite(rho) || rho < 0.0) {
    throw std::domain_error("estimate_ergodic_capacity: rho must be finite and >= 0");
  }

  const std::uint64_t n_shards = (trials + kShardTrials - 1) / kShardTrials;
  std::vector<ShardMoments> shard(n_shards);

  std::atomic<std::uint64_t> next_shard{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    try {
      for (;;) {
        const std::uint64_t s = next_shard.fetch_add(1);
        if (s >= n_shards) return;
        const std::uint64_t begin = s * kShardTrials;
        const std::uint64_t count = std::min(kShardTrials, trials - begin);
        RngStream rng(seed, s);
        double sum = 0.0, sum_sq = 0.0;
        for (std::uint64_t t = 0; t < count; ++t) {
          const ChannelMatrix h = sample_channel(ant, rng);
          const double c = capacity_realization(h, rho, ant, imp);
          sum += c;
          sum_sq += c * c;
        }
        shard[s] = {sum, sum_sq};
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  unsigned n_threads = threads > 0
                           ? static_cast<unsigned>(threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(
      std::min<std::uint64_t>(n_threads, n_shards));

  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Merge in shard order: the estimate must not depend on the thread count.
  long double sum = 0.0L, sum_sq = 0.0L;
  for (const auto& s : shard) {
    sum += s.sum;
    sum_sq += s.sum_sq;
  }

  CapacityEstimate est;
  est.trials = trials;
  est.seed = seed;
  const long double n = static_cast<long double>(trials);
  est.mean = static_cast<double>(sum / n);
  if (trials > 1) {
    long double var = (sum_sq - sum * sum / n) / (n - 1.0L);
    if (var < 0.0L) var = 0.0L;  // roundoff on a zero-variance sample
    est.std_error = static_cast<double>(std::sqrt(var / n));
  }
  return est;
}

}  // namespace mimocap
