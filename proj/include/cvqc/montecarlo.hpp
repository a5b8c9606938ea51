#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "cvqc/core.hpp"
#include "cvqc/parallel.hpp"
#include "cvqc/schemes.hpp"

namespace cvqc {

struct SampleConfig {
  long trials;
  std::uint64_t seed;
  SqueezeVariance sigma2;

  SampleConfig(long trials_, std::uint64_t seed_, SqueezeVariance sigma2_)
      : trials(trials_), seed(seed_), sigma2(sigma2_) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  }
};

// Three relative standard errors of a Gaussian variance estimator.
inline double statistical_tolerance(long trials) {
  return 3.0 * std::sqrt(2.0 / static_cast<double>(trials));
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Streams are derived per (slot, partition), so neither the slot count nor
// the worker schedule changes any stream.
inline std::uint64_t stream_seed(std::uint64_t master, long slot, long partition) {
  return splitmix64(splitmix64(master + 0x9e3779b97f4a7c15ULL * (slot + 1)) +
                    0xbf58476d1ce4e5b9ULL * (partition + 1));
}

inline constexpr long kSamplePartition = 1 << 16;

}  // namespace detail

// i.i.d. zero-mean Gaussian samples with variance sigma2, one column per
// ancilla slot. Deterministic for a given config, independent of threads.
inline Eigen::MatrixXd sample_squeezed(int slots, const SampleConfig& cfg,
                                       int threads = 1) {
  Eigen::MatrixXd out(cfg.trials, slots);
  const double stddev = std::sqrt(cfg.sigma2.value());
  const long partitions =
      (cfg.trials + detail::kSamplePartition - 1) / detail::kSamplePartition;
  parallel_for_chunks(partitions * slots, threads, [&](long begin, long end) {
    for (long unit = begin; unit < end; ++unit) {
      const long slot = unit / partitions;
      const long part = unit % partitions;
      const long row0 = part * detail::kSamplePartition;
      const long row1 = std::min(cfg.trials, row0 + detail::kSamplePartition);
      std::mt19937_64 rng(detail::stream_seed(cfg.seed, slot, part));
      std::normal_distribution<double> normal(0.0, stddev);
      for (long r = row0; r < row1; ++r) out(r, slot) = normal(rng);
    }
  });
  return out;
}

// Empirical per-quadrature variance of E * y over sampled ancillas; the
// expected value is sigma2 * diag(E E^T). Accumulation runs per partition and
// merges in fixed partition order.
inline VarianceVector estimate_variance(const ErrorMap& e, const SampleConfig& cfg,
                                        int threads = 1) {
  const int outputs = static_cast<int>(e.rows());
  const Eigen::MatrixXd samples =
      sample_squeezed(static_cast<int>(e.cols()), cfg, threads);
  const long partitions =
      (cfg.trials + detail::kSamplePartition - 1) / detail::kSamplePartition;

  std::vector<Eigen::VectorXd> psum(partitions), psq(partitions);
  parallel_for_chunks(partitions, threads, [&](long begin, long end) {
    for (long part = begin; part < end; ++part) {
      const long row0 = part * detail::kSamplePartition;
      const long rows = std::min(cfg.trials, row0 + detail::kSamplePartition) - row0;
      const Eigen::MatrixXd prod =
          samples.middleRows(row0, rows) * e.transpose();
      psum[part] = prod.colwise().sum();
      psq[part] = prod.array().square().colwise().sum();
    }
  });
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(outputs);
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(outputs);
  for (long part = 0; part < partitions; ++part) {
    sum += psum[part];
    sq += psq[part];
  }
  const double n = static_cast<double>(cfg.trials);
  Eigen::VectorXd mean = sum / n;
  return (sq / n - mean.cwiseProduct(mean)).cwiseMax(0.0);
}

// Symmetric positive-semidefinite matrix over the (x_1..x_n, y_1..y_n)
// quadrature ordering.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(const Eigen::MatrixXd& m) : m_(m) {
    if (m.rows() != m.cols())
      throw DimensionError("covariance matrix must be square");
    if (max_abs_diff(m, m.transpose()) > 1e-12)
      throw std::domain_error("covariance matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-9)
      throw std::domain_error("covariance matrix must be positive semidefinite");
  }

  const Eigen::MatrixXd& matrix() const { return m_; }
  Eigen::VectorXd diagonal() const { return m_.diagonal(); }

 private:
  Eigen::MatrixXd m_;
};

// Vacuum covariance (1/4) I for the given mode count.
inline CovarianceMatrix vacuum_covariance(int modes) {
  return CovarianceMatrix(0.25 * Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

// Propagates a Gaussian input state through a scheme:
// Sigma_out = U Sigma_in U^T + sigma2 E E^T.
inline CovarianceMatrix output_covariance(const SchemeRealization& r,
                                          const CovarianceMatrix& input,
                                          SqueezeVariance sigma2) {
  if (input.matrix().rows() != r.matrix.cols())
    throw DimensionError("input covariance does not match the scheme dimension");
  Eigen::MatrixXd out = r.matrix * input.matrix() * r.matrix.transpose() +
                        sigma2.value() * r.error_map * r.error_map.transpose();
  return CovarianceMatrix(0.5 * (out + out.transpose()));
}

}  // namespace cvqc
