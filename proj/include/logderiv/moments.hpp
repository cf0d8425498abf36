#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "logderiv/ensembles.hpp"

namespace logderiv {

// Evaluation point s = e^{-alpha} with alpha = a / N.
class ScaledPoint {
 public:
  // Throws std::invalid_argument unless N >= 1 and a > 0.
  ScaledPoint(int N, double a);

  int N() const { return N_; }
  double a() const { return a_; }
  double alpha() const { return a_ / N_; }
  double s() const;
  // 1 - s without cancellation.
  double one_minus_s() const;

 private:
  int N_;
  double a_;
};

struct MomentEstimate {
  Ensemble ensemble;
  int K;
  double mean;
  double std_error;
  std::size_t samples;
  ScaledPoint point;
  std::uint64_t seed;
};

// Mean and standard error (sample standard deviation / sqrt(n)).
struct Summary {
  double mean;
  double std_error;
  std::size_t samples;
};

// Lambda'/Lambda at s for one draw, including -1/(1-s) for SO(2N+1).
// Throws std::invalid_argument unless 0 < s < 1.
double logderiv(const EigenSample& sample, double s);
// Same at s = e^{-a/N}, with 1 - s taken from expm1.
double logderiv(const EigenSample& sample, const ScaledPoint& point);
// The sum over eigenangles only, i.e. without the pole at 1 for SO(2N+1).
double logderiv_without_pole(const EigenSample& sample, const ScaledPoint& point);

struct MonteCarloOptions {
  unsigned threads = 1;
  // Called with (completed, total) every 1000 draws and at the end, from any
  // worker but never concurrently. May be empty.
  std::function<void(std::size_t, std::size_t)> progress;
};

// Per-draw log-derivative values in sample-index order. Draw i uses
// RngStream{seed, i}, so the result does not depend on the thread count.
std::vector<double> logderiv_draws(Ensemble ensemble, const ScaledPoint& point, std::size_t samples,
                                   std::uint64_t seed, bool subtract_pole = false,
                                   const MonteCarloOptions& options = {});

// Compensated mean and standard error of values[i]^K.
Summary summarize_power(const std::vector<double>& values, int K);
Summary summarize(const std::vector<double>& values);

// K-th moment over `samples` Haar draws. Requires 1 <= K <= 8 and
// samples >= 100.
MomentEstimate estimate_moment(Ensemble ensemble, int K, const ScaledPoint& point, std::size_t samples,
                               std::uint64_t seed, const MonteCarloOptions& options = {});

// Moments 1..max_K from a single set of draws.
std::vector<MomentEstimate> estimate_moments(Ensemble ensemble, int max_K, const ScaledPoint& point,
                                             std::size_t samples, std::uint64_t seed,
                                             const MonteCarloOptions& options = {});

// Moments of Lambda'/Lambda + 1/(1-s) over SO(2N+1). K = 0 returns 1.
MomentEstimate estimate_pole_subtracted_moment(int K, const ScaledPoint& point, std::size_t samples,
                                               std::uint64_t seed, const MonteCarloOptions& options = {});

// E[((1/N) Lambda'/Lambda - 1)^2] over USp(2N).
double scaled_variance_usp(const ScaledPoint& point, std::size_t samples, std::uint64_t seed,
                           const MonteCarloOptions& options = {});
Summary scaled_variance_usp_summary(const ScaledPoint& point, std::size_t samples, std::uint64_t seed,
                                    const MonteCarloOptions& options = {});

// Mean of (x/N - 1)^2 over precomputed log-derivative draws.
Summary scaled_variance(std::vector<double> draws, int N);

}  // namespace logderiv
