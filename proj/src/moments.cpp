#include "logderiv/moments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace logderiv {
namespace {

constexpr double kAngleClamp = 1e-12;
constexpr int kMaxMoment = 8;
constexpr std::size_t kMinSamples = 100;

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// (2s - 2cos) / (s^2 - 2s cos + 1), written with d = 1 - s and
// q = 1 - cos = 2 sin^2(theta/2) so nothing cancels as s -> 1 or theta -> 0.
double angle_sum(const std::vector<double>& angles, double s, double d) {
  CompensatedSum sum;
  for (double theta : angles) {
    theta = std::clamp(theta, kAngleClamp, std::numbers::pi - kAngleClamp);
    const double half = std::sin(0.5 * theta);
    const double q = 2.0 * half * half;
    sum.add((2.0 * q - 2.0 * d) / (d * d + 2.0 * s * q));
  }
  return sum.value();
}

void check_samples(std::size_t samples) {
  if (samples < kMinSamples) throw std::invalid_argument("at least 100 samples are required");
}

double int_power(double x, int K) {
  double out = 1.0;
  for (int i = 0; i < K; ++i) out *= x;
  return out;
}

}  // namespace

ScaledPoint::ScaledPoint(int N, double a) : N_(N), a_(a) {
  if (N < 1) throw std::invalid_argument("ScaledPoint: N must be positive");
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("ScaledPoint: a must be positive");
}

double ScaledPoint::s() const { return std::exp(-alpha()); }

double ScaledPoint::one_minus_s() const { return -std::expm1(-alpha()); }

double logderiv(const EigenSample& sample, double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("logderiv: s must lie in (0, 1)");
  const double d = 1.0 - s;
  double value = angle_sum(sample.angles, s, d);
  if (sample.ensemble == Ensemble::SOOdd) value -= 1.0 / d;
  return value;
}

double logderiv(const EigenSample& sample, const ScaledPoint& point) {
  const double d = point.one_minus_s();
  double value = angle_sum(sample.angles, point.s(), d);
  if (sample.ensemble == Ensemble::SOOdd) value -= 1.0 / d;
  return value;
}

double logderiv_without_pole(const EigenSample& sample, const ScaledPoint& point) {
  return angle_sum(sample.angles, point.s(), point.one_minus_s());
}

std::vector<double> logderiv_draws(Ensemble ensemble, const ScaledPoint& point, std::size_t samples,
                                   std::uint64_t seed, bool subtract_pole, const MonteCarloOptions& options) {
  std::vector<double> values(samples);
  const unsigned threads = std::max(1u, options.threads);
  std::atomic<std::size_t> done{0};
  std::mutex report_mutex;

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto draw = sample(ensemble, point.N(), RngStream{seed, i});
      values[i] = subtract_pole ? logderiv_without_pole(draw, point) : logderiv(draw, point);
      const auto completed = done.fetch_add(1) + 1;
      if (options.progress && (completed % 1000 == 0 || completed == samples)) {
        std::lock_guard lock(report_mutex);
        options.progress(completed, samples);
      }
    }
  };

  if (threads == 1) {
    work(0, samples);
    return values;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (samples + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(samples, t * chunk);
    const std::size_t end = std::min(samples, begin + chunk);
    pool.emplace_back(work, begin, end);
  }
  for (auto& th : pool) th.join();
  return values;
}

Summary summarize_power(const std::vector<double>& values, int K) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("summarize: at least two values are required");
  CompensatedSum sum;
  for (double x : values) sum.add(int_power(x, K));
  const double mean = sum.value() / static_cast<double>(n);
  CompensatedSum sq;
  for (double x : values) {
    const double dev = int_power(x, K) - mean;
    sq.add(dev * dev);
  }
  const double variance = sq.value() / static_cast<double>(n - 1);
  return {mean, std::sqrt(variance / static_cast<double>(n)), n};
}

Summary summarize(const std::vector<double>& values) { return summarize_power(values, 1); }

MomentEstimate estimate_moment(Ensemble ensemble, int K, const ScaledPoint& point, std::size_t samples,
                               std::uint64_t seed, const MonteCarloOptions& options) {
  if (K < 1 || K > kMaxMoment) throw std::invalid_argument("estimate_moment: K must be in [1, 8]");
  return estimate_moments(ensemble, K, point, samples, seed, options).back();
}

std::vector<MomentEstimate> estimate_moments(Ensemble ensemble, int max_K, const ScaledPoint& point,
                                             std::size_t samples, std::uint64_t seed,
                                             const MonteCarloOptions& options) {
  if (max_K < 1 || max_K > kMaxMoment) throw std::invalid_argument("estimate_moments: K must be in [1, 8]");
  check_samples(samples);
  const auto draws = logderiv_draws(ensemble, point, samples, seed, false, options);
  std::vector<MomentEstimate> out;
  for (int K = 1; K <= max_K; ++K) {
    const auto s = summarize_power(draws, K);
    out.push_back({ensemble, K, s.mean, s.std_error, s.samples, point, seed});
  }
  return out;
}

MomentEstimate estimate_pole_subtracted_moment(int K, const ScaledPoint& point, std::size_t samples,
                                               std::uint64_t seed, const MonteCarloOptions& options) {
  if (K < 0 || K > kMaxMoment) throw std::invalid_argument("estimate_pole_subtracted_moment: K must be in [0, 8]");
  check_samples(samples);
  if (K == 0) return {Ensemble::SOOdd, 0, 1.0, 0.0, samples, point, seed};
  const auto draws = logderiv_draws(Ensemble::SOOdd, point, samples, seed, true, options);
  const auto s = summarize_power(draws, K);
  return {Ensemble::SOOdd, K, s.mean, s.std_error, s.samples, point, seed};
}

Summary scaled_variance_usp_summary(const ScaledPoint& point, std::size_t samples, std::uint64_t seed,
                                    const MonteCarloOptions& options) {
  check_samples(samples);
  return scaled_variance(logderiv_draws(Ensemble::USp, point, samples, seed, false, options), point.N());
}

Summary scaled_variance(std::vector<double> draws, int N) {
  for (double& x : draws) {
    const double dev = x / N - 1.0;
    x = dev * dev;
  }
  return summarize(draws);
}

double scaled_variance_usp(const ScaledPoint& point, std::size_t samples, std::uint64_t seed,
                           const MonteCarloOptions& options) {
  return scaled_variance_usp_summary(point, samples, seed, options).mean;
}

}  // namespace logderiv
