#include "logderiv/formulas.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "logderiv/combinatorics.hpp"

namespace logderiv {
namespace {

constexpr double kLaurentRadius = 1e-4;

double expm1_of(double x) { return std::expm1(x); }

std::complex<double> expm1_of(std::complex<double> x) {
  return 2.0 * std::exp(0.5 * x) * std::sinh(0.5 * x);
}

bool at_pole(double x) { return x == 0.0; }

bool at_pole(std::complex<double> x) {
  if (x.real() != 0.0) return false;
  const double turns = x.imag() / (2.0 * std::numbers::pi);
  return std::abs(turns - std::round(turns)) <= 1e-15 * std::max(1.0, std::abs(turns));
}

template <typename T>
ZFunctionValue<T> z_eval_impl(T x) {
  if (at_pole(x)) throw std::domain_error("z_eval: pole at x = 2 pi i k");
  ZFunctionValue<T> out;
  out.x = x;
  if (std::abs(x) < kLaurentRadius) {
    const T inv = T(1) / x;
    const T x2 = x * x;
    const T x3 = x2 * x;
    out.z = inv + T(0.5) + x / T(12) - x3 / T(720);
    out.dlog = -inv + T(0.5) - x / T(12) + x3 / T(720);
    out.dlog_prime = inv * inv - T(1) / T(12) + x2 / T(240);
    out.dz = -inv * inv + T(1) / T(12) - x2 / T(240);
    return out;
  }
  const T em_neg = expm1_of(-x);  // e^{-x} - 1
  const T em_pos = expm1_of(x);   // e^{x} - 1
  out.z = -T(1) / em_neg;
  out.dlog = -T(1) / em_pos;
  out.dlog_prime = std::exp(x) / (em_pos * em_pos);
  out.dz = -std::exp(-x) / (em_neg * em_neg);
  return out;
}

double z(double x) { return z_eval(x).z; }
double dlog(double x) { return z_eval(x).dlog; }

// Partitions of items into blocks of size one or two, accumulating the
// product of block weights.
double pair_partition_sum(std::vector<double>& items, const std::vector<double>& single_weight,
                          std::vector<int>& index) {
  if (index.empty()) return 1.0;
  const int first = index.back();
  index.pop_back();
  double total = single_weight[first] * pair_partition_sum(items, single_weight, index);
  for (std::size_t k = 0; k < index.size(); ++k) {
    const int partner = index[k];
    std::vector<int> rest = index;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
    total += z_eval(items[first] + items[partner]).dlog_prime * pair_partition_sum(items, single_weight, rest);
  }
  index.push_back(first);
  return total;
}

void check_moment_args(int K, int N, double a) {
  if (K < 1) throw std::invalid_argument("asymptotic_moment: K must be positive");
  if (N < 1) throw std::invalid_argument("asymptotic_moment: N must be positive");
  if (!(a > 0.0)) throw std::invalid_argument("asymptotic_moment: a must be positive");
}

double ratio_of(const BigInt& num, const BigInt& den) { return ExactRational(num, den).to_double(); }

}  // namespace

ZFunctionValue<double> z_eval(double x) { return z_eval_impl(x); }
ZFunctionValue<std::complex<double>> z_eval(std::complex<double> x) { return z_eval_impl(x); }

std::string_view to_string(FormulaId id) {
  switch (id) {
    case FormulaId::SOEvenFirst: return "so-even-first";
    case FormulaId::SOEvenHigher: return "so-even-higher";
    case FormulaId::USpFirst: return "usp-first";
    case FormulaId::USpSecond: return "usp-second";
    case FormulaId::USpThird: return "usp-third";
    case FormulaId::USpHigher: return "usp-higher";
    case FormulaId::SOOdd: return "so-odd";
  }
  return "unknown";
}

MomentFormulaResult asymptotic_moment(Ensemble ensemble, int K, int N, double a) {
  check_moment_args(K, N, a);
  const double n = N;
  const double sign = K % 2 == 0 ? 1.0 : -1.0;
  const double nk = std::pow(n, K);
  MomentFormulaResult out{ensemble, K, N, a, 0.0, std::nullopt, FormulaId::SOOdd};
  switch (ensemble) {
    case Ensemble::SOEven:
      if (K == 1) {
        out.leading = -n;
        out.formula_id = FormulaId::SOEvenFirst;
      } else {
        out.leading = sign * 2.0 * nk / std::pow(a, K - 1) *
                      ratio_of(double_factorial(2 * K - 3), factorial(K - 1));
        out.formula_id = FormulaId::SOEvenHigher;
      }
      break;
    case Ensemble::USp:
      if (K == 1) {
        out.leading = n;
        out.next_to_leading = -a * n;
        out.formula_id = FormulaId::USpFirst;
      } else if (K == 2) {
        out.leading = n * n;
        out.next_to_leading = -2.0 * n * n * a;
        out.formula_id = FormulaId::USpSecond;
      } else if (K == 3) {
        out.leading = 2.0 / 3.0 * nk;
        out.formula_id = FormulaId::USpThird;
      } else {
        out.leading = sign * 2.0 / 3.0 * nk / std::pow(a, K - 3) *
                      ratio_of(double_factorial(2 * K - 5), factorial(K - 1));
        out.formula_id = FormulaId::USpHigher;
      }
      break;
    case Ensemble::SOOdd:
      out.leading = sign * std::pow(n / a, K);
      out.next_to_leading = -sign * K * nk / std::pow(a, K - 1);
      out.formula_id = FormulaId::SOOdd;
      break;
  }
  return out;
}

double masonsnaith_J(const std::vector<double>& A, int N) {
  for (double alpha : A)
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      throw std::invalid_argument("masonsnaith_J: entries must be positive");
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = i + 1; j < A.size(); ++j)
      if (A[i] == A[j]) throw std::invalid_argument("masonsnaith_J: coincident entries need the confluent form");
  if (static_cast<int>(A.size()) > N) throw std::domain_error("masonsnaith_J: |A| must not exceed N");

  const std::size_t m = A.size();
  std::vector<double> items = A;
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<double> D;
    std::vector<int> rest;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (std::uint64_t{1} << i))
        D.push_back(A[i]);
      else
        rest.push_back(static_cast<int>(i));
    }
    double sum_d = 0.0;
    for (double d : D) sum_d += d;
    const double weight = std::exp(-2.0 * N * sum_d) * (D.size() % 2 == 0 ? 1.0 : -1.0);

    // Positive branch of the square root: every factor below is positive
    // for real positive entries.
    double root = 1.0;
    for (double d : D) root *= z(2.0 * d);
    for (std::size_t i = 0; i < D.size(); ++i) {
      for (std::size_t j = i + 1; j < D.size(); ++j) {
        const double p = D[i], q = D[j];
        root *= z(p + q) * z(-p - q) / (z(p - q) * z(q - p));
      }
    }

    std::vector<double> single(m, 0.0);
    for (int idx : rest) {
      const double alpha = A[idx];
      double h = -dlog(2.0 * alpha);
      for (double d : D) h += dlog(alpha - d) - dlog(alpha + d);
      single[idx] = h;
    }
    total += weight * root * pair_partition_sum(items, single, rest);
  }
  return total;
}

double j_first(int N, double alpha) {
  const auto z2 = z_eval(2.0 * alpha);
  return -z2.dlog - std::exp(-2.0 * N * alpha) * z2.z;
}

double j_second_confluent(int N, double alpha) {
  const auto z2 = z_eval(2.0 * alpha);
  const double e = std::exp(-2.0 * N * alpha);
  return z2.dlog_prime + z2.dlog * z2.dlog + e * z2.z * (-1.0 + 4.0 * z2.dlog + 2.0 * N) - 2.0 * e * z2.dz;
}

double raw_moment_from_j(double j_value, int K, double alpha) {
  const double factor = -std::exp(alpha);
  double out = j_value;
  for (int i = 0; i < K; ++i) out *= factor;
  return out;
}

double exact_moment_so_even(int K, int N, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("exact_moment_so_even: alpha must be positive");
  if (N < 1) throw std::invalid_argument("exact_moment_so_even: N must be positive");
  if (K == 1) return raw_moment_from_j(j_first(N, alpha), 1, alpha);
  if (K == 2) return raw_moment_from_j(j_second_confluent(N, alpha), 2, alpha);
  throw std::invalid_argument("exact_moment_so_even: K must be 1 or 2");
}

Comparison compare(Ensemble ensemble, int K, int N, double a, std::size_t samples, std::uint64_t seed,
                   const MonteCarloOptions& options) {
  const ScaledPoint point(N, a);
  Comparison out{estimate_moment(ensemble, K, point, samples, seed, options), asymptotic_moment(ensemble, K, N, a),
                 std::nullopt, 0.0, 0.0};
  if (ensemble == Ensemble::SOEven && K <= 2) out.exact = exact_moment_so_even(K, N, point.alpha());
  out.ratio = out.monte_carlo.mean / out.asymptotic.value();
  const double target = out.exact.value_or(out.asymptotic.value());
  out.z_score = (out.monte_carlo.mean - target) / out.monte_carlo.std_error;
  return out;
}

}  // namespace logderiv
