#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "logderiv/ensembles.hpp"
#include "logderiv/moments.hpp"

namespace logderiv {

// z(x) = 1/(1 - e^{-x}) with its logarithmic derivative and the derivative
// of that.
template <typename T>
struct ZFunctionValue {
  T x;
  T z;
  T dlog;        // z'/z
  T dlog_prime;  // (z'/z)'
  T dz;          // z'
};

// Throws std::domain_error at the poles x = 2 pi i k.
ZFunctionValue<double> z_eval(double x);
ZFunctionValue<std::complex<double>> z_eval(std::complex<double> x);

enum class FormulaId {
  SOEvenFirst,
  SOEvenHigher,
  USpFirst,
  USpSecond,
  USpThird,
  USpHigher,
  SOOdd,
};

std::string_view to_string(FormulaId id);

// `leading` is the leading-order term and `next_to_leading` the stated
// correction, where one exists. value() = leading + next_to_leading.
struct MomentFormulaResult {
  Ensemble ensemble;
  int K;
  int N;
  double a;
  double leading;
  std::optional<double> next_to_leading;
  FormulaId formula_id;

  double value() const { return leading + next_to_leading.value_or(0.0); }
};

// Large-N, small-a moment asymptotics. For SO(2N+1), leading is
// (-1)^K (N/a)^K and next_to_leading is -(-1)^K K N^K / a^{K-1}.
// Throws std::invalid_argument for K < 1, N < 1 or a <= 0.
MomentFormulaResult asymptotic_moment(Ensemble ensemble, int K, int N, double a);

// J*(A) for SO(2N), the average of prod_{alpha in A} (-e^{-alpha}) Lambda'/Lambda(e^{-alpha}).
// Throws std::invalid_argument for non-positive or coincident entries and
// std::domain_error when |A| > N.
double masonsnaith_J(const std::vector<double>& A, int N);

// J(alpha) and the confluent J(alpha, alpha) in closed form.
double j_first(int N, double alpha);
double j_second_confluent(int N, double alpha);

// Converts a J-normalized average over K equal points alpha to the raw
// moment: multiplies by (-e^{alpha})^K.
double raw_moment_from_j(double j_value, int K, double alpha);

// Exact K-th moment of Lambda'/Lambda(e^{-alpha}) over SO(2N), K in {1, 2}.
double exact_moment_so_even(int K, int N, double alpha);

struct Comparison {
  MomentEstimate monte_carlo;
  MomentFormulaResult asymptotic;
  std::optional<double> exact;
  double ratio;    // mc mean / asymptotic value()
  double z_score;  // against exact when present, else against asymptotic value()
};

Comparison compare(Ensemble ensemble, int K, int N, double a, std::size_t samples, std::uint64_t seed,
                   const MonteCarloOptions& options = {});

}  // namespace logderiv
