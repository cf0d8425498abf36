#pragma once

#include <utility>

#include "logderiv/combinatorics.hpp"

namespace logderiv {

// The contour integral
//   I(r, E) = 2^E / (2 pi i) \oint u^r exp(2t/(u^2-1)) / ((u-1)^{K+E} (u+1)^E) du
// over a contour enclosing every finite pole, evaluated at t = 0.
struct IntegralSpec {
  int r = 0;
  int E = 0;
  int K = 1;

  // Throws std::invalid_argument unless E >= 0 and K >= 1.
  void validate() const;

  friend bool operator==(const IntegralSpec&, const IntegralSpec&) = default;
};

// r - K - 2E.
int degree(const IntegralSpec& spec);

// Exact value at t = 0. Zero whenever degree(spec) <= -2. Results are
// memoized in a process-wide table.
ExactRational integral_value_t0(const IntegralSpec& spec);

// (r-2, E-1) and (r-2, E): I(r,E) = 2 I(r-2,E-1) + I(r-2,E).
// Throws std::invalid_argument when E == 0.
std::pair<IntegralSpec, IntegralSpec> recursion_split(const IntegralSpec& spec);

// d/dt I(r, E) = I(r, E+1).
IntegralSpec t_derivative(const IntegralSpec& spec);

}  // namespace logderiv
