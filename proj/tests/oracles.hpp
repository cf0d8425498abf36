#pragma once

// Reference computations used to check the library by independent routes.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <vector>

#include "logderiv/combinatorics.hpp"

namespace oracle {

using logderiv::BigInt;
using logderiv::ExactRational;

// ---- exact arithmetic -------------------------------------------------

// x (x-1) ... (x-k+1) / k! for any rational x.
inline ExactRational gbinom(const ExactRational& x, int k) {
  ExactRational out(1);
  for (int i = 0; i < k; ++i) out = out * (x - ExactRational(i)) / ExactRational(i + 1);
  return out;
}

inline ExactRational pow2(int e) {
  ExactRational out(1);
  for (int i = 0; i < std::abs(e); ++i) out *= ExactRational(2);
  return e >= 0 ? out : ExactRational(1) / out;
}

// Sum of the residues at 1, -1 and 0 of 2^E u^r / ((u-1)^{K+E} (u+1)^E),
// each from its own local series.
inline ExactRational integral_by_residues(int r, int E, int K) {
  const int p = K + E;
  const ExactRational R(r);
  ExactRational total(0);

  // u = 1 + v: coefficient of v^{p-1} in (1+v)^r (2+v)^{-E}.
  for (int i = 0; i <= p - 1; ++i) {
    const int j = p - 1 - i;
    total += gbinom(R, i) * pow2(-E) * gbinom(ExactRational(-E), j) * pow2(-j);
  }
  // u = -1 + v: coefficient of v^{E-1} in (v-1)^r (v-2)^{-p}.
  if (E >= 1) {
    const ExactRational sign_r = (r % 2 == 0) ? ExactRational(1) : ExactRational(-1);
    const ExactRational base = ExactRational(1) / ((p % 2 == 0 ? ExactRational(1) : ExactRational(-1)) * pow2(p));
    for (int i = 0; i <= E - 1; ++i) {
      const int j = E - 1 - i;
      ExactRational a = gbinom(R, i) * (i % 2 == 0 ? ExactRational(1) : ExactRational(-1));
      ExactRational b = gbinom(ExactRational(-p), j) * (j % 2 == 0 ? ExactRational(1) : ExactRational(-1)) * pow2(-j);
      total += sign_r * base * a * b;
    }
  }
  // u = 0: coefficient of u^{-r-1} in (u-1)^{-p} (u+1)^{-E}.
  if (r < 0) {
    const int m = -r - 1;
    const ExactRational sign_p = p % 2 == 0 ? ExactRational(1) : ExactRational(-1);
    for (int i = 0; i <= m; ++i) {
      const int j = m - i;
      ExactRational a = gbinom(ExactRational(-p), i) * (i % 2 == 0 ? ExactRational(1) : ExactRational(-1));
      total += sign_p * a * gbinom(ExactRational(-E), j);
    }
  }
  return total * pow2(E);
}

// Permutation expansion.
inline ExactRational leibniz_det(const std::vector<std::vector<ExactRational>>& m) {
  const int n = static_cast<int>(m.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  ExactRational total(0);
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    ExactRational term(inversions % 2 == 0 ? 1 : -1);
    for (int i = 0; i < n && !term.is_zero(); ++i) term *= m[i][perm[i]];
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// ---- statistics -------------------------------------------------------

// Kolmogorov distribution tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
inline double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

// One-sample KS p-value for data against a continuous CDF.
inline double ks_p_value(std::vector<double> data, const std::function<double(double)>& cdf) {
  std::sort(data.begin(), data.end());
  const double n = static_cast<double>(data.size());
  double d = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double f = cdf(data[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  const double sn = std::sqrt(n);
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

// ---- quadrature -------------------------------------------------------

// Composite Simpson rule.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int intervals) {
  if (intervals % 2) ++intervals;
  const double h = (hi - lo) / intervals;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i) sum += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

// Midpoint rule on [0, pi]^n. Integrands here are even, smooth and
// 2 pi periodic in every angle, so the rule converges geometrically.
inline double torus_midpoint(int dims, int points, const std::function<double(const std::vector<double>&)>& f) {
  const double h = std::numbers::pi / points;
  std::vector<int> idx(dims, 0);
  std::vector<double> th(dims);
  double sum = 0.0;
  while (true) {
    for (int d = 0; d < dims; ++d) th[d] = (idx[d] + 0.5) * h;
    sum += f(th);
    int d = 0;
    while (d < dims && ++idx[d] == points) idx[d++] = 0;
    if (d == dims) break;
  }
  return sum * std::pow(h, dims);
}

enum class Group { SOEven, SOOdd, USp };

// Weyl density (unnormalized) of the eigenangles.
inline double weyl_weight(Group g, const std::vector<double>& th) {
  double w = 1.0;
  for (std::size_t i = 0; i < th.size(); ++i)
    for (std::size_t j = i + 1; j < th.size(); ++j) {
      const double d = std::cos(th[i]) - std::cos(th[j]);
      w *= d * d;
    }
  for (double t : th) {
    if (g == Group::USp) w *= std::sin(t) * std::sin(t);
    if (g == Group::SOOdd) w *= std::sin(0.5 * t) * std::sin(0.5 * t);
  }
  return w;
}

// E[f(angles)] over the group with N angle pairs, by quadrature.
inline double weyl_average(Group g, int N, int points, const std::function<double(const std::vector<double>&)>& f) {
  const double norm = torus_midpoint(N, points, [&](const std::vector<double>& th) { return weyl_weight(g, th); });
  const double num = torus_midpoint(N, points, [&](const std::vector<double>& th) { return weyl_weight(g, th) * f(th); });
  return num / norm;
}

// Naive log-derivative sum, deliberately written in the textbook form.
inline double logderiv_naive(const std::vector<double>& th, double s) {
  double sum = 0.0;
  for (double t : th) sum += (2 * s - 2 * std::cos(t)) / (s * s - 2 * s * std::cos(t) + 1);
  return sum;
}

// ---- first moments from the trace expansion ---------------------------
// Lambda'/Lambda(s) = -sum_{m>=1} s^{m-1} Tr X^m, with the one-level
// densities of the three groups giving E Tr X^m in closed form.

inline double so_even_first_moment(int N, double s) {
  return -s * (1.0 - std::pow(s, 2 * N - 2)) / (1.0 - s * s);
}

inline double usp_first_moment(int N, double s) { return s * (1.0 - std::pow(s, 2 * N)) / (1.0 - s * s); }

// Without the -1/(1-s) pole.
inline double so_odd_subtracted_first_moment(int N, double s) { return (1.0 - std::pow(s, 2 * N)) / (1.0 - s * s); }

}  // namespace oracle
