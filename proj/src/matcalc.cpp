#include "logderiv/matcalc.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace logderiv {
namespace {

ExactRational pow_int(long base, int exponent) { return pow(ExactRational(base), exponent); }

// Calls visit(parts) for every weak composition of total into parts.size()
// nonnegative parts, first part varying slowest.
template <typename Visit>
void for_each_composition(std::vector<int>& parts, std::size_t index, int remaining, Visit&& visit) {
  if (index + 1 == parts.size()) {
    parts[index] = remaining;
    visit(parts);
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    parts[index] = v;
    for_each_composition(parts, index + 1, remaining - v, visit);
  }
}

RationalMatrix binomial_matrix(int size, auto&& top, auto&& bottom) {
  RationalMatrix m(size);
  for (int i = 1; i <= size; ++i)
    for (int j = 1; j <= size; ++j) m(i - 1, j - 1) = binomial(top(i, j), bottom(i, j));
  return m;
}

void require_k(int K, int min, const char* what) {
  if (K < min) throw std::invalid_argument(std::string(what) + ": K out of range");
}

}  // namespace

ExactRational determinant(RationalMatrix m) {
  const int n = m.size();
  ExactRational det(1);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    while (pivot < n && m(pivot, col).is_zero()) ++pivot;
    if (pivot == n) return ExactRational(0);
    if (pivot != col) {
      for (int j = col; j < n; ++j) std::swap(m(pivot, j), m(col, j));
      det = -det;
    }
    const ExactRational p = m(col, col);
    det *= p;
    for (int i = col + 1; i < n; ++i) {
      if (m(i, col).is_zero()) continue;
      const ExactRational factor = m(i, col) / p;
      for (int j = col + 1; j < n; ++j) m(i, j) -= factor * m(col, j);
      m(i, col) = ExactRational(0);
    }
  }
  return det;
}

MatrixMSpec::MatrixMSpec(std::vector<int> n_in, std::vector<int> h_in, std::vector<int> e_in)
    : K(static_cast<int>(n_in.size())), n(std::move(n_in)), h(std::move(h_in)), e(std::move(e_in)) {
  if (e.empty()) e.assign(n.size(), 0);
  validate();
}

void MatrixMSpec::validate() const {
  if (K < 1) throw std::invalid_argument("MatrixMSpec: K must be positive");
  if (static_cast<int>(h.size()) != K || static_cast<int>(e.size()) != K)
    throw std::invalid_argument("MatrixMSpec: n, h, e must all have length K");
  for (int i = 1; i < K; ++i)
    if (h[i - 1] >= h[i]) throw std::invalid_argument("MatrixMSpec: h must be strictly increasing");
  for (int v : e)
    if (v < 0) throw std::invalid_argument("MatrixMSpec: e must be nonnegative");
}

std::optional<NormalizedSpec> normalize_rows(std::vector<int> n, std::vector<int> h,
                                             std::vector<int> e) {
  int sign = 1;
  // Insertion sort, counting transpositions.
  for (std::size_t i = 1; i < h.size(); ++i) {
    for (std::size_t j = i; j > 0 && h[j - 1] > h[j]; --j) {
      std::swap(h[j - 1], h[j]);
      sign = -sign;
    }
  }
  if (std::adjacent_find(h.begin(), h.end()) != h.end()) return std::nullopt;
  return NormalizedSpec{MatrixMSpec(std::move(n), std::move(h), std::move(e)), sign};
}

ExactRational entry(const MatrixMSpec& spec, int i, int j) {
  if (i < 1 || i > spec.K || j < 1 || j > spec.K) throw std::out_of_range("entry: index out of range");
  return integral_value_t0(IntegralSpec{2 * spec.n[j - 1] + spec.h[i - 1], spec.e[j - 1], spec.K});
}

RationalMatrix entry_matrix(const MatrixMSpec& spec) {
  RationalMatrix m(spec.K);
  for (int i = 1; i <= spec.K; ++i)
    for (int j = 1; j <= spec.K; ++j) m(i - 1, j - 1) = entry(spec, i, j);
  return m;
}

ExactRational det_t0(const MatrixMSpec& spec) {
  for (int j = 1; j <= spec.K; ++j)
    if (column_degree(spec, j) <= -2) return ExactRational(0);
  return determinant(entry_matrix(spec));
}

int column_degree(const MatrixMSpec& spec, int j) {
  if (j < 1 || j > spec.K) throw std::out_of_range("column_degree: index out of range");
  return 2 * spec.n[j - 1] + spec.h[spec.K - 1] - spec.K - 2 * spec.e[j - 1];
}

int matrix_degree(const MatrixMSpec& spec) {
  int total = 0;
  for (int j = 1; j <= spec.K; ++j) total += column_degree(spec, j);
  return total;
}

int secondary_column_degree(const MatrixMSpec& spec, int j) {
  if (spec.K < 2) throw std::invalid_argument("secondary_column_degree: requires K >= 2");
  if (j < 1 || j > spec.K) throw std::out_of_range("secondary_column_degree: index out of range");
  return 2 * spec.n[j - 1] + spec.h[spec.K - 2] - spec.K - 2 * spec.e[j - 1];
}

int secondary_matrix_degree(const MatrixMSpec& spec) {
  int total = 0;
  for (int j = 1; j <= spec.K; ++j) total += secondary_column_degree(spec, j);
  return total;
}

bool odd_parity(const MatrixMSpec& spec) { return (column_degree(spec, 1) % 2 + 2) % 2 == 1; }

ExactRational dt_derivative_det(const MatrixMSpec& spec, int d) {
  if (d < 0) throw std::invalid_argument("dt_derivative_det: negative order");
  if (d == 0) return det_t0(spec);
  ExactRational total(0);
  std::vector<int> parts(static_cast<std::size_t>(spec.K));
  MatrixMSpec shifted = spec;
  for_each_composition(parts, 0, d, [&](const std::vector<int>& E) {
    for (int j = 0; j < spec.K; ++j) {
      shifted.e[j] = spec.e[j] + E[j];
      if (column_degree(shifted, j + 1) <= -2) return;
    }
    ExactRational det = det_t0(shifted);
    if (!det.is_zero()) total += ExactRational(multinomial(E)) * det;
  });
  return total;
}

ExactRational dt_derivative_det(const NormalizedSpec& spec, int d) {
  return ExactRational(spec.sign) * dt_derivative_det(spec.spec, d);
}

MatrixMSpec matrix_b(int K) {
  require_k(K, 1, "matrix_b");
  std::vector<int> n(K), h(K);
  for (int i = 1; i <= K; ++i) {
    n[i - 1] = i;
    h[i - 1] = i - 2;
  }
  return MatrixMSpec(n, h);
}

MatrixMSpec matrix_c(int K) {
  require_k(K, 1, "matrix_c");
  std::vector<int> n(K), h(K);
  for (int i = 1; i <= K; ++i) {
    n[i - 1] = i;
    h[i - 1] = i < K ? i - 2 : K - 1;
  }
  return MatrixMSpec(n, h);
}

std::optional<NormalizedSpec> psi_matrix(int K, const std::vector<int>& shifts) {
  require_k(K, static_cast<int>(std::max<std::size_t>(1, shifts.size())), "psi_matrix");
  std::vector<int> n(K), h(K);
  for (int i = 1; i <= K; ++i) {
    n[i - 1] = i;
    h[i - 1] = i - 3;
  }
  const int first = K - static_cast<int>(shifts.size());
  for (std::size_t k = 0; k < shifts.size(); ++k) h[first + k] += shifts[k];
  return normalize_rows(n, h);
}

ExactRational psi_derivative(int K, const std::vector<int>& shifts, int d) {
  auto spec = psi_matrix(K, shifts);
  if (!spec) return ExactRational(0);
  return dt_derivative_det(*spec, d);
}

IdentityCheck check_lem1(int K) {
  require_k(K, 1, "lem1");
  auto det = determinant(binomial_matrix(
      K, [](int i, int j) { return 2 * j + i - 2; }, [K](int, int) { return K - 1; }));
  auto rhs = pow_int(-2, K * (K - 1) / 2);
  return {"lem1", K, det, rhs, det == rhs};
}

bool verify_lem1(int K) { return check_lem1(K).pass; }

IdentityCheck check_genlem(int n, int m) {
  require_k(n, 1, "genlem");
  if (m < 0 || m > 2) throw std::invalid_argument("genlem: m must be 0, 1 or 2");
  auto det = determinant(binomial_matrix(
      n, [m](int, int j) { return 2 * j - m; }, [n](int i, int) { return n - i; }));
  auto rhs = pow_int(-2, n * (n - 1) / 2);
  return {"genlem(m=" + std::to_string(m) + ")", n, det, rhs, det == rhs};
}

bool verify_genlem(int n, int m) { return check_genlem(n, m).pass; }

ExactRational toeplitz_det(int K) {
  require_k(K, 1, "toeplitz_det");
  RationalMatrix t(K);
  for (int i = 1; i <= K; ++i)
    for (int j = 1; j <= K; ++j)
      if (i <= j + 1) t(i - 1, j - 1) = ExactRational(BigInt(1), factorial(j + 1 - i));
  return determinant(std::move(t));
}

IdentityCheck check_toeplitz(int K) {
  auto det = toeplitz_det(K);
  ExactRational rhs(BigInt(1), factorial(K));
  return {"toeplitz", K, det, rhs, det == rhs};
}

IdentityCheck check_indep(int K) {
  const auto b = matrix_b(K);
  bool constant = true;
  for (int d = 1; d <= K; ++d) constant = constant && dt_derivative_det(b, d).is_zero();
  const auto lem1 = check_lem1(K);
  const auto det = det_t0(b);
  return {"indep", K, det, lem1.lhs, constant && det == lem1.lhs};
}

IdentityCheck check_multiplicity_lemma(int K, Parity parity) {
  require_k(K, 1, "multiplicity_lemma");
  std::vector<int> n(K), h(K);
  for (int i = 1; i <= K; ++i) {
    n[i - 1] = i;
    h[i - 1] = parity == Parity::Odd ? i - 1 : i;
  }
  const MatrixMSpec spec(n, h);
  auto lhs = dt_derivative_det(spec, K);
  auto rhs = pow_int(2, K) * determinant(binomial_matrix(
                                 K, [&h](int i, int j) { return 2 * j + h[i - 1] - 2; },
                                 [K](int, int) { return K - 1; }));
  std::string name = parity == Parity::Odd ? "multiplicity(odd)" : "multiplicity(even)";
  return {name, K, lhs, rhs, lhs == rhs};
}

bool verify_multiplicity_lemma(int K, Parity parity) { return check_multiplicity_lemma(K, parity).pass; }

DegkResult degk_check(int K) {
  require_k(K, 1, "degk_check");
  DegkResult out;
  out.K = K;
  out.value = dt_derivative_det(matrix_c(K), K);
  out.magnitude_closed_form = pow_int(2, (K * K - K + 2) / 2) *
                              ExactRational(double_factorial(2 * K - 3), factorial(K - 1));
  const int sign = ((K * K - K) / 2) % 2 == 0 ? 1 : -1;
  out.magnitude_matches = out.value == out.magnitude_closed_form || out.value == -out.magnitude_closed_form;
  out.matches_signed_form = out.value == ExactRational(sign) * out.magnitude_closed_form;
  out.matches_unsigned_form = out.value == out.magnitude_closed_form;
  return out;
}

bool PsiTable::matches() const {
  if (!antisymmetry_holds) return false;
  return std::all_of(rows.begin(), rows.end(), [](const PsiTableRow& r) { return r.is_zero == r.expected_zero; });
}

PsiTable verify_psi_table(int K) {
  require_k(K, 2, "verify_psi_table");
  PsiTable table;
  table.K = K;
  ExactRational d012, d030;
  for (int s1 = 3; s1 >= 0; --s1) {
    for (int s2 = 3 - s1; s2 >= 0; --s2) {
      const int s3 = 3 - s1 - s2;
      // With fewer than three rows the leading shifts fall off the matrix.
      std::vector<int> shifts{s1, s2, s3};
      if (K < 3) {
        if (s1 != 0) continue;
        shifts = {s2, s3};
      }
      PsiTableRow row;
      row.label = "Psi_" + std::to_string(s1) + std::to_string(s2) + std::to_string(s3);
      row.s1 = s1;
      row.s2 = s2;
      row.s3 = s3;
      row.value = psi_derivative(K, shifts, K);
      row.is_zero = row.value.is_zero();
      row.expected_zero = !((s1 == 0 && s2 == 1 && s3 == 2) || (s1 == 0 && s2 == 3 && s3 == 0));
      if (s1 == 0 && s2 == 1) d012 = row.value;
      if (s1 == 0 && s2 == 3) d030 = row.value;
      table.rows.push_back(row);
    }
  }
  table.antisymmetry_holds = d012 == -d030;
  return table;
}

ExactRational theta_det(int K) {
  require_k(K, 3, "theta_det");
  return psi_derivative(K, {0, 1, 2}, K);
}

ExactRational theta_closed_form(int K) {
  require_k(K, 3, "theta_closed_form");
  // K(K-5)/2 is an integer for every K; only its parity matters.
  const int exponent = K * (K - 5) / 2;
  const int sign = exponent % 2 == 0 ? 1 : -1;
  return ExactRational(sign) * ExactRational(double_factorial(2 * K - 5), factorial(K - 1)) *
         pow_int(2, (K * K - K + 2) / 2);
}

IdentityCheck check_theta(int K) {
  auto lhs = theta_det(K);
  auto rhs = theta_closed_form(K);
  return {"theta", K, lhs, rhs, lhs == rhs};
}

IdentityCheck check_psi1_closed_form(int K) {
  require_k(K, 1, "check_psi1_closed_form");
  auto spec = psi_matrix(K, {1});
  auto lhs = spec ? dt_derivative_det(*spec, 0) : ExactRational(0);
  auto rhs = ExactRational(K) * pow_int(-2, K * (K - 1) / 2);
  return {"det Psi_1", K, lhs, rhs, lhs == rhs};
}

}  // namespace logderiv
