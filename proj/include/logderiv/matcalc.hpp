#pragma once

#include <optional>
#include <string>
#include <vector>

#include "logderiv/combinatorics.hpp"
#include "logderiv/residue.hpp"

namespace logderiv {

// Dense square matrix of exact rationals, row-major.
class RationalMatrix {
 public:
  explicit RationalMatrix(int size) : size_(size), data_(static_cast<std::size_t>(size) * size) {}

  int size() const { return size_; }
  // 0-based access.
  ExactRational& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * size_ + j]; }
  const ExactRational& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * size_ + j];
  }

 private:
  int size_;
  std::vector<ExactRational> data_;
};

// Exact determinant by Gaussian elimination with nonzero pivoting.
ExactRational determinant(RationalMatrix m);

// A matrix of the class M: entry (i, j) is I(2 n_j + h_i, e_j) at ambient
// size K, with strictly increasing row offsets h.
struct MatrixMSpec {
  int K = 1;
  std::vector<int> n;
  std::vector<int> h;
  std::vector<int> e;

  // e may be left empty, meaning all zeros.
  MatrixMSpec(std::vector<int> n_in, std::vector<int> h_in, std::vector<int> e_in = {});

  // Throws std::invalid_argument on size mismatch, non-increasing h or
  // negative e.
  void validate() const;
};

// Row offsets in arbitrary order, reduced to a MatrixMSpec by sorting rows.
// det(original) = sign * det(spec).
struct NormalizedSpec {
  MatrixMSpec spec;
  int sign;
};

// Returns nullopt when two offsets coincide (the determinant vanishes
// identically).
std::optional<NormalizedSpec> normalize_rows(std::vector<int> n, std::vector<int> h,
                                             std::vector<int> e = {});

// 1-based indices, as in the matrix definition. Throws std::out_of_range.
ExactRational entry(const MatrixMSpec& spec, int i, int j);
RationalMatrix entry_matrix(const MatrixMSpec& spec);

ExactRational det_t0(const MatrixMSpec& spec);

// D_j = 2 n_j + h_K - K - 2 e_j and D = sum D_j.
int column_degree(const MatrixMSpec& spec, int j);
int matrix_degree(const MatrixMSpec& spec);
// Same with h_{K-1}. Throws std::invalid_argument when K == 1.
int secondary_column_degree(const MatrixMSpec& spec, int j);
int secondary_matrix_degree(const MatrixMSpec& spec);

// All column degrees odd (true) or even (false).
bool odd_parity(const MatrixMSpec& spec);

// d-th t-derivative of det M at t = 0, summed over weak compositions of d
// in lexicographic order.
ExactRational dt_derivative_det(const MatrixMSpec& spec, int d);
ExactRational dt_derivative_det(const NormalizedSpec& spec, int d);

// Named matrices. All use n_j = j and e = 0.
MatrixMSpec matrix_b(int K);  // h_i = i - 2
MatrixMSpec matrix_c(int K);  // h_i = i - 2 for i < K, h_K = K - 1
// h_i = i - 3 with shifts[k] added to row K - |shifts| + 1 + k.
// psi_matrix(K, {}) is Psi_0, psi_matrix(K, {1}) is Psi_1.
std::optional<NormalizedSpec> psi_matrix(int K, const std::vector<int>& shifts);

// Order-d t-derivative of det psi_matrix(K, shifts); zero for coincident rows.
ExactRational psi_derivative(int K, const std::vector<int>& shifts, int d);

// One exact identity with both sides.
struct IdentityCheck {
  std::string name;
  int K;
  ExactRational lhs;
  ExactRational rhs;
  bool pass;
};

// det[C(2j+i-2, K-1)] = (-2)^{K(K-1)/2}.
IdentityCheck check_lem1(int K);
bool verify_lem1(int K);

// det[C(2j-m, n-i)] = (-2)^{n(n-1)/2}, m in {0, 1, 2}.
IdentityCheck check_genlem(int n, int m);
bool verify_genlem(int n, int m);

// T_{ij} = 1/(j+1-i)! for i <= j+1.
ExactRational toeplitz_det(int K);
IdentityCheck check_toeplitz(int K);

// B is independent of t up to order K and det B equals the lem1 determinant.
IdentityCheck check_indep(int K);

enum class Parity { Odd, Even };
// h_i = i - 1 (odd) or h_i = i (even); d^K det = 2^K det[C(2j+h_i-2, K-1)].
IdentityCheck check_multiplicity_lemma(int K, Parity parity);
bool verify_multiplicity_lemma(int K, Parity parity);

// d^K/dt^K det C, against the closed form carrying the sign
// (-1)^{(K^2-K)/2}.
struct DegkResult {
  int K;
  ExactRational value;
  ExactRational magnitude_closed_form;  // 2^{(K^2-K+2)/2} (2K-3)!!/(K-1)!
  bool magnitude_matches;
  bool matches_signed_form;
  bool matches_unsigned_form;
};
DegkResult degk_check(int K);

struct PsiTableRow {
  std::string label;
  int s1, s2, s3;
  ExactRational value;
  bool is_zero;
  bool expected_zero;
};
struct PsiTable {
  int K;
  std::vector<PsiTableRow> rows;
  bool antisymmetry_holds;  // d^K det Psi_012 = -d^K det Psi_030
  bool matches() const;
};
// Throws std::invalid_argument for K < 2.
PsiTable verify_psi_table(int K);

// Brute-force d^K det Psi_012 and its closed form.
ExactRational theta_det(int K);
ExactRational theta_closed_form(int K);
IdentityCheck check_theta(int K);

// Small-matrix values: det Psi_0 = -2, det Psi_1 = -4, d/dt det Psi_02 = -4
// at K = 2, and det Psi_1 = K (-2)^{K(K-1)/2}.
IdentityCheck check_psi1_closed_form(int K);

}  // namespace logderiv
