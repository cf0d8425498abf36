#include "logderiv/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace logderiv {
namespace {

constexpr double kPairTolerance = 1e-8;

Eigen::MatrixXd haar_orthogonal(int n, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = normal(gen);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const auto& r = qr.matrixQR();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  // Right multiplication by a reflection maps the det -1 coset onto SO(n)
  // and preserves Haar measure.
  if (q.determinant() < 0) q.col(n - 1) = -q.col(n - 1);
  return q;
}

// Quaternionic Gram-Schmidt: columns come in pairs (v, -J conj(v)), each
// orthogonalized twice against all previous columns.
Eigen::MatrixXcd haar_symplectic(int N, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  const int n = 2 * N;
  Eigen::MatrixXcd x(n, n);
  Eigen::VectorXcd v(n);
  for (int k = 0; k < N; ++k) {
    for (int i = 0; i < n; ++i) v(i) = std::complex<double>(normal(gen), normal(gen));
    if (k > 0) {
      for (int pass = 0; pass < 2; ++pass) {
        auto vs = x.leftCols(k);
        auto ws = x.middleCols(N, k);
        v -= vs * (vs.adjoint() * v);
        v -= ws * (ws.adjoint() * v);
      }
    }
    v /= v.norm();
    x.col(k) = v;
    x.col(N + k).head(N) = -v.tail(N).conjugate();
    x.col(N + k).tail(N) = v.head(N).conjugate();
  }
  return x;
}

// eigenvalues: ascending, values 2 cos(theta) each doubled.
bool pair_up(const std::vector<double>& eigenvalues, int skip, std::vector<double>& angles) {
  angles.clear();
  const int n = static_cast<int>(eigenvalues.size());
  std::vector<double> vals;
  vals.reserve(n);
  for (int i = 0; i < n; ++i)
    if (i != skip) vals.push_back(eigenvalues[i]);
  for (std::size_t i = 0; i + 1 < vals.size(); i += 2) {
    if (std::abs(vals[i] - vals[i + 1]) > kPairTolerance) return false;
    const double c = std::clamp(0.25 * (vals[i] + vals[i + 1]), -1.0, 1.0);
    angles.push_back(std::acos(c));
  }
  std::sort(angles.begin(), angles.end());
  return true;
}

// Spectrum of a Hermitian matrix. The complex QR iteration occasionally
// fails to converge on the exactly doubled spectra seen here; the real
// symmetric embedding [[Re, -Im], [Im, Re]] doubles every eigenvalue again
// and is used as a fallback.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() == Eigen::Success) return solver.eigenvalues();
  const Eigen::Index n = h.rows();
  Eigen::MatrixXd embed(2 * n, 2 * n);
  embed << h.real(), -h.imag(), h.imag(), h.real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> real_solver(embed, Eigen::EigenvaluesOnly);
  if (real_solver.info() != Eigen::Success) throw std::runtime_error("eigen_angles: eigensolver did not converge");
  std::vector<double> all(real_solver.eigenvalues().data(), real_solver.eigenvalues().data() + 2 * n);
  std::sort(all.begin(), all.end());
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = all[static_cast<std::size_t>(2 * i)];
  return out;
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigen_angles: eigensolver did not converge");
  return solver.eigenvalues();
}

}  // namespace

std::string_view to_string(Ensemble ensemble) {
  switch (ensemble) {
    case Ensemble::SOEven: return "so-even";
    case Ensemble::SOOdd: return "so-odd";
    case Ensemble::USp: return "usp";
  }
  return "unknown";
}

Ensemble parse_ensemble(std::string_view name) {
  if (name == "so-even") return Ensemble::SOEven;
  if (name == "so-odd") return Ensemble::SOOdd;
  if (name == "usp") return Ensemble::USp;
  throw std::invalid_argument("unknown ensemble: " + std::string(name));
}

int matrix_dimension(Ensemble ensemble, int N) { return ensemble == Ensemble::SOOdd ? 2 * N + 1 : 2 * N; }

std::mt19937_64 RngStream::engine() const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

HaarMatrix materialize_matrix(Ensemble ensemble, int N, const RngStream& rng) {
  if (N < 1) throw std::invalid_argument("materialize_matrix: N must be positive");
  auto gen = rng.engine();
  HaarMatrix out{ensemble, N, {}, {}};
  if (ensemble == Ensemble::USp) {
    out.complex = haar_symplectic(N, gen);
  } else {
    out.real = haar_orthogonal(matrix_dimension(ensemble, N), gen);
  }
  return out;
}

EigenSample eigen_angles(const HaarMatrix& matrix) {
  const Eigen::VectorXd eigenvalues = matrix.ensemble == Ensemble::USp
                                          ? hermitian_eigenvalues(matrix.complex + matrix.complex.adjoint())
                                          : symmetric_eigenvalues(matrix.real + matrix.real.transpose());
  // The solver does not guarantee ascending order.
  std::vector<double> sorted(eigenvalues.data(), eigenvalues.data() + eigenvalues.size());
  std::sort(sorted.begin(), sorted.end());
  EigenSample out{matrix.ensemble, matrix.N, {}};
  const int n = static_cast<int>(sorted.size());
  if (matrix.ensemble != Ensemble::SOOdd) {
    if (pair_up(sorted, -1, out.angles)) return out;
  } else {
    // The fixed eigenvalue +1 is normally the largest; fall back to any
    // position if that leaves an unpaired spectrum.
    for (int skip = n - 1; skip >= 0; --skip)
      if (pair_up(sorted, skip, out.angles)) return out;
  }
  throw std::runtime_error("eigen_angles: spectrum does not pair into conjugates");
}

EigenSample sample(Ensemble ensemble, int N, const RngStream& rng) {
  return eigen_angles(materialize_matrix(ensemble, N, rng));
}

}  // namespace logderiv
