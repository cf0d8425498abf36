#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace logderiv {

enum class Ensemble { SOEven, SOOdd, USp };

// "so-even", "so-odd", "usp".
std::string_view to_string(Ensemble ensemble);
// Throws std::invalid_argument for unknown names.
Ensemble parse_ensemble(std::string_view name);

// 2N for SO(2N) and USp(2N), 2N + 1 for SO(2N + 1).
int matrix_dimension(Ensemble ensemble, int N);

// Identifies one independent random stream. The engine is seeded from both
// words, so (seed, stream) fully determines every draw.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  std::mt19937_64 engine() const;
};

// Eigenangles theta_1 <= ... <= theta_N in [0, pi] of one Haar draw. The
// eigenvalues are e^{+-i theta_n}, plus +1 for SO(2N+1) (not stored).
struct EigenSample {
  Ensemble ensemble;
  int N;
  std::vector<double> angles;
};

// A materialized group element. Orthogonal draws fill `real`, symplectic
// draws fill `complex` in the basis where J = [[0, I], [-I, 0]].
struct HaarMatrix {
  Ensemble ensemble;
  int N;
  Eigen::MatrixXd real;
  Eigen::MatrixXcd complex;
};

// Haar-distributed matrix from the named ensemble. Throws
// std::invalid_argument when N < 1.
HaarMatrix materialize_matrix(Ensemble ensemble, int N, const RngStream& rng);

// Folds the spectrum to [0, pi] by pairing conjugate eigenvalues. Throws
// std::runtime_error if the spectrum does not pair up to 1e-8.
EigenSample eigen_angles(const HaarMatrix& matrix);

EigenSample sample(Ensemble ensemble, int N, const RngStream& rng);

}  // namespace logderiv
