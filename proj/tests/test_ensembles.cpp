#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "logderiv/ensembles.hpp"
#include "oracles.hpp"

using namespace logderiv;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> pooled_angles(Ensemble e, int N, int draws, std::uint64_t seed) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(draws) * N);
  for (int i = 0; i < draws; ++i) {
    const auto s = sample(e, N, {seed, static_cast<std::uint64_t>(i)});
    out.insert(out.end(), s.angles.begin(), s.angles.end());
  }
  return out;
}

// Angles in [0, pi] of the eigenvalues with nonnegative imaginary part, from
// the general (non-symmetric) eigensolver.
std::vector<double> upper_half_angles(const Eigen::VectorXcd& eig, bool drop_one) {
  std::vector<double> out;
  std::vector<std::complex<double>> values(eig.data(), eig.data() + eig.size());
  if (drop_one) {
    auto it = std::min_element(values.begin(), values.end(), [](auto x, auto y) {
      return std::abs(x - 1.0) < std::abs(y - 1.0);
    });
    values.erase(it);
  }
  for (auto z : values)
    if (z.imag() > 0 || (z.imag() == 0 && std::abs(z.real() + 1) < 1e-6 && out.size() < values.size() / 2))
      out.push_back(std::arg(z));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("names and dimensions") {
  for (Ensemble e : {Ensemble::SOEven, Ensemble::SOOdd, Ensemble::USp}) CHECK(parse_ensemble(to_string(e)) == e);
  CHECK(to_string(Ensemble::SOEven) == "so-even");
  CHECK_THROWS_AS(parse_ensemble("gue"), std::invalid_argument);
  CHECK(matrix_dimension(Ensemble::SOEven, 5) == 10);
  CHECK(matrix_dimension(Ensemble::SOOdd, 5) == 11);
  CHECK(matrix_dimension(Ensemble::USp, 5) == 10);
}

TEST_CASE("N must be positive") {
  for (Ensemble e : {Ensemble::SOEven, Ensemble::SOOdd, Ensemble::USp}) {
    CHECK_THROWS_AS(sample(e, 0, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(materialize_matrix(e, -1, {1, 0}), std::invalid_argument);
  }
}

TEST_CASE("group membership") {
  for (int i = 0; i < 20; ++i) {
    const RngStream rng{7, static_cast<std::uint64_t>(i)};
    for (int N : {1, 2, 5}) {
      const auto so = materialize_matrix(Ensemble::SOEven, N, rng);
      const auto I2 = Eigen::MatrixXd::Identity(2 * N, 2 * N);
      CHECK((so.real.transpose() * so.real - I2).norm() < 1e-10);
      CHECK(std::abs(so.real.determinant() - 1.0) < 1e-10);

      const auto odd = materialize_matrix(Ensemble::SOOdd, N, rng);
      const auto I3 = Eigen::MatrixXd::Identity(2 * N + 1, 2 * N + 1);
      CHECK((odd.real.transpose() * odd.real - I3).norm() < 1e-10);
      CHECK(std::abs(odd.real.determinant() - 1.0) < 1e-10);
      Eigen::EigenSolver<Eigen::MatrixXd> es(odd.real);
      double closest = 1e300;
      for (int k = 0; k < es.eigenvalues().size(); ++k) closest = std::min(closest, std::abs(es.eigenvalues()[k] - 1.0));
      CHECK(closest < 1e-8);

      const auto usp = materialize_matrix(Ensemble::USp, N, rng);
      const Eigen::MatrixXcd X = usp.complex;
      Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
      J.topRightCorner(N, N) = Eigen::MatrixXcd::Identity(N, N);
      J.bottomLeftCorner(N, N) = -Eigen::MatrixXcd::Identity(N, N);
      CHECK((X.adjoint() * X - Eigen::MatrixXcd::Identity(2 * N, 2 * N)).norm() < 1e-10);
      CHECK((X.transpose() * J * X - J).norm() < 1e-10);
    }
  }
}

TEST_CASE("angles agree with a general eigensolver") {
  for (int i = 0; i < 10; ++i) {
    const RngStream rng{11, static_cast<std::uint64_t>(i)};
    for (int N : {1, 3, 6}) {
      const auto so = materialize_matrix(Ensemble::SOEven, N, rng);
      Eigen::EigenSolver<Eigen::MatrixXd> es(so.real);
      const auto want_so = upper_half_angles(es.eigenvalues(), false);
      const auto got_so = eigen_angles(so).angles;
      REQUIRE(want_so.size() == got_so.size());
      for (std::size_t k = 0; k < got_so.size(); ++k) CHECK(std::abs(want_so[k] - got_so[k]) < 1e-7);

      const auto odd = materialize_matrix(Ensemble::SOOdd, N, rng);
      Eigen::EigenSolver<Eigen::MatrixXd> eo(odd.real);
      const auto want_odd = upper_half_angles(eo.eigenvalues(), true);
      const auto got_odd = eigen_angles(odd).angles;
      REQUIRE(want_odd.size() == got_odd.size());
      for (std::size_t k = 0; k < got_odd.size(); ++k) CHECK(std::abs(want_odd[k] - got_odd[k]) < 1e-7);

      const auto usp = materialize_matrix(Ensemble::USp, N, rng);
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eu(usp.complex);
      const auto want_usp = upper_half_angles(eu.eigenvalues(), false);
      const auto got_usp = eigen_angles(usp).angles;
      REQUIRE(want_usp.size() == got_usp.size());
      for (std::size_t k = 0; k < got_usp.size(); ++k) CHECK(std::abs(want_usp[k] - got_usp[k]) < 1e-7);
    }
  }
}

TEST_CASE("angles are sorted and lie in [0, pi]") {
  for (Ensemble e : {Ensemble::SOEven, Ensemble::SOOdd, Ensemble::USp}) {
    const auto s = sample(e, 30, {3, 9});
    CHECK(s.N == 30);
    CHECK(s.ensemble == e);
    REQUIRE(s.angles.size() == 30);
    CHECK(std::is_sorted(s.angles.begin(), s.angles.end()));
    CHECK(s.angles.front() >= 0.0);
    CHECK(s.angles.back() <= kPi);
  }
}

TEST_CASE("streams are reproducible and distinct") {
  for (Ensemble e : {Ensemble::SOEven, Ensemble::SOOdd, Ensemble::USp}) {
    const auto a = sample(e, 8, {42, 5});
    const auto b = sample(e, 8, {42, 5});
    const auto c = sample(e, 8, {42, 6});
    const auto d = sample(e, 8, {43, 5});
    CHECK(a.angles == b.angles);
    CHECK(a.angles != c.angles);
    CHECK(a.angles != d.angles);
  }
}

TEST_CASE("SO(2) angle is uniform") {
  const auto angles = pooled_angles(Ensemble::SOEven, 1, 10000, 101);
  const double p = oracle::ks_p_value(angles, [](double t) { return t / kPi; });
  INFO("p=" << p);
  CHECK(p > 1e-3);
}

TEST_CASE("USp(2) angle follows (2/pi) sin^2") {
  const auto density = [](double t) { return 2.0 / kPi * std::sin(t) * std::sin(t); };
  const auto cdf = [&](double t) { return oracle::simpson(density, 0.0, t, 200); };
  CHECK(std::abs(cdf(kPi) - 1.0) < 1e-10);
  const auto angles = pooled_angles(Ensemble::USp, 1, 10000, 103);
  const double p = oracle::ks_p_value(angles, cdf);
  INFO("p=" << p);
  CHECK(p > 1e-3);
}

TEST_CASE("SO(3) angle follows (1/pi)(1 - cos)") {
  const auto angles = pooled_angles(Ensemble::SOOdd, 1, 10000, 107);
  const double p = oracle::ks_p_value(angles, [](double t) { return (t - std::sin(t)) / kPi; });
  INFO("p=" << p);
  CHECK(p > 1e-3);
}

TEST_CASE("two-angle marginals match the Weyl density") {
  // E[cos theta_1 + cos theta_2] and E[cos^2 + cos^2] by quadrature versus sampling.
  const int draws = 20000;
  for (auto [e, g] : {std::pair{Ensemble::SOEven, oracle::Group::SOEven}, std::pair{Ensemble::USp, oracle::Group::USp},
                      std::pair{Ensemble::SOOdd, oracle::Group::SOOdd}}) {
    const double m1 = oracle::weyl_average(g, 2, 64, [](const std::vector<double>& th) {
      return std::cos(th[0]) + std::cos(th[1]);
    });
    const double m2 = oracle::weyl_average(g, 2, 64, [](const std::vector<double>& th) {
      return std::cos(th[0]) * std::cos(th[0]) + std::cos(th[1]) * std::cos(th[1]);
    });
    double s1 = 0, s2 = 0, q1 = 0, q2 = 0;
    for (int i = 0; i < draws; ++i) {
      const auto s = sample(e, 2, {211, static_cast<std::uint64_t>(i)});
      const double c1 = std::cos(s.angles[0]) + std::cos(s.angles[1]);
      const double c2 = std::cos(s.angles[0]) * std::cos(s.angles[0]) + std::cos(s.angles[1]) * std::cos(s.angles[1]);
      s1 += c1;
      q1 += c1 * c1;
      s2 += c2;
      q2 += c2 * c2;
    }
    const double mean1 = s1 / draws, mean2 = s2 / draws;
    const double se1 = std::sqrt((q1 / draws - mean1 * mean1) / draws);
    const double se2 = std::sqrt((q2 / draws - mean2 * mean2) / draws);
    INFO(to_string(e) << " m1=" << m1 << " mc=" << mean1 << " m2=" << m2 << " mc=" << mean2);
    CHECK(std::abs(mean1 - m1) < 4 * se1);
    CHECK(std::abs(mean2 - m2) < 4 * se2);
  }
}

TEST_CASE("repulsion from the symmetry point") {
  // First bin of the scaled angles N theta / pi against a uniform baseline.
  const int N = 20, draws = 5000;
  const double width = 0.1;
  const double n_angles = static_cast<double>(N) * draws;
  const double p0 = width / N;
  const double mean = n_angles * p0, sd = std::sqrt(n_angles * p0 * (1 - p0));
  auto first_bin = [&](Ensemble e) {
    int count = 0;
    for (double t : pooled_angles(e, N, draws, 401))
      if (N * t / kPi < width) ++count;
    return count;
  };
  const int usp = first_bin(Ensemble::USp);
  const int so = first_bin(Ensemble::SOEven);
  INFO("baseline=" << mean << " usp=" << usp << " so-even=" << so);
  CHECK(usp < mean - 3 * sd);
  CHECK(so > mean + 3 * sd);
}
