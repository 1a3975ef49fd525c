#include <doctest.h>

#include "oracles.hpp"
#include "sparsesel/sparse_eig.hpp"

using namespace sparsesel;

TEST_SUITE("sparse_eig") {

TEST_CASE("lambda_max on identity and diagonal matrices") {
  CHECK(lambda_max(Eigen::MatrixXd::Identity(4, 4)).value == doctest::Approx(1.0));

  Eigen::MatrixXd d = Eigen::Vector3d(3.0, 1.0, -2.0).asDiagonal();
  EigPair pair = lambda_max(d);
  CHECK(pair.value == doctest::Approx(3.0));
  CHECK(std::abs(pair.vector[0]) == doctest::Approx(1.0));
  CHECK(std::abs(pair.vector[1]) < 1e-12);
}

TEST_CASE("lambda_max matches the power-iteration oracle") {
  for (std::uint64_t seed : {2ull, 12ull, 22ull}) {
    Eigen::MatrixXd a = oracles::random_symmetric(20, seed);
    double expected = oracles::power_iteration_lambda_max(a);
    EigPair pair = lambda_max(a);
    CHECK(pair.value == doctest::Approx(expected).epsilon(1e-8));
    CHECK(pair.vector.norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(pair.vector.dot(a * pair.vector) == doctest::Approx(pair.value).epsilon(1e-9));
  }
}

TEST_CASE("lambda_max rejects non-symmetric input") {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 2.0, 0.0, 1.0;
  CHECK_THROWS_AS(lambda_max(a), ValidationError);
}

TEST_CASE("exact sparse eigenvalue: unconstrained and 1-sparse ends") {
  Eigen::MatrixXd a = oracles::random_symmetric(8, 33);
  SparseEigResult full = sparse_eig_exact(a, 8);
  CHECK(full.value == doctest::Approx(lambda_max(a).value).epsilon(1e-12));

  SparseEigResult one = sparse_eig_exact(a, 1);
  CHECK(one.value == doctest::Approx(a.diagonal().maxCoeff()));
  CHECK(one.support.size() == 1);
}

TEST_CASE("exact sparse eigenvalue result is consistent") {
  Eigen::MatrixXd a = oracles::random_psd(10, 44);
  SparseEigResult res = sparse_eig_exact(a, 3);
  CHECK(res.support.size() == 3);
  CHECK(res.vector.norm() == doctest::Approx(1.0).epsilon(1e-10));
  for (int i = 0; i < 10; ++i)
    if (!res.support.contains(i)) CHECK(res.vector[i] == 0.0);
  CHECK(res.vector.dot(a * res.vector) == doctest::Approx(res.value).epsilon(1e-9));
}

TEST_CASE("PSD sandwich and monotonicity in k") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    int p = 5 + static_cast<int>(seed % 8);
    Eigen::MatrixXd a = oracles::random_psd(p, 100 + seed);
    double lam = lambda_max(a).value;
    double prev = 0.0;
    for (int k = 1; k <= p; ++k) {
      double value = sparse_eig_exact(a, k).value;
      CHECK(value >= static_cast<double>(k) / p * lam - 1e-9 * std::abs(lam));
      CHECK(value <= lam + 1e-9 * std::abs(lam));
      if (k > 1) CHECK(value >= prev - 1e-12);
      prev = value;
    }
  }
}

TEST_CASE("indefinite ratio bound with nonnegative diagonal") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    int p = 6 + static_cast<int>(seed % 6);
    Eigen::MatrixXd a = oracles::random_symmetric(p, 300 + seed);
    for (int i = 0; i < p; ++i) a(i, i) = std::abs(a(i, i));
    double lam = lambda_max(a).value;
    if (lam < 0.0) continue;
    for (int k = 2; k < p; ++k) {
      double ratio = static_cast<double>(k) * (k - 1) / (static_cast<double>(p) * (p - 1));
      CHECK(sparse_eig_exact(a, k).value >= ratio * lam - 1e-9 * std::abs(lam));
    }
  }
}

TEST_CASE("enumeration cap raises a capacity error") {
  Eigen::MatrixXd a = oracles::random_symmetric(30, 7);
  CHECK_THROWS_AS(sparse_eig_exact(a, 15, 1000), CapacityError);
}

TEST_CASE("backward greedy on a diagonal keeps the largest entries") {
  Eigen::MatrixXd d = Eigen::Vector4d(5.0, 4.0, 3.0, 2.0).asDiagonal();
  SparseEigResult res = backward_greedy_eig(d, 2);
  CHECK(res.support == SupportSet::from_indices({0, 1}));
  CHECK(res.value == doctest::Approx(5.0));
}

TEST_CASE("backward greedy equals lambda_max at k = p and lower-bounds the exact value") {
  Eigen::MatrixXd a = oracles::random_psd(10, 88);
  CHECK(backward_greedy_eig(a, 10).value == doctest::Approx(lambda_max(a).value).epsilon(1e-12));
  for (int k = 1; k < 10; ++k) {
    double greedy = backward_greedy_eig(a, k).value;
    double exact = sparse_eig_exact(a, k).value;
    CHECK(greedy <= exact + 1e-10 * std::max(1.0, std::abs(exact)));
    CHECK(greedy >= static_cast<double>(k) / 10 * lambda_max(a).value - 1e-9);
  }
}

}  // TEST_SUITE
