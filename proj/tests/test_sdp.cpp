#include <doctest.h>

#include "oracles.hpp"
#include "sparsesel/sdp.hpp"
#include "sparsesel/sparse_eig.hpp"

using namespace sparsesel;

namespace {

void check_solution_invariants(const Eigen::MatrixXd& a, int k, const RelaxSolution& sol) {
  CHECK(sol.primal_z.trace() == doctest::Approx(1.0).epsilon(1e-8));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sol.primal_z, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues()[0] >= -1e-8);
  CHECK(sol.primal_z.cwiseAbs().sum() <= static_cast<double>(k) * (1.0 + 1e-6));
  CHECK(sol.dual_value >= sol.primal_value - sol.gap - 1e-12);
  CHECK(sol.dual_value == doctest::Approx(dual_objective(a, k, sol.dual_y)).epsilon(1e-10));
}

}  // namespace

TEST_SUITE("sdp") {

TEST_CASE("identity matrix solves immediately at value 1") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(6, 6);
  for (int k : {1, 3, 6}) {
    RelaxSolution sol = sdp_k(a, k);
    CHECK(sol.converged);
    CHECK(sol.dual_value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sol.primal_value == doctest::Approx(1.0).epsilon(1e-9));
    check_solution_invariants(a, k, sol);
  }
}

TEST_CASE("k = p recovers the plain leading eigenvalue") {
  for (std::uint64_t seed : {5ull, 15ull}) {
    Eigen::MatrixXd a = oracles::random_symmetric(8, seed);
    RelaxSolution sol = sdp_k(a, 8);
    CHECK(sol.converged);
    CHECK(sol.dual_value == doctest::Approx(lambda_max(a).value).epsilon(1e-6));
    check_solution_invariants(a, 8, sol);
  }
}

TEST_CASE("dual objective with zero dual is the leading eigenvalue") {
  Eigen::MatrixXd a = oracles::random_symmetric(7, 9);
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(7, 7);
  CHECK(dual_objective(a, 3, zero) == doctest::Approx(lambda_max(a).value).epsilon(1e-12));
}

TEST_CASE("diagonal case: the 1-sparse relaxation value is the top diagonal entry") {
  Eigen::MatrixXd a = Eigen::Vector2d(2.0, 1.0).asDiagonal();
  CHECK(dual_objective(a, 1, Eigen::MatrixXd::Zero(2, 2)) == doctest::Approx(2.0));
  SolverConfig cfg;
  cfg.epsilon = 1e-7;
  cfg.max_iterations = 20000;
  RelaxSolution sol = sdp_k(a, 1, cfg);
  CHECK(sol.dual_value >= 2.0 - 1e-6);
  CHECK(sol.dual_value <= 2.0 + 1e-4);
}

TEST_CASE("any symmetric dual matrix upper-bounds the converged primal value") {
  Eigen::MatrixXd a = oracles::random_symmetric(6, 21);
  SolverConfig cfg;
  cfg.epsilon = 1e-6;
  cfg.max_iterations = 20000;
  RelaxSolution sol = sdp_k(a, 2, cfg);
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
    Eigen::MatrixXd y = oracles::random_symmetric(6, 100 + seed);
    CHECK(dual_objective(a, 2, y) >= sol.primal_value - 1e-8);
  }
}

TEST_CASE("dual objective validates dimensions") {
  Eigen::MatrixXd a = oracles::random_symmetric(4, 2);
  CHECK_THROWS_AS(dual_objective(a, 2, Eigen::MatrixXd::Zero(5, 5)), ValidationError);
}

TEST_CASE("primal recovery") {
  SUBCASE("identity input gives the uniform projector") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(5, 5);
    PrimalRecovery rec = recover_primal(a, 2, Eigen::MatrixXd::Zero(5, 5), 0.01);
    CHECK((rec.z - Eigen::MatrixXd::Identity(5, 5) / 5.0).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(rec.l1_feasible);
  }
  SUBCASE("small temperature concentrates on the leading eigenvector") {
    Eigen::MatrixXd a = oracles::random_symmetric(6, 31);
    EigPair lead = lambda_max(a);
    PrimalRecovery rec = recover_primal(a, 3, Eigen::MatrixXd::Zero(6, 6), 1e-6);
    Eigen::MatrixXd expected = lead.vector * lead.vector.transpose();
    CHECK((rec.z - expected).cwiseAbs().maxCoeff() < 1e-6);
  }
  SUBCASE("converged dual yields an l1-feasible recovery") {
    Eigen::MatrixXd a = oracles::random_symmetric(6, 37);
    SolverConfig cfg;
    cfg.epsilon = 1e-7;
    cfg.max_iterations = 50000;
    RelaxSolution sol = sdp_k(a, 2, cfg);
    PrimalRecovery rec = recover_primal(a, 2, sol.dual_y, cfg.epsilon / (2.0 * std::log(6.0)));
    // Feasibility within the rounding slack; exactness only holds at the
    // true optimum, so allow the repair margin.
    CHECK(rec.z.cwiseAbs().sum() <= 2.0 * (1.0 + 1e-2));
  }
}

TEST_CASE("l1 ball projection matches the full-sort reference") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(700 + seed);
    int rows = 1 + rng.uniform_int(8);
    int cols = 1 + rng.uniform_int(8);
    Eigen::MatrixXd w(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) w(i, j) = 3.0 * rng.normal();
    double radius = 0.1 + 4.0 * rng.uniform01();
    Eigen::MatrixXd got = project_l1_ball(w, radius);
    Eigen::MatrixXd expected = oracles::l1_projection_reference(w, radius);
    CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-11);
    CHECK(got.cwiseAbs().sum() <= radius * (1.0 + 1e-10) + 1e-12);
  }
}

TEST_CASE("l1 ball projection keeps symmetric matrices symmetric") {
  Eigen::MatrixXd w = oracles::random_symmetric(7, 77);
  Eigen::MatrixXd got = project_l1_ball(w, 1.5);
  CHECK((got - got.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("smoothed gradient matches central finite differences") {
  const int p = 5;
  const double mu = 0.1;
  const double h = 1e-5;
  Eigen::MatrixXd a = oracles::random_symmetric(p, 91);
  Eigen::MatrixXd y = 0.5 * oracles::random_symmetric(p, 92);
  SmoothedLambdaMax sm = smoothed_lambda_max(a + y, mu);

  auto value_at = [&](const Eigen::MatrixXd& delta) {
    return smoothed_lambda_max(a + y + delta, mu).value;
  };

  for (int i = 0; i < p; ++i) {
    for (int j = i; j < p; ++j) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(p, p);
      e(i, j) = e(j, i) = 1.0;
      double fd = (value_at(h * e) - value_at(-h * e)) / (2.0 * h);
      double analytic = (i == j) ? sm.gradient(i, i) : 2.0 * sm.gradient(i, j);
      CHECK(std::abs(fd - analytic) <= 1e-5 * std::max(1.0, std::abs(analytic)));
    }
  }
  CHECK(sm.value >= sm.lambda_max - 1e-12);
  CHECK(sm.value <= sm.lambda_max + mu * std::log(static_cast<double>(p)) + 1e-12);
}

TEST_CASE("every recorded iterate stays above the exact sparse eigenvalue") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    int p = 6 + static_cast<int>(seed % 5);
    int k = 2 + static_cast<int>(seed % 3);
    Eigen::MatrixXd a = oracles::random_symmetric(p, 500 + seed);
    double exact = sparse_eig_exact(a, k).value;
    SolverConfig cfg;
    cfg.epsilon = 1e-5;
    cfg.max_iterations = 500;
    cfg.record_iterates = true;
    RelaxSolution sol = sdp_k(a, k, cfg);
    REQUIRE(!sol.iterates.empty());
    // Every iterate is a sound bound, and the best-so-far sequence of dual
    // objectives never increases.
    std::vector<double> running_best;
    for (const Eigen::MatrixXd& y : sol.iterates) {
      double value = dual_objective(a, k, y);
      CHECK(value >= exact - 1e-9 * (1.0 + std::abs(exact)));
      running_best.push_back(running_best.empty() ? value
                                                  : std::min(running_best.back(), value));
    }
    for (std::size_t i = 1; i < running_best.size(); ++i)
      CHECK(running_best[i] <= running_best[i - 1] + 1e-15);
    // The first iterate is the zero start, whose bound the solver can only improve.
    CHECK(sol.dual_value <= dual_objective(a, k, sol.iterates.front()) + 1e-9);
    CHECK(sol.dual_value >= exact - 1e-9 * (1.0 + std::abs(exact)));
  }
}

TEST_CASE("converges to the target gap on moderate sizes") {
  for (int p : {20, 50}) {
    Eigen::MatrixXd a = oracles::random_symmetric(p, 1000 + static_cast<std::uint64_t>(p));
    double lam = lambda_max(a).value;
    SolverConfig cfg;
    cfg.epsilon = 1e-4 * (1.0 + std::abs(lam));
    cfg.max_iterations = 5000;
    RelaxSolution sol = sdp_k(a, 3, cfg);
    CHECK(sol.converged);
    CHECK(sol.gap <= cfg.epsilon);
    check_solution_invariants(a, 3, sol);
  }
}

TEST_CASE("budget exhaustion reports an unconverged best iterate") {
  Eigen::MatrixXd a = oracles::random_symmetric(12, 1234);
  SolverConfig cfg;
  cfg.epsilon = 1e-12;  // unreachable
  cfg.max_iterations = 5;
  RelaxSolution sol = sdp_k(a, 3, cfg);
  CHECK(!sol.converged);
  CHECK(sol.iterations == 5);
  CHECK(sol.dual_value >= sparse_eig_exact(a, 3).value - 1e-9);
}

TEST_CASE("sign-query early exits") {
  Eigen::MatrixXd a = oracles::random_psd(8, 555);
  // Shift so the matrix is clearly negative definite: bound certifiable.
  Eigen::MatrixXd negdef = a - (lambda_max(a).value + 1.0) * Eigen::MatrixXd::Identity(8, 8);
  SolverConfig cfg;
  cfg.stop_below = 0.0;
  RelaxSolution sol = sdp_k(negdef, 3, cfg);
  CHECK(sol.dual_value <= 0.0);
  CHECK(sol.iterations <= 1);

  // Clearly positive: certification must fail fast through the primal side.
  Eigen::MatrixXd posdef = a + Eigen::MatrixXd::Identity(8, 8);
  cfg = SolverConfig();
  cfg.fail_above = 0.0;
  RelaxSolution sol2 = sdp_k(posdef, 3, cfg);
  CHECK(sol2.primal_value > 0.0);
  CHECK(sol2.iterations <= 50);
}

}  // TEST_SUITE
