#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "sparsesel/instance.hpp"
#include "sparsesel/sdp.hpp"
#include "sparsesel/support.hpp"

namespace sparsesel {

enum class BoundEngine { exact, sdp };

const char* to_string(BoundEngine engine);

/// M(rho) = X^T (y y^T - rho I) X kept as the pair (X^T y, X^T X) so the
/// bisection can reassemble cheaply for each rho.
struct MatrixAssembly {
  Eigen::VectorXd xty;
  Eigen::MatrixXd xtx;
  double y_squared_norm = 0.0;

  static MatrixAssembly from_instance(const Instance& inst);
  Eigen::MatrixXd m_of(double rho) const;
};

/// Symmetrized X^T (y y^T - rho I) X.
Eigen::MatrixXd assemble_m(const Instance& inst, double rho);

struct LowerBoundOptions {
  double tol_rho = -1.0;        // < 0 selects 1e-6 * ||y||^2
  int max_bisection_steps = 40;
  std::int64_t enumeration_cap = 2'000'000;  // exact engine
  SolverConfig sdp;                          // sdp engine; epsilon < 0 selects a scaled default

  LowerBoundOptions() { sdp.epsilon = -1.0; }
};

/// Certified lower bound on the best k-sparse residual: psi_lower <= psi(k).
struct LowerBoundResult {
  double psi_lower = 0.0;
  double rho_star = 0.0;  // smallest certified rho; psi_lower = ||y||^2 - rho_star
  BoundEngine engine = BoundEngine::exact;
  int bisection_steps = 0;
  bool infeasible_node = false;  // node bound only: forced_in larger than k
  // Certificate at rho_star: the dual matrix (sdp engine) or the maximizing
  // support of the sparse eigenvalue (exact engine).
  Eigen::MatrixXd dual_certificate;
  SupportSet witness;
  // sdp engine: relaxation solution at rho_star, reusable for rounding.
  RelaxSolution relax;
};

/// Bisection over rho in [0, ||y||^2] on the certificate predicate
/// "k-sparse maximum eigenvalue of M(rho) is <= 0"; the predicate is
/// evaluated exactly (enumeration) or through the relaxation's dual bound,
/// which keeps the result a valid lower bound at any solver accuracy.
LowerBoundResult lower_bound(const Instance& inst, int k, BoundEngine engine,
                             const LowerBoundOptions& opts = {});

/// Bound valid for every support containing forced_in, avoiding forced_out,
/// of size at most k: projects out the forced-in columns, deletes forced-out
/// columns, and bounds the reduced problem at cardinality k - |forced_in|.
/// Returns +infinity (infeasible_node) when |forced_in| > k.
LowerBoundResult node_lower_bound(const Instance& inst, int k, const SupportSet& forced_in,
                                  const SupportSet& forced_out, BoundEngine engine,
                                  const LowerBoundOptions& opts = {});

/// Single certification query: does the node bound reach cutoff? Evaluates
/// the certificate predicate once, at the threshold the cutoff corresponds
/// to, instead of bisecting. True means every consistent support has
/// restricted residual >= cutoff.
bool node_bound_at_least(const Instance& inst, int k, const SupportSet& forced_in,
                         const SupportSet& forced_out, BoundEngine engine, double cutoff,
                         const LowerBoundOptions& opts = {});

}  // namespace sparsesel
