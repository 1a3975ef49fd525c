#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "sparsesel/common.hpp"

namespace sparsesel {

/// Relaxation value of the k-sparse maximum eigenvalue:
///   maximize Tr(A Z)  s.t.  Tr(Z) = 1, Z PSD, sum|Z_ij| <= k,
/// solved through its dual  minimize lambda_max(A + Y) + k max|Y_ij|.
/// Every symmetric Y certifies an upper bound (weak duality), so partial
/// solves still produce usable bounds.
struct RelaxSolution {
  Eigen::MatrixXd primal_z;  // feasible: trace 1, PSD, l1 mass <= k
  Eigen::MatrixXd dual_y;
  double primal_value = 0.0;  // Tr(A primal_z)
  double dual_value = 0.0;    // lambda_max(A + dual_y) + k max|dual_y|
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<Eigen::MatrixXd> iterates;  // dual snapshots when recorded
};

struct SolverConfig {
  double epsilon = 1e-6;    // target absolute duality gap
  int max_iterations = 5000;
  double smoothing = 0.0;   // softmax temperature; 0 selects epsilon / (2 ln p)
  bool adaptive_restart = true;
  bool record_iterates = false;
  // Sign-query mode for bound bisection: stop as soon as the best dual bound
  // falls to stop_below (certified) or the best feasible primal value rises
  // above fail_above (certification impossible). NaN disables.
  double stop_below = std::numeric_limits<double>::quiet_NaN();
  double fail_above = std::numeric_limits<double>::quiet_NaN();

  void validate() const {
    if (!(epsilon > 0.0)) throw ValidationError("solver config: epsilon must be > 0");
    if (max_iterations < 1) throw ValidationError("solver config: max_iterations must be >= 1");
    if (smoothing < 0.0) throw ValidationError("solver config: smoothing must be >= 0");
  }
};

/// Accelerated proximal-gradient solve of the dual; the nonsmooth term
/// k max|Y| is handled by its proximal map (an l1-ball projection of the
/// conjugate argument). Never throws on exhausted budget: returns the best
/// iterate with converged = false.
RelaxSolution sdp_k(const Eigen::MatrixXd& a, int k, const SolverConfig& cfg = {});
RelaxSolution sdp_k(const Eigen::MatrixXd& a, int k, const SolverConfig& cfg,
                    const Eigen::MatrixXd& warm_start_y);

/// lambda_max(A + Y) + k max|Y_ij|; a certified upper bound on the relaxation
/// value (hence on the k-sparse maximum eigenvalue) for any symmetric Y.
double dual_objective(const Eigen::MatrixXd& a, int k, const Eigen::MatrixXd& y);

struct PrimalRecovery {
  Eigen::MatrixXd z;       // trace 1, PSD
  bool l1_feasible = false;  // sum|z_ij| <= k (1 + 1e-6)
};

/// Maximizer of Tr(Z (A+Y)) over the spectahedron, smoothed at temperature
/// smoothing_mu: the softmax-weighted spectral projector.
PrimalRecovery recover_primal(const Eigen::MatrixXd& a, int k, const Eigen::MatrixXd& y,
                              double smoothing_mu);

struct SmoothedLambdaMax {
  double value = 0.0;       // mu log Tr exp(W / mu); in [lambda_max, lambda_max + mu ln p]
  double lambda_max = 0.0;  // exact leading eigenvalue, from the same decomposition
  Eigen::MatrixXd gradient;  // softmax spectral projector: PSD, trace 1
};

/// Softmax smoothing of the leading eigenvalue with its gradient.
SmoothedLambdaMax smoothed_lambda_max(const Eigen::MatrixXd& w, double mu);

/// Exact Euclidean projection of the entries onto the l1 ball of the given
/// radius, via expected-linear-time threshold selection. Symmetric input
/// yields symmetric output.
Eigen::MatrixXd project_l1_ball(const Eigen::MatrixXd& w, double radius);

}  // namespace sparsesel
