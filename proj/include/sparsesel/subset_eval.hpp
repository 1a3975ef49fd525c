#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sparsesel/instance.hpp"
#include "sparsesel/support.hpp"

namespace sparsesel {

/// Least-squares fit restricted to a support set: the residual sum of squares
/// min over w supported on the set of ||y - Xw||^2, and the minimizer.
struct FitResult {
  double objective = 0.0;
  Eigen::VectorXd coefficients;  // length p, zero outside the support
  SupportSet support;
};

/// Solves the restricted least squares via a rank-revealing orthogonal
/// factorization of the selected columns; returns the minimum-norm solution
/// when those columns are rank deficient.
FitResult evaluate(const Instance& inst, const SupportSet& support);

/// Elementwise identical to evaluate, order preserved. An invalid support
/// raises a ValidationError naming its position in the batch.
std::vector<FitResult> evaluate_batch(const Instance& inst,
                                      const std::vector<SupportSet>& supports);

}  // namespace sparsesel
