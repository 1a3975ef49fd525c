#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "sparsesel/support.hpp"

namespace sparsesel {

struct EigPair {
  double value = 0.0;
  Eigen::VectorXd vector;
};

/// A k-sparse eigenpair: value, realizing support of size <= k, and a unit
/// vector supported on it (embedded in R^p).
struct SparseEigResult {
  double value = 0.0;
  SupportSet support;
  Eigen::VectorXd vector;
};

/// Throws ValidationError unless a is symmetric to 1e-12 relative.
void require_symmetric(const Eigen::MatrixXd& a, const char* where);

/// Leading eigenpair of a symmetric matrix. The eigenvector sign is
/// canonicalized (largest-magnitude entry positive) for reproducible output.
EigPair lambda_max(const Eigen::MatrixXd& a);

/// Exact k-sparse maximum eigenvalue: the maximum leading eigenvalue over all
/// size-k principal submatrices, found by enumeration. Refuses (CapacityError)
/// when the number of submatrices exceeds enumeration_cap. Ties are broken
/// toward the lexicographically smallest support.
SparseEigResult sparse_eig_exact(const Eigen::MatrixXd& a, int k,
                                 std::int64_t enumeration_cap = 2'000'000);

/// Feasible lower bound on the k-sparse maximum eigenvalue: starting from the
/// full support, repeatedly deletes the index whose removal maximizes the
/// leading eigenvalue of the remaining principal submatrix (ties toward the
/// smallest index) until size k.
SparseEigResult backward_greedy_eig(const Eigen::MatrixXd& a, int k);

}  // namespace sparsesel
