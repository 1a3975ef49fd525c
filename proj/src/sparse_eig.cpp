#include "sparsesel/sparse_eig.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>
#include <vector>

namespace sparsesel {

namespace {

void canonicalize_sign(Eigen::VectorXd& v) {
  int arg = 0;
  double best = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > best) {
      best = std::abs(v[i]);
      arg = i;
    }
  }
  if (v[arg] < 0.0) v = -v;
}

// Leading eigenvalue of a small symmetric matrix; closed-form paths for the
// sizes that dominate the enumeration loops.
double submatrix_lambda_max(const Eigen::MatrixXd& s) {
  const int m = static_cast<int>(s.rows());
  if (m == 1) return s(0, 0);
  if (m == 2) {
    double half_tr = 0.5 * (s(0, 0) + s(1, 1));
    double half_diff = 0.5 * (s(0, 0) - s(1, 1));
    return half_tr + std::hypot(half_diff, s(0, 1));
  }
  if (m == 3) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
    es.computeDirect(s, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[2];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[m - 1];
}

Eigen::MatrixXd principal_submatrix(const Eigen::MatrixXd& a, const std::vector<int>& idx) {
  const int m = static_cast<int>(idx.size());
  Eigen::MatrixXd s(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) s(r, c) = a(idx[r], idx[c]);
  return s;
}

std::int64_t binomial_capped(int p, int k, std::int64_t cap) {
  // Returns C(p, k) or cap + 1 once it exceeds cap.
  double acc = 1.0;
  for (int i = 1; i <= k; ++i) {
    acc *= static_cast<double>(p - k + i) / i;
    if (acc > static_cast<double>(cap)) return cap + 1;
  }
  return static_cast<std::int64_t>(acc + 0.5);
}

}  // namespace

void require_symmetric(const Eigen::MatrixXd& a, const char* where) {
  if (a.rows() != a.cols())
    throw ValidationError(std::string(where) + ": matrix is not square (" +
                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + ")");
  double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale)
    throw ValidationError(std::string(where) + ": matrix is not symmetric (max asymmetry " +
                          std::to_string(asym) + ")");
  if (!a.allFinite()) throw ValidationError(std::string(where) + ": non-finite entry");
}

EigPair lambda_max(const Eigen::MatrixXd& a) {
  require_symmetric(a, "lambda_max");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const int p = static_cast<int>(a.rows());
  EigPair out;
  out.value = es.eigenvalues()[p - 1];
  out.vector = es.eigenvectors().col(p - 1);
  canonicalize_sign(out.vector);
  return out;
}

SparseEigResult sparse_eig_exact(const Eigen::MatrixXd& a, int k, std::int64_t enumeration_cap) {
  require_symmetric(a, "sparse_eig_exact");
  const int p = static_cast<int>(a.rows());
  if (k < 1 || k > p)
    throw ValidationError("sparse_eig_exact: k=" + std::to_string(k) + " out of [1, " +
                          std::to_string(p) + "]");
  std::int64_t count = binomial_capped(p, k, enumeration_cap);
  if (count > enumeration_cap)
    throw CapacityError("sparse_eig_exact: C(" + std::to_string(p) + "," + std::to_string(k) +
                        ") exceeds the enumeration cap " + std::to_string(enumeration_cap) +
                        "; use the semidefinite relaxation instead");

  SparseEigResult best;
  best.value = -std::numeric_limits<double>::infinity();

  if (k == 1) {
    int arg = 0;
    for (int i = 1; i < p; ++i)
      if (a(i, i) > a(arg, arg)) arg = i;
    best.value = a(arg, arg);
    best.support = SupportSet::from_indices({arg});
    best.vector = Eigen::VectorXd::Zero(p);
    best.vector[arg] = 1.0;
    return best;
  }

  std::vector<int> combo(k);
  for (int i = 0; i < k; ++i) combo[i] = i;
  std::vector<int> best_combo;
  while (true) {
    double value = submatrix_lambda_max(principal_submatrix(a, combo));
    if (value > best.value) {  // strict: first (lexicographically smallest) wins ties
      best.value = value;
      best_combo = combo;
    }
    // next lexicographic combination
    int i = k - 1;
    while (i >= 0 && combo[i] == p - k + i) --i;
    if (i < 0) break;
    ++combo[i];
    for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
  }

  best.support = SupportSet::from_indices(best_combo);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(principal_submatrix(a, best_combo));
  Eigen::VectorXd sub_vec = es.eigenvectors().col(k - 1);
  canonicalize_sign(sub_vec);
  best.vector = Eigen::VectorXd::Zero(p);
  for (int j = 0; j < k; ++j) best.vector[best_combo[j]] = sub_vec[j];
  return best;
}

SparseEigResult backward_greedy_eig(const Eigen::MatrixXd& a, int k) {
  require_symmetric(a, "backward_greedy_eig");
  const int p = static_cast<int>(a.rows());
  if (k < 1 || k > p)
    throw ValidationError("backward_greedy_eig: k=" + std::to_string(k) + " out of [1, " +
                          std::to_string(p) + "]");

  std::vector<int> kept(p);
  for (int i = 0; i < p; ++i) kept[i] = i;

  while (static_cast<int>(kept.size()) > k) {
    int best_pos = -1;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int pos = 0; pos < static_cast<int>(kept.size()); ++pos) {
      std::vector<int> trial = kept;
      trial.erase(trial.begin() + pos);
      double value = trial.size() == 1 ? a(trial[0], trial[0])
                                       : submatrix_lambda_max(principal_submatrix(a, trial));
      // >= drops the largest tied index, keeping the lexicographically
      // smallest support.
      if (value >= best_value) {
        best_value = value;
        best_pos = pos;
      }
    }
    kept.erase(kept.begin() + best_pos);
  }

  SparseEigResult out;
  out.support = SupportSet::from_indices(kept);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(principal_submatrix(a, kept));
  out.value = es.eigenvalues()[static_cast<int>(kept.size()) - 1];
  Eigen::VectorXd sub_vec = es.eigenvectors().col(static_cast<int>(kept.size()) - 1);
  canonicalize_sign(sub_vec);
  out.vector = Eigen::VectorXd::Zero(p);
  for (std::size_t j = 0; j < kept.size(); ++j) out.vector[kept[j]] = sub_vec[static_cast<int>(j)];
  return out;
}

}  // namespace sparsesel
