#include "sparsesel/subset_eval.hpp"

#include <limits>
#include <string>

namespace sparsesel {

FitResult evaluate(const Instance& inst, const SupportSet& support) {
  if (!support.is_valid_for(inst.p()))
    throw ValidationError("evaluate: support " + support.to_string() + " out of range for p=" +
                          std::to_string(inst.p()));

  FitResult result;
  result.support = support;
  result.coefficients = Eigen::VectorXd::Zero(inst.p());
  if (support.empty()) {
    result.objective = inst.y.squaredNorm();
    return result;
  }

  const int m = support.size();
  Eigen::MatrixXd cols(inst.n(), m);
  for (int j = 0; j < m; ++j) cols.col(j) = inst.x.col(support.indices()[j]);

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(cols.rows(), cols.cols());
  // Rank tolerance max(n, m) * eps relative to the largest pivot.
  cod.setThreshold(static_cast<double>(std::max(inst.n(), m)) *
                   std::numeric_limits<double>::epsilon());
  cod.compute(cols);
  Eigen::VectorXd w = cod.solve(inst.y);

  for (int j = 0; j < m; ++j) result.coefficients[support.indices()[j]] = w[j];
  result.objective = (inst.y - cols * w).squaredNorm();
  return result;
}

std::vector<FitResult> evaluate_batch(const Instance& inst,
                                      const std::vector<SupportSet>& supports) {
  std::vector<FitResult> results;
  results.reserve(supports.size());
  for (std::size_t i = 0; i < supports.size(); ++i) {
    if (!supports[i].is_valid_for(inst.p()))
      throw ValidationError("evaluate_batch: support at position " + std::to_string(i) +
                            " out of range for p=" + std::to_string(inst.p()));
    results.push_back(evaluate(inst, supports[i]));
  }
  return results;
}

}  // namespace sparsesel
