#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "sparsesel/instance.hpp"
#include "sparsesel/subset_eval.hpp"

namespace sparsesel {

/// Upper-bound search outcome: best fit found plus the visited
/// (support, objective) trajectory.
struct HeuristicResult {
  FitResult best;
  std::vector<std::pair<SupportSet, double>> trajectory;
  int samples_used = 0;
  std::uint64_t rng_seed = 0;
};

/// Grows the support one index at a time, always adding the index that
/// minimizes the restricted residual (ties toward the smallest index).
/// The trajectory holds one entry per size 1..k_target.
HeuristicResult forward_greedy(const Instance& inst, int k_target);

/// Starts from the full support and removes the index whose removal
/// increases the residual least, down to k_target.
HeuristicResult backward_greedy(const Instance& inst, int k_target);

/// Samples num_samples vectors from N(0, Z), takes the top-k magnitude
/// coordinates of each as a support and keeps the best fit. Deterministic
/// given the seed; z must be PSD within tolerance.
HeuristicResult gaussian_rounding(const Instance& inst, int k, const Eigen::MatrixXd& z,
                                  int num_samples, std::uint64_t seed);

struct EigRoundingResult {
  SupportSet support;
  double value = 0.0;  // quadratic form of the 1/sqrt(k)-indicator vector
  int samples_used = 0;
};

/// Bernoulli support sampling from the leading eigenvector x of a:
/// index i enters with probability min(1, k |x_i| / ||x||_1); oversized
/// samples are pruned back to k by greedy eigenvalue deletions.
EigRoundingResult eigenvector_rounding(const Eigen::MatrixXd& a, int k, int num_samples,
                                       std::uint64_t seed);

/// Fills the start support to size k by forward steps, then applies
/// best-improving single swaps until a local minimum.
FitResult greedy_improve(const Instance& inst, int k, const SupportSet& start);

/// Randomized rounding followed by the swap improvement on its best support.
HeuristicResult enhanced_randomization(const Instance& inst, int k, const Eigen::MatrixXd& z,
                                       int num_samples, std::uint64_t seed);

}  // namespace sparsesel
