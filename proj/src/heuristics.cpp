#include "sparsesel/heuristics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparsesel/sparse_eig.hpp"

namespace sparsesel {

namespace {

void check_k(int k, int p, const char* where) {
  if (k < 1 || k > p)
    throw ValidationError(std::string(where) + ": k=" + std::to_string(k) + " out of [1, " +
                          std::to_string(p) + "]");
}

}  // namespace

HeuristicResult forward_greedy(const Instance& inst, int k_target) {
  inst.validate();
  check_k(k_target, inst.p(), "forward_greedy");

  HeuristicResult out;
  SupportSet current;
  FitResult best_fit;
  for (int step = 0; step < k_target; ++step) {
    int best_j = -1;
    double best_obj = std::numeric_limits<double>::infinity();
    FitResult best_candidate;
    for (int j = 0; j < inst.p(); ++j) {
      if (current.contains(j)) continue;
      FitResult fit = evaluate(inst, current.with(j));
      if (fit.objective < best_obj) {  // strict: smallest index wins ties
        best_obj = fit.objective;
        best_j = j;
        best_candidate = std::move(fit);
      }
    }
    current = current.with(best_j);
    best_fit = std::move(best_candidate);
    out.trajectory.emplace_back(current, best_fit.objective);
  }
  out.best = std::move(best_fit);
  return out;
}

HeuristicResult backward_greedy(const Instance& inst, int k_target) {
  inst.validate();
  check_k(k_target, inst.p(), "backward_greedy");

  std::vector<int> kept(inst.p());
  std::iota(kept.begin(), kept.end(), 0);
  FitResult fit = evaluate(inst, SupportSet::from_indices(kept));

  while (static_cast<int>(kept.size()) > k_target) {
    int best_pos = -1;
    double best_obj = std::numeric_limits<double>::infinity();
    FitResult best_candidate;
    for (std::size_t pos = 0; pos < kept.size(); ++pos) {
      std::vector<int> trial = kept;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(pos));
      FitResult candidate = evaluate(inst, SupportSet::from_indices(trial));
      if (candidate.objective < best_obj) {
        best_obj = candidate.objective;
        best_pos = static_cast<int>(pos);
        best_candidate = std::move(candidate);
      }
    }
    kept.erase(kept.begin() + best_pos);
    fit = std::move(best_candidate);
  }

  HeuristicResult out;
  out.trajectory.emplace_back(fit.support, fit.objective);
  out.best = std::move(fit);
  return out;
}

namespace {

// Indices of the k largest-magnitude entries, ties toward smaller index.
SupportSet top_k_magnitude(const Eigen::VectorXd& v, int k) {
  std::vector<int> order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(v[a]) > std::abs(v[b]); });
  order.resize(static_cast<std::size_t>(k));
  return SupportSet::from_indices(std::move(order));
}

}  // namespace

HeuristicResult gaussian_rounding(const Instance& inst, int k, const Eigen::MatrixXd& z,
                                  int num_samples, std::uint64_t seed) {
  inst.validate();
  check_k(k, inst.p(), "gaussian_rounding");
  if (num_samples < 1) throw ValidationError("gaussian_rounding: num_samples must be >= 1");
  require_symmetric(z, "gaussian_rounding (Z)");
  if (z.rows() != inst.p())
    throw ValidationError("gaussian_rounding: Z dimension " + std::to_string(z.rows()) +
                          " != p=" + std::to_string(inst.p()));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(z);
  const Eigen::VectorXd& lam = es.eigenvalues();
  double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  if (lam[0] < -1e-6 * scale)
    throw ValidationError("gaussian_rounding: Z is not PSD (min eigenvalue " +
                          std::to_string(lam[0]) + ")");
  Eigen::VectorXd sqrt_lam = lam.cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXd factor = es.eigenvectors() * sqrt_lam.asDiagonal();

  Rng rng(seed);
  HeuristicResult out;
  out.rng_seed = seed;
  out.samples_used = num_samples;
  out.best.objective = std::numeric_limits<double>::infinity();

  Eigen::VectorXd g(inst.p());
  for (int s = 0; s < num_samples; ++s) {
    for (int i = 0; i < inst.p(); ++i) g[i] = rng.normal();
    Eigen::VectorXd sample = factor * g;
    SupportSet support = top_k_magnitude(sample, k);
    FitResult fit = evaluate(inst, support);
    out.trajectory.emplace_back(support, fit.objective);
    if (fit.objective < out.best.objective ||
        (fit.objective == out.best.objective && fit.support < out.best.support)) {
      out.best = std::move(fit);
    }
  }
  return out;
}

EigRoundingResult eigenvector_rounding(const Eigen::MatrixXd& a, int k, int num_samples,
                                       std::uint64_t seed) {
  require_symmetric(a, "eigenvector_rounding");
  const int p = static_cast<int>(a.rows());
  check_k(k, p, "eigenvector_rounding");
  if (num_samples < 1) throw ValidationError("eigenvector_rounding: num_samples must be >= 1");

  EigPair lead = lambda_max(a);
  double l1 = lead.vector.cwiseAbs().sum();
  Eigen::VectorXd prob(p);
  for (int i = 0; i < p; ++i)
    prob[i] = std::min(1.0, static_cast<double>(k) * std::abs(lead.vector[i]) / l1);

  Rng rng(seed);
  EigRoundingResult out;
  out.samples_used = num_samples;
  out.value = -std::numeric_limits<double>::infinity();

  for (int s = 0; s < num_samples; ++s) {
    std::vector<int> picked;
    for (int i = 0; i < p; ++i)
      if (rng.bernoulli(prob[i])) picked.push_back(i);

    if (static_cast<int>(picked.size()) > k) {
      // Prune with greedy eigenvalue deletions on the sampled submatrix.
      Eigen::MatrixXd sub(picked.size(), picked.size());
      for (std::size_t r = 0; r < picked.size(); ++r)
        for (std::size_t c = 0; c < picked.size(); ++c) sub(r, c) = a(picked[r], picked[c]);
      SparseEigResult pruned = backward_greedy_eig(sub, k);
      std::vector<int> kept;
      for (int j : pruned.support.indices()) kept.push_back(picked[static_cast<std::size_t>(j)]);
      picked = std::move(kept);
    }

    // Quadratic form of the 1/sqrt(k) indicator: feasible for the k-sparse
    // eigenvalue problem since its norm is sqrt(|S|/k) <= 1.
    double value = 0.0;
    for (int i : picked)
      for (int j : picked) value += a(i, j);
    value /= static_cast<double>(k);

    SupportSet support = SupportSet::from_indices(picked);
    if (value > out.value || (value == out.value && support < out.support)) {
      out.value = value;
      out.support = std::move(support);
    }
  }
  return out;
}

FitResult greedy_improve(const Instance& inst, int k, const SupportSet& start) {
  inst.validate();
  check_k(k, inst.p(), "greedy_improve");
  if (!start.is_valid_for(inst.p()))
    throw ValidationError("greedy_improve: start support out of range");
  if (start.size() > k)
    throw ValidationError("greedy_improve: start support larger than k");

  SupportSet current = start;
  // Forward fill to size k.
  while (current.size() < k) {
    int best_j = -1;
    double best_obj = std::numeric_limits<double>::infinity();
    for (int j = 0; j < inst.p(); ++j) {
      if (current.contains(j)) continue;
      double obj = evaluate(inst, current.with(j)).objective;
      if (obj < best_obj) {
        best_obj = obj;
        best_j = j;
      }
    }
    current = current.with(best_j);
  }

  FitResult fit = evaluate(inst, current);
  // Best-improving single swaps, lexicographic (out, in) on ties.
  bool improved = true;
  while (improved) {
    improved = false;
    double best_obj = fit.objective;
    SupportSet best_support;
    for (int out_idx : fit.support.indices()) {
      SupportSet base = fit.support.without(out_idx);
      for (int in_idx = 0; in_idx < inst.p(); ++in_idx) {
        if (fit.support.contains(in_idx)) continue;
        double obj = evaluate(inst, base.with(in_idx)).objective;
        if (obj < best_obj) {
          best_obj = obj;
          best_support = base.with(in_idx);
        }
      }
    }
    if (best_obj < fit.objective - 1e-12 * (1.0 + fit.objective)) {
      fit = evaluate(inst, best_support);
      improved = true;
    }
  }
  return fit;
}

HeuristicResult enhanced_randomization(const Instance& inst, int k, const Eigen::MatrixXd& z,
                                       int num_samples, std::uint64_t seed) {
  HeuristicResult rounding = gaussian_rounding(inst, k, z, num_samples, seed);
  FitResult improved = greedy_improve(inst, k, rounding.best.support);
  HeuristicResult out;
  out.trajectory = std::move(rounding.trajectory);
  out.samples_used = rounding.samples_used;
  out.rng_seed = seed;
  out.best = improved.objective <= rounding.best.objective ? std::move(improved)
                                                           : std::move(rounding.best);
  out.trajectory.emplace_back(out.best.support, out.best.objective);
  return out;
}

}  // namespace sparsesel
