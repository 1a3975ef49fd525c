#include "sparsesel/bruteforce.hpp"

#include <limits>
#include <vector>

#include "sparsesel/subset_eval.hpp"

namespace sparsesel {

namespace {

std::int64_t binomial_or_throw(int p, int k, std::int64_t cap, const char* where) {
  double acc = 1.0;
  for (int i = 1; i <= k; ++i) {
    acc *= static_cast<double>(p - k + i) / i;
    if (acc > static_cast<double>(cap))
      throw CapacityError(std::string(where) + ": C(" + std::to_string(p) + "," +
                          std::to_string(k) + ") exceeds the cap " + std::to_string(cap));
  }
  return static_cast<std::int64_t>(acc + 0.5);
}

}  // namespace

ExactResult psi_exact(const Instance& inst, int k, std::int64_t cap) {
  inst.validate();
  const int p = inst.p();
  if (k < 1 || k > p)
    throw ValidationError("psi_exact: k=" + std::to_string(k) + " out of [1, " +
                          std::to_string(p) + "]");
  binomial_or_throw(p, k, cap, "psi_exact");

  ExactResult out;
  out.psi = std::numeric_limits<double>::infinity();

  std::vector<int> combo(k);
  for (int i = 0; i < k; ++i) combo[i] = i;
  while (true) {
    FitResult fit = evaluate(inst, SupportSet::from_indices(combo));
    ++out.num_supports_evaluated;
    if (fit.objective < out.psi) {  // lexicographic enumeration: first wins ties
      out.psi = fit.objective;
      out.optimal_support = fit.support;
    }
    int i = k - 1;
    while (i >= 0 && combo[i] == p - k + i) --i;
    if (i < 0) break;
    ++combo[i];
    for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
  }
  return out;
}

ExactResult psi_exact_restricted(const Instance& inst, int k, const SupportSet& forced_in,
                                 const SupportSet& forced_out, std::int64_t cap) {
  inst.validate();
  const int p = inst.p();
  if (k < 1 || k > p)
    throw ValidationError("psi_exact_restricted: k=" + std::to_string(k) + " out of [1, " +
                          std::to_string(p) + "]");
  if (!forced_in.is_valid_for(p) || !forced_out.is_valid_for(p))
    throw ValidationError("psi_exact_restricted: forced sets out of range");
  if (forced_in.intersects(forced_out))
    throw ValidationError("psi_exact_restricted: forced_in and forced_out overlap");

  ExactResult out;
  out.psi = std::numeric_limits<double>::infinity();

  const int free_slots = k - forced_in.size();
  if (free_slots < 0) return out;  // no consistent support

  std::vector<int> candidates;
  for (int j = 0; j < p; ++j)
    if (!forced_in.contains(j) && !forced_out.contains(j)) candidates.push_back(j);
  const int m = static_cast<int>(candidates.size());
  if (free_slots > m) return out;

  if (free_slots == 0) {
    FitResult fit = evaluate(inst, forced_in);
    out.psi = fit.objective;
    out.optimal_support = forced_in;
    out.num_supports_evaluated = 1;
    return out;
  }
  binomial_or_throw(m, free_slots, cap, "psi_exact_restricted");

  std::vector<int> combo(free_slots);
  for (int i = 0; i < free_slots; ++i) combo[i] = i;
  while (true) {
    std::vector<int> indices = forced_in.indices();
    for (int c : combo) indices.push_back(candidates[c]);
    FitResult fit = evaluate(inst, SupportSet::from_indices(std::move(indices)));
    ++out.num_supports_evaluated;
    if (fit.objective < out.psi ||
        (fit.objective == out.psi && fit.support < out.optimal_support)) {
      out.psi = fit.objective;
      out.optimal_support = fit.support;
    }
    int i = free_slots - 1;
    while (i >= 0 && combo[i] == m - free_slots + i) --i;
    if (i < 0) break;
    ++combo[i];
    for (int j = i + 1; j < free_slots; ++j) combo[j] = combo[j - 1] + 1;
  }
  return out;
}

}  // namespace sparsesel
