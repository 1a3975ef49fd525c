#pragma once

#include <cstdint>

#include "sparsesel/instance.hpp"
#include "sparsesel/support.hpp"

namespace sparsesel {

/// Result of exhaustive enumeration over size-k supports.
struct ExactResult {
  double psi = 0.0;
  SupportSet optimal_support;
  std::int64_t num_supports_evaluated = 0;
};

/// Minimum restricted residual over all size-k supports, streamed in
/// lexicographic order (the restricted objective is monotone in the support,
/// so size exactly k suffices for cardinality at most k). Ties resolve to the
/// lexicographically smallest support. Throws CapacityError beyond cap.
ExactResult psi_exact(const Instance& inst, int k, std::int64_t cap = 5'000'000);

/// Same, restricted to supports containing forced_in and avoiding forced_out;
/// psi = +infinity when no consistent support exists.
ExactResult psi_exact_restricted(const Instance& inst, int k, const SupportSet& forced_in,
                                 const SupportSet& forced_out, std::int64_t cap = 5'000'000);

}  // namespace sparsesel
