#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sparsesel/bounds.hpp"
#include "sparsesel/instance.hpp"
#include "sparsesel/support.hpp"

namespace sparsesel {

enum class BnbEngine { none, exact, sdp };
enum class SearchOrder { dfs, best_first };
enum class NodeAction { branch, fathom, leaf, infeasible };

const char* to_string(BnbEngine engine);
const char* to_string(NodeAction action);

struct BnbConfig {
  BnbEngine bound_engine = BnbEngine::sdp;
  SearchOrder search_order = SearchOrder::dfs;
  bool heuristic_at_root = true;
  int heuristic_every_n_nodes = 0;  // 0 disables periodic incumbent refresh
  std::int64_t node_budget = 10'000'000;
  double tol = -1.0;  // < 0 selects 1e-9 * (1 + ||y||^2)
  std::uint64_t heuristic_seed = 12345;
  int rounding_samples = 300;
  bool ls_prescreen = true;  // unconstrained least-squares bound before the engine bound
  LowerBoundOptions bound_opts;

  void validate() const {
    if (node_budget < 1) throw ValidationError("bnb config: node_budget must be >= 1");
    if (rounding_samples < 1) throw ValidationError("bnb config: rounding_samples must be >= 1");
  }
};

/// One processed subproblem: the branching state, the bound that was in
/// effect, and what the search did with it.
struct NodeEvent {
  SupportSet forced_in;
  SupportSet forced_out;
  double bound = 0.0;
  NodeAction action = NodeAction::branch;
};

struct SolveReport {
  SupportSet best_support;
  double best_objective = 0.0;
  double root_lower_bound = 0.0;
  double global_lower_bound = 0.0;  // equals best_objective when optimality is proved
  std::int64_t nodes_visited = 0;
  std::int64_t nodes_fathomed = 0;
  std::int64_t leaves_evaluated = 0;
  bool optimality_proved = false;
  double wall_seconds = 0.0;
};

/// Exact branch-and-bound over include/exclude decisions in index order.
/// Nodes are fathomed when their certified lower bound reaches the incumbent;
/// with bound_engine none the search degenerates to pure enumeration.
SolveReport solve(const Instance& inst, int k, const BnbConfig& cfg = {});

/// Same search, recording one event per visited node.
std::pair<SolveReport, std::vector<NodeEvent>> solve_with_trace(const Instance& inst, int k,
                                                                const BnbConfig& cfg = {});

}  // namespace sparsesel
