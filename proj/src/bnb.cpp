#include "sparsesel/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <queue>

#include "sparsesel/heuristics.hpp"
#include "sparsesel/subset_eval.hpp"

namespace sparsesel {

const char* to_string(BnbEngine engine) {
  switch (engine) {
    case BnbEngine::none: return "none";
    case BnbEngine::exact: return "exact";
    default: return "sdp";
  }
}

const char* to_string(NodeAction action) {
  switch (action) {
    case NodeAction::branch: return "branch";
    case NodeAction::fathom: return "fathom";
    case NodeAction::leaf: return "leaf";
    default: return "infeasible";
  }
}

namespace {

struct Node {
  SupportSet forced_in;
  SupportSet forced_out;
  int depth = 0;        // next branching variable
  double bound = 0.0;   // inherited from the parent until recomputed
  std::int64_t seq = 0;
};

struct BestFirstOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // smaller bound first
    return a.seq < b.seq;                              // newest first among equals
  }
};

struct Frontier {
  SearchOrder order;
  std::vector<Node> stack;
  std::priority_queue<Node, std::vector<Node>, BestFirstOrder> heap;

  explicit Frontier(SearchOrder o) : order(o) {}
  bool empty() const { return order == SearchOrder::dfs ? stack.empty() : heap.empty(); }
  void push(Node n) {
    if (order == SearchOrder::dfs)
      stack.push_back(std::move(n));
    else
      heap.push(std::move(n));
  }
  Node pop() {
    if (order == SearchOrder::dfs) {
      Node n = std::move(stack.back());
      stack.pop_back();
      return n;
    }
    Node n = heap.top();
    heap.pop();
    return n;
  }
  double min_bound() {
    double lb = std::numeric_limits<double>::infinity();
    if (order == SearchOrder::dfs) {
      for (const Node& n : stack) lb = std::min(lb, n.bound);
    } else {
      while (!heap.empty()) {
        lb = std::min(lb, heap.top().bound);
        heap.pop();
      }
    }
    return lb;
  }
};

struct Searcher {
  const Instance& inst;
  int k;
  const BnbConfig& cfg;
  double tol;
  std::vector<NodeEvent>* trace;

  double incumbent_obj = std::numeric_limits<double>::infinity();
  SupportSet incumbent_support;
  SolveReport report;

  LowerBoundOptions bound_opts;

  Searcher(const Instance& i, int k_, const BnbConfig& c, std::vector<NodeEvent>* t)
      : inst(i), k(k_), cfg(c), trace(t) {
    tol = cfg.tol >= 0.0 ? cfg.tol : 1e-9 * (1.0 + i.y.squaredNorm());
    bound_opts = cfg.bound_opts;
    // Node bounds must undershoot by less than the fathoming tolerance, or a
    // closed gap at the root would still be branched on.
    if (bound_opts.tol_rho <= 0.0) bound_opts.tol_rho = std::max(0.5 * tol, 1e-14);
  }

  void offer_incumbent(const FitResult& fit) {
    if (fit.objective < incumbent_obj) {
      incumbent_obj = fit.objective;
      incumbent_support = fit.support;
    }
  }

  void record(const Node& node, double bound, NodeAction action) {
    if (trace) trace->push_back({node.forced_in, node.forced_out, bound, action});
  }

  // Support forced by the branching state, if any: all indices >= depth are
  // still free, so the node is a leaf once forced_in is full or everything
  // free must be taken.
  bool leaf_support(const Node& node, SupportSet& out) const {
    const int remaining = inst.p() - node.depth;
    if (node.forced_in.size() == k || node.depth == inst.p()) {
      out = node.forced_in;
      return true;
    }
    if (node.forced_in.size() + remaining <= k) {
      std::vector<int> idx = node.forced_in.indices();
      for (int j = node.depth; j < inst.p(); ++j) idx.push_back(j);
      out = SupportSet::from_indices(std::move(idx));
      return true;
    }
    return false;
  }

  // Unconstrained least squares over every column the node may still use;
  // valid since dropping the cardinality constraint only lowers the optimum.
  double prescreen_bound(const Node& node) const {
    std::vector<int> idx = node.forced_in.indices();
    for (int j = node.depth; j < inst.p(); ++j) idx.push_back(j);
    return evaluate(inst, SupportSet::from_indices(std::move(idx))).objective;
  }

  void run() {
    const auto start_time = std::chrono::steady_clock::now();

    if (cfg.heuristic_at_root) {
      HeuristicResult greedy = forward_greedy(inst, k);
      offer_incumbent(greedy.best);
      offer_incumbent(greedy_improve(inst, k, greedy.best.support));
    }

    Frontier frontier(cfg.search_order);
    std::int64_t seq = 0;
    frontier.push(Node{SupportSet(), SupportSet(), 0, 0.0, seq++});
    bool budget_exhausted = false;
    double open_after_stop = std::numeric_limits<double>::infinity();

    while (!frontier.empty()) {
      if (report.nodes_visited >= cfg.node_budget) {
        budget_exhausted = true;
        open_after_stop = frontier.min_bound();
        break;
      }
      Node node = frontier.pop();
      ++report.nodes_visited;
      const bool is_root = node.depth == 0 && node.forced_in.empty() && node.forced_out.empty();

      if (node.forced_in.size() > k) {
        // Unreachable under the branching rules; kept as a guard.
        record(node, node.bound, NodeAction::infeasible);
        continue;
      }

      SupportSet leaf;
      if (leaf_support(node, leaf)) {
        FitResult fit = evaluate(inst, leaf);
        offer_incumbent(fit);
        ++report.leaves_evaluated;
        record(node, fit.objective, NodeAction::leaf);
        continue;
      }

      double bound = node.bound;
      if (cfg.bound_engine != BnbEngine::none) {
        BoundEngine engine =
            cfg.bound_engine == BnbEngine::exact ? BoundEngine::exact : BoundEngine::sdp;
        if (cfg.ls_prescreen) bound = std::max(bound, prescreen_bound(node));
        if (is_root) {
          // The root gets the full bisection: its bound is reported and its
          // relaxation solution feeds the rounding heuristics.
          LowerBoundResult nlb =
              node_lower_bound(inst, k, node.forced_in, node.forced_out, engine, bound_opts);
          bound = std::max(bound, nlb.psi_lower);
          report.root_lower_bound = bound;
          if (cfg.heuristic_at_root && cfg.bound_engine == BnbEngine::sdp &&
              nlb.relax.primal_z.size() > 0) {
            HeuristicResult rounded = enhanced_randomization(
                inst, k, nlb.relax.primal_z, cfg.rounding_samples, cfg.heuristic_seed);
            offer_incumbent(rounded.best);
          }
        } else if (bound < incumbent_obj - tol) {
          // Non-root nodes only need to know whether the bound reaches the
          // incumbent: one certification query instead of a bisection.
          double cutoff = incumbent_obj - tol;
          if (node_bound_at_least(inst, k, node.forced_in, node.forced_out, engine, cutoff,
                                  bound_opts))
            bound = std::max(bound, cutoff);
        }
      } else if (is_root) {
        report.root_lower_bound = 0.0;
      }

      if (bound >= incumbent_obj - tol) {
        ++report.nodes_fathomed;
        record(node, bound, NodeAction::fathom);
        continue;
      }

      if (cfg.heuristic_every_n_nodes > 0 &&
          report.nodes_visited % cfg.heuristic_every_n_nodes == 0) {
        offer_incumbent(greedy_improve(inst, k, node.forced_in));
      }

      record(node, bound, NodeAction::branch);
      const int d = node.depth;
      Node exclude{node.forced_in, node.forced_out.with(d), d + 1, bound, seq++};
      Node include{node.forced_in.with(d), node.forced_out, d + 1, bound, seq++};
      // DFS pops last-in first: explore the include child first.
      frontier.push(std::move(exclude));
      frontier.push(std::move(include));
    }

    report.best_support = incumbent_support;
    report.best_objective = incumbent_obj;
    if (budget_exhausted) {
      report.optimality_proved = false;
      report.global_lower_bound = std::min(open_after_stop, incumbent_obj);
    } else {
      report.optimality_proved = true;
      report.global_lower_bound = incumbent_obj;
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  }
};

}  // namespace

SolveReport solve(const Instance& inst, int k, const BnbConfig& cfg) {
  inst.validate();
  cfg.validate();
  if (k < 1 || k > inst.p())
    throw ValidationError("solve: k=" + std::to_string(k) + " out of [1, " +
                          std::to_string(inst.p()) + "]");
  Searcher searcher(inst, k, cfg, nullptr);
  searcher.run();
  return searcher.report;
}

std::pair<SolveReport, std::vector<NodeEvent>> solve_with_trace(const Instance& inst, int k,
                                                                const BnbConfig& cfg) {
  inst.validate();
  cfg.validate();
  if (k < 1 || k > inst.p())
    throw ValidationError("solve_with_trace: k=" + std::to_string(k) + " out of [1, " +
                          std::to_string(inst.p()) + "]");
  std::vector<NodeEvent> trace;
  Searcher searcher(inst, k, cfg, &trace);
  searcher.run();
  return {searcher.report, std::move(trace)};
}

}  // namespace sparsesel
