#include "sparsesel/bounds.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>
#include <vector>

#include "sparsesel/sparse_eig.hpp"

namespace sparsesel {

const char* to_string(BoundEngine engine) {
  return engine == BoundEngine::exact ? "exact" : "sdp";
}

MatrixAssembly MatrixAssembly::from_instance(const Instance& inst) {
  inst.validate();
  MatrixAssembly out;
  out.xty = inst.x.transpose() * inst.y;
  out.xtx = inst.x.transpose() * inst.x;
  out.xtx = 0.5 * (out.xtx + out.xtx.transpose()).eval();
  out.y_squared_norm = inst.y.squaredNorm();
  return out;
}

Eigen::MatrixXd MatrixAssembly::m_of(double rho) const {
  Eigen::MatrixXd m = xty * xty.transpose() - rho * xtx;
  return 0.5 * (m + m.transpose()).eval();
}

Eigen::MatrixXd assemble_m(const Instance& inst, double rho) {
  if (!std::isfinite(rho)) throw ValidationError("assemble_m: rho must be finite");
  return MatrixAssembly::from_instance(inst).m_of(rho);
}

namespace {

// Leading eigenvalue of a size-m principal submatrix, small sizes inlined.
double submatrix_top_eig(const Eigen::MatrixXd& a, const std::vector<int>& idx) {
  const int m = static_cast<int>(idx.size());
  if (m == 1) return a(idx[0], idx[0]);
  if (m == 2) {
    double x00 = a(idx[0], idx[0]), x11 = a(idx[1], idx[1]), x01 = a(idx[0], idx[1]);
    return 0.5 * (x00 + x11) + std::hypot(0.5 * (x00 - x11), x01);
  }
  Eigen::MatrixXd s(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) s(r, c) = a(idx[r], idx[c]);
  if (m == 3) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
    es.computeDirect(s, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[2];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[m - 1];
}

struct ExactPredicate {
  bool certified = false;
  double max_value = 0.0;
  SupportSet witness;
};

// Certifies that every size-k principal submatrix of m has leading
// eigenvalue <= 0. Exits at the first violation.
ExactPredicate exact_sign_query(const Eigen::MatrixXd& m, int k, std::int64_t cap) {
  const int p = static_cast<int>(m.rows());
  // Reuses the capacity policy of the full oracle.
  {
    double acc = 1.0;
    for (int i = 1; i <= k; ++i) {
      acc *= static_cast<double>(p - k + i) / i;
      if (acc > static_cast<double>(cap))
        throw CapacityError("lower_bound: exact engine needs C(" + std::to_string(p) + "," +
                            std::to_string(k) + ") submatrices, beyond the cap " +
                            std::to_string(cap) + "; use the sdp engine");
    }
  }

  ExactPredicate out;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> best_combo;
  std::vector<int> combo(k);
  for (int i = 0; i < k; ++i) combo[i] = i;
  while (true) {
    double value = submatrix_top_eig(m, combo);
    if (value > best) {
      best = value;
      best_combo = combo;
    }
    if (value > 0.0) {
      out.certified = false;
      out.max_value = value;
      out.witness = SupportSet::from_indices(combo);
      return out;
    }
    int i = k - 1;
    while (i >= 0 && combo[i] == p - k + i) --i;
    if (i < 0) break;
    ++combo[i];
    for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
  }
  out.certified = true;
  out.max_value = best;
  out.witness = SupportSet::from_indices(best_combo);
  return out;
}

double default_sdp_epsilon(const Eigen::MatrixXd& m) {
  return 1e-5 * (1.0 + m.norm());  // Frobenius norm dominates lambda_max
}

}  // namespace

LowerBoundResult lower_bound(const Instance& inst, int k, BoundEngine engine,
                             const LowerBoundOptions& opts) {
  inst.validate();
  if (k < 1 || k > inst.p())
    throw ValidationError("lower_bound: k=" + std::to_string(k) + " out of [1, " +
                          std::to_string(inst.p()) + "]");

  MatrixAssembly assembly = MatrixAssembly::from_instance(inst);
  const double y_sq = assembly.y_squared_norm;

  LowerBoundResult result;
  result.engine = engine;
  if (y_sq == 0.0) {
    result.psi_lower = 0.0;
    result.rho_star = 0.0;
    return result;
  }

  const double tol_rho = opts.tol_rho > 0.0 ? opts.tol_rho : 1e-6 * y_sq;

  // rho = ||y||^2 satisfies the predicate unconditionally (the residual is
  // nonnegative), so the upper end of the bracket starts certified.
  double lo = 0.0;
  double hi = y_sq;
  int steps = 0;
  Eigen::MatrixXd warm_y;

  while (hi - lo > tol_rho && steps < opts.max_bisection_steps) {
    double mid = 0.5 * (lo + hi);
    Eigen::MatrixXd m = assembly.m_of(mid);
    ++steps;
    bool certified = false;
    if (engine == BoundEngine::exact) {
      ExactPredicate pred = exact_sign_query(m, k, opts.enumeration_cap);
      certified = pred.certified;
      if (certified) result.witness = pred.witness;
    } else {
      SolverConfig cfg = opts.sdp;
      if (!(cfg.epsilon > 0.0)) cfg.epsilon = default_sdp_epsilon(m);
      cfg.stop_below = 0.0;
      cfg.fail_above = 0.0;
      RelaxSolution relax = warm_y.size() > 0 ? sdp_k(m, k, cfg, warm_y) : sdp_k(m, k, cfg);
      certified = relax.dual_value <= 0.0;
      warm_y = relax.dual_y;
      if (certified) {
        result.dual_certificate = relax.dual_y;
        result.relax = std::move(relax);
      }
    }
    if (certified) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  result.psi_lower = y_sq - hi;
  result.rho_star = hi;
  result.bisection_steps = steps;
  return result;
}

namespace {

struct NodeReduction {
  bool infeasible = false;   // forced_in larger than k
  bool determined = false;   // support fully determined: bound = residual
  double residual = 0.0;
  Instance reduced;
  int k_reduced = 0;
  std::vector<int> remaining;  // original indices of the reduced columns
};

// Deflates the forced-in column span out of y and the remaining columns.
// Every support consistent with the node maps to a support of the reduced
// problem at cardinality k - |forced_in| with identical restricted residual.
NodeReduction reduce_node(const Instance& inst, int k, const SupportSet& forced_in,
                          const SupportSet& forced_out) {
  inst.validate();
  const int p = inst.p();
  if (!forced_in.is_valid_for(p) || !forced_out.is_valid_for(p))
    throw ValidationError("node bound: forced sets out of range");
  if (forced_in.intersects(forced_out))
    throw ValidationError("node bound: forced_in and forced_out overlap");

  NodeReduction out;
  if (forced_in.size() > k) {
    out.infeasible = true;
    return out;
  }

  for (int j = 0; j < p; ++j)
    if (!forced_in.contains(j) && !forced_out.contains(j)) out.remaining.push_back(j);

  Eigen::VectorXd y_reduced = inst.y;
  Eigen::MatrixXd x_remaining(inst.n(), static_cast<int>(out.remaining.size()));
  for (std::size_t j = 0; j < out.remaining.size(); ++j)
    x_remaining.col(static_cast<int>(j)) = inst.x.col(out.remaining[j]);

  if (!forced_in.empty()) {
    Eigen::MatrixXd x_in(inst.n(), forced_in.size());
    for (int j = 0; j < forced_in.size(); ++j) x_in.col(j) = inst.x.col(forced_in.indices()[j]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x_in);
    const int rank = static_cast<int>(qr.rank());
    if (rank > 0) {
      Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(inst.n(), rank);
      y_reduced -= q * (q.transpose() * y_reduced);
      if (x_remaining.cols() > 0) x_remaining -= q * (q.transpose() * x_remaining);
    }
  }

  out.k_reduced = std::min(k - forced_in.size(), static_cast<int>(out.remaining.size()));
  if (out.k_reduced <= 0 || out.remaining.empty()) {
    out.determined = true;
    out.residual = y_reduced.squaredNorm();
    return out;
  }
  out.reduced.x = std::move(x_remaining);
  out.reduced.y = std::move(y_reduced);
  return out;
}

}  // namespace

LowerBoundResult node_lower_bound(const Instance& inst, int k, const SupportSet& forced_in,
                                  const SupportSet& forced_out, BoundEngine engine,
                                  const LowerBoundOptions& opts) {
  NodeReduction node = reduce_node(inst, k, forced_in, forced_out);
  LowerBoundResult result;
  result.engine = engine;
  if (node.infeasible) {
    result.infeasible_node = true;
    result.psi_lower = std::numeric_limits<double>::infinity();
    return result;
  }
  if (node.determined) {
    result.psi_lower = node.residual;
    result.rho_star = 0.0;
    return result;
  }

  LowerBoundResult inner = lower_bound(node.reduced, node.k_reduced, engine, opts);
  // Map the witness support back to original column indices.
  if (!inner.witness.empty()) {
    std::vector<int> mapped;
    for (int j : inner.witness.indices()) mapped.push_back(node.remaining[j]);
    inner.witness = SupportSet::from_indices(std::move(mapped));
  }
  return inner;
}

bool node_bound_at_least(const Instance& inst, int k, const SupportSet& forced_in,
                         const SupportSet& forced_out, BoundEngine engine, double cutoff,
                         const LowerBoundOptions& opts) {
  if (cutoff <= 0.0) return true;  // residuals are nonnegative
  NodeReduction node = reduce_node(inst, k, forced_in, forced_out);
  if (node.infeasible) return true;
  if (node.determined) return node.residual >= cutoff;

  MatrixAssembly assembly = MatrixAssembly::from_instance(node.reduced);
  if (assembly.y_squared_norm < cutoff) return false;  // bound cannot exceed ||y||^2
  if (!std::isfinite(cutoff)) return false;

  const double rho_cut = assembly.y_squared_norm - cutoff;
  Eigen::MatrixXd m = assembly.m_of(rho_cut);
  if (engine == BoundEngine::exact)
    return exact_sign_query(m, node.k_reduced, opts.enumeration_cap).certified;

  SolverConfig cfg = opts.sdp;
  if (!(cfg.epsilon > 0.0)) cfg.epsilon = default_sdp_epsilon(m);
  cfg.stop_below = 0.0;
  cfg.fail_above = 0.0;
  return sdp_k(m, node.k_reduced, cfg).dual_value <= 0.0;
}

}  // namespace sparsesel
