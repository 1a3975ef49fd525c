#include "sparsesel/sdp.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "sparsesel/sparse_eig.hpp"

namespace sparsesel {

namespace {

// Threshold tau such that sum_i max(a_i - tau, 0) equals radius, for a vector
// of absolute values with sum > radius. Quickselect-style partitioning on
// nth_element, expected linear time.
double soft_threshold_level(std::vector<double>& a, double radius) {
  double kept_sum = 0.0;
  long kept_count = 0;
  auto first = a.begin();
  auto last = a.end();
  while (first != last) {
    auto mid = first + (last - first) / 2;
    std::nth_element(first, mid, last, std::greater<double>());
    double pivot = *mid;
    double sum_head = kept_sum;
    for (auto it = first; it != mid + 1; ++it) sum_head += *it;
    long count_head = kept_count + static_cast<long>(mid - first) + 1;
    if (sum_head - static_cast<double>(count_head) * pivot < radius) {
      // Threshold lies strictly below the pivot: everything down to mid stays
      // above it; continue in the tail.
      kept_sum = sum_head;
      kept_count = count_head;
      first = mid + 1;
    } else {
      last = mid;
    }
  }
  return (kept_sum - radius) / static_cast<double>(kept_count);
}

double entrywise_l1(const Eigen::MatrixXd& m) { return m.cwiseAbs().sum(); }

struct SolveState {
  double best_dual = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd best_dual_y;
  double best_primal = -std::numeric_limits<double>::infinity();
  Eigen::MatrixXd best_primal_z;
  // Feasible repair anchor, kept strictly inside the l1 ball so infeasible
  // candidates always have mixing headroom; starts at I/p and ratchets up.
  double anchor_value = 0.0;
  double anchor_mass = 0.0;
  Eigen::MatrixXd anchor_z;
  int k = 1;

  void init(const Eigen::MatrixXd& a, int k_, int p) {
    k = k_;
    anchor_z = Eigen::MatrixXd::Identity(p, p) / static_cast<double>(p);
    anchor_mass = 1.0;
    anchor_value = a.trace() / static_cast<double>(p);
    best_primal = anchor_value;
    best_primal_z = anchor_z;
    // Diagonal unit candidates are always feasible; the best one is exact
    // for k = 1.
    int arg = 0;
    for (int i = 1; i < p; ++i)
      if (a(i, i) > a(arg, arg)) arg = i;
    Eigen::MatrixXd unit = Eigen::MatrixXd::Zero(p, p);
    unit(arg, arg) = 1.0;
    offer_primal(unit, a(arg, arg));
  }

  void offer_dual(const Eigen::MatrixXd& y, double lam_max_a_plus_y) {
    double dual = lam_max_a_plus_y + static_cast<double>(k) * y.cwiseAbs().maxCoeff();
    if (dual < best_dual) {
      best_dual = dual;
      best_dual_y = y;
    }
  }

  // Feasible candidates stand as-is; infeasible ones are mixed with the
  // anchor just until the l1 mass fits (the mixture stays on the
  // spectahedron). The anchor itself only absorbs candidates up to a margin
  // below the ball radius.
  void offer_primal(const Eigen::MatrixXd& z, double trace_az) {
    const double radius = static_cast<double>(k);
    const double margin = 0.5 * (1.0 + radius);  // halfway between the minimum mass and the radius
    double mass = entrywise_l1(z);

    if (mass <= radius) {
      if (trace_az > best_primal) {
        best_primal = trace_az;
        best_primal_z = z;
      }
    } else if (anchor_mass < radius) {
      double alpha = (radius - anchor_mass) / (mass - anchor_mass);
      double value = alpha * trace_az + (1.0 - alpha) * anchor_value;
      if (value > best_primal) {
        best_primal = value;
        best_primal_z = alpha * z + (1.0 - alpha) * anchor_z;
      }
    }

    if (mass <= margin) {
      if (trace_az > anchor_value) {
        anchor_value = trace_az;
        anchor_mass = mass;
        anchor_z = z;
      }
    } else if (anchor_mass < margin) {
      double beta = (margin - anchor_mass) / (mass - anchor_mass);
      double value = beta * trace_az + (1.0 - beta) * anchor_value;
      if (value > anchor_value) {
        Eigen::MatrixXd mixed = beta * z + (1.0 - beta) * anchor_z;
        anchor_value = value;
        anchor_mass = entrywise_l1(mixed);
        anchor_z = std::move(mixed);
      }
    }
  }
};

// Projection of a symmetric matrix onto {S PSD, Tr S = 1}: eigenvalues onto
// the probability simplex.
Eigen::MatrixXd project_spectahedron(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()));
  Eigen::VectorXd v = es.eigenvalues();
  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumulative += sorted[j];
    double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) tau = candidate;
  }
  Eigen::VectorXd clipped = (v.array() - tau).max(0.0);
  return es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
}

// Feasible rank-one candidate from the k-sparse truncation of a unit vector:
// keeping the k largest magnitudes and renormalizing gives ||zz^T||_1 =
// ||z||_1^2 <= k, so no repair loss.
void offer_sparse_rank_one(SolveState& state, const Eigen::MatrixXd& a, int k,
                           const Eigen::VectorXd& x) {
  const int p = static_cast<int>(x.size());
  Eigen::VectorXd truncated = x;
  if (k < p) {
    std::vector<int> order(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) order[static_cast<std::size_t>(i)] = i;
    std::nth_element(order.begin(), order.begin() + k, order.end(),
                     [&](int i, int j) { return std::abs(x[i]) > std::abs(x[j]); });
    truncated.setZero();
    for (int j = 0; j < k; ++j) {
      int idx = order[static_cast<std::size_t>(j)];
      truncated[idx] = x[idx];
    }
    double norm = truncated.norm();
    if (norm < 1e-15) return;
    truncated /= norm;
  }
  state.offer_primal(truncated * truncated.transpose(), truncated.dot(a * truncated));
}

}  // namespace

Eigen::MatrixXd project_l1_ball(const Eigen::MatrixXd& w, double radius) {
  if (radius <= 0.0) return Eigen::MatrixXd::Zero(w.rows(), w.cols());
  double mass = entrywise_l1(w);
  if (mass <= radius) return w;

  std::vector<double> abs_entries(static_cast<std::size_t>(w.size()));
  for (Eigen::Index i = 0; i < w.size(); ++i) abs_entries[static_cast<std::size_t>(i)] = std::abs(w(i));
  double tau = soft_threshold_level(abs_entries, radius);

  Eigen::MatrixXd out(w.rows(), w.cols());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    double v = w(i);
    double shrunk = std::max(std::abs(v) - tau, 0.0);
    out(i) = v < 0.0 ? -shrunk : shrunk;
  }
  return out;
}

SmoothedLambdaMax smoothed_lambda_max(const Eigen::MatrixXd& w, double mu) {
  require_symmetric(w, "smoothed_lambda_max");
  if (!(mu > 0.0)) throw ValidationError("smoothed_lambda_max: mu must be > 0");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w);
  const int p = static_cast<int>(w.rows());
  const Eigen::VectorXd& lam = es.eigenvalues();
  const double top = lam[p - 1];

  Eigen::VectorXd weights(p);
  double total = 0.0;
  for (int i = 0; i < p; ++i) {
    weights[i] = std::exp((lam[i] - top) / mu);  // shift keeps exp bounded
    total += weights[i];
  }
  weights /= total;

  SmoothedLambdaMax out;
  out.lambda_max = top;
  out.value = top + mu * std::log(total);
  out.gradient = es.eigenvectors() * weights.asDiagonal() * es.eigenvectors().transpose();
  return out;
}

double dual_objective(const Eigen::MatrixXd& a, int k, const Eigen::MatrixXd& y) {
  require_symmetric(a, "dual_objective");
  require_symmetric(y, "dual_objective (Y)");
  if (y.rows() != a.rows())
    throw ValidationError("dual_objective: Y is " + std::to_string(y.rows()) + "x" +
                          std::to_string(y.cols()) + " but A is " + std::to_string(a.rows()) +
                          "x" + std::to_string(a.cols()));
  if (k < 1) throw ValidationError("dual_objective: k must be >= 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a + y, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[a.rows() - 1] + static_cast<double>(k) * y.cwiseAbs().maxCoeff();
}

PrimalRecovery recover_primal(const Eigen::MatrixXd& a, int k, const Eigen::MatrixXd& y,
                              double smoothing_mu) {
  require_symmetric(a, "recover_primal");
  require_symmetric(y, "recover_primal (Y)");
  SmoothedLambdaMax sm = smoothed_lambda_max(a + y, smoothing_mu);
  PrimalRecovery out;
  out.z = std::move(sm.gradient);
  out.l1_feasible = entrywise_l1(out.z) <= static_cast<double>(k) * (1.0 + 1e-6);
  return out;
}

RelaxSolution sdp_k(const Eigen::MatrixXd& a, int k, const SolverConfig& cfg) {
  return sdp_k(a, k, cfg, Eigen::MatrixXd());
}

RelaxSolution sdp_k(const Eigen::MatrixXd& a, int k, const SolverConfig& cfg,
                    const Eigen::MatrixXd& warm_start_y) {
  require_symmetric(a, "sdp_k");
  cfg.validate();
  const int p = static_cast<int>(a.rows());
  if (k < 1 || k > p)
    throw ValidationError("sdp_k: k=" + std::to_string(k) + " out of [1, " + std::to_string(p) + "]");

  RelaxSolution sol;

  if (p == 1 || k == p) {
    // k = p: Z = x x^T for the leading eigenvector is feasible
    // (||xx^T||_1 = ||x||_1^2 <= p by Cauchy-Schwarz) and Y = 0 matches it.
    EigPair lead = lambda_max(a);
    sol.primal_z = lead.vector * lead.vector.transpose();
    sol.dual_y = Eigen::MatrixXd::Zero(p, p);
    sol.primal_value = lead.value;
    sol.dual_value = lead.value;
    sol.gap = 0.0;
    sol.iterations = 0;
    sol.converged = true;
    if (cfg.record_iterates) sol.iterates.push_back(sol.dual_y);
    return sol;
  }

  const double log_p = std::log(static_cast<double>(p));
  const double mu_final = cfg.smoothing > 0.0 ? cfg.smoothing : cfg.epsilon / (2.0 * log_p);
  const double scale = a.cwiseAbs().maxCoeff() + 1e-30;

  // Temperature continuation: begin coarse, halve toward mu_final as the
  // measured gap closes to the current smoothing bias. Each stage is a fresh
  // accelerated run warm-started at the previous stage's iterate.
  double mu = std::max(mu_final, 0.25 * scale);

  Eigen::MatrixXd y_curr;
  if (warm_start_y.size() > 0) {
    require_symmetric(warm_start_y, "sdp_k (warm start)");
    if (warm_start_y.rows() != p)
      throw ValidationError("sdp_k: warm start dimension mismatch");
    y_curr = warm_start_y;
  } else {
    y_curr = Eigen::MatrixXd::Zero(p, p);
  }
  Eigen::MatrixXd v = y_curr;
  double theta = 1.0;

  SolveState state;
  state.init(a, k, p);
  // Running weighted average of the spectral projectors: the ergodic primal
  // candidate whose l1 infeasibility vanishes as the stage settles.
  Eigen::MatrixXd z_avg = Eigen::MatrixXd::Zero(p, p);
  double weight_sum = 0.0;

  if (cfg.record_iterates) sol.iterates.push_back(y_curr);

  double last_gap = std::numeric_limits<double>::infinity();
  int since_progress = 0;
  double lambda_max_a = 0.0;
  bool sign_exit = false;

  // Phase 1: accelerated proximal gradient on the smoothed dual. It drives
  // the dual bound down quickly and powers the sign-query exits; the last
  // stages of gap closure are left to the splitting phase below.
  const int phase1_budget = std::max(cfg.max_iterations * 2 / 5, std::min(cfg.max_iterations, 50));
  int t = 0;
  for (; t < phase1_budget; ++t) {
    Eigen::MatrixXd w_mat = a + v;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (w_mat + w_mat.transpose()));
    const Eigen::VectorXd& lam = es.eigenvalues();
    const double top = lam[p - 1];
    if (t == 0 && warm_start_y.size() == 0) lambda_max_a = top;

    Eigen::VectorXd weights(p);
    double total = 0.0;
    for (int i = 0; i < p; ++i) {
      weights[i] = std::exp((lam[i] - top) / mu);
      total += weights[i];
    }
    weights /= total;
    Eigen::MatrixXd grad = es.eigenvectors() * weights.asDiagonal() * es.eigenvectors().transpose();

    state.offer_dual(v, top);
    state.offer_primal(grad, a.cwiseProduct(grad).sum());
    double w = static_cast<double>(t + 1);
    z_avg = (weight_sum * z_avg + w * grad) / (weight_sum + w);
    weight_sum += w;
    state.offer_primal(z_avg, a.cwiseProduct(z_avg).sum());
    offer_sparse_rank_one(state, a, k, es.eigenvectors().col(p - 1));

    double gap = state.best_dual - state.best_primal;
    if (gap <= cfg.epsilon) {
      sol.converged = true;
      break;
    }
    if (!std::isnan(cfg.stop_below) && state.best_dual <= cfg.stop_below) {
      sign_exit = true;
      break;
    }
    if (!std::isnan(cfg.fail_above) && state.best_primal > cfg.fail_above) {
      sign_exit = true;
      break;
    }

    if (gap < last_gap - 1e-12 * (1.0 + std::abs(last_gap))) {
      last_gap = gap;
      since_progress = 0;
    } else {
      ++since_progress;
    }

    // Sharpen the temperature once the gap reaches the stage's own bias, or
    // when a stage stalls; a stall at the final temperature hands off to the
    // splitting phase.
    if (mu > mu_final && (gap <= mu * log_p || since_progress >= 150)) {
      mu = std::max(0.5 * mu, mu_final);
      theta = 1.0;
      v = y_curr;
      z_avg.setZero();
      weight_sum = 0.0;
      since_progress = 0;
      continue;  // re-decompose at the new temperature
    }
    if (mu <= mu_final && since_progress >= 200) break;

    // Proximal gradient step with L = 1/mu: the prox of (mu k)||.||_max
    // subtracts the projection onto the l1 ball of radius mu k.
    Eigen::MatrixXd w_point = v - mu * grad;
    Eigen::MatrixXd y_next = w_point - project_l1_ball(w_point, mu * static_cast<double>(k));

    if (cfg.adaptive_restart && (v - y_next).cwiseProduct(y_next - y_curr).sum() > 0.0) {
      theta = 1.0;
      v = y_next;
    } else {
      double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
      v = y_next + ((theta - 1.0) / theta_next) * (y_next - y_curr);
      theta = theta_next;
    }
    y_curr = y_next;
    if (cfg.record_iterates) sol.iterates.push_back(y_curr);
  }

  // Phase 2: operator splitting between the spectahedron and the l1 ball.
  // The smoothed phase leaves a residual gap dominated by primal recovery;
  // the splitting iteration closes it and keeps certifying through the same
  // candidate channels (the multiplier maps to a dual matrix).
  if (!sol.converged && !sign_exit && t < cfg.max_iterations) {
    double beta = std::max(std::abs(lambda_max_a), scale);
    Eigen::MatrixXd w_split = state.best_primal_z;
    Eigen::MatrixXd u_split = -state.best_dual_y / beta;

    for (; t < cfg.max_iterations; ++t) {
      Eigen::MatrixXd z_split = project_spectahedron(w_split - u_split + a / beta);
      w_split = project_l1_ball(z_split + u_split, static_cast<double>(k));
      u_split += z_split - w_split;

      state.offer_primal(z_split, a.cwiseProduct(z_split).sum());
      Eigen::MatrixXd y_split = -beta * 0.5 * (u_split + u_split.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a + y_split, Eigen::EigenvaluesOnly);
      state.offer_dual(y_split, es.eigenvalues()[p - 1]);
      if (cfg.record_iterates) sol.iterates.push_back(y_split);

      double gap = state.best_dual - state.best_primal;
      if (gap <= cfg.epsilon) {
        sol.converged = true;
        ++t;
        break;
      }
      if (!std::isnan(cfg.stop_below) && state.best_dual <= cfg.stop_below) {
        ++t;
        break;
      }
      if (!std::isnan(cfg.fail_above) && state.best_primal > cfg.fail_above) {
        ++t;
        break;
      }
    }
  }

  sol.dual_y = state.best_dual_y;
  sol.primal_z = state.best_primal_z;
  sol.dual_value = state.best_dual;
  sol.primal_value = state.best_primal;
  sol.gap = std::max(state.best_dual - state.best_primal, 0.0);
  sol.iterations = t;
  return sol;
}

}  // namespace sparsesel
