// Command-line front end: subset-selection solving, bounding, heuristics,
// generators, and the experiment harness. All outputs are machine readable
// (JSON on stdout, CSV files for experiments).
//
// Exit codes: 0 success, 2 validation/usage error, 3 capacity or budget
// exhausted, 4 experiment completed partially.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "sparsesel/bnb.hpp"
#include "sparsesel/bounds.hpp"
#include "sparsesel/bruteforce.hpp"
#include "sparsesel/experiments.hpp"
#include "sparsesel/heuristics.hpp"
#include "sparsesel/instance.hpp"
#include "sparsesel/sdp.hpp"
#include "sparsesel/sparse_eig.hpp"
#include "sparsesel/subset_eval.hpp"

namespace {

using nlohmann::json;
using namespace sparsesel;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitPartial = 4;

// JSON config files mirroring the flags: {"subcommand": {"flag": value}}.
class ConfigJson : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    json j;
    for (const CLI::Option* opt : app->get_options({})) {
      if (!opt->get_lnames().empty() && opt->get_configurable()) {
        std::string name = opt->get_lnames()[0];
        if (opt->get_type_size() != 0) {
          if (opt->count() == 1)
            j[name] = opt->results().at(0);
          else if (opt->count() > 1)
            j[name] = opt->results();
          else if (default_also && !opt->get_default_str().empty())
            j[name] = opt->get_default_str();
        } else if (opt->count() > 0) {
          j[name] = true;
        }
      }
    }
    for (const CLI::App* sub : app->get_subcommands({}))
      j[sub->get_name()] = json::parse(to_config(sub, default_also, false, ""));
    return j.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    input >> j;
    return from_json(j, {});
  }

 private:
  static std::vector<CLI::ConfigItem> from_json(const json& j,
                                                const std::vector<std::string>& prefix) {
    std::vector<CLI::ConfigItem> results;
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto parents = prefix;
        parents.push_back(key);
        auto sub = from_json(value, parents);
        results.insert(results.end(), sub.begin(), sub.end());
      } else {
        CLI::ConfigItem item;
        item.parents = prefix;
        item.name = key;
        if (value.is_array())
          for (const auto& v : value) item.inputs.push_back(v.dump());
        else if (value.is_string())
          item.inputs.push_back(value.get<std::string>());
        else
          item.inputs.push_back(value.dump());
        results.push_back(std::move(item));
      }
    }
    return results;
  }
};

json support_to_json(const SupportSet& s) { return json(s.indices()); }

SupportSet parse_support(const std::string& text) {
  std::vector<int> indices;
  std::string token;
  std::stringstream ss(text);
  while (std::getline(ss, token, ','))
    if (!token.empty()) indices.push_back(std::stoi(token));
  return SupportSet::from_indices(std::move(indices));
}

Eigen::MatrixXd load_sym_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  const json& rows = j.is_object() && j.contains("a") ? j.at("a") : j;
  if (!rows.is_array() || rows.empty())
    throw ValidationError(path + ": expected a 2-D array (or an object with field 'a')");
  const int p = static_cast<int>(rows.size());
  Eigen::MatrixXd a(p, p);
  for (int i = 0; i < p; ++i) {
    const json& row = rows.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != p)
      throw ValidationError(path + ": row " + std::to_string(i) + " must have " +
                            std::to_string(p) + " entries");
    for (int c = 0; c < p; ++c) a(i, c) = row.at(c).get<double>();
  }
  return a;
}

struct CommonInput {
  std::string instance_path;
  std::string csv_x, csv_y;

  Instance load() const {
    if (!csv_x.empty() || !csv_y.empty()) {
      if (csv_x.empty() || csv_y.empty())
        throw ValidationError("CSV input needs both --csv-x and --csv-y");
      return load_csv(csv_x, csv_y);
    }
    if (instance_path.empty()) throw ValidationError("missing input instance (-i or --csv-x/--csv-y)");
    return load_instance(instance_path);
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("-i,--instance", instance_path, "instance JSON file");
    cmd->add_option("--csv-x", csv_x, "CSV matrix file (with --csv-y)");
    cmd->add_option("--csv-y", csv_y, "CSV response file (with --csv-x)");
  }
};

BoundEngine parse_bound_engine(const std::string& name) {
  if (name == "exact") return BoundEngine::exact;
  if (name == "sdp") return BoundEngine::sdp;
  throw ValidationError("unknown bound engine '" + name + "' (expected exact|sdp)");
}

int dispatch(CLI::App& app, int argc, char** argv);

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cardinality-constrained least squares: certified bounds, heuristics, exact search"};
  app.config_formatter(std::make_shared<ConfigJson>());
  app.set_config("--config", "", "JSON config file mirroring the flags");
  try {
    return dispatch(app, argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

namespace {

int dispatch(CLI::App& app, int argc, char** argv) {
  app.require_subcommand(1);

  // ---- gen ----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate synthetic instances");
  gen->require_subcommand(1);

  auto* gen_gauss = gen->add_subcommand("gaussian", "iid normal design with a planted sparse model");
  GaussianSpec gauss_spec;
  gauss_spec.n = 10;
  gauss_spec.p = 20;
  gauss_spec.k_true = 2;
  std::string gen_out = "instance.json";
  gen_gauss->add_option("--n", gauss_spec.n, "observations");
  gen_gauss->add_option("--p", gauss_spec.p, "features");
  gen_gauss->add_option("--k", gauss_spec.k_true, "planted cardinality");
  gen_gauss->add_option("--sigma", gauss_spec.noise_sigma, "noise standard deviation");
  gen_gauss->add_option("--scale", gauss_spec.coeff_scale, "coefficient magnitude scale");
  gen_gauss->add_option("--seed", gauss_spec.seed, "random seed");
  gen_gauss->add_option("-o,--out", gen_out, "output instance file");

  auto* gen_gabor = gen->add_subcommand("gabor", "overcomplete 2-D Gabor dictionary");
  GaborSpec gabor_spec;
  gabor_spec.patch_size = 4;
  gabor_spec.num_atoms = 24;
  int gabor_plant_k = 0;
  std::string gabor_patch_csv;
  std::string gabor_out = "gabor.json";
  bool gabor_dict_only = false;
  gen_gabor->add_option("--r", gabor_spec.patch_size, "patch side length (n = r*r)");
  gen_gabor->add_option("--atoms", gabor_spec.num_atoms, "dictionary size p");
  gen_gabor->add_option("--seed", gabor_spec.seed, "random seed");
  gen_gabor->add_flag("--no-jitter", "fail instead of jittering phases beyond the grid");
  gen_gabor->add_option("--plant-k", gabor_plant_k,
                        "synthesize y as a sparse atom combination of this cardinality");
  gen_gabor->add_option("--patch-csv", gabor_patch_csv, "read y from a CSV patch (row-major)");
  gen_gabor->add_flag("--dict-only", gabor_dict_only, "write only the dictionary matrix");
  gen_gabor->add_option("-o,--out", gabor_out, "output file");

  // ---- eval ---------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("eval", "restricted least-squares objective of a support");
  CommonInput eval_in;
  eval_in.attach(eval_cmd);
  std::string eval_support;
  eval_cmd->add_option("--support", eval_support, "comma-separated indices")->required();

  // ---- exact --------------------------------------------------------------
  auto* exact_cmd = app.add_subcommand("exact", "exhaustive optimum over size-k supports");
  CommonInput exact_in;
  exact_in.attach(exact_cmd);
  int exact_k = 2;
  std::int64_t exact_cap = 5'000'000;
  exact_cmd->add_option("--k", exact_k, "cardinality")->required();
  exact_cmd->add_option("--cap", exact_cap, "enumeration cap");

  // ---- speig --------------------------------------------------------------
  auto* speig_cmd = app.add_subcommand("speig", "sparse maximum eigenvalue operations");
  std::string speig_matrix;
  CommonInput speig_in;
  speig_in.attach(speig_cmd);
  double speig_rho = -1.0;
  int speig_k = 2;
  std::string speig_op = "exact";
  std::int64_t speig_cap = 2'000'000;
  speig_cmd->add_option("--matrix", speig_matrix, "symmetric matrix JSON file");
  speig_cmd->add_option("--rho", speig_rho,
                        "with -i: residual threshold for the bound matrix (default 0.5*||y||^2)");
  speig_cmd->add_option("--k", speig_k, "sparsity level");
  speig_cmd->add_option("--op", speig_op, "max | exact | greedy");
  speig_cmd->add_option("--cap", speig_cap, "enumeration cap for op=exact");

  // ---- relax --------------------------------------------------------------
  auto* relax_cmd = app.add_subcommand("relax", "semidefinite relaxation of the sparse eigenvalue");
  std::string relax_matrix;
  CommonInput relax_in;
  relax_in.attach(relax_cmd);
  double relax_rho = -1.0;
  int relax_k = 2;
  SolverConfig relax_cfg;
  relax_cmd->add_option("--matrix", relax_matrix, "symmetric matrix JSON file");
  relax_cmd->add_option("--rho", relax_rho,
                        "with -i: residual threshold for the bound matrix (default 0.5*||y||^2)");
  relax_cmd->add_option("--k", relax_k, "sparsity level");
  relax_cmd->add_option("--epsilon", relax_cfg.epsilon, "target duality gap");
  relax_cmd->add_option("--max-iters", relax_cfg.max_iterations, "iteration budget");

  // ---- bound --------------------------------------------------------------
  auto* bound_cmd = app.add_subcommand("bound", "certified lower bound on the k-sparse optimum");
  CommonInput bound_in;
  bound_in.attach(bound_cmd);
  int bound_k = 2;
  std::string bound_engine = "sdp";
  double bound_tol = -1.0;
  bound_cmd->add_option("--k", bound_k, "cardinality")->required();
  bound_cmd->add_option("--engine", bound_engine, "exact | sdp");
  bound_cmd->add_option("--tol", bound_tol, "bisection tolerance on the threshold");

  // ---- heuristic ----------------------------------------------------------
  auto* heur_cmd = app.add_subcommand("heuristic", "upper-bound search");
  CommonInput heur_in;
  heur_in.attach(heur_cmd);
  std::string heur_method = "forward";
  int heur_k = 2;
  int heur_samples = 300;
  std::uint64_t heur_seed = 1;
  double heur_rho = -1.0;
  heur_cmd->add_option("--method", heur_method, "forward | backward | gauss | eig | enhanced");
  heur_cmd->add_option("--k", heur_k, "cardinality")->required();
  heur_cmd->add_option("--samples", heur_samples, "sample count for randomized methods");
  heur_cmd->add_option("--seed", heur_seed, "random seed");
  heur_cmd->add_option("--rho", heur_rho, "method=eig: residual threshold (default 0.5*||y||^2)");

  // ---- solve --------------------------------------------------------------
  auto* solve_cmd = app.add_subcommand("solve", "exact branch-and-bound");
  CommonInput solve_in;
  solve_in.attach(solve_cmd);
  int solve_k = 2;
  std::string solve_engine = "sdp";
  std::string solve_order = "dfs";
  std::int64_t solve_budget = 10'000'000;
  std::uint64_t solve_seed = 12345;
  std::string solve_trace;
  solve_cmd->add_option("--k", solve_k, "cardinality")->required();
  solve_cmd->add_option("--engine", solve_engine, "none | exact | sdp");
  solve_cmd->add_option("--order", solve_order, "dfs | best-first");
  solve_cmd->add_option("--budget", solve_budget, "node budget");
  solve_cmd->add_option("--seed-heuristics", solve_seed, "seed for the root heuristics");
  solve_cmd->add_option("--trace", solve_trace, "write per-node events as JSONL");

  // ---- experiment ---------------------------------------------------------
  auto* exp_cmd = app.add_subcommand("experiment", "batch studies with CSV outputs");
  ExperimentSpec exp_spec;
  exp_cmd->add_option("--id", exp_spec.id, "table1 | table2 | fig1 | table3 | ratio")->required();
  exp_cmd->add_option("--out", exp_spec.out_dir, "output directory");
  exp_cmd->add_option("--seed", exp_spec.base_seed, "base seed");
  exp_cmd->add_option("--threads", exp_spec.threads, "worker cap (0 = SPARSESEL_THREADS)");
  exp_cmd->add_flag("--allow-large", exp_spec.allow_large, "run units beyond the desk-scale caps");
  int exp_instances = -1;
  exp_cmd->add_option("--instances", exp_instances,
                      "instance count override (table1 first row / table2 per k / fig1 seeds / ratio trials)");
  exp_cmd->add_option("--p", exp_spec.fig1_p, "fig1: features");
  exp_cmd->add_option("--n", exp_spec.fig1_n, "fig1: observations");
  exp_cmd->add_option("--k-max", exp_spec.fig1_k_max, "fig1: largest cardinality");
  std::vector<std::string> exp_rows;
  exp_cmd->add_option("--table1-row", exp_rows,
                      "table1 row as p,n,k,instances (repeatable; replaces the defaults)");

  app.parse(argc, argv);

  json out;

  if (gen_gauss->parsed()) {
    GeneratedInstance generated = generate_gaussian(gauss_spec);
    save_instance(generated.instance, gen_out);
    out["file"] = gen_out;
    out["planted_support"] = support_to_json(generated.planted_support);
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  }

  if (gen_gabor->parsed()) {
    if (gen_gabor->count("--no-jitter") > 0) gabor_spec.allow_phase_jitter = false;
    Eigen::MatrixXd dict = generate_gabor(gabor_spec);
    if (gabor_dict_only) {
      json jd;
      jd["n"] = dict.rows();
      jd["p"] = dict.cols();
      json rows = json::array();
      for (int i = 0; i < dict.rows(); ++i) {
        json row = json::array();
        for (int c = 0; c < dict.cols(); ++c) row.push_back(dict(i, c));
        rows.push_back(std::move(row));
      }
      jd["a"] = std::move(rows);
      std::ofstream f(gabor_out);
      if (!f) throw ParseError(gabor_out + ": cannot open for writing");
      f << jd.dump() << "\n";
      out["file"] = gabor_out;
      std::cout << out.dump(2) << "\n";
      return kExitOk;
    }
    Instance inst;
    inst.x = dict;
    if (!gabor_patch_csv.empty()) {
      // Patch grid flattened row-major into the response.
      std::ifstream pf(gabor_patch_csv);
      if (!pf) throw ParseError(gabor_patch_csv + ": cannot open file");
      std::vector<double> values;
      double v;
      std::string token;
      while (pf >> token) {
        for (char& ch : token)
          if (ch == ',' || ch == ';') ch = ' ';
        std::stringstream ts(token);
        while (ts >> v) values.push_back(v);
      }
      if (static_cast<Eigen::Index>(values.size()) != dict.rows())
        throw ValidationError(gabor_patch_csv + ": patch has " + std::to_string(values.size()) +
                              " values but the dictionary needs " + std::to_string(dict.rows()));
      inst.y.resize(dict.rows());
      for (std::size_t i = 0; i < values.size(); ++i) inst.y[static_cast<Eigen::Index>(i)] = values[i];
    } else {
      int plant = gabor_plant_k > 0 ? gabor_plant_k : 2;
      Rng rng(gabor_spec.seed);
      std::vector<int> perm(dict.cols());
      for (int i = 0; i < dict.cols(); ++i) perm[static_cast<std::size_t>(i)] = i;
      for (int i = 0; i < plant; ++i)
        std::swap(perm[i], perm[i + rng.uniform_int(static_cast<int>(dict.cols()) - i)]);
      Eigen::VectorXd w = Eigen::VectorXd::Zero(dict.cols());
      for (int i = 0; i < plant; ++i)
        w[perm[i]] = (rng.bernoulli(0.5) ? -1.0 : 1.0) * std::abs(rng.normal());
      inst.y = dict * w;
      double sigma = 0.05 * inst.y.norm() / std::sqrt(static_cast<double>(dict.rows()));
      for (int i = 0; i < inst.n(); ++i) inst.y[i] += sigma * rng.normal();
    }
    inst.name = "gabor_r" + std::to_string(gabor_spec.patch_size);
    save_instance(inst, gabor_out);
    out["file"] = gabor_out;
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  }

  if (eval_cmd->parsed()) {
    Instance inst = eval_in.load();
    FitResult fit = evaluate(inst, parse_support(eval_support));
    out["objective"] = fit.objective;
    out["support"] = support_to_json(fit.support);
    json coeffs = json::array();
    for (int i : fit.support.indices()) coeffs.push_back(fit.coefficients[i]);
    out["coefficients"] = std::move(coeffs);
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  }

  if (exact_cmd->parsed()) {
    Instance inst = exact_in.load();
    ExactResult res = psi_exact(inst, exact_k, exact_cap);
    out["psi"] = res.psi;
    out["optimal_support"] = support_to_json(res.optimal_support);
    out["num_supports_evaluated"] = res.num_supports_evaluated;
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  }

  auto matrix_input = [&](const std::string& matrix_path, const CommonInput& input,
                          double rho) -> Eigen::MatrixXd {
    if (!matrix_path.empty()) return load_sym_matrix(matrix_path);
    Instance inst = input.load();
    MatrixAssembly assembly = MatrixAssembly::from_instance(inst);
    double r = rho >= 0.0 ? rho : 0.5 * assembly.y_squared_norm;
    return assembly.m_of(r);
  };

  if (speig_cmd->parsed()) {
    Eigen::MatrixXd a = matrix_input(speig_matrix, speig_in, speig_rho);
    if (speig_op == "max") {
      EigPair pair = lambda_max(a);
      out["value"] = pair.value;
      out["vector"] = std::vector<double>(pair.vector.data(), pair.vector.data() + pair.vector.size());
    } else if (speig_op == "exact" || speig_op == "greedy") {
      SparseEigResult res = speig_op == "exact" ? sparse_eig_exact(a, speig_k, speig_cap)
                                                : backward_greedy_eig(a, speig_k);
      out["value"] = res.value;
      out["support"] = support_to_json(res.support);
      out["vector"] = std::vector<double>(res.vector.data(), res.vector.data() + res.vector.size());
    } else {
      throw ValidationError("speig: unknown --op '" + speig_op + "' (expected max|exact|greedy)");
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  }

  if (relax_cmd->parsed()) {
    Eigen::MatrixXd a = matrix_input(relax_matrix, relax_in, relax_rho);
    RelaxSolution sol = sdp_k(a, relax_k, relax_cfg);
    out["primal_value"] = sol.primal_value;
    out["dual_value"] = sol.dual_value;
    out["gap"] = sol.gap;
    out["iterations"] = sol.iterations;
    out["converged"] = sol.converged;
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  }

  if (bound_cmd->parsed()) {
    Instance inst = bound_in.load();
    LowerBoundOptions opts;
    if (bound_tol > 0.0) opts.tol_rho = bound_tol;
    LowerBoundResult res = lower_bound(inst, bound_k, parse_bound_engine(bound_engine), opts);
    out["psi_lower"] = res.psi_lower;
    out["rho_star"] = res.rho_star;
    out["engine"] = to_string(res.engine);
    out["bisection_steps"] = res.bisection_steps;
    if (!res.witness.empty()) out["witness_support"] = support_to_json(res.witness);
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  }

  if (heur_cmd->parsed()) {
    Instance inst = heur_in.load();
    out["method"] = heur_method;
    out["k"] = heur_k;
    if (heur_method == "forward" || heur_method == "backward") {
      HeuristicResult res = heur_method == "forward" ? forward_greedy(inst, heur_k)
                                                     : backward_greedy(inst, heur_k);
      out["objective"] = res.best.objective;
      out["support"] = support_to_json(res.best.support);
    } else if (heur_method == "gauss" || heur_method == "enhanced") {
      LowerBoundResult lb = lower_bound(inst, heur_k, BoundEngine::sdp);
      Eigen::MatrixXd z = lb.relax.primal_z.size() > 0
                              ? lb.relax.primal_z
                              : Eigen::MatrixXd::Identity(inst.p(), inst.p()) /
                                    static_cast<double>(inst.p());
      HeuristicResult res = heur_method == "gauss"
                                ? gaussian_rounding(inst, heur_k, z, heur_samples, heur_seed)
                                : enhanced_randomization(inst, heur_k, z, heur_samples, heur_seed);
      out["objective"] = res.best.objective;
      out["support"] = support_to_json(res.best.support);
      out["samples_used"] = res.samples_used;
      out["seed"] = res.rng_seed;
    } else if (heur_method == "eig") {
      MatrixAssembly assembly = MatrixAssembly::from_instance(inst);
      double r = heur_rho >= 0.0 ? heur_rho : 0.5 * assembly.y_squared_norm;
      EigRoundingResult res = eigenvector_rounding(assembly.m_of(r), heur_k, heur_samples, heur_seed);
      out["value"] = res.value;
      out["support"] = support_to_json(res.support);
      out["samples_used"] = res.samples_used;
      out["seed"] = heur_seed;
    } else {
      throw ValidationError("heuristic: unknown --method '" + heur_method + "'");
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  }

  if (solve_cmd->parsed()) {
    Instance inst = solve_in.load();
    BnbConfig cfg;
    if (solve_engine == "none") cfg.bound_engine = BnbEngine::none;
    else if (solve_engine == "exact") cfg.bound_engine = BnbEngine::exact;
    else if (solve_engine == "sdp") cfg.bound_engine = BnbEngine::sdp;
    else throw ValidationError("solve: unknown --engine '" + solve_engine + "'");
    if (solve_order == "dfs") cfg.search_order = SearchOrder::dfs;
    else if (solve_order == "best-first") cfg.search_order = SearchOrder::best_first;
    else throw ValidationError("solve: unknown --order '" + solve_order + "'");
    cfg.node_budget = solve_budget;
    cfg.heuristic_seed = solve_seed;

    SolveReport rep;
    if (!solve_trace.empty()) {
      auto [report, trace] = solve_with_trace(inst, solve_k, cfg);
      rep = report;
      std::ofstream tf(solve_trace);
      if (!tf) throw ParseError(solve_trace + ": cannot open for writing");
      for (const NodeEvent& ev : trace) {
        json je;
        je["forced_in"] = support_to_json(ev.forced_in);
        je["forced_out"] = support_to_json(ev.forced_out);
        je["bound"] = ev.bound;
        je["action"] = to_string(ev.action);
        tf << je.dump() << "\n";
      }
    } else {
      rep = solve(inst, solve_k, cfg);
    }
    out["best_support"] = support_to_json(rep.best_support);
    out["best_objective"] = rep.best_objective;
    out["root_lower_bound"] = rep.root_lower_bound;
    out["global_lower_bound"] = rep.global_lower_bound;
    out["nodes_visited"] = rep.nodes_visited;
    out["nodes_fathomed"] = rep.nodes_fathomed;
    out["leaves_evaluated"] = rep.leaves_evaluated;
    out["optimality_proved"] = rep.optimality_proved;
    out["wall_seconds"] = rep.wall_seconds;
    std::cout << out.dump(2) << "\n";
    return rep.optimality_proved ? kExitOk : kExitCapacity;
  }

  if (exp_cmd->parsed()) {
    if (!exp_rows.empty()) {
      exp_spec.table1_rows.clear();
      for (const std::string& row : exp_rows) {
        Table1Row parsed;
        if (std::sscanf(row.c_str(), "%d,%d,%d,%d", &parsed.p, &parsed.n, &parsed.k,
                        &parsed.instances) != 4)
          throw ValidationError("experiment: --table1-row expects p,n,k,instances, got '" + row + "'");
        exp_spec.table1_rows.push_back(parsed);
      }
    }
    if (exp_instances > 0) {
      if (!exp_spec.table1_rows.empty()) exp_spec.table1_rows[0].instances = exp_instances;
      exp_spec.table2_instances_per_k = exp_instances;
      exp_spec.fig1_seeds = exp_instances;
      exp_spec.ratio_trials = exp_instances;
    }
    ExperimentOutcome outcome = run_experiment(exp_spec);
    out["partial"] = outcome.partial;
    out["files"] = outcome.files;
    out["skips"] = outcome.skips;
    std::cout << out.dump(2) << "\n";
    return outcome.partial ? kExitPartial : kExitOk;
  }

  return kExitOk;
}

}  // namespace
