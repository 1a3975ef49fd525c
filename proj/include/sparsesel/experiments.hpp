#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "sparsesel/common.hpp"
#include "sparsesel/instance.hpp"

namespace sparsesel {

struct Table1Row {
  int p = 0;
  int n = 0;
  int k = 0;
  int instances = 0;
};

/// Declarative experiment request; reruns of the same request produce
/// identical outputs (wall-time columns excepted).
struct ExperimentSpec {
  std::string id;  // table1 | table2 | fig1 | table3 | ratio
  std::string out_dir = ".";
  std::uint64_t base_seed = 1;
  int threads = 0;        // 0 = SPARSESEL_THREADS / hardware
  bool allow_large = false;  // opt into rows beyond the desk-scale caps

  // table1
  std::vector<Table1Row> table1_rows = {{20, 10, 2, 100}, {30, 15, 3, 10}};
  int table1_p_cap = 30;

  // table2
  int table2_patch_size = 4;
  int table2_num_atoms = 24;
  std::vector<int> table2_ks = {2, 3, 4};
  int table2_instances_per_k = 10;

  // fig1
  int fig1_p = 30;
  int fig1_n = 50;
  std::vector<int> fig1_planted_ks = {2, 4};
  int fig1_seeds = 10;
  int fig1_k_max = 8;

  // table3
  std::vector<int> table3_sizes = {50, 100, 200};
  int table3_size_cap = 500;

  // ratio
  int ratio_trials = 200;
  int ratio_p_max = 12;

  void validate() const;
};

struct ExperimentOutcome {
  bool partial = false;                 // some units skipped by capability caps
  std::vector<std::string> files;       // CSVs written
  std::vector<std::string> skips;       // human-readable skip records
};

/// Runs the requested experiment and writes machine-readable CSVs under
/// spec.out_dir. Skipped units (capability caps) are recorded in the outcome
/// and in a skips.csv next to the results.
ExperimentOutcome run_experiment(const ExperimentSpec& spec);

/// Approximation-ratio correction factor
/// (1 - 2/k^(1/3)) (1 - (p^2/k^2) exp(-p^(1/9)/3)); approaches 1 as p grows.
double approx_ratio_mu(int k, int p);

/// The correction factor is meaningful only where both of its factors are
/// positive; a double-negative product is spuriously positive and would
/// assert ratios beyond the plain eigenvalue bound.
bool approx_ratio_mu_valid(int k, int p);

/// Complete-tree node count p (p-1) ... (p-k+1) used as the enumeration
/// baseline in the node-count study.
double full_tree_nodes(int p, int k);

/// Patch-like response over a dictionary: a sparse combination of k_true
/// atoms plus 5% relative noise. Used by the heuristic-quality study.
Instance synthetic_gabor_instance(const Eigen::MatrixXd& dict, int k_true, std::uint64_t seed);

}  // namespace sparsesel
