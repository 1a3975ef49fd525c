#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "sparsesel/common.hpp"
#include "sparsesel/support.hpp"

namespace sparsesel {

/// Problem data: design matrix X (n observations x p features) and response y.
struct Instance {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::string name;

  int n() const { return static_cast<int>(x.rows()); }
  int p() const { return static_cast<int>(x.cols()); }

  /// Throws ValidationError on dimension mismatch or non-finite entries.
  void validate() const;
};

struct GaussianSpec {
  int n = 0;
  int p = 0;
  int k_true = 0;
  double noise_sigma = 0.1;
  double coeff_scale = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GaborSpec {
  int patch_size = 0;  // patch is patch_size x patch_size, so n = patch_size^2
  int num_atoms = 0;
  // Dictionary grids; defaults are substituted when a grid is empty:
  // orientations {0, pi/4, pi/2, 3pi/4}, one scale 0.35*patch_size, and
  // enough harmonic frequencies to reach num_atoms with phases {0, pi/2}.
  std::vector<double> frequencies;
  std::vector<double> orientations;
  std::vector<double> scales;
  std::uint64_t seed = 0;
  bool allow_phase_jitter = true;  // extends the grid with seeded phase shifts

  void validate() const;
};

struct GeneratedInstance {
  Instance instance;
  SupportSet planted_support;
  Eigen::VectorXd planted_w;
};

/// X iid standard normal, support uniform among size-k_true subsets, nonzero
/// coefficients sign-symmetric folded normal times coeff_scale, y = Xw + eps.
/// Fully determined by the parameters, seed included.
GeneratedInstance generate_gaussian(const GaussianSpec& spec);

/// Overcomplete dictionary of 2-D Gabor atoms (Gaussian envelope x sinusoid)
/// on the patch grid, one unit-norm column per atom, vectorized row-major.
Eigen::MatrixXd generate_gabor(const GaborSpec& spec);

/// JSON instance files; load(save(inst)) reproduces inst bit-exactly.
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

/// CSV import: one file with comma/space separated matrix rows, one with the
/// response vector (one value per line or separated).
Instance load_csv(const std::string& x_path, const std::string& y_path);

}  // namespace sparsesel
