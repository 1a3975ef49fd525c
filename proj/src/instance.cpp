#include "sparsesel/instance.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace sparsesel {

namespace {

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

}  // namespace

void Instance::validate() const {
  if (x.rows() < 1 || x.cols() < 1)
    throw ValidationError("instance: need n >= 1 and p >= 1, got n=" +
                          std::to_string(x.rows()) + " p=" + std::to_string(x.cols()));
  if (y.size() != x.rows())
    throw ValidationError("instance: y length " + std::to_string(y.size()) +
                          " != row count " + std::to_string(x.rows()));
  if (!all_finite(x)) throw ValidationError("instance: non-finite entry in X");
  if (!y.allFinite()) throw ValidationError("instance: non-finite entry in y");
}

void GaussianSpec::validate() const {
  if (n < 1 || p < 1) throw ValidationError("gaussian spec: n and p must be positive");
  if (k_true < 1 || k_true > p)
    throw ValidationError("gaussian spec: k_true must be in [1, p]");
  if (noise_sigma < 0.0) throw ValidationError("gaussian spec: noise_sigma must be >= 0");
  if (!(coeff_scale > 0.0)) throw ValidationError("gaussian spec: coeff_scale must be > 0");
}

GeneratedInstance generate_gaussian(const GaussianSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  // Sampling order is part of the contract: X row-major, then support, then
  // coefficients (sign before magnitude), then noise.
  Eigen::MatrixXd x(spec.n, spec.p);
  for (int i = 0; i < spec.n; ++i)
    for (int j = 0; j < spec.p; ++j) x(i, j) = rng.normal();

  std::vector<int> perm(spec.p);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 0; i < spec.k_true; ++i) {
    int j = i + rng.uniform_int(spec.p - i);
    std::swap(perm[i], perm[j]);
  }
  perm.resize(spec.k_true);
  SupportSet support = SupportSet::from_indices(perm);

  Eigen::VectorXd w = Eigen::VectorXd::Zero(spec.p);
  for (int idx : support.indices()) {
    double sign = rng.bernoulli(0.5) ? -1.0 : 1.0;
    w[idx] = sign * spec.coeff_scale * std::abs(rng.normal());
  }

  Eigen::VectorXd y = x * w;
  if (spec.noise_sigma > 0.0)
    for (int i = 0; i < spec.n; ++i) y[i] += spec.noise_sigma * rng.normal();

  GeneratedInstance out;
  out.instance.x = std::move(x);
  out.instance.y = std::move(y);
  out.instance.name = "gaussian_n" + std::to_string(spec.n) + "_p" + std::to_string(spec.p) +
                      "_k" + std::to_string(spec.k_true) + "_s" + std::to_string(spec.seed);
  out.planted_support = std::move(support);
  out.planted_w = std::move(w);
  return out;
}

void GaborSpec::validate() const {
  if (patch_size < 1) throw ValidationError("gabor spec: patch_size must be positive");
  if (num_atoms < 1) throw ValidationError("gabor spec: num_atoms must be positive");
  for (double s : scales)
    if (!(s > 0.0)) throw ValidationError("gabor spec: scales must be positive");
}

namespace {

struct GaborParams {
  double frequency;
  double orientation;
  double scale;
  double phase;
};

Eigen::VectorXd render_atom(int r, const GaborParams& g) {
  Eigen::VectorXd atom(r * r);
  const double c = (r - 1) / 2.0;
  for (int u = 0; u < r; ++u) {
    for (int v = 0; v < r; ++v) {
      double du = u - c;
      double dv = v - c;
      double along = du * std::cos(g.orientation) + dv * std::sin(g.orientation);
      double envelope = std::exp(-(du * du + dv * dv) / (2.0 * g.scale * g.scale));
      atom[u * r + v] = envelope * std::cos(2.0 * M_PI * g.frequency * along + g.phase);
    }
  }
  return atom;
}

}  // namespace

Eigen::MatrixXd generate_gabor(const GaborSpec& spec) {
  spec.validate();
  const int r = spec.patch_size;
  const int n = r * r;
  const int p = spec.num_atoms;

  std::vector<double> orientations = spec.orientations;
  if (orientations.empty()) orientations = {0.0, M_PI / 4.0, M_PI / 2.0, 3.0 * M_PI / 4.0};
  std::vector<double> scales = spec.scales;
  if (scales.empty()) scales = {0.35 * r};
  std::vector<double> frequencies = spec.frequencies;
  if (frequencies.empty()) {
    // Sub-Nyquist harmonics: sampled on the integer lattice, a frequency f
    // and its alias 1-f produce the same atom up to sign, and f = 1/2
    // vanishes identically on even-sized patches. Staying below 1/2 keeps
    // the grid collision-free; phase jitter covers any overflow.
    int per_freq = static_cast<int>(scales.size() * orientations.size()) * 2;
    int needed = (p + per_freq - 1) / per_freq;
    for (int i = 1; i <= std::min(needed, r); ++i)
      frequencies.push_back(static_cast<double>(i) / (2.0 * (r + 1)));
  }
  const std::vector<double> phases = {0.0, M_PI / 2.0};

  std::vector<GaborParams> grid;
  for (double s : scales)
    for (double f : frequencies)
      for (double o : orientations)
        for (double ph : phases) grid.push_back({f, o, s, ph});

  if (p > static_cast<int>(grid.size()) && !spec.allow_phase_jitter)
    throw ValidationError("gabor spec: " + std::to_string(p) + " atoms requested but grid has only " +
                          std::to_string(grid.size()) + " combinations and phase jitter is disabled");

  Rng rng(spec.seed);
  Eigen::MatrixXd dict(n, p);
  for (int j = 0; j < p; ++j) {
    GaborParams g = grid[j % grid.size()];
    if (j >= static_cast<int>(grid.size()))
      g.phase += M_PI * rng.uniform01();  // seeded jitter for atoms beyond the grid
    Eigen::VectorXd atom = render_atom(r, g);
    double norm = atom.norm();
    if (norm < 1e-12)
      throw ValidationError("gabor spec: atom " + std::to_string(j) +
                            " is numerically zero (degenerate frequency/phase combination)");
    dict.col(j) = atom / norm;
  }

  // Distinct parameters must give distinct atoms.
  for (int a = 0; a < p; ++a)
    for (int b = a + 1; b < p; ++b)
      if (std::abs(dict.col(a).dot(dict.col(b))) >= 1.0 - 1e-9)
        throw ValidationError("gabor spec: atoms " + std::to_string(a) + " and " + std::to_string(b) +
                              " coincide; the parameter grids collide");
  return dict;
}

namespace {

using nlohmann::json;

Instance instance_from_json(const json& j, const std::string& origin) {
  if (!j.is_object()) throw ParseError(origin + ": top-level value must be an object");
  for (const char* key : {"n", "p", "x", "y"})
    if (!j.contains(key)) throw ParseError(origin + ": missing field '" + key + "'");

  Instance inst;
  int n, p;
  try {
    n = j.at("n").get<int>();
    p = j.at("p").get<int>();
  } catch (const json::exception& e) {
    throw ParseError(origin + ": fields 'n'/'p' must be integers (" + e.what() + ")");
  }
  if (n < 1 || p < 1) throw ValidationError(origin + ": need n >= 1 and p >= 1");

  const json& jx = j.at("x");
  if (!jx.is_array() || static_cast<int>(jx.size()) != n)
    throw ValidationError(origin + ": 'x' must be an array of " + std::to_string(n) + " rows");
  inst.x.resize(n, p);
  for (int i = 0; i < n; ++i) {
    const json& row = jx.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != p)
      throw ValidationError(origin + ": row " + std::to_string(i) + " of 'x' must have " +
                            std::to_string(p) + " entries");
    for (int c = 0; c < p; ++c) {
      if (!row.at(c).is_number())
        throw ParseError(origin + ": x[" + std::to_string(i) + "][" + std::to_string(c) +
                         "] is not a number");
      inst.x(i, c) = row.at(c).get<double>();
    }
  }

  const json& jy = j.at("y");
  if (!jy.is_array() || static_cast<int>(jy.size()) != n)
    throw ValidationError(origin + ": 'y' must be an array of " + std::to_string(n) + " entries");
  inst.y.resize(n);
  for (int i = 0; i < n; ++i) {
    if (!jy.at(i).is_number())
      throw ParseError(origin + ": y[" + std::to_string(i) + "] is not a number");
    inst.y[i] = jy.at(i).get<double>();
  }

  if (j.contains("name")) inst.name = j.at("name").get<std::string>();
  inst.validate();
  return inst;
}

}  // namespace

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return instance_from_json(j, path);
}

void save_instance(const Instance& inst, const std::string& path) {
  inst.validate();
  json j;
  j["n"] = inst.n();
  j["p"] = inst.p();
  json rows = json::array();
  for (int i = 0; i < inst.n(); ++i) {
    json row = json::array();
    for (int c = 0; c < inst.p(); ++c) row.push_back(inst.x(i, c));
    rows.push_back(std::move(row));
  }
  j["x"] = std::move(rows);
  json yv = json::array();
  for (int i = 0; i < inst.n(); ++i) yv.push_back(inst.y[i]);
  j["y"] = std::move(yv);
  if (!inst.name.empty()) j["name"] = inst.name;

  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << j.dump() << "\n";
}

namespace {

std::vector<double> parse_csv_line(const std::string& line, const std::string& origin, int lineno) {
  std::vector<double> values;
  std::string token;
  std::stringstream ss(line);
  // Accept commas or whitespace as separators.
  std::string normalized = line;
  for (char& ch : normalized)
    if (ch == ',' || ch == '\t' || ch == ';') ch = ' ';
  std::stringstream fields(normalized);
  while (fields >> token) {
    try {
      std::size_t used = 0;
      double v = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      values.push_back(v);
    } catch (const std::exception&) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ": cannot parse '" + token +
                       "' as a number");
    }
  }
  return values;
}

}  // namespace

Instance load_csv(const std::string& x_path, const std::string& y_path) {
  std::ifstream xin(x_path);
  if (!xin) throw ParseError(x_path + ": cannot open file");
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(xin, line)) {
    ++lineno;
    auto values = parse_csv_line(line, x_path, lineno);
    if (values.empty()) continue;
    if (!rows.empty() && values.size() != rows.front().size())
      throw ValidationError(x_path + ":" + std::to_string(lineno) + ": row has " +
                            std::to_string(values.size()) + " entries, expected " +
                            std::to_string(rows.front().size()));
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ValidationError(x_path + ": no data rows");

  std::ifstream yin(y_path);
  if (!yin) throw ParseError(y_path + ": cannot open file");
  std::vector<double> yvals;
  lineno = 0;
  while (std::getline(yin, line)) {
    ++lineno;
    for (double v : parse_csv_line(line, y_path, lineno)) yvals.push_back(v);
  }

  Instance inst;
  inst.x.resize(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int i = 0; i < inst.n(); ++i)
    for (int c = 0; c < inst.p(); ++c) inst.x(i, c) = rows[i][c];
  inst.y.resize(static_cast<int>(yvals.size()));
  for (std::size_t i = 0; i < yvals.size(); ++i) inst.y[static_cast<int>(i)] = yvals[i];
  inst.validate();
  return inst;
}

}  // namespace sparsesel
