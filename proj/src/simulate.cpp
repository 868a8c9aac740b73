#include "subic/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "json.hpp"

#include "subic/csv.hpp"
#include "subic/errors.hpp"

namespace subic {

namespace {

// van der Corput radical inverse, base 2: distinct in (0, 1] for k >= 1
double vdc2(unsigned long long k) {
  double v = 0.0, f = 0.5;
  while (k) {
    if (k & 1ull) v += f;
    k >>= 1;
    f *= 0.5;
  }
  return v;
}

int ceil_log2(int v) {
  int b = 0;
  while ((1 << b) < v) ++b;
  return b;
}

// Sign-pattern table over column-block indices b in [0, c): linear codes
// (-1)^popcount(b & gen) with generators ordered single bits, then 0, then
// the rest ascending, followed by the complements of all of those. Any two
// patterns differ somewhere, and for power-of-two c they differ in at least
// c/2 positions.
std::vector<int> pattern_generators(int L) {
  std::vector<int> gens;
  for (int t = 0; t < L; ++t) gens.push_back(1 << t);
  gens.push_back(0);
  for (int g = 3; g < (1 << L); ++g)
    if ((g & (g - 1)) != 0) gens.push_back(g);
  return gens;
}

double sign_of(int a, int b, const std::vector<int>& gens) {
  int P = static_cast<int>(gens.size());
  int q = a % (2 * P);
  double flip = q >= P ? -1.0 : 1.0;
  int g = gens[q % P];
  return flip * (__builtin_popcount(static_cast<unsigned>(b & g)) % 2 == 0 ? 1.0 : -1.0);
}

// Uniform doubles and gaussians built directly on the mt19937_64 stream so
// generation is bit-reproducible across standard libraries.
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(long seed) : eng(static_cast<unsigned long long>(seed)) {}

  double uniform() {  // in (0, 1]
    return (static_cast<double>(eng() >> 11) + 1.0) * 0x1p-53;
  }

  bool have_spare = false;
  double spare = 0.0;
  double gaussian() {  // Box-Muller
    constexpr double two_pi = 6.283185307179586;
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    double u = uniform(), v = uniform();
    double r = std::sqrt(-2.0 * std::log(u));
    spare = r * std::sin(two_pi * v);
    have_spare = true;
    return r * std::cos(two_pi * v);
  }

  // Fisher-Yates with an explicit bound routine, again for reproducibility
  void shuffle(std::vector<int>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(eng() % i);  // bias is irrelevant here
      std::swap(v[i - 1], v[j]);
    }
  }
};

std::vector<int> block_sizes(int total, int k, const std::vector<int>& explicit_sizes,
                             const char* what) {
  if (!explicit_sizes.empty()) {
    if (static_cast<int>(explicit_sizes.size()) != k)
      throw ConfigError(std::string(what) + "_sizes must list one size per cluster");
    int s = std::accumulate(explicit_sizes.begin(), explicit_sizes.end(), 0);
    if (s != total) throw ConfigError(std::string(what) + "_sizes must sum to the dimension");
    for (int v : explicit_sizes)
      if (v < 1) throw ConfigError(std::string(what) + "_sizes entries must be >= 1");
    return explicit_sizes;
  }
  std::vector<int> sz(k, total / k);
  for (int i = 0; i < total % k; ++i) ++sz[i];
  return sz;
}

std::vector<int> segment_labels(const std::vector<int>& sizes) {
  std::vector<int> lab;
  for (size_t g = 0; g < sizes.size(); ++g) lab.insert(lab.end(), sizes[g], static_cast<int>(g));
  return lab;
}

}  // namespace

Mat design_grid(int r, int c) {
  if (r < 1 || c < 1) throw ConfigError("design_grid: cluster counts must be >= 1");
  int L = ceil_log2(std::max(2, c));
  auto gens = pattern_generators(L);
  int P = 2 * static_cast<int>(gens.size());
  int wraps = (r + P - 1) / P;
  // Distinct magnitudes inside (0.05, 0.95), one disjoint band per pattern
  // wrap; with a single wrap they span (0.6, 0.95) so sign flips dominate.
  Mat G(r, c);
  for (int a = 0; a < r; ++a) {
    int w = a / P;
    for (int b = 0; b < c; ++b) {
      double m0 = vdc2(static_cast<unsigned long long>(a) * c + b + 1);
      double m = wraps == 1 ? 0.8 + 0.15 * m0
                            : 0.05 + 0.9 * (w + 0.1 + 0.8 * m0) / wraps;
      G(a, b) = sign_of(a, b, gens) * m;
    }
  }
  return G;
}

Vec target_profile(int r, int c) {
  if (r < 1 || c < 1) throw ConfigError("target_profile: cluster counts must be >= 1");
  int L = ceil_log2(std::max(2, c));
  auto gens = pattern_generators(L);
  Vec g(r);
  for (int a = 0; a < r; ++a) {
    double base;
    if (c >= 3)
      base = 0.4 * (sign_of(a, 1, gens) - sign_of(a, 2, gens));
    else if (c == 2)
      base = 0.4 * sign_of(a, 1, gens);
    else
      base = 0.0;
    g(a) = base + 0.02 * (a + 1);  // tie-break so every row cluster differs
  }
  return g;
}

SimData generate(const SimDesign& d) {
  if (d.n < 1 || d.p < 1) throw ConfigError("simulate: n and p must be >= 1");
  if (d.row_clusters < 1 || d.row_clusters > d.n)
    throw ConfigError("simulate: row_clusters must lie in [1, n]");
  if (d.col_clusters < 1 || d.col_clusters > d.p)
    throw ConfigError("simulate: col_clusters must lie in [1, p]");
  if (d.sigma < 0 || d.sigma_y < 0) throw ConfigError("simulate: sigma must be >= 0");

  auto rsz = block_sizes(d.n, d.row_clusters, d.row_sizes, "row");
  auto csz = block_sizes(d.p, d.col_clusters, d.col_sizes, "col");
  std::vector<int> rlab = segment_labels(rsz), clab = segment_labels(csz);

  SimData s;
  s.grid = design_grid(d.row_clusters, d.col_clusters);
  s.g_row = target_profile(d.row_clusters, d.col_clusters);

  Rng rng(d.seed);
  if (d.shuffle) {
    std::vector<int> rperm(d.n), cperm(d.p);
    std::iota(rperm.begin(), rperm.end(), 0);
    std::iota(cperm.begin(), cperm.end(), 0);
    rng.shuffle(rperm);
    rng.shuffle(cperm);
    std::vector<int> rl(d.n), cl(d.p);
    for (int i = 0; i < d.n; ++i) rl[i] = rlab[rperm[i]];
    for (int j = 0; j < d.p; ++j) cl[j] = clab[cperm[j]];
    rlab = rl;
    clab = cl;
  }

  s.X.values.resize(d.n, d.p);
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.p; ++j) {
      double mean = d.block_mean_scale * s.grid(rlab[i], clab[j]);
      s.X.values(i, j) = mean + (d.sigma > 0 ? d.sigma * rng.gaussian() : 0.0);
    }
  s.y.values.resize(d.n);
  for (int i = 0; i < d.n; ++i)
    s.y.values(i) =
        d.y_mean_scale * s.g_row(rlab[i]) + (d.sigma_y > 0 ? d.sigma_y * rng.gaussian() : 0.0);
  s.y.name = "y";

  s.X.column_means = Vec::Zero(d.p);
  s.X.column_scales = Vec::Ones(d.p);
  s.X.constant_columns.assign(d.p, 0);
  s.X.column_names.resize(d.p);
  s.X.row_ids.resize(d.n);
  for (int j = 0; j < d.p; ++j) s.X.column_names[j] = "f" + std::to_string(j + 1);
  for (int i = 0; i < d.n; ++i) s.X.row_ids[i] = "r" + std::to_string(i + 1);
  s.X.centered = false;

  s.truth_rows = Partition::from_labels(rlab);
  s.truth_cols = Partition::from_labels(clab);
  return s;
}

SimDesign fig2_preset(long seed) {
  SimDesign d;
  d.n = 20;
  d.p = 20;
  d.row_clusters = 4;
  d.col_clusters = 4;
  d.row_sizes = {6, 5, 5, 4};
  d.col_sizes = {6, 5, 5, 4};
  d.sigma = 1.0;
  d.sigma_y = 0.5;
  d.block_mean_scale = 3.0;
  d.y_mean_scale = 5.0;
  d.seed = seed;
  return d;
}

void write_dataset_csv(const SimData& s, const std::string& path) {
  std::vector<std::string> header;
  header.push_back("id");
  header.insert(header.end(), s.X.column_names.begin(), s.X.column_names.end());
  header.push_back(s.y.name);
  header.push_back("_truth_row");
  std::vector<std::vector<std::string>> rows;
  rows.reserve(s.X.n());
  for (int i = 0; i < s.X.n(); ++i) {
    std::vector<std::string> row;
    row.reserve(header.size());
    row.push_back(s.X.row_ids[i]);
    for (int j = 0; j < s.X.p(); ++j) row.push_back(format_double(s.X.values(i, j)));
    row.push_back(format_double(s.y.values(i)));
    row.push_back(std::to_string(s.truth_rows.labels[i]));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

void write_truth_json(const SimData& s, const SimDesign& d, const std::string& path) {
  nlohmann::ordered_json j;
  j["row_labels"] = s.truth_rows.labels;
  j["col_labels"] = s.truth_cols.labels;
  nlohmann::ordered_json grid = nlohmann::ordered_json::array();
  for (Eigen::Index a = 0; a < s.grid.rows(); ++a) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index b = 0; b < s.grid.cols(); ++b) row.push_back(s.grid(a, b));
    grid.push_back(row);
  }
  j["grid"] = grid;
  std::vector<double> g(s.g_row.data(), s.g_row.data() + s.g_row.size());
  j["target_profile"] = g;
  j["design"] = {{"n", d.n},
                 {"p", d.p},
                 {"row_clusters", d.row_clusters},
                 {"col_clusters", d.col_clusters},
                 {"sigma", d.sigma},
                 {"sigma_y", d.sigma_y},
                 {"block_mean_scale", d.block_mean_scale},
                 {"y_mean_scale", d.y_mean_scale},
                 {"seed", d.seed},
                 {"shuffle", d.shuffle}};
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace subic
