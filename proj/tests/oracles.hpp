#pragma once
// Brute-force reference computations for the tests. Nothing here calls into
// the library's numerical code; inputs and outputs are plain std containers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

inline std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Row-major digits of a flat index (last axis fastest).
inline std::vector<int> digits(std::size_t flat, int d, int k) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int a = k - 1; a >= 0; --a) {
    idx[static_cast<std::size_t>(a)] = static_cast<int>(flat % static_cast<std::size_t>(d));
    flat /= static_cast<std::size_t>(d);
  }
  return idx;
}

inline std::size_t flat(const std::vector<int>& idx, int d) {
  std::size_t f = 0;
  for (int i : idx) f = f * static_cast<std::size_t>(d) + static_cast<std::size_t>(i);
  return f;
}

// v^{(x)k}, entry by entry, multiplying in index order.
inline Vec outer_power(const Vec& v, int k) {
  const int d = static_cast<int>(v.size());
  Vec out(ipow(static_cast<std::size_t>(d), k));
  for (std::size_t f = 0; f < out.size(); ++f) {
    double p = 1.0;
    for (int i : digits(f, d, k)) p *= v[static_cast<std::size_t>(i)];
    out[f] = p;
  }
  return out;
}

// x_1 (x) x_2 (x) ... (x) x_k for vectors of possibly different lengths.
inline Vec kron(const std::vector<Vec>& xs) {
  Vec out{1.0};
  for (const auto& x : xs) {
    Vec next;
    next.reserve(out.size() * x.size());
    for (double a : out)
      for (double b : x) next.push_back(a * b);
    out = std::move(next);
  }
  return out;
}

inline Vec mixture_moment(const Vec& w, const std::vector<Vec>& comps, int k) {
  Vec out(ipow(comps[0].size(), k), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Vec t = outer_power(comps[i], k);
    for (std::size_t f = 0; f < out.size(); ++f) out[f] += w[i] * t[f];
  }
  return out;
}

// Average of t over all k! axis permutations, materialized.
inline Vec symmetrize(const Vec& t, int d, int k) {
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  Vec out(t.size(), 0.0);
  double count = 0;
  do {
    for (std::size_t f = 0; f < t.size(); ++f) {
      const auto idx = digits(f, d, k);
      std::vector<int> permuted(idx.size());
      for (std::size_t a = 0; a < idx.size(); ++a) permuted[a] = idx[static_cast<std::size_t>(perm[a])];
      out[f] += t[flat(permuted, d)];
    }
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (double& x : out) x /= count;
  return out;
}

// Empirical symmetric moment by summing over all k! orderings of each group
// and keeping the first r positions. `groups` holds 0-based categories.
inline Vec permutation_moment(const std::vector<std::vector<int>>& groups, int d, int r, const Vec& diag) {
  Vec out(ipow(static_cast<std::size_t>(d), r), 0.0);
  double total = 0;
  for (const auto& g : groups) {
    std::vector<int> pos(g.size());
    std::iota(pos.begin(), pos.end(), 0);
    do {
      std::vector<int> idx(static_cast<std::size_t>(r));
      double p = 1.0;
      for (int a = 0; a < r; ++a) {
        idx[static_cast<std::size_t>(a)] = g[static_cast<std::size_t>(pos[static_cast<std::size_t>(a)])];
        p *= diag[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
      }
      out[flat(idx, d)] += p;
      total += 1;
    } while (std::next_permutation(pos.begin(), pos.end()));
  }
  for (double& x : out) x /= total;
  return out;
}

// Rank by Gaussian elimination with partial pivoting. A pivot counts when it
// exceeds rel_tol times the largest absolute entry of the input.
inline int elimination_rank(Mat a, double rel_tol) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size(), cols = a[0].size();
  double scale = 0;
  for (const auto& row : a)
    for (double x : row) scale = std::max(scale, std::abs(x));
  if (scale == 0) return 0;
  int rank = 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    for (std::size_t i = r + 1; i < rows; ++i)
      if (std::abs(a[i][c]) > std::abs(a[piv][c])) piv = i;
    if (std::abs(a[piv][c]) <= rel_tol * scale) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      const double f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
    ++rank;
  }
  return rank;
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Rank of the Gram matrix of `vs`.
inline int gram_rank(const std::vector<Vec>& vs, double rel_tol) {
  Mat g(vs.size(), Vec(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < vs.size(); ++j) g[i][j] = dot(vs[i], vs[j]);
  return elimination_rank(g, rel_tol);
}

inline double l1(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

// min over permutations of the average L1 distance.
inline double matched_l1(const std::vector<Vec>& truth, const std::vector<Vec>& est) {
  std::vector<std::size_t> perm(truth.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = 1e300;
  do {
    double s = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) s += l1(truth[i], est[perm[i]]);
    best = std::min(best, s / static_cast<double>(truth.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Hand-rolled generators for property tests.
struct Gen {
  std::mt19937_64 eng;
  explicit Gen(std::uint64_t seed) : eng(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }

  Vec gaussian_vec(int d) {
    Vec v(static_cast<std::size_t>(d));
    for (double& x : v) x = normal();
    return v;
  }
  Vec simplex(int d) {
    Vec v(static_cast<std::size_t>(d));
    double s = 0;
    for (double& x : v) s += (x = -std::log(1.0 - uniform()));
    for (double& x : v) x /= s;
    return v;
  }
};

// Reference mixture: binomial(2, 0.2), binomial(2, 0.8), and the 1/3-2/3 blend.
inline Vec binomial2(double p) { return {(1 - p) * (1 - p), 2 * p * (1 - p), p * p}; }

inline std::vector<Vec> reference_components() {
  const Vec a = binomial2(0.2), b = binomial2(0.8);
  Vec c(3);
  for (int i = 0; i < 3; ++i) c[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)] / 3 + 2 * b[static_cast<std::size_t>(i)] / 3;
  return {a, b, c};
}

inline Vec reference_weights() { return {0.5, 0.3, 0.2}; }

}  // namespace oracle
