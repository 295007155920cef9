#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gmix/tensor.hpp"

namespace gmix {

/// Categorical distribution over d categories.
class ProbabilityVector {
 public:
  /// Entries must be nonnegative and sum to 1 within 1e-12.
  explicit ProbabilityVector(Vector entries);
  /// Scale a nonnegative, nonzero vector to sum to 1.
  static ProbabilityVector normalized(const Vector& v);

  const Vector& entries() const { return p_; }
  int dim() const { return static_cast<int>(p_.size()); }
  double operator[](int i) const { return p_[i]; }

 private:
  Vector p_;
};

/// Finite mixture sum_i w_i delta_{mu_i} of categorical distributions.
class MixtureSpec {
 public:
  /// Validates the simplex and minimal-representation invariants. Weights
  /// within 1e-9 of summing to 1 are renormalized; anything further off is
  /// rejected.
  MixtureSpec(Vector weights, std::vector<ProbabilityVector> components);

  const Vector& weights() const { return w_; }
  const std::vector<ProbabilityVector>& components() const { return comps_; }
  int order() const { return static_cast<int>(comps_.size()); }
  int dim() const { return comps_.front().dim(); }

 private:
  Vector w_;
  std::vector<ProbabilityVector> comps_;
};

MixtureSpec make_mixture(const Vector& weights, const std::vector<Vector>& components);

/// Positive mass per category (the measure xi).
class DominatingMeasure {
 public:
  explicit DominatingMeasure(Vector y);
  const Vector& y() const { return y_; }
  int dim() const { return static_cast<int>(y_.size()); }

 private:
  Vector y_;
};

/// x -> (diag_1 x_1, ..., diag_d x_d).
class DiagonalMap {
 public:
  explicit DiagonalMap(Vector diag) : diag_(std::move(diag)) {}
  static DiagonalMap identity(int d) { return DiagonalMap(Vector::Ones(d)); }

  const Vector& diag() const { return diag_; }
  int dim() const { return static_cast<int>(diag_.size()); }
  Vector apply(const Vector& x) const { return diag_.cwiseProduct(x); }
  DiagonalMap inverse() const { return DiagonalMap(diag_.cwiseInverse()); }
  bool is_identity() const { return (diag_.array() == 1.0).all(); }

 private:
  Vector diag_;
};

/// sum_i w_i p_i^{(x)n}.
SymTensor population_moment(const MixtureSpec& mix, int n);
/// sum_i w_i (B p_i)^{(x)n}.
SymTensor population_moment(const MixtureSpec& mix, int n, const DiagonalMap& b);

struct DominatingScheme {
  enum class Kind { none, uniform, squared_gaussian, fixed };
  Kind kind = Kind::none;
  double sigma = 0.0;  // squared_gaussian only
  Vector fixed;        // fixed only

  static DominatingScheme none() { return {}; }
  static DominatingScheme uniform() { return {Kind::uniform, 0.0, {}}; }
  static DominatingScheme squared_gaussian(double sigma) { return {Kind::squared_gaussian, sigma, {}}; }
  static DominatingScheme fixed_measure(Vector y) { return {Kind::fixed, 0.0, std::move(y)}; }

  bool is_random() const { return kind == Kind::uniform || kind == Kind::squared_gaussian; }

  /// Parses "none", "uniform", "sqgauss:<sigma>", "fixed:<v1,v2,...>".
  static DominatingScheme parse(const std::string& text);
  std::string to_string() const;
};

/// uniform: y_i ~ unif(1,2). squared_gaussian: y_i = (sigma z_i)^2 floored at
/// 1e-12. fixed: the given vector. none: all ones.
DominatingMeasure random_dominating_measure(int d, const DominatingScheme& scheme, std::uint64_t seed);

/// B = diag(1 / sqrt(y)); makes the Euclidean inner product of B-transformed
/// vectors agree with the xi-weighted inner product of densities.
DiagonalMap b_map(const DominatingMeasure& xi);

struct NormCheck {
  bool distinct = true;
  double min_gap = 0.0;        // +inf for a single component
  std::vector<double> norms;   // sum_j p_ij^2 / y_j per component
};

NormCheck check_distinct_norms(const MixtureSpec& mix, const DominatingMeasure& xi, double gap_tol);

}  // namespace gmix
