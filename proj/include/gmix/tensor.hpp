#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gmix {

using Vector = Eigen::VectorXd;

/// An unfolded tensor (or any linear map between tensor-power coordinate
/// spaces). Columns index the input space.
using MatOperator = Eigen::MatrixXd;

/// Integer power for small tensor-size arithmetic.
std::size_t ipow(std::size_t base, int exp);

/// Dense order-k tensor over R^d, row-major (last index fastest).
/// Order 0 is allowed and holds a single scalar.
class DenseTensor {
 public:
  DenseTensor() = default;
  DenseTensor(int dim, int order);
  DenseTensor(int dim, int order, std::vector<double> entries);

  int dim() const { return dim_; }
  int order() const { return order_; }
  std::size_t size() const { return entries_.size(); }

  std::span<const double> entries() const { return entries_; }
  std::span<double> entries() { return entries_; }
  double operator[](std::size_t flat) const { return entries_[flat]; }
  double& operator[](std::size_t flat) { return entries_[flat]; }

  std::size_t flat_index(std::span<const int> idx) const;
  std::vector<int> multi_index(std::size_t flat) const;
  double at(std::span<const int> idx) const { return entries_[flat_index(idx)]; }

  Eigen::Map<const Vector> as_vector() const {
    return {entries_.data(), static_cast<Eigen::Index>(entries_.size())};
  }
  Eigen::Map<Vector> as_vector() { return {entries_.data(), static_cast<Eigen::Index>(entries_.size())}; }

  double sum() const;
  double frobenius_norm() const;

  DenseTensor& operator+=(const DenseTensor& other);
  DenseTensor& operator*=(double s);

  friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

 private:
  int dim_ = 0;
  int order_ = 0;
  std::vector<double> entries_;
};

double max_abs_diff(const DenseTensor& a, const DenseTensor& b);

/// A DenseTensor invariant under every permutation of its indices.
class SymTensor {
 public:
  SymTensor() = default;
  /// Throws std::invalid_argument if `t` is not symmetric within `rel_tol`
  /// (relative to its largest entry).
  explicit SymTensor(DenseTensor t, double rel_tol = 1e-10);

  /// Skip the symmetry check; for tensors symmetric by construction.
  static SymTensor unchecked(DenseTensor t);

  const DenseTensor& dense() const { return t_; }
  int dim() const { return t_.dim(); }
  int order() const { return t_.order(); }
  std::size_t size() const { return t_.size(); }
  std::span<const double> entries() const { return t_.entries(); }
  double operator[](std::size_t flat) const { return t_[flat]; }
  double at(std::span<const int> idx) const { return t_.at(idx); }

  friend bool operator==(const SymTensor&, const SymTensor&) = default;

 private:
  struct NoCheck {};
  SymTensor(DenseTensor t, NoCheck) : t_(std::move(t)) {}
  DenseTensor t_;
};

/// Largest deviation of `t` from its own index permutations.
double symmetry_defect(const DenseTensor& t);

/// v^{(x)k}. Each entry is the product of v over the sorted multi-index, so
/// the result is exactly (bitwise) symmetric.
SymTensor outer_power(const Vector& v, int k);

/// Projection onto symmetric tensors: every entry is replaced by the mean of
/// its permutation orbit.
SymTensor symmetrize(const DenseTensor& t);

/// View an order-k tensor as a map from the first `split` axes to the last
/// k - split axes. Result has shape d^(k-split) x d^split.
MatOperator unfold(const DenseTensor& t, int split);

/// Inverse of unfold.
DenseTensor fold(const MatOperator& m, int dim, int order, int split);

/// One contiguous block of axes and the operator acting on it. An empty `map`
/// means identity.
struct BlockMap {
  int length = 1;
  std::optional<MatOperator> map;
};

/// Apply U_1 (x) ... (x) U_n to `t`, where block i spans `blocks[i].length`
/// consecutive axes. Lengths must sum to the tensor order; each map must be
/// d^length x d^length. Zero-length blocks take 1x1 (scalar) maps.
DenseTensor blockwise_apply(const DenseTensor& t, std::span<const BlockMap> blocks);

struct EigenDecomposition {
  Vector values;         // descending
  MatOperator vectors;   // orthonormal columns, first nonzero coordinate > 0
};

/// Full eigendecomposition of a symmetric matrix.
EigenDecomposition sym_eig(const MatOperator& m);

/// Sum over the top `keep` eigenpairs of lambda^{-1/2} v v^T. Throws
/// RankDeficiencyError when fewer than `keep` eigenvalues exceed
/// floor_tol * lambda_max.
MatOperator psd_sqrt_pinv(const MatOperator& m, int keep, double floor_tol);

/// Same, reusing an existing decomposition of the matrix.
MatOperator psd_sqrt_pinv(const EigenDecomposition& eig, int keep, double floor_tol);

/// Number of singular values above rel_tol * sigma_max (0 for a zero matrix).
int numerical_rank(const MatOperator& m, double rel_tol = 1e-8);

}  // namespace gmix
