#include "gmix/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gmix/errors.hpp"

namespace gmix {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Flat index of the sorted version of `idx`; identifies the permutation orbit.
std::size_t canonical_flat(std::vector<int>& idx, int dim) {
  std::sort(idx.begin(), idx.end());
  std::size_t flat = 0;
  for (int i : idx) flat = flat * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i);
  return flat;
}

void increment(std::vector<int>& idx, int dim) {
  for (auto pos = idx.size(); pos-- > 0;) {
    if (++idx[pos] < dim) return;
    idx[pos] = 0;
  }
}

}  // namespace

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

DenseTensor::DenseTensor(int dim, int order) : DenseTensor(dim, order, std::vector<double>(ipow(dim, order), 0.0)) {}

DenseTensor::DenseTensor(int dim, int order, std::vector<double> entries)
    : dim_(dim), order_(order), entries_(std::move(entries)) {
  if (dim < 1 || order < 0) throw std::invalid_argument("DenseTensor: need dim >= 1 and order >= 0");
  if (entries_.size() != ipow(dim, order))
    throw std::invalid_argument("DenseTensor: expected " + std::to_string(ipow(dim, order)) + " entries, got " +
                                std::to_string(entries_.size()));
}

std::size_t DenseTensor::flat_index(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != order_) throw std::invalid_argument("flat_index: wrong index length");
  std::size_t flat = 0;
  for (int i : idx) {
    if (i < 0 || i >= dim_) throw std::out_of_range("flat_index: index out of range");
    flat = flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  }
  return flat;
}

std::vector<int> DenseTensor::multi_index(std::size_t flat) const {
  std::vector<int> idx(static_cast<std::size_t>(order_));
  for (auto pos = idx.size(); pos-- > 0;) {
    idx[pos] = static_cast<int>(flat % static_cast<std::size_t>(dim_));
    flat /= static_cast<std::size_t>(dim_);
  }
  return idx;
}

double DenseTensor::sum() const { return std::accumulate(entries_.begin(), entries_.end(), 0.0); }

double DenseTensor::frobenius_norm() const { return as_vector().norm(); }

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
  if (other.dim_ != dim_ || other.order_ != order_) throw std::invalid_argument("DenseTensor +=: shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

DenseTensor& DenseTensor::operator*=(double s) {
  for (double& x : entries_) x *= s;
  return *this;
}

double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
  if (a.dim() != b.dim() || a.order() != b.order()) throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double symmetry_defect(const DenseTensor& t) {
  double defect = 0.0;
  std::vector<int> idx(static_cast<std::size_t>(t.order()), 0);
  std::vector<int> scratch;
  for (std::size_t f = 0; f < t.size(); ++f, increment(idx, t.dim())) {
    scratch = idx;
    defect = std::max(defect, std::abs(t[f] - t[canonical_flat(scratch, t.dim())]));
  }
  return defect;
}

SymTensor::SymTensor(DenseTensor t, double rel_tol) : t_(std::move(t)) {
  double scale = 0.0;
  for (double x : t_.entries()) scale = std::max(scale, std::abs(x));
  if (symmetry_defect(t_) > rel_tol * std::max(scale, 1e-300))
    throw std::invalid_argument("SymTensor: tensor is not symmetric");
}

SymTensor SymTensor::unchecked(DenseTensor t) { return SymTensor(std::move(t), NoCheck{}); }

SymTensor outer_power(const Vector& v, int k) {
  if (k < 0) throw std::invalid_argument("outer_power: negative order");
  const int d = static_cast<int>(v.size());
  DenseTensor t(d, k);
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  std::vector<int> sorted;
  for (std::size_t f = 0; f < t.size(); ++f, increment(idx, d)) {
    sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    double p = 1.0;
    for (int i : sorted) p *= v[i];
    t[f] = p;
  }
  return SymTensor::unchecked(std::move(t));
}

SymTensor symmetrize(const DenseTensor& t) {
  const int d = t.dim();
  std::vector<double> orbit_sum(t.size(), 0.0);
  std::vector<int> orbit_count(t.size(), 0);
  std::vector<std::size_t> canon(t.size());
  std::vector<int> idx(static_cast<std::size_t>(t.order()), 0);
  std::vector<int> scratch;
  for (std::size_t f = 0; f < t.size(); ++f, increment(idx, d)) {
    scratch = idx;
    canon[f] = canonical_flat(scratch, d);
    orbit_sum[canon[f]] += t[f];
    ++orbit_count[canon[f]];
  }
  DenseTensor out(d, t.order());
  for (std::size_t f = 0; f < t.size(); ++f) out[f] = orbit_sum[canon[f]] / orbit_count[canon[f]];
  return SymTensor::unchecked(std::move(out));
}

MatOperator unfold(const DenseTensor& t, int split) {
  if (split < 1 || split > t.order() - 1)
    throw std::invalid_argument("unfold: split must lie in [1, order-1]");
  const auto in_size = static_cast<Eigen::Index>(ipow(t.dim(), split));
  const auto out_size = static_cast<Eigen::Index>(ipow(t.dim(), t.order() - split));
  return Eigen::Map<const RowMajor>(t.entries().data(), in_size, out_size).transpose();
}

DenseTensor fold(const MatOperator& m, int dim, int order, int split) {
  if (split < 1 || split > order - 1) throw std::invalid_argument("fold: split must lie in [1, order-1]");
  const auto in_size = static_cast<Eigen::Index>(ipow(dim, split));
  const auto out_size = static_cast<Eigen::Index>(ipow(dim, order - split));
  if (m.rows() != out_size || m.cols() != in_size) throw std::invalid_argument("fold: shape mismatch");
  DenseTensor t(dim, order);
  Eigen::Map<RowMajor>(t.entries().data(), in_size, out_size) = m.transpose();
  return t;
}

DenseTensor blockwise_apply(const DenseTensor& t, std::span<const BlockMap> blocks) {
  int total = 0;
  for (const auto& b : blocks) {
    if (b.length < 0) throw std::invalid_argument("blockwise_apply: negative block length");
    total += b.length;
  }
  if (total != t.order()) throw std::invalid_argument("blockwise_apply: blocks do not partition the axes");

  DenseTensor cur = t;
  int axes_before = 0;
  for (const auto& b : blocks) {
    const int axes_after = t.order() - axes_before - b.length;
    if (b.map) {
      const auto block = static_cast<Eigen::Index>(ipow(t.dim(), b.length));
      if (b.map->rows() != block || b.map->cols() != block)
        throw std::invalid_argument("blockwise_apply: map must be " + std::to_string(block) + "x" +
                                    std::to_string(block));
      const auto left = ipow(t.dim(), axes_before);
      const auto right = static_cast<Eigen::Index>(ipow(t.dim(), axes_after));
      DenseTensor next(t.dim(), t.order());
      for (std::size_t l = 0; l < left; ++l) {
        const std::size_t offset = l * static_cast<std::size_t>(block * right);
        Eigen::Map<const RowMajor> in(cur.entries().data() + offset, block, right);
        Eigen::Map<RowMajor> out(next.entries().data() + offset, block, right);
        out.noalias() = (*b.map) * in;
      }
      cur = std::move(next);
    }
    axes_before += b.length;
  }
  return cur;
}

EigenDecomposition sym_eig(const MatOperator& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("sym_eig: matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw std::invalid_argument("sym_eig: matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<MatOperator> solver(m);
  if (solver.info() != Eigen::Success) throw std::runtime_error("sym_eig: eigensolver did not converge");

  const auto n = m.rows();
  EigenDecomposition out{solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
  for (Eigen::Index j = 0; j < n; ++j) {
    auto col = out.vectors.col(j);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(col[i]) > 1e-13) {
        if (col[i] < 0) col = -col;
        break;
      }
    }
  }
  return out;
}

MatOperator psd_sqrt_pinv(const EigenDecomposition& eig, int keep, double floor_tol) {
  if (keep < 1) throw std::invalid_argument("psd_sqrt_pinv: keep must be >= 1");
  const auto n = eig.values.size();
  const double lmax = n > 0 ? eig.values[0] : 0.0;
  int usable = 0;
  for (Eigen::Index i = 0; i < n && lmax > 0 && eig.values[i] > floor_tol * lmax; ++i) ++usable;
  if (usable < keep)
    throw RankDeficiencyError("psd_sqrt_pinv: only " + std::to_string(usable) + " eigenvalue(s) above floor, " +
                                  std::to_string(keep) + " requested",
                              keep, usable);
  MatOperator w = MatOperator::Zero(n, n);
  for (int i = 0; i < keep; ++i) {
    const auto v = eig.vectors.col(i);
    w.noalias() += (1.0 / std::sqrt(eig.values[i])) * v * v.transpose();
  }
  return w;
}

MatOperator psd_sqrt_pinv(const MatOperator& m, int keep, double floor_tol) {
  return psd_sqrt_pinv(sym_eig(m), keep, floor_tol);
}

int numerical_rank(const MatOperator& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<MatOperator> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] <= 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > rel_tol * s[0]) ++rank;
  return rank;
}

}  // namespace gmix
