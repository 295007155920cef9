#pragma once

#include <cstddef>
#include <optional>
#include <variant>

#include "gmix/core_model.hpp"
#include "gmix/sampling.hpp"
#include "gmix/tensor.hpp"

namespace gmix {

/// An empirical (or population) symmetric moment of order r, optionally
/// taken after mapping every observation through a diagonal map B.
struct MomentEstimate {
  SymTensor tensor;
  int order = 0;
  std::size_t n_groups = 0;  // 0 for population moments
  std::optional<DiagonalMap> transform;
};

/// Average over groups and over ordered r-tuples of distinct within-group
/// positions of B e_{x_t1} (x) ... (x) B e_{x_tr}; the normalizer is
/// n_groups * k!/(k-r)!. Enumerates tuples explicitly.
MomentEstimate moment_from_groups(const GroupedDataset& ds, int r, const std::optional<DiagonalMap>& b = {});

/// Same estimate computed from composition counts: a group with tally x puts
/// prod_c (x_c)_(a_c) ordered tuples on every index with a_c copies of
/// category c, where (.)_(.) is the falling factorial. Cost is independent of
/// the number of groups.
MomentEstimate moment_from_tally(const GroupTallyHistogram& h, int r, const std::optional<DiagonalMap>& b = {});

/// Number of compositions of k into d parts, C(k+d-1, k).
std::size_t composition_count(int k, int d);

/// Dispatches to moment_from_tally when n_groups > 10 * composition_count,
/// else to moment_from_groups.
MomentEstimate empirical_sym_moment(const GroupedDataset& ds, int r, const std::optional<DiagonalMap>& b = {});
MomentEstimate empirical_sym_moment(const GroupTallyHistogram& h, int r, const std::optional<DiagonalMap>& b = {});

/// Where moments come from: raw groups, a tally, or an exact mixture.
class MomentSource {
 public:
  /// Non-owning: `ds` must outlive the source.
  static MomentSource from_dataset(const GroupedDataset& ds);
  static MomentSource from_tally(GroupTallyHistogram h);
  static MomentSource from_population(MixtureSpec mix);

  MomentEstimate moment(int r, const std::optional<DiagonalMap>& b = {}) const;

  int dim() const;
  /// Largest order that can be estimated (the group size); unbounded (-1)
  /// for population sources.
  int max_order() const;
  std::size_t n_groups() const;
  bool is_population() const { return std::holds_alternative<MixtureSpec>(src_); }
  const MixtureSpec* population() const { return std::get_if<MixtureSpec>(&src_); }

 private:
  using Variant = std::variant<const GroupedDataset*, GroupTallyHistogram, MixtureSpec>;
  explicit MomentSource(Variant v) : src_(std::move(v)) {}
  Variant src_;
};

/// Order 2m-2 moment under B, unfolded at split m-1 and symmetrized
/// ((M + M^T) / 2). For m = 1 this is the 1x1 operator [1].
MatOperator build_c_hat(const MomentSource& src, int m, const DiagonalMap& b);

/// Order m-1 moment in the original (untransformed) space.
MomentEstimate build_e_hat(const MomentSource& src, int m);

}  // namespace gmix
