#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "gmix/core_model.hpp"

namespace gmix {

/// Per-category counts summing to the group size.
using Composition = std::vector<int>;

/// n groups of k category indices each. Indices are 0-based in memory and
/// 1-based in the text format.
class GroupedDataset {
 public:
  GroupedDataset(int d, int group_size) : d_(d), k_(group_size) {}
  GroupedDataset(int d, int group_size, std::vector<std::uint16_t> cells);

  int dim() const { return d_; }
  int group_size() const { return k_; }
  std::size_t n_groups() const { return cells_.size() / static_cast<std::size_t>(k_); }
  std::span<const std::uint16_t> group(std::size_t i) const {
    return std::span<const std::uint16_t>(cells_).subspan(i * static_cast<std::size_t>(k_), static_cast<std::size_t>(k_));
  }
  void add_group(std::span<const int> categories);
  std::span<const std::uint16_t> cells() const { return cells_; }

 private:
  int d_;
  int k_;
  std::vector<std::uint16_t> cells_;
};

/// Counts of per-group compositions.
struct GroupTallyHistogram {
  int d = 0;
  int k = 0;
  std::map<Composition, std::uint64_t> counts;

  std::uint64_t total() const;
  void merge(const GroupTallyHistogram& other);
};

/// For each group: pick a component by weight, then draw `group_size` iid
/// categories from it. Group g uses generator stream g, so the output does
/// not depend on `threads`.
GroupedDataset draw_groups(const MixtureSpec& mix, int group_size, std::size_t n_groups, std::uint64_t seed,
                           unsigned threads = 0);

/// Same draws as draw_groups, tallied on the fly without storing the groups:
/// tally(draw_groups(...)) == draw_tally(...) for identical arguments.
GroupTallyHistogram draw_tally(const MixtureSpec& mix, int group_size, std::size_t n_groups, std::uint64_t seed,
                               unsigned threads = 0);

GroupTallyHistogram tally(const GroupedDataset& ds);

/// One group per line, space separated 1-based categories. `d` = 0 infers the
/// dimension from the largest index seen.
GroupedDataset read_groups(std::istream& in, int d = 0);
void write_groups(std::ostream& out, const GroupedDataset& ds);

}  // namespace gmix
