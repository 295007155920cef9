#include "gmix/estimation.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gmix {

namespace {

double falling(int n, int r) {
  double p = 1.0;
  for (int i = 0; i < r; ++i) p *= n - i;
  return p;
}

// Turns integer tuple counts into the estimate: divide by the number of
// (group, tuple) pairs and weight each index by prod_j diag[i_j]. Both the raw
// and tally paths end here with identical counts, so they agree bitwise.
MomentEstimate finalize(DenseTensor counts, int r, int k, std::size_t n_groups, const std::optional<DiagonalMap>& b) {
  const double norm = static_cast<double>(n_groups) * falling(k, r);
  std::vector<int> idx;
  for (std::size_t f = 0; f < counts.size(); ++f) {
    if (counts[f] == 0.0) continue;
    double w = counts[f] / norm;
    if (b) {
      idx = counts.multi_index(f);
      std::sort(idx.begin(), idx.end());
      double prod = 1.0;
      for (int i : idx) prod *= b->diag()[i];
      w *= prod;
    }
    counts[f] = w;
  }
  return {SymTensor::unchecked(std::move(counts)), r, n_groups, b};
}

void check_order(int r, int k, int d, const std::optional<DiagonalMap>& b) {
  if (r < 0) throw std::invalid_argument("moment: order must be >= 0");
  if (r > k) throw std::invalid_argument("moment: order " + std::to_string(r) + " exceeds group size " + std::to_string(k));
  if (b && b->dim() != d) throw std::invalid_argument("moment: map dimension mismatch");
}

// Adds `mult` times the number of ordered draws (without replacement) of
// every category sequence from the multiset `remaining`.
void accumulate_sequences(std::vector<int>& remaining, int depth, int r, std::size_t flat, double weight,
                          DenseTensor& out) {
  if (depth == r) {
    out[flat] += weight;
    return;
  }
  const int d = static_cast<int>(remaining.size());
  for (int c = 0; c < d; ++c) {
    const int left = remaining[static_cast<std::size_t>(c)];
    if (left == 0) continue;
    --remaining[static_cast<std::size_t>(c)];
    accumulate_sequences(remaining, depth + 1, r, flat * static_cast<std::size_t>(d) + static_cast<std::size_t>(c),
                         weight * left, out);
    ++remaining[static_cast<std::size_t>(c)];
  }
}

}  // namespace

std::size_t composition_count(int k, int d) {
  // C(k+d-1, k) computed incrementally to stay exact.
  std::size_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * static_cast<std::size_t>(d - 1 + i) / static_cast<std::size_t>(i);
  return c;
}

MomentEstimate moment_from_groups(const GroupedDataset& ds, int r, const std::optional<DiagonalMap>& b) {
  const int k = ds.group_size();
  const int d = ds.dim();
  check_order(r, k, d, b);
  if (ds.n_groups() == 0) throw std::invalid_argument("moment: empty dataset");

  // All ordered r-tuples of distinct positions in [0, k).
  std::vector<std::vector<int>> tuples;
  {
    std::vector<int> cur;
    std::vector<bool> used(static_cast<std::size_t>(k), false);
    auto rec = [&](auto&& self) -> void {
      if (static_cast<int>(cur.size()) == r) {
        tuples.push_back(cur);
        return;
      }
      for (int p = 0; p < k; ++p) {
        if (used[static_cast<std::size_t>(p)]) continue;
        used[static_cast<std::size_t>(p)] = true;
        cur.push_back(p);
        self(self);
        cur.pop_back();
        used[static_cast<std::size_t>(p)] = false;
      }
    };
    rec(rec);
  }

  DenseTensor counts(d, r);
  for (std::size_t g = 0; g < ds.n_groups(); ++g) {
    const auto row = ds.group(g);
    for (const auto& t : tuples) {
      std::size_t flat = 0;
      for (int p : t) flat = flat * static_cast<std::size_t>(d) + row[static_cast<std::size_t>(p)];
      counts[flat] += 1.0;
    }
  }
  return finalize(std::move(counts), r, k, ds.n_groups(), b);
}

MomentEstimate moment_from_tally(const GroupTallyHistogram& h, int r, const std::optional<DiagonalMap>& b) {
  check_order(r, h.k, h.d, b);
  const std::uint64_t n = h.total();
  if (n == 0) throw std::invalid_argument("moment: empty histogram");
  DenseTensor counts(h.d, r);
  for (const auto& [key, c] : h.counts) {
    if (static_cast<int>(key.size()) != h.d) throw std::invalid_argument("moment: histogram key has wrong length");
    std::vector<int> remaining = key;
    accumulate_sequences(remaining, 0, r, 0, static_cast<double>(c), counts);
  }
  return finalize(std::move(counts), r, h.k, static_cast<std::size_t>(n), b);
}

MomentEstimate empirical_sym_moment(const GroupedDataset& ds, int r, const std::optional<DiagonalMap>& b) {
  if (ds.n_groups() > 10 * composition_count(ds.group_size(), ds.dim())) return moment_from_tally(tally(ds), r, b);
  return moment_from_groups(ds, r, b);
}

MomentEstimate empirical_sym_moment(const GroupTallyHistogram& h, int r, const std::optional<DiagonalMap>& b) {
  return moment_from_tally(h, r, b);
}

MomentSource MomentSource::from_dataset(const GroupedDataset& ds) { return MomentSource(Variant{&ds}); }
MomentSource MomentSource::from_tally(GroupTallyHistogram h) { return MomentSource(Variant{std::move(h)}); }
MomentSource MomentSource::from_population(MixtureSpec mix) { return MomentSource(Variant{std::move(mix)}); }

MomentEstimate MomentSource::moment(int r, const std::optional<DiagonalMap>& b) const {
  if (const auto* ds = std::get_if<const GroupedDataset*>(&src_)) return empirical_sym_moment(**ds, r, b);
  if (const auto* h = std::get_if<GroupTallyHistogram>(&src_)) return moment_from_tally(*h, r, b);
  const auto& mix = std::get<MixtureSpec>(src_);
  return {b ? population_moment(mix, r, *b) : population_moment(mix, r), r, 0, b};
}

int MomentSource::dim() const {
  if (const auto* ds = std::get_if<const GroupedDataset*>(&src_)) return (*ds)->dim();
  if (const auto* h = std::get_if<GroupTallyHistogram>(&src_)) return h->d;
  return std::get<MixtureSpec>(src_).dim();
}

int MomentSource::max_order() const {
  if (const auto* ds = std::get_if<const GroupedDataset*>(&src_)) return (*ds)->group_size();
  if (const auto* h = std::get_if<GroupTallyHistogram>(&src_)) return h->k;
  return -1;
}

std::size_t MomentSource::n_groups() const {
  if (const auto* ds = std::get_if<const GroupedDataset*>(&src_)) return (*ds)->n_groups();
  if (const auto* h = std::get_if<GroupTallyHistogram>(&src_)) return static_cast<std::size_t>(h->total());
  return 0;
}

MatOperator build_c_hat(const MomentSource& src, int m, const DiagonalMap& b) {
  if (m < 1) throw std::invalid_argument("build_c_hat: m must be >= 1");
  if (src.max_order() >= 0 && src.max_order() < 2 * m - 2)
    throw std::invalid_argument("build_c_hat: group size " + std::to_string(src.max_order()) + " < 2m-2 = " +
                                std::to_string(2 * m - 2));
  if (m == 1) return MatOperator::Ones(1, 1);
  const auto est = src.moment(2 * m - 2, b);
  const MatOperator c = unfold(est.tensor.dense(), m - 1);
  return 0.5 * (c + c.transpose());
}

MomentEstimate build_e_hat(const MomentSource& src, int m) {
  if (m < 1) throw std::invalid_argument("build_e_hat: m must be >= 1");
  if (src.max_order() >= 0 && src.max_order() < m - 1)
    throw std::invalid_argument("build_e_hat: group size too small");
  return src.moment(m - 1);
}

}  // namespace gmix
