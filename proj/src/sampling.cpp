#include "gmix/sampling.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>

#include "gmix/rng.hpp"

namespace gmix {

namespace {

class Categorical {
 public:
  explicit Categorical(const Vector& p) : cum_(static_cast<std::size_t>(p.size())) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) cum_[static_cast<std::size_t>(i)] = (acc += p[i]);
  }
  int draw(double u) const {
    // Scaling by the last cumulative value keeps rounding in the sum from
    // leaving a gap at the top.
    const double x = u * cum_.back();
    const int last = static_cast<int>(cum_.size()) - 1;
    for (int i = 0; i < last; ++i)
      if (x < cum_[static_cast<std::size_t>(i)]) return i;
    return last;
  }

 private:
  std::vector<double> cum_;
};

struct Sampler {
  Categorical pick;
  std::vector<Categorical> comps;
  std::uint64_t seed;
  int k;

  Sampler(const MixtureSpec& mix, int group_size, std::uint64_t s) : pick(mix.weights()), seed(s), k(group_size) {
    for (const auto& c : mix.components()) comps.emplace_back(c.entries());
  }

  template <class Sink>
  void group(std::size_t g, Sink&& sink) const {
    CounterRng rng(seed, streams::kGroups + g);
    const auto& comp = comps[static_cast<std::size_t>(pick.draw(rng.uniform()))];
    for (int j = 0; j < k; ++j) sink(j, comp.draw(rng.uniform()));
  }
};

unsigned resolve_threads(unsigned threads, std::size_t n) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, n / 4096)));
}

template <class Work>
void run_partitioned(std::size_t n, unsigned parts, Work&& work) {
  if (parts <= 1) {
    work(0u, std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned p = 0; p < parts; ++p) {
    const std::size_t lo = n * p / parts, hi = n * (p + 1) / parts;
    pool.emplace_back([&work, p, lo, hi] { work(p, lo, hi); });
  }
}

void check_draw_args(const MixtureSpec& mix, int group_size, std::size_t n_groups) {
  if (group_size < 1) throw std::invalid_argument("draw: group size must be >= 1");
  if (n_groups < 1) throw std::invalid_argument("draw: need at least one group");
  if (mix.dim() > 65535) throw std::invalid_argument("draw: too many categories");
}

// Mixed-radix code of a composition (base k+1), used as a compact hash key.
std::uint64_t encode(std::span<const int> counts, int k) {
  std::uint64_t code = 0;
  for (int c : counts) code = code * static_cast<std::uint64_t>(k + 1) + static_cast<std::uint64_t>(c);
  return code;
}

Composition decode(std::uint64_t code, int d, int k) {
  Composition x(static_cast<std::size_t>(d));
  for (int i = d - 1; i >= 0; --i) {
    x[static_cast<std::size_t>(i)] = static_cast<int>(code % static_cast<std::uint64_t>(k + 1));
    code /= static_cast<std::uint64_t>(k + 1);
  }
  return x;
}

}  // namespace

GroupedDataset::GroupedDataset(int d, int group_size, std::vector<std::uint16_t> cells)
    : d_(d), k_(group_size), cells_(std::move(cells)) {
  if (d < 1 || group_size < 1) throw std::invalid_argument("GroupedDataset: need d >= 1 and group size >= 1");
  if (cells_.size() % static_cast<std::size_t>(k_) != 0)
    throw std::invalid_argument("GroupedDataset: cell count is not a multiple of the group size");
  for (auto c : cells_)
    if (c >= d_) throw std::invalid_argument("GroupedDataset: category index out of range");
}

void GroupedDataset::add_group(std::span<const int> categories) {
  if (static_cast<int>(categories.size()) != k_) throw std::invalid_argument("add_group: wrong group size");
  for (int c : categories) {
    if (c < 0 || c >= d_) throw std::invalid_argument("add_group: category index out of range");
    cells_.push_back(static_cast<std::uint16_t>(c));
  }
}

std::uint64_t GroupTallyHistogram::total() const {
  std::uint64_t t = 0;
  for (const auto& [key, n] : counts) t += n;
  return t;
}

void GroupTallyHistogram::merge(const GroupTallyHistogram& other) {
  if (other.d != d || other.k != k) throw std::invalid_argument("histogram merge: shape mismatch");
  for (const auto& [key, n] : other.counts) counts[key] += n;
}

GroupedDataset draw_groups(const MixtureSpec& mix, int group_size, std::size_t n_groups, std::uint64_t seed,
                           unsigned threads) {
  check_draw_args(mix, group_size, n_groups);
  const Sampler sampler(mix, group_size, seed);
  std::vector<std::uint16_t> cells(n_groups * static_cast<std::size_t>(group_size));
  run_partitioned(n_groups, resolve_threads(threads, n_groups), [&](unsigned, std::size_t lo, std::size_t hi) {
    for (std::size_t g = lo; g < hi; ++g) {
      std::uint16_t* row = cells.data() + g * static_cast<std::size_t>(group_size);
      sampler.group(g, [row](int j, int c) { row[j] = static_cast<std::uint16_t>(c); });
    }
  });
  return GroupedDataset(mix.dim(), group_size, std::move(cells));
}

GroupTallyHistogram draw_tally(const MixtureSpec& mix, int group_size, std::size_t n_groups, std::uint64_t seed,
                               unsigned threads) {
  check_draw_args(mix, group_size, n_groups);
  const int d = mix.dim();
  const int k = group_size;
  const Sampler sampler(mix, k, seed);

  // Dense code table when (k+1)^d is small, hash map otherwise.
  double code_space = 1.0;
  for (int i = 0; i < d; ++i) code_space *= (k + 1);
  const bool dense = code_space <= double(1 << 20);

  const unsigned parts = resolve_threads(threads, n_groups);
  std::vector<std::vector<std::uint64_t>> dense_parts(parts);
  std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> sparse_parts(parts);

  run_partitioned(n_groups, parts, [&](unsigned p, std::size_t lo, std::size_t hi) {
    std::vector<int> counts(static_cast<std::size_t>(d));
    auto& table = dense_parts[p];
    if (dense) table.assign(static_cast<std::size_t>(code_space), 0);
    for (std::size_t g = lo; g < hi; ++g) {
      std::fill(counts.begin(), counts.end(), 0);
      sampler.group(g, [&counts](int, int c) { ++counts[static_cast<std::size_t>(c)]; });
      const auto code = encode(counts, k);
      if (dense)
        ++table[code];
      else
        ++sparse_parts[p][code];
    }
  });

  GroupTallyHistogram h{d, k, {}};
  for (unsigned p = 0; p < parts; ++p) {
    if (dense) {
      for (std::size_t code = 0; code < dense_parts[p].size(); ++code)
        if (dense_parts[p][code]) h.counts[decode(code, d, k)] += dense_parts[p][code];
    } else {
      for (const auto& [code, n] : sparse_parts[p]) h.counts[decode(code, d, k)] += n;
    }
  }
  return h;
}

GroupTallyHistogram tally(const GroupedDataset& ds) {
  GroupTallyHistogram h{ds.dim(), ds.group_size(), {}};
  Composition x(static_cast<std::size_t>(ds.dim()));
  for (std::size_t g = 0; g < ds.n_groups(); ++g) {
    std::fill(x.begin(), x.end(), 0);
    for (auto c : ds.group(g)) ++x[c];
    ++h.counts[x];
  }
  return h;
}

GroupedDataset read_groups(std::istream& in, int d) {
  std::vector<std::uint16_t> cells;
  int k = 0;
  int max_seen = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<int> row;
    for (long v; ss >> v;) {
      if (v < 1 || v > 65535) throw std::invalid_argument("read_groups: line " + std::to_string(lineno) + ": bad index");
      row.push_back(static_cast<int>(v));
    }
    if (!ss.eof()) throw std::invalid_argument("read_groups: line " + std::to_string(lineno) + ": not an integer");
    if (row.empty()) continue;
    if (k == 0) k = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != k)
      throw std::invalid_argument("read_groups: line " + std::to_string(lineno) + ": inconsistent group size");
    for (int v : row) {
      max_seen = std::max(max_seen, v);
      cells.push_back(static_cast<std::uint16_t>(v - 1));
    }
  }
  if (k == 0) throw std::invalid_argument("read_groups: no groups");
  if (d == 0) d = max_seen;
  if (max_seen > d) throw std::invalid_argument("read_groups: category index exceeds dimension");
  return GroupedDataset(d, k, std::move(cells));
}

void write_groups(std::ostream& out, const GroupedDataset& ds) {
  for (std::size_t g = 0; g < ds.n_groups(); ++g) {
    const auto row = ds.group(g);
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j] + 1;
    out << '\n';
  }
}

}  // namespace gmix
