#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gmix/estimation.hpp"
#include "gmix/multinomial.hpp"
#include "helpers.hpp"

using namespace gmix;
using testing::std_vec;
using testing::vec;

namespace {

GroupedDataset dataset(int d, const std::vector<std::vector<int>>& groups) {
  GroupedDataset ds(d, static_cast<int>(groups.front().size()));
  for (const auto& g : groups) ds.add_group(g);
  return ds;
}

// Flat indices of nondecreasing multi-indices (one representative per orbit).
std::vector<std::size_t> sorted_indices(int d, int r) {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < oracle::ipow(static_cast<std::size_t>(d), r); ++f) {
    const auto idx = oracle::digits(f, d, r);
    if (std::is_sorted(idx.begin(), idx.end())) out.push_back(f);
  }
  return out;
}

}  // namespace

TEST_CASE("empirical_sym_moment examples") {
  const auto ds = dataset(2, {{0, 0, 1}});
  const auto third = 1.0 / 3;
  const auto m2 = moment_from_groups(ds, 2);
  CHECK(testing::max_abs(std_vec(m2.tensor.dense()), {third, third, third, 0}) < 1e-15);
  CHECK(m2.order == 2);
  CHECK(m2.n_groups == 1);
  CHECK_FALSE(m2.transform.has_value());

  const auto data = dataset(3, {{0, 1, 2, 2}, {1, 1, 0, 2}, {2, 2, 2, 2}});
  const auto m1 = empirical_sym_moment(data, 1);
  CHECK(testing::max_abs(std_vec(m1.tensor.dense()), {2.0 / 12, 3.0 / 12, 7.0 / 12}) < 1e-15);

  const DiagonalMap b(vec({0.5, 2.0, 3.0}));
  const auto constant = dataset(3, {{1, 1, 1, 1}});
  for (int r = 1; r <= 4; ++r)
    CHECK(max_abs_diff(moment_from_groups(constant, r, b).tensor.dense(),
                       outer_power(b.apply(Vector::Unit(3, 1)), r).dense()) < 1e-15);

  CHECK_THROWS(moment_from_groups(ds, 4));
  CHECK_THROWS(moment_from_tally(tally(ds), 4));
  // order 0 is the empty power: the scalar 1
  CHECK(moment_from_groups(ds, 0).tensor[0] == 1.0);
}

TEST_CASE("tally path, tuple path and the k! permutation sum agree") {
  oracle::Gen g(51);
  for (int trial = 0; trial < 120; ++trial) {
    const int d = g.integer(1, 3), k = g.integer(1, 5), n = g.integer(1, 100);
    std::vector<std::vector<int>> groups;
    for (int i = 0; i < n; ++i) {
      std::vector<int> grp;
      for (int j = 0; j < k; ++j) grp.push_back(g.integer(0, d - 1));
      groups.push_back(grp);
    }
    const auto ds = dataset(d, groups);
    const auto h = tally(ds);
    oracle::Vec diag(static_cast<std::size_t>(d), 1.0);
    std::optional<DiagonalMap> b;
    if (trial % 2) {
      for (double& x : diag) x = g.uniform(0.2, 3.0);
      b = DiagonalMap(vec(diag));
    }
    for (int r = 1; r <= k; ++r) {
      const auto raw = moment_from_groups(ds, r, b);
      const auto fast = moment_from_tally(h, r, b);
      const auto ref = oracle::permutation_moment(groups, d, r, diag);
      CHECK(max_abs_diff(raw.tensor.dense(), fast.tensor.dense()) <= 1e-12);
      CHECK(testing::max_abs(std_vec(raw.tensor.dense()), ref) <= 1e-12);
      CHECK(symmetry_defect(fast.tensor.dense()) <= 1e-12);
      if (!b) {
        CHECK(fast.tensor.dense().sum() == doctest::Approx(1.0).epsilon(1e-9));
        for (double x : fast.tensor.entries()) CHECK(x >= 0.0);
      }
    }
  }
}

TEST_CASE("moment_from_tally examples") {
  const GroupTallyHistogram h{2, 3, {{{2, 1}, 1}}};
  const auto third = 1.0 / 3;
  CHECK(testing::max_abs(std_vec(moment_from_tally(h, 2).tensor.dense()), {third, third, third, 0}) < 1e-15);

  // r = k: the moment is T_{k,d} applied to the normalized tally.
  const auto ds = draw_groups(testing::reference(), 4, 500, 3);
  const auto t = tally(ds);
  SignedCompositionMeasure measure;
  for (const auto& [key, cnt] : t.counts) measure[key] = static_cast<double>(cnt) / static_cast<double>(t.total());
  CHECK(max_abs_diff(moment_from_tally(t, 4).tensor.dense(), t_nq_apply(measure, 4, 3)) < 1e-12);
}

TEST_CASE("empirical_sym_moment dispatch gives the same estimate on either path") {
  const auto ds = draw_groups(testing::reference(), 5, 3000, 4);  // 3000 > 10 * 21 takes the tally path
  const auto small = draw_groups(testing::reference(), 5, 50, 4);
  for (int r = 1; r <= 5; ++r) {
    CHECK(max_abs_diff(empirical_sym_moment(ds, r).tensor.dense(), moment_from_groups(ds, r).tensor.dense()) <= 1e-12);
    CHECK(max_abs_diff(empirical_sym_moment(small, r).tensor.dense(), moment_from_tally(tally(small), r).tensor.dense()) <= 1e-12);
  }
  CHECK(composition_count(5, 3) == 21);
  CHECK(composition_count(0, 4) == 1);
}

TEST_CASE("build_c_hat") {
  const auto pop = MomentSource::from_population(testing::reference());
  const DiagonalMap b(vec({1.0 / 3, 0.5, 1.0}));
  const auto c1 = build_c_hat(pop, 1, b);
  CHECK(c1.rows() == 1);
  CHECK(c1(0, 0) == 1.0);

  const auto c3 = build_c_hat(pop, 3, b);
  CHECK(c3.rows() == 9);
  CHECK(c3.cols() == 9);
  // Gram oracle on (B p_i)^{(x)2}
  std::vector<oracle::Vec> sq;
  for (const auto& c : oracle::reference_components()) sq.push_back(oracle::outer_power({c[0] / 3, c[1] / 2, c[2]}, 2));
  const int gram = oracle::gram_rank(sq, 1e-12);
  CHECK(gram == 3);
  const Eigen::SelfAdjointEigenSolver<MatOperator> es(c3);
  int above = 0;
  for (Eigen::Index i = 0; i < 9; ++i) above += es.eigenvalues()[i] > 1e-10;
  CHECK(above == gram);
  CHECK(es.eigenvalues().minCoeff() > -1e-14);  // PSD

  const auto ds = draw_groups(testing::reference(), 5, 400, 9);
  const auto src = MomentSource::from_dataset(ds);
  const auto ch = build_c_hat(src, 3, b);
  CHECK((ch - ch.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS(build_c_hat(MomentSource::from_dataset(draw_groups(testing::reference(), 3, 10, 1)), 3, b));
}

TEST_CASE("build_e_hat") {
  const auto ds = draw_groups(testing::reference(), 5, 200, 5);
  const auto src = MomentSource::from_dataset(ds);
  CHECK(max_abs_diff(build_e_hat(src, 2).tensor.dense(), empirical_sym_moment(ds, 1).tensor.dense()) == 0.0);
  CHECK_FALSE(build_e_hat(src, 3).transform.has_value());

  const auto pop = build_e_hat(MomentSource::from_population(testing::reference()), 3);
  CHECK(testing::max_abs(std_vec(pop.tensor.dense()),
                         oracle::mixture_moment(oracle::reference_weights(), oracle::reference_components(), 2)) < 1e-15);
  const MatOperator pair = unfold(pop.tensor.dense(), 1);
  const Vector marginal = pair.colwise().sum().transpose();
  CHECK(testing::max_abs(std_vec(marginal), {0.38, 0.32, 0.30}) < 1e-15);

  const auto one = dataset(2, {{0, 0, 1, 1, 1}});
  CHECK(testing::max_abs(std_vec(build_e_hat(MomentSource::from_dataset(one), 3).tensor.dense()), {0.1, 0.3, 0.3, 0.3}) <
        1e-15);
}

TEST_CASE("MomentSource kinds") {
  const auto ds = draw_groups(testing::reference(), 5, 300, 6);
  const auto a = MomentSource::from_dataset(ds);
  const auto b = MomentSource::from_tally(tally(ds));
  const auto p = MomentSource::from_population(testing::reference());
  CHECK(a.max_order() == 5);
  CHECK(b.n_groups() == 300);
  CHECK(p.max_order() == -1);
  CHECK(p.is_population());
  CHECK(p.population() != nullptr);
  CHECK(a.dim() == 3);
  for (int r = 1; r <= 5; ++r) CHECK(max_abs_diff(a.moment(r).tensor.dense(), b.moment(r).tensor.dense()) <= 1e-12);
  CHECK_THROWS(a.moment(6));
}

TEST_CASE("estimator is unbiased for the population moment") {
  const auto mix = testing::reference();
  const int seeds = 200;
  const std::size_t n = 2000;
  std::vector<std::vector<double>> sum(6), sumsq(6);
  for (int r = 1; r <= 5; ++r) {
    sum[static_cast<std::size_t>(r)].assign(oracle::ipow(3, r), 0.0);
    sumsq[static_cast<std::size_t>(r)].assign(oracle::ipow(3, r), 0.0);
  }
  for (int s = 0; s < seeds; ++s) {
    const auto h = draw_tally(mix, 5, n, 1000 + static_cast<std::uint64_t>(s), 1);
    for (int r = 1; r <= 5; ++r) {
      const auto e = moment_from_tally(h, r);
      for (std::size_t f = 0; f < e.tensor.size(); ++f) {
        sum[static_cast<std::size_t>(r)][f] += e.tensor[f];
        sumsq[static_cast<std::size_t>(r)][f] += e.tensor[f] * e.tensor[f];
      }
    }
  }
  int checked = 0;
  for (int r = 1; r <= 5; ++r) {
    const auto truth = oracle::mixture_moment(oracle::reference_weights(), oracle::reference_components(), r);
    for (std::size_t f : sorted_indices(3, r)) {
      const double mean = sum[static_cast<std::size_t>(r)][f] / seeds;
      const double var = (sumsq[static_cast<std::size_t>(r)][f] - seeds * mean * mean) / (seeds - 1);
      const double se = std::sqrt(var / seeds);
      CHECK(std::abs(mean - truth[f]) <= 3 * se);
      ++checked;
    }
  }
  CHECK(checked == 3 + 6 + 10 + 15 + 21);
}

TEST_CASE("products of independent one-hot vectors factor at rate n^-1/2") {
  // E[Z1 (x) Z2] = E[Z1] (x) E[Z2] for independent Z1, Z2; the empirical gap
  // should shrink like n^-1/2.
  oracle::Gen g(52);
  const oracle::Vec p1{0.2, 0.5, 0.3}, p2{0.6, 0.1, 0.3};
  auto draw = [&](const oracle::Vec& p) {
    double u = g.uniform(), acc = 0;
    for (int i = 0; i < 3; ++i)
      if ((acc += p[static_cast<std::size_t>(i)]) > u) return i;
    return 2;
  };
  std::vector<double> logn, logerr;
  for (int n : {100, 1000, 10000, 100000}) {
    double err = 0;
    const int reps = 30;
    for (int rep = 0; rep < reps; ++rep) {
      oracle::Vec joint(9, 0.0), m1(3, 0.0), m2(3, 0.0);
      for (int i = 0; i < n; ++i) {
        const int a = draw(p1), b = draw(p2);
        joint[static_cast<std::size_t>(3 * a + b)] += 1.0 / n;
        m1[static_cast<std::size_t>(a)] += 1.0 / n;
        m2[static_cast<std::size_t>(b)] += 1.0 / n;
      }
      const auto prod = oracle::kron({m1, m2});
      double fro = 0;
      for (std::size_t f = 0; f < 9; ++f) fro += (joint[f] - prod[f]) * (joint[f] - prod[f]);
      err += std::sqrt(fro) / reps;
    }
    logn.push_back(std::log(n));
    logerr.push_back(std::log(err));
  }
  const double mx = std::accumulate(logn.begin(), logn.end(), 0.0) / 4;
  const double my = std::accumulate(logerr.begin(), logerr.end(), 0.0) / 4;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 4; ++i) {
    sxy += (logn[static_cast<std::size_t>(i)] - mx) * (logerr[static_cast<std::size_t>(i)] - my);
    sxx += (logn[static_cast<std::size_t>(i)] - mx) * (logn[static_cast<std::size_t>(i)] - mx);
  }
  CHECK(std::abs(sxy / sxx + 0.5) <= 0.15);
}
