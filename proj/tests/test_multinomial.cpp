#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "gmix/counterexamples.hpp"
#include "gmix/estimation.hpp"
#include "gmix/multinomial.hpp"
#include "gmix/sampling.hpp"
#include "helpers.hpp"

using namespace gmix;
using testing::std_vec;
using testing::vec;

namespace {

// Average over all n! orderings of the word, by brute force.
oracle::Vec t_oracle(const Composition& x, int q) {
  std::vector<int> word;
  for (int c = 0; c < q; ++c) word.insert(word.end(), static_cast<std::size_t>(x[static_cast<std::size_t>(c)]), c);
  return oracle::permutation_moment({word}, q, static_cast<int>(word.size()), oracle::Vec(static_cast<std::size_t>(q), 1.0));
}

std::vector<WeightedMultinomial> as_multinomial(const MixtureSpec& mix, int n) {
  std::vector<WeightedMultinomial> out;
  for (int i = 0; i < mix.order(); ++i) out.push_back({mix.weights()[i], MultinomialSpec(n, mix.components()[static_cast<std::size_t>(i)])});
  return out;
}

}  // namespace

TEST_CASE("enumerate_compositions") {
  CHECK(enumerate_compositions(2, 2) == std::vector<Composition>{{2, 0}, {1, 1}, {0, 2}});
  CHECK(enumerate_compositions(0, 3) == std::vector<Composition>{{0, 0, 0}});
  CHECK(enumerate_compositions(6, 4).size() == 84);
  for (int n = 0; n <= 6; ++n)
    for (int q = 1; q <= 4; ++q) {
      const auto all = enumerate_compositions(n, q);
      CHECK(all.size() == composition_count(n, q));
      CHECK(std::set<Composition>(all.begin(), all.end()).size() == all.size());
      CHECK(std::is_sorted(all.begin(), all.end(), std::greater<>()));
      for (const auto& x : all) {
        CHECK(static_cast<int>(x.size()) == q);
        CHECK(std::accumulate(x.begin(), x.end(), 0) == n);
      }
    }
}

TEST_CASE("multinomial_pmf") {
  CHECK(multinomial_pmf(MultinomialSpec(2, ProbabilityVector(vec({0.5, 0.5}))), {1, 1}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(multinomial_pmf(MultinomialSpec(2, ProbabilityVector(vec({0.2, 0.8}))), {2, 0}) == doctest::Approx(0.04).epsilon(1e-14));
  CHECK_THROWS(multinomial_pmf(MultinomialSpec(2, ProbabilityVector(vec({0.2, 0.8}))), {2, 1}));
  CHECK_THROWS(multinomial_pmf(MultinomialSpec(2, ProbabilityVector(vec({0.2, 0.8}))), {2, 0, 0}));
  CHECK_THROWS(MultinomialSpec(0, ProbabilityVector(vec({0.2, 0.8}))));
  CHECK_THROWS(MultinomialSpec(2, ProbabilityVector(vec({1.0}))));

  oracle::Gen g(71);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = g.integer(1, 6), q = g.integer(2, 4);
    const MultinomialSpec spec(n, ProbabilityVector(vec(g.simplex(q))));
    double total = 0;
    for (const auto& x : enumerate_compositions(n, q)) total += multinomial_pmf(spec, x);
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
}

TEST_CASE("f_nq") {
  // 0-based symbols
  CHECK(f_nq({1, 0, 3, 2}) == std::vector<int>{0, 2, 2, 2, 3, 3});
  CHECK(f_nq({4, 0, 0}) == std::vector<int>{0, 0, 0, 0});
  CHECK(f_nq({0, 1, 0}) == std::vector<int>{1});
}

TEST_CASE("t_nq_apply examples") {
  const auto mixed = t_nq_apply({{{1, 1}, 1.0}}, 2, 2);
  CHECK(std_vec(mixed) == oracle::Vec{0, 0.5, 0.5, 0});
  CHECK(std_vec(t_nq_apply({{{2, 0}, 1.0}}, 2, 2)) == oracle::Vec{1, 0, 0, 0});
  const auto pmf = t_nq_apply(multinomial_measure(MultinomialSpec(2, ProbabilityVector(vec({0.2, 0.8})))), 2, 2);
  CHECK(testing::max_abs(std_vec(pmf), {0.04, 0.16, 0.16, 0.64}) < 1e-15);
  CHECK(testing::max_abs(std_vec(pmf), oracle::outer_power({0.2, 0.8}, 2)) < 1e-15);
  CHECK_THROWS(t_nq_apply({{{1, 0}, 1.0}}, 2, 2));
  CHECK_THROWS(t_nq_apply({{{1, 1, 0}, 1.0}}, 2, 2));
}

TEST_CASE("t_nq_apply matches the permutation average and is symmetric and linear") {
  oracle::Gen g(72);
  for (int n = 1; n <= 6; ++n)
    for (int q = 1; q <= 4; ++q) {
      const auto all = enumerate_compositions(n, q);
      SignedCompositionMeasure mu;
      oracle::Vec expect(oracle::ipow(static_cast<std::size_t>(q), n), 0.0);
      double mass = 0;
      for (int pick = 0; pick < 3; ++pick) {
        const auto& x = all[static_cast<std::size_t>(g.integer(0, static_cast<int>(all.size()) - 1))];
        const double c = g.normal();
        mu[x] += c;
        mass += c;
        const auto tx = t_oracle(x, q);
        for (std::size_t f = 0; f < expect.size(); ++f) expect[f] += c * tx[f];
      }
      const auto t = t_nq_apply(mu, n, q);
      CHECK(symmetry_defect(t) == 0.0);
      CHECK(std::abs(t.sum() - mass) < 1e-12);
      CHECK(testing::max_abs(std_vec(t), expect) < 1e-12);
    }
}

TEST_CASE("multinomial law maps to the tensor power") {
  CHECK(verify_lemma_mult(MultinomialSpec(2, ProbabilityVector(vec({0.2, 0.8})))) < 1e-15);
  CHECK(verify_lemma_mult(MultinomialSpec(1, ProbabilityVector(vec({0.1, 0.6, 0.3})))) == 0.0);
  oracle::Gen g(73);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = g.integer(1, 6), q = g.integer(2, 4);
    const MultinomialSpec spec(n, ProbabilityVector(vec(g.simplex(q))));
    CHECK(verify_lemma_mult(spec) < 1e-12);
    // independent route: pmf pushed through the brute-force average
    oracle::Vec t(oracle::ipow(static_cast<std::size_t>(q), n), 0.0);
    for (const auto& x : enumerate_compositions(n, q)) {
      const auto tx = t_oracle(x, q);
      const double px = multinomial_pmf(spec, x);
      for (std::size_t f = 0; f < t.size(); ++f) t[f] += px * tx[f];
    }
    CHECK(testing::max_abs(t, oracle::outer_power(std_vec(spec.p), n)) < 1e-12);
  }
}

TEST_CASE("multinomial_mixture_equal") {
  const auto mix = testing::reference();
  auto a = as_multinomial(mix, 4);
  auto b = a;
  std::reverse(b.begin(), b.end());
  CHECK(multinomial_mixture_equal(a, b, 1e-14));
  b[0].weight += 0.01;
  b[1].weight -= 0.01;
  CHECK_FALSE(multinomial_mixture_equal(a, b, 1e-6));

  for (int m = 2; m <= 4; ++m) {
    const auto pair = build_pair(m, 2 * m);
    CHECK(multinomial_mixture_equal(as_multinomial(pair.p, 2 * m - 2), as_multinomial(pair.p_prime, 2 * m - 2), 1e-9));
    CHECK_FALSE(multinomial_mixture_equal(as_multinomial(pair.p, 2 * m - 1), as_multinomial(pair.p_prime, 2 * m - 1), 1e-9));
  }

  CHECK_THROWS(multinomial_mixture_equal(as_multinomial(mix, 3), as_multinomial(mix, 4), 1e-9));
  CHECK_THROWS(multinomial_mixture_equal(as_multinomial(mix, 3), as_multinomial(build_pair(2, 4).p, 3), 1e-9));
}

TEST_CASE("tallies pushed through T equal the full-order moment") {
  oracle::Gen g(74);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = g.integer(2, 4), k = g.integer(1, 5);
    const auto mix = testing::mixture({0.4, 0.6}, {g.simplex(d), g.simplex(d)});
    const auto h = tally(draw_groups(mix, k, 300, static_cast<std::uint64_t>(trial)));
    SignedCompositionMeasure mu;
    for (const auto& [x, c] : h.counts) mu[x] = static_cast<double>(c) / static_cast<double>(h.total());
    const auto via_t = t_nq_apply(mu, k, d);
    CHECK(max_abs_diff(via_t, moment_from_tally(h, k).tensor.dense()) < 1e-12);
  }
}
