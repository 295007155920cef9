#include "gmix/multinomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gmix {

namespace {

void compositions_rec(int remaining, int part, Composition& cur, std::vector<Composition>& out) {
  const int q = static_cast<int>(cur.size());
  if (part == q - 1) {
    cur[static_cast<std::size_t>(part)] = remaining;
    out.push_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[static_cast<std::size_t>(part)] = v;
    compositions_rec(remaining - v, part + 1, cur, out);
  }
}

void check_composition(const Composition& x, int n, int q) {
  if (static_cast<int>(x.size()) != q) throw std::invalid_argument("composition has the wrong length");
  int s = 0;
  for (int v : x) {
    if (v < 0) throw std::invalid_argument("composition has a negative entry");
    s += v;
  }
  if (s != n) throw std::invalid_argument("composition does not sum to the number of trials");
}

// n! / (x_1! ... x_q!) as a product of binomials; exact while it fits in a double.
double multinomial_coefficient(const Composition& x) {
  double coef = 1.0;
  int total = 0;
  for (int v : x)
    for (int i = 1; i <= v; ++i) coef = coef * (++total) / i;
  return coef;
}

DenseTensor mixture_tensor(const std::vector<WeightedMultinomial>& mix, int n, int q) {
  DenseTensor acc(q, n);
  for (const auto& [w, spec] : mix) {
    DenseTensor term = outer_power(spec.p.entries(), n).dense();
    term *= w;
    acc += term;
  }
  return acc;
}

}  // namespace

std::vector<Composition> enumerate_compositions(int n, int q) {
  if (n < 0 || q < 1) throw std::invalid_argument("enumerate_compositions: need n >= 0 and q >= 1");
  std::vector<Composition> out;
  Composition cur(static_cast<std::size_t>(q), 0);
  compositions_rec(n, 0, cur, out);
  return out;
}

MultinomialSpec::MultinomialSpec(int trials, ProbabilityVector probs) : n(trials), p(std::move(probs)) {
  if (n < 1) throw std::invalid_argument("MultinomialSpec: need n >= 1");
  if (p.dim() < 2) throw std::invalid_argument("MultinomialSpec: need q >= 2");
}

double multinomial_pmf(const MultinomialSpec& spec, const Composition& x) {
  check_composition(x, spec.n, spec.q());
  double prod = 1.0;
  for (int i = 0; i < spec.q(); ++i) {
    const int xi = x[static_cast<std::size_t>(i)];
    if (xi > 0) prod *= std::pow(spec.p[i], xi);
  }
  return multinomial_coefficient(x) * prod;
}

std::vector<int> f_nq(const Composition& x) {
  std::vector<int> word;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0) throw std::invalid_argument("f_nq: negative entry");
    word.insert(word.end(), static_cast<std::size_t>(x[i]), static_cast<int>(i));
  }
  return word;
}

SignedCompositionMeasure multinomial_measure(const MultinomialSpec& spec) {
  SignedCompositionMeasure out;
  for (auto& x : enumerate_compositions(spec.n, spec.q())) {
    const double v = multinomial_pmf(spec, x);
    out.emplace(std::move(x), v);
  }
  return out;
}

DenseTensor t_nq_apply(const SignedCompositionMeasure& measure, int n, int q) {
  if (n < 0 || q < 1) throw std::invalid_argument("t_nq_apply: need n >= 0 and q >= 1");
  DenseTensor out(q, n);
  for (const auto& [x, coef] : measure) {
    check_composition(x, n, q);
    // Each distinct arrangement is hit by x_1!...x_q! of the n! permutations.
    const double share = coef / multinomial_coefficient(x);
    std::vector<int> word = f_nq(x);
    do {
      out[out.flat_index(word)] += share;
    } while (std::next_permutation(word.begin(), word.end()));
  }
  return out;
}

double verify_lemma_mult(const MultinomialSpec& spec) {
  const DenseTensor lhs = t_nq_apply(multinomial_measure(spec), spec.n, spec.q());
  return max_abs_diff(lhs, outer_power(spec.p.entries(), spec.n).dense());
}

bool multinomial_mixture_equal(const std::vector<WeightedMultinomial>& a, const std::vector<WeightedMultinomial>& b,
                               double tol) {
  if (a.empty() || b.empty()) throw std::invalid_argument("multinomial_mixture_equal: empty mixture");
  const int n = a.front().spec.n;
  const int q = a.front().spec.q();
  for (const auto* side : {&a, &b})
    for (const auto& wm : *side)
      if (wm.spec.n != n || wm.spec.q() != q)
        throw std::invalid_argument("multinomial_mixture_equal: all specs must share n and q");
  return max_abs_diff(mixture_tensor(a, n, q), mixture_tensor(b, n, q)) <= tol;
}

}  // namespace gmix
