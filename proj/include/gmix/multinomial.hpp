#pragma once

#include <map>
#include <vector>

#include "gmix/core_model.hpp"
#include "gmix/sampling.hpp"
#include "gmix/tensor.hpp"

namespace gmix {

/// All compositions of n into q parts, ordered with the first coordinate
/// descending, then the second, and so on: (n,0,..), (n-1,1,0,..), ...,
/// (0,..,0,n). Count is C(n+q-1, n).
std::vector<Composition> enumerate_compositions(int n, int q);

struct MultinomialSpec {
  int n = 1;
  ProbabilityVector p;

  MultinomialSpec(int trials, ProbabilityVector probs);
  int q() const { return p.dim(); }
};

double multinomial_pmf(const MultinomialSpec& spec, const Composition& x);

/// Nondecreasing word with x_i copies of symbol i (0-based symbols).
std::vector<int> f_nq(const Composition& x);

/// Finitely supported signed measure on compositions.
using SignedCompositionMeasure = std::map<Composition, double>;

/// The full pmf of a multinomial as a measure on compositions.
SignedCompositionMeasure multinomial_measure(const MultinomialSpec& spec);

/// Linear map sending delta_x to the uniform average over all n! orderings
/// of f_nq(x): mass x_1!...x_q!/n! on each distinct arrangement.
DenseTensor t_nq_apply(const SignedCompositionMeasure& measure, int n, int q);

/// ||T_{n,q}(pmf of spec) - p^{(x)n}||_inf.
double verify_lemma_mult(const MultinomialSpec& spec);

struct WeightedMultinomial {
  double weight;
  MultinomialSpec spec;
};

/// True iff sum a_i p_i^{(x)n} and sum b_j r_j^{(x)n} agree within tol (sup
/// norm); T_{n,q} is injective on multinomial mixtures, so this decides
/// equality of the mixtures themselves.
bool multinomial_mixture_equal(const std::vector<WeightedMultinomial>& a, const std::vector<WeightedMultinomial>& b,
                               double tol);

}  // namespace gmix
