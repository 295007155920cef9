#pragma once

#include <optional>
#include <vector>

#include "gmix/core_model.hpp"

namespace gmix {

/// Two different mixtures whose grouped-sample laws agree up to order t-2.
///
/// Built from t distinct blends mu_i = eps_i * gamma + (1 - eps_i) * gamma'
/// whose (t-2)-th tensor powers satisfy one linear relation
/// sum_i alpha_i mu_i^{(x)t-2} = 0. The negative-alpha blends form `p`, the
/// positive ones `p_prime`, each side weighted by |alpha| normalized to 1.
struct CounterexamplePair {
  MixtureSpec p;
  MixtureSpec p_prime;
  int t = 0;
  int eq_order = 0;  // t - 2
  std::vector<double> epsilons;
  Vector alphas;     // unit norm, sign fixed so that at most floor(t/2) are negative
};

/// Unit-norm null vector of the (t-1) x t matrix
/// M[k][i] = C(t-2, k) eps_i^k (1 - eps_i)^(t-2-k), which is the symmetric
/// coordinate form of the blends' (t-2)-th powers. Throws if the null space
/// is not one-dimensional or some coefficient vanishes.
Vector dependence_coefficients(const std::vector<double>& epsilons);

/// eps_i = i / (t-1), i = 0..t-1.
std::vector<double> default_epsilons(int t);

/// t = 2m gives two order-m mixtures equal at order 2m-2; t = 2m+1 gives
/// orders m and m+1 equal at order 2m-1. Base measures default to e_1, e_2
/// in R^2.
CounterexamplePair build_pair(int m, int t, const std::optional<std::pair<ProbabilityVector, ProbabilityVector>>& base = {},
                              const std::optional<std::vector<double>>& epsilons = {});

struct MomentComparison {
  double max_abs_diff = 0.0;
  bool equal = false;
};

/// Sup-norm distance between the order-n population moments.
MomentComparison verify_moment_equality(const MixtureSpec& a, const MixtureSpec& b, int n, double tol);

}  // namespace gmix
