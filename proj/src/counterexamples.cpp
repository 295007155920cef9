#include "gmix/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gmix {

namespace {

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

std::vector<double> default_epsilons(int t) {
  if (t < 2) throw std::invalid_argument("default_epsilons: t must be >= 2");
  std::vector<double> eps(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) eps[static_cast<std::size_t>(i)] = static_cast<double>(i) / (t - 1);
  return eps;
}

Vector dependence_coefficients(const std::vector<double>& epsilons) {
  const int t = static_cast<int>(epsilons.size());
  if (t < 3) throw std::invalid_argument("dependence_coefficients: need t >= 3 values");
  for (double e : epsilons)
    if (!(e >= 0.0 && e <= 1.0)) throw std::invalid_argument("dependence_coefficients: epsilons must lie in [0,1]");

  // Square t x t system: the (t-1) symmetric coordinates plus a zero row, so
  // the SVD exposes the null direction as the smallest singular value.
  const int deg = t - 2;
  MatOperator mat = MatOperator::Zero(t, t);
  for (int k = 0; k <= deg; ++k)
    for (int i = 0; i < t; ++i) {
      const double e = epsilons[static_cast<std::size_t>(i)];
      mat(k, i) = binomial(deg, k) * std::pow(e, k) * std::pow(1.0 - e, deg - k);
    }

  Eigen::JacobiSVD<MatOperator> svd(mat, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int small = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] < 1e-10 * s[0]) ++small;
  if (small != 1)
    throw std::invalid_argument("dependence_coefficients: null space has dimension " + std::to_string(small) +
                                " (epsilons must be distinct)");

  Vector alpha = svd.matrixV().col(t - 1);
  alpha.normalize();
  if ((alpha.cwiseAbs().array() < 1e-12).any())
    throw std::invalid_argument("dependence_coefficients: a coefficient vanished");

  // At most floor(t/2) negatives; on a tie the first coefficient is negative.
  const auto negatives = (alpha.array() < 0.0).count();
  if (negatives > t / 2 || (2 * negatives == t && alpha[0] > 0)) alpha = -alpha;
  return alpha;
}

CounterexamplePair build_pair(int m, int t, const std::optional<std::pair<ProbabilityVector, ProbabilityVector>>& base,
                              const std::optional<std::vector<double>>& epsilons) {
  if (m < 1) throw std::invalid_argument("build_pair: m must be >= 1");
  if (t != 2 * m && t != 2 * m + 1) throw std::invalid_argument("build_pair: t must be 2m or 2m+1");
  if (t < 3) throw std::invalid_argument("build_pair: t must be >= 3");

  const ProbabilityVector gamma = base ? base->first : ProbabilityVector(Vector::Unit(2, 0));
  const ProbabilityVector gamma_prime = base ? base->second : ProbabilityVector(Vector::Unit(2, 1));
  if (gamma.dim() != gamma_prime.dim()) throw std::invalid_argument("build_pair: base dimension mismatch");
  if ((gamma.entries() - gamma_prime.entries()).cwiseAbs().maxCoeff() <= 1e-12)
    throw std::invalid_argument("build_pair: base measures must differ");

  const std::vector<double> eps = epsilons ? *epsilons : default_epsilons(t);
  if (static_cast<int>(eps.size()) != t) throw std::invalid_argument("build_pair: need exactly t epsilons");
  const Vector alpha = dependence_coefficients(eps);

  std::vector<ProbabilityVector> neg, pos;
  std::vector<double> neg_w, pos_w;
  for (int i = 0; i < t; ++i) {
    const double e = eps[static_cast<std::size_t>(i)];
    ProbabilityVector mu = ProbabilityVector::normalized(e * gamma.entries() + (1.0 - e) * gamma_prime.entries());
    if (alpha[i] < 0) {
      neg.push_back(std::move(mu));
      neg_w.push_back(-alpha[i]);
    } else {
      pos.push_back(std::move(mu));
      pos_w.push_back(alpha[i]);
    }
  }
  auto to_weights = [](const std::vector<double>& w) {
    Vector v = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
    return Vector(v / v.sum());
  };

  CounterexamplePair pair{MixtureSpec(to_weights(neg_w), std::move(neg)),
                          MixtureSpec(to_weights(pos_w), std::move(pos)),
                          t,
                          t - 2,
                          eps,
                          alpha};
  return pair;
}

MomentComparison verify_moment_equality(const MixtureSpec& a, const MixtureSpec& b, int n, double tol) {
  if (n < 1) throw std::invalid_argument("verify_moment_equality: n must be >= 1");
  if (a.dim() != b.dim()) throw std::invalid_argument("verify_moment_equality: dimension mismatch");
  const double diff = max_abs_diff(population_moment(a, n).dense(), population_moment(b, n).dense());
  return {diff, diff <= tol};
}

}  // namespace gmix
