#include "gmix/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "gmix/errors.hpp"
#include "gmix/rng.hpp"

namespace gmix {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr int kMaxProbeRetries = 16;
constexpr double kProbeFloor = 1e-10;

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const RecoveryError&) {
    throw;
  } catch (const std::exception& e) {
    throw RecoveryError(name, e.what());
  }
}

// <t, p^{(x)k}> by contracting one axis at a time from the back.
double contract_power(const DenseTensor& t, const Vector& p) {
  Vector v = t.as_vector();
  const auto d = p.size();
  for (int a = 0; a < t.order(); ++a) {
    const Vector next = Eigen::Map<const RowMajor>(v.data(), v.size() / d, d) * p;
    v = next;
  }
  return v[0];
}

// Turns an eigenvector u (x) w (length d * rest) into a component estimate:
// view as the d x rest operator u <w, .>, hit it with a probe, undo B.
ProbabilityVector component_from_eigvec(const Vector& v, int d, const DiagonalMap& b, ProbeKind probe,
                                        std::uint64_t seed, int index, bool clip) {
  const auto rest = v.size() / d;
  const Eigen::Map<const RowMajor> op(v.data(), d, rest);

  Vector x;
  if (probe == ProbeKind::singular) {
    Eigen::JacobiSVD<MatOperator> svd(MatOperator(op), Eigen::ComputeThinU);
    x = svd.matrixU().col(0) * svd.singularValues()[0];
  } else {
    for (int retry = 0;; ++retry) {
      if (retry == kMaxProbeRetries)
        throw std::runtime_error("every probe was nearly orthogonal to eigenvector " + std::to_string(index));
      CounterRng rng(seed, streams::kProbe + static_cast<std::uint64_t>(index) * 64 + static_cast<std::uint64_t>(retry));
      Vector z(rest);
      for (Eigen::Index i = 0; i < rest; ++i) z[i] = rng.normal();
      x = op * z;
      if (x.norm() >= kProbeFloor) break;
    }
  }

  Vector p = b.inverse().apply(x);
  if (p.sum() < 0) p = -p;
  if (clip) p = p.cwiseMax(0.0);
  if ((p.array() < 0.0).any())
    throw std::runtime_error("component " + std::to_string(index) + " has negative entries and clipping is off");
  if (!(p.sum() > 0.0)) throw std::runtime_error("component " + std::to_string(index) + " vanished after clipping");
  return ProbabilityVector::normalized(p);
}

std::vector<ProbabilityVector> components_from_eig(const EigenDecomposition& eig, int m, int d, const DiagonalMap& b,
                                                   ProbeKind probe, std::uint64_t seed, bool clip) {
  if (eig.values.size() < m) throw std::invalid_argument("operator has fewer than m eigenvectors");
  std::vector<ProbabilityVector> out;
  for (int i = 0; i < m; ++i) out.push_back(component_from_eigvec(eig.vectors.col(i), d, b, probe, seed, i, clip));
  return out;
}

MatOperator gram_operator(const MatOperator& t) {
  const MatOperator s = t * t.transpose();
  return 0.5 * (s + s.transpose());
}

}  // namespace

ProbeKind parse_probe(const std::string& s) {
  if (s == "gaussian") return ProbeKind::gaussian;
  if (s == "singular") return ProbeKind::singular;
  throw std::invalid_argument("unknown probe '" + s + "'");
}

std::string to_string(ProbeKind p) { return p == ProbeKind::gaussian ? "gaussian" : "singular"; }

WeightSolver parse_weight_solver(const std::string& s) {
  if (s == "clip-renormalize") return WeightSolver::clip_renormalize;
  if (s == "simplex-projection") return WeightSolver::simplex_projection;
  throw std::invalid_argument("unknown weight solver '" + s + "'");
}

std::string to_string(WeightSolver w) {
  return w == WeightSolver::clip_renormalize ? "clip-renormalize" : "simplex-projection";
}

MatOperator whiten(const MatOperator& c_hat, int m, double eig_floor) { return psd_sqrt_pinv(c_hat, m, eig_floor); }

MatOperator build_t_hat(const MomentEstimate& q_hat, const MatOperator& w) {
  const int order = q_hat.tensor.order();
  if (order < 1 || order % 2 == 0) throw std::invalid_argument("build_t_hat: moment order must be odd (2m-1)");
  const int m = (order + 1) / 2;
  const int d = q_hat.tensor.dim();
  const auto side = static_cast<Eigen::Index>(ipow(d, m - 1));
  if (w.rows() != side || w.cols() != side)
    throw std::invalid_argument("build_t_hat: whitening map must be " + std::to_string(side) + "x" +
                                std::to_string(side));
  const std::vector<BlockMap> blocks{{1, std::nullopt}, {m - 1, w}, {m - 1, w}};
  const DenseTensor a = blockwise_apply(q_hat.tensor.dense(), blocks);
  return Eigen::Map<const RowMajor>(a.entries().data(), static_cast<Eigen::Index>(ipow(d, m)), side);
}

std::vector<ProbabilityVector> extract_components(const MatOperator& t_hat, int m, const DiagonalMap& b,
                                                  ProbeKind probe, std::uint64_t seed, bool clip_negatives) {
  const int d = b.dim();
  if (t_hat.rows() != static_cast<Eigen::Index>(ipow(d, m)) ||
      t_hat.cols() != static_cast<Eigen::Index>(ipow(d, m - 1)))
    throw std::invalid_argument("extract_components: T has the wrong shape");
  const MatOperator s = gram_operator(t_hat);
  return components_from_eig(sym_eig(s), m, d, b, probe, seed, clip_negatives);
}

Vector project_to_simplex(const Vector& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double t = (cum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

WeightFit recover_weights(const MomentEstimate& e_hat, const std::vector<ProbabilityVector>& components,
                          WeightSolver solver) {
  const auto m = static_cast<Eigen::Index>(components.size());
  if (m == 0) throw std::invalid_argument("recover_weights: no components");
  const int r = e_hat.tensor.order();
  const DenseTensor& e = e_hat.tensor.dense();
  for (const auto& c : components)
    if (c.dim() != e.dim()) throw std::invalid_argument("recover_weights: dimension mismatch");

  MatOperator gram(m, m);
  Vector rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    rhs[i] = contract_power(e, components[static_cast<std::size_t>(i)].entries());
    for (Eigen::Index j = 0; j < m; ++j)
      gram(i, j) = std::pow(components[static_cast<std::size_t>(i)].entries().dot(components[static_cast<std::size_t>(j)].entries()), r);
  }

  WeightFit fit;
  Eigen::JacobiSVD<MatOperator> svd(gram, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  fit.gram_singular = sv[m - 1] <= 1e-12 * sv[0];
  svd.setThreshold(1e-12);
  const Vector alpha = svd.solve(rhs);

  Vector w;
  if (solver == WeightSolver::simplex_projection) {
    w = project_to_simplex(alpha);
  } else {
    w = alpha.cwiseMax(0.0);
    if (!(w.sum() > 0.0)) throw std::runtime_error("recover_weights: every least-squares weight is nonpositive");
    w /= w.sum();
  }

  DenseTensor fitted(e.dim(), r);
  for (Eigen::Index i = 0; i < m; ++i) {
    DenseTensor term = outer_power(components[static_cast<std::size_t>(i)].entries(), r).dense();
    term *= w[i];
    fitted += term;
  }
  fit.residual = (e.as_vector() - fitted.as_vector()).norm();
  fit.weights = std::move(w);
  return fit;
}

RecoveryResult recover_full(const MomentSource& src, const RecoveryConfig& config) {
  const int m = config.m;
  if (m < 1) throw RecoveryError("config", "m must be >= 1");
  if (src.max_order() >= 0 && src.max_order() < 2 * m - 1)
    throw RecoveryError("config", "group size " + std::to_string(src.max_order()) + " < 2m-1 = " +
                                      std::to_string(2 * m - 1));
  const int d = src.dim();

  RecoveryResult out;
  out.config = config;
  const auto xi = stage("dominating", [&] { return random_dominating_measure(d, config.dominating, config.seed); });
  const DiagonalMap b = b_map(xi);
  out.diagnostics.dominating_y = xi.y();

  const MatOperator c_hat = stage("c_hat", [&] { return build_c_hat(src, m, b); });
  const auto c_eig = stage("whiten", [&] { return sym_eig(c_hat); });
  out.diagnostics.whitening_spectrum = c_eig.values;
  const MatOperator w = stage("whiten", [&] { return psd_sqrt_pinv(c_eig, m, config.eig_floor); });

  const MatOperator t_hat = stage("t_hat", [&] { return build_t_hat(src.moment(2 * m - 1, b), w); });
  const MatOperator s = gram_operator(t_hat);
  const auto s_eig = stage("extract", [&] { return sym_eig(s); });
  out.diagnostics.spectral_eigenvalues = s_eig.values;
  out.components = stage("extract", [&] {
    return components_from_eig(s_eig, m, d, b, config.probe, config.seed, config.clip_negatives);
  });

  const auto fit = stage("weights", [&] { return recover_weights(build_e_hat(src, m), out.components, config.weight_solver); });
  out.weights = fit.weights;
  out.diagnostics.weight_residual = fit.residual;
  out.diagnostics.weight_gram_singular = fit.gram_singular;
  return out;
}

RecoveryResult recover_full(const GroupedDataset& data, const RecoveryConfig& config) {
  return recover_full(MomentSource::from_tally(tally(data)), config);
}

RecoveryResult li_recover_4(const MomentSource& src, const RecoveryConfig& config, bool force, double norm_gap_tol) {
  const int m = config.m;
  if (m < 1) throw RecoveryError("config", "m must be >= 1");
  if (src.max_order() >= 0 && src.max_order() < 4) throw RecoveryError("config", "group size must be >= 4");
  const int d = src.dim();

  RecoveryResult out;
  out.config = config;
  const auto xi = stage("dominating", [&] { return random_dominating_measure(d, config.dominating, config.seed); });
  const DiagonalMap b = b_map(xi);
  out.diagnostics.dominating_y = xi.y();

  if (!force) {
    if (const MixtureSpec* mix = src.population()) {
      const auto check = check_distinct_norms(*mix, xi, norm_gap_tol);
      if (!check.distinct) throw RecoveryError("gate", "components have equal xi-norms");
    }
  }

  const MatOperator c = stage("c_hat", [&] {
    const MatOperator u = unfold(src.moment(2, b).tensor.dense(), 1);
    return MatOperator(0.5 * (u + u.transpose()));
  });
  const auto c_eig = stage("whiten", [&] { return sym_eig(c); });
  out.diagnostics.whitening_spectrum = c_eig.values;
  const MatOperator w = stage("whiten", [&] { return psd_sqrt_pinv(c_eig, m, config.eig_floor); });

  const MatOperator s = stage("s_hat", [&] {
    const std::vector<BlockMap> blocks{{1, std::nullopt}, {1, w}, {1, std::nullopt}, {1, w}};
    const MatOperator u = unfold(blockwise_apply(src.moment(4, b).tensor.dense(), blocks), 2);
    return MatOperator(0.5 * (u + u.transpose()));
  });
  const auto s_eig = stage("extract", [&] { return sym_eig(s); });
  out.diagnostics.spectral_eigenvalues = s_eig.values;

  if (!force) {
    const double lmax = std::max(s_eig.values[0], std::numeric_limits<double>::min());
    for (int i = 0; i + 1 < m; ++i)
      if (s_eig.values[i] - s_eig.values[i + 1] <= norm_gap_tol * lmax)
        throw RecoveryError("gate", "top eigenvalues " + std::to_string(i) + " and " + std::to_string(i + 1) +
                                        " are not separated");
  }

  out.components = stage("extract", [&] {
    return components_from_eig(s_eig, m, d, b, config.probe, config.seed, config.clip_negatives);
  });
  const auto fit = stage("weights", [&] { return recover_weights(src.moment(2), out.components, config.weight_solver); });
  out.weights = fit.weights;
  out.diagnostics.weight_residual = fit.residual;
  out.diagnostics.weight_gram_singular = fit.gram_singular;
  return out;
}

int estimate_num_components(const MomentSource& src, int power, int max_m, double rel_tol) {
  if (power < 1) throw std::invalid_argument("estimate_num_components: power must be >= 1");
  if (src.max_order() >= 0 && src.max_order() < 2 * power)
    throw std::invalid_argument("estimate_num_components: group size must be >= 2 * power");
  const int rank = numerical_rank(unfold(src.moment(2 * power).tensor.dense(), power), rel_tol);
  return max_m > 0 ? std::min(rank, max_m) : rank;
}

}  // namespace gmix
