#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gmix/core_model.hpp"
#include "gmix/estimation.hpp"
#include "gmix/tensor.hpp"

namespace gmix {

enum class ProbeKind { gaussian, singular };
enum class WeightSolver { clip_renormalize, simplex_projection };

ProbeKind parse_probe(const std::string& s);
std::string to_string(ProbeKind p);
WeightSolver parse_weight_solver(const std::string& s);
std::string to_string(WeightSolver w);

struct RecoveryConfig {
  int m = 1;
  DominatingScheme dominating;
  ProbeKind probe = ProbeKind::gaussian;
  bool clip_negatives = true;
  double eig_floor = 1e-8;
  WeightSolver weight_solver = WeightSolver::clip_renormalize;
  std::uint64_t seed = 0;
};

struct RecoveryDiagnostics {
  Vector spectral_eigenvalues;  // eigenvalues of T T^H (or S), descending
  Vector whitening_spectrum;    // eigenvalues of C, descending
  double weight_residual = 0.0;
  bool weight_gram_singular = false;
  Vector dominating_y;          // the xi actually used
};

struct RecoveryResult {
  std::vector<ProbabilityVector> components;
  Vector weights;
  RecoveryDiagnostics diagnostics;
  RecoveryConfig config;
};

/// W = sum_{i<=m} lambda_i^{-1/2} v_i v_i^T over the top m eigenpairs of C.
/// Throws RankDeficiencyError if fewer than m eigenvalues exceed
/// eig_floor * lambda_max.
MatOperator whiten(const MatOperator& c_hat, int m, double eig_floor);

/// Applies I (x) W (x) W to the order 2m-1 moment (blocks of 1, m-1, m-1
/// axes) and reshapes the result into a d^m x d^(m-1) operator whose columns
/// index the last m-1 axes.
MatOperator build_t_hat(const MomentEstimate& q_hat, const MatOperator& w);

/// Top m eigenvectors of T T^H, each viewed as a d x d^(m-1) operator and
/// contracted with a probe, mapped back through B^{-1}, sign corrected,
/// clipped and normalized.
std::vector<ProbabilityVector> extract_components(const MatOperator& t_hat, int m, const DiagonalMap& b,
                                                  ProbeKind probe, std::uint64_t seed, bool clip_negatives = true);

struct WeightFit {
  Vector weights;
  double residual = 0.0;      // ||E - sum_i a_i p_i^{(x)r}||_F with the returned weights
  bool gram_singular = false; // Gram matrix of the tensor powers was numerically singular
};

/// Least squares fit of e_hat by sum_i a_i p_i^{(x)r}, r = e_hat.order, solved
/// through the Gram system (pseudo-inverse when singular), then mapped onto
/// the simplex by `solver`.
WeightFit recover_weights(const MomentEstimate& e_hat, const std::vector<ProbabilityVector>& components,
                          WeightSolver solver);

/// Euclidean projection onto the probability simplex.
Vector project_to_simplex(const Vector& v);

/// The full pipeline with 2m-1 observations per group.
RecoveryResult recover_full(const MomentSource& src, const RecoveryConfig& config);
RecoveryResult recover_full(const GroupedDataset& data, const RecoveryConfig& config);

/// The four-observation variant for linearly independent components with
/// distinct norms: W from the order-2 moment, I (x) W (x) I (x) W on the
/// order-4 moment, eigendecomposition of the resulting d^2 x d^2 operator.
/// Refuses (RecoveryError, stage "gate") when two of the top m eigenvalues
/// are closer than norm_gap_tol * lambda_max, or, for a population source,
/// when check_distinct_norms fails; `force` skips both checks.
RecoveryResult li_recover_4(const MomentSource& src, const RecoveryConfig& config, bool force = false,
                            double norm_gap_tol = 1e-9);

/// Numerical rank of the order-2n moment unfolded at split n, capped at max_m.
int estimate_num_components(const MomentSource& src, int power, int max_m, double rel_tol);

}  // namespace gmix
