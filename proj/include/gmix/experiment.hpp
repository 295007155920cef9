#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gmix/core_model.hpp"
#include "gmix/recovery.hpp"

namespace gmix {

/// min over permutations sigma of (1/m) sum_i ||truth_i - est_sigma(i)||_1.
/// Exhaustive; m is limited to 8.
double matched_l1_error(const std::vector<ProbabilityVector>& truth, const std::vector<ProbabilityVector>& est);

struct SampleStats {
  std::vector<double> values;
  double mean = 0.0;
  double variance = 0.0;  // unbiased (n-1) sample variance; 0 for a single value, NaN (with mean) for none
};

SampleStats summarize(std::vector<double> values);

/// Scores `trials` sets of m simplex-uniform vectors (normalized unit
/// exponentials) against `truth`.
SampleStats random_baseline(int d, int m, int trials, std::uint64_t seed, const std::vector<ProbabilityVector>& truth);

struct ExperimentConfig {
  std::string label;
  MixtureSpec mixture;
  int group_size = 5;
  std::size_t n_groups = 50000;
  int reps = 20;
  RecoveryConfig recovery;  // recovery.seed is overwritten per replicate
  std::uint64_t seed = 0;
  unsigned threads = 1;     // replicates run concurrently on this many workers
};

struct RepOutcome {
  int rep = 0;
  std::uint64_t seed = 0;
  std::optional<double> error;  // empty when the replicate failed
  std::string failure;          // "stage: message" for failed replicates
  double seconds = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<RepOutcome> reps;  // ordered by rep index
  double mean = 0.0;
  double variance = 0.0;
  int failed = 0;
  double wall_seconds = 0.0;
};

/// Replicate r uses seed + r for sampling, the random dominating measure and
/// the probes. Failed replicates are kept in the report and excluded from
/// mean and variance.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace gmix
