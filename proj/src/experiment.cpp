#include "gmix/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "gmix/errors.hpp"
#include "gmix/rng.hpp"
#include "gmix/sampling.hpp"

namespace gmix {

double matched_l1_error(const std::vector<ProbabilityVector>& truth, const std::vector<ProbabilityVector>& est) {
  const std::size_t m = truth.size();
  if (m == 0 || est.size() != m) throw std::invalid_argument("matched_l1_error: component counts differ");
  if (m > 8) throw std::invalid_argument("matched_l1_error: more than 8 components is not supported");
  for (std::size_t i = 0; i < m; ++i)
    if (truth[i].dim() != truth[0].dim() || est[i].dim() != truth[0].dim())
      throw std::invalid_argument("matched_l1_error: dimension mismatch");

  std::vector<std::vector<double>> cost(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) cost[i][j] = (truth[i].entries() - est[j].entries()).lpNorm<1>();

  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) total += cost[i][perm[i]];
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(m);
}

SampleStats summarize(std::vector<double> values) {
  SampleStats s;
  s.values = std::move(values);
  const auto n = s.values.size();
  if (n == 0) {
    s.mean = s.variance = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  s.mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double v : s.values) ss += (v - s.mean) * (v - s.mean);
    s.variance = ss / static_cast<double>(n - 1);
  }
  return s;
}

SampleStats random_baseline(int d, int m, int trials, std::uint64_t seed, const std::vector<ProbabilityVector>& truth) {
  if (trials < 1) throw std::invalid_argument("random_baseline: trials must be >= 1");
  if (static_cast<int>(truth.size()) != m) throw std::invalid_argument("random_baseline: truth must have m components");
  std::vector<double> scores;
  scores.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    CounterRng rng(seed, streams::kBaseline + static_cast<std::uint64_t>(t));
    std::vector<ProbabilityVector> est;
    for (int i = 0; i < m; ++i) {
      Vector e(d);
      for (int j = 0; j < d; ++j) e[j] = rng.exponential();
      est.push_back(ProbabilityVector::normalized(e));
    }
    scores.push_back(matched_l1_error(truth, est));
  }
  return summarize(std::move(scores));
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.reps < 1) throw std::invalid_argument("run_experiment: reps must be >= 1");
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();

  ExperimentReport report{cfg, std::vector<RepOutcome>(static_cast<std::size_t>(cfg.reps)), 0.0, 0.0, 0, 0.0};

  auto run_rep = [&](int rep) {
    RepOutcome& out = report.reps[static_cast<std::size_t>(rep)];
    out.rep = rep;
    out.seed = cfg.seed + static_cast<std::uint64_t>(rep);
    const auto t0 = Clock::now();
    try {
      RecoveryConfig rc = cfg.recovery;
      rc.seed = out.seed;
      auto hist = draw_tally(cfg.mixture, cfg.group_size, cfg.n_groups, out.seed, 1);
      const auto res = recover_full(MomentSource::from_tally(std::move(hist)), rc);
      out.error = matched_l1_error(cfg.mixture.components(), res.components);
    } catch (const RecoveryError& e) {
      out.failure = e.what();
    } catch (const std::exception& e) {
      out.failure = std::string("run: ") + e.what();
    }
    out.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.threads ? cfg.threads : std::thread::hardware_concurrency(),
                                                           static_cast<unsigned>(cfg.reps)));
  if (workers == 1) {
    for (int r = 0; r < cfg.reps; ++r) run_rep(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int r; (r = next.fetch_add(1)) < cfg.reps;) run_rep(r);
      });
  }

  std::vector<double> errors;
  for (const auto& r : report.reps) {
    if (r.error)
      errors.push_back(*r.error);
    else
      ++report.failed;
  }
  const auto stats = summarize(std::move(errors));
  report.mean = stats.mean;
  report.variance = stats.variance;
  report.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

}  // namespace gmix
