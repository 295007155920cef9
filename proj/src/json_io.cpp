#include "gmix/json_io.hpp"

#include <ostream>
#include <stdexcept>

namespace gmix {

Json to_json(const Vector& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Vector vector_from_json(const Json& j) {
  const auto raw = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(raw.data(), static_cast<Eigen::Index>(raw.size()));
}

Json to_json(const MixtureSpec& mix) {
  Json comps = Json::array();
  for (const auto& c : mix.components()) comps.push_back(to_json(c.entries()));
  return {{"weights", to_json(mix.weights())}, {"components", comps}};
}

MixtureSpec mixture_from_json(const Json& j) {
  std::vector<Vector> comps;
  for (const auto& c : j.at("components")) comps.push_back(vector_from_json(c));
  return make_mixture(vector_from_json(j.at("weights")), comps);
}

Json to_json(const DominatingMeasure& xi) { return {{"y", to_json(xi.y())}}; }

Json to_json(const GroupTallyHistogram& h) {
  Json counts = Json::array();
  for (const auto& [key, n] : h.counts) counts.push_back({{"key", key}, {"n", n}});
  return {{"d", h.d}, {"k", h.k}, {"counts", counts}};
}

GroupTallyHistogram histogram_from_json(const Json& j) {
  GroupTallyHistogram h;
  h.d = j.at("d").get<int>();
  h.k = j.at("k").get<int>();
  for (const auto& e : j.at("counts")) {
    auto key = e.at("key").get<Composition>();
    if (static_cast<int>(key.size()) != h.d) throw std::invalid_argument("histogram key has the wrong length");
    int s = 0;
    for (int v : key) s += v;
    if (s != h.k) throw std::invalid_argument("histogram key does not sum to the group size");
    h.counts[key] += e.at("n").get<std::uint64_t>();
  }
  return h;
}

Json to_json(const MomentEstimate& e) {
  const auto entries = e.tensor.entries();
  Json j = {{"order", e.order},
            {"dim", e.tensor.dim()},
            {"n_groups", e.n_groups},
            {"entries", std::vector<double>(entries.begin(), entries.end())}};
  if (e.transform) j["transform"] = to_json(e.transform->diag());
  return j;
}

Json to_json(const RecoveryConfig& c) {
  return {{"m", c.m},
          {"dominating", c.dominating.to_string()},
          {"probe", to_string(c.probe)},
          {"clip_negatives", c.clip_negatives},
          {"eig_floor", c.eig_floor},
          {"weight_solver", to_string(c.weight_solver)},
          {"seed", c.seed}};
}

Json to_json(const RecoveryResult& r) {
  Json comps = Json::array();
  for (const auto& c : r.components) comps.push_back(to_json(c.entries()));
  const auto& d = r.diagnostics;
  return {{"weights", to_json(r.weights)},
          {"components", comps},
          {"config", to_json(r.config)},
          {"diagnostics",
           {{"spectral_eigenvalues", to_json(d.spectral_eigenvalues)},
            {"whitening_spectrum", to_json(d.whitening_spectrum)},
            {"weight_residual", d.weight_residual},
            {"weight_gram_singular", d.weight_gram_singular},
            {"dominating_y", to_json(d.dominating_y)}}}};
}

Json to_json(const CounterexamplePair& pair) {
  Json checks = Json::array();
  for (int n : {pair.eq_order, pair.eq_order + 1}) {
    const auto cmp = verify_moment_equality(pair.p, pair.p_prime, n, 1e-9);
    checks.push_back({{"order", n}, {"max_abs_diff", cmp.max_abs_diff}, {"equal", cmp.equal}});
  }
  return {{"t", pair.t},
          {"eq_order", pair.eq_order},
          {"epsilons", pair.epsilons},
          {"alphas", to_json(pair.alphas)},
          {"p", to_json(pair.p)},
          {"p_prime", to_json(pair.p_prime)},
          {"moment_checks", checks}};
}

Json to_json(const SignedCompositionMeasure& m) {
  Json out = Json::array();
  for (const auto& [x, c] : m) out.push_back({{"x", x}, {"c", c}});
  return out;
}

SignedCompositionMeasure measure_from_json(const Json& j) {
  SignedCompositionMeasure m;
  for (const auto& e : j) m[e.at("x").get<Composition>()] += e.at("c").get<double>();
  return m;
}

std::vector<WeightedMultinomial> multinomial_mixture_from_json(const Json& j) {
  const int n = j.at("n").get<int>();
  const auto weights = j.at("weights").get<std::vector<double>>();
  const auto& comps = j.at("components");
  if (weights.size() != comps.size()) throw std::invalid_argument("multinomial mixture: weights and components differ in length");
  std::vector<WeightedMultinomial> out;
  for (std::size_t i = 0; i < weights.size(); ++i)
    out.push_back({weights[i], MultinomialSpec(n, ProbabilityVector(vector_from_json(comps[i])))});
  return out;
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  MixtureSpec mix = mixture_from_json(j.at("mixture"));
  RecoveryConfig rc;
  rc.m = j.value("m", mix.order());
  rc.dominating = DominatingScheme::parse(j.value("dominating", std::string("none")));
  rc.probe = parse_probe(j.value("probe", std::string("gaussian")));
  rc.clip_negatives = j.value("clip_negatives", true);
  rc.eig_floor = j.value("eig_floor", 1e-8);
  rc.weight_solver = parse_weight_solver(j.value("weight_solver", std::string("clip-renormalize")));
  ExperimentConfig cfg{.label = j.value("label", std::string()),
                       .mixture = std::move(mix),
                       .group_size = j.value("group_size", 2 * rc.m - 1),
                       .n_groups = j.value("n_groups", std::size_t{50000}),
                       .reps = j.value("reps", 20),
                       .recovery = rc,
                       .seed = j.value("seed", std::uint64_t{0}),
                       .threads = j.value("threads", 1u)};
  if (cfg.reps < 1) throw std::invalid_argument("experiment config: reps must be >= 1");
  if (cfg.group_size < 1) throw std::invalid_argument("experiment config: group_size must be >= 1");
  return cfg;
}

std::vector<ExperimentConfig> experiment_configs_from_json(const Json& j) {
  if (!j.contains("runs")) return {experiment_config_from_json(j)};
  Json defaults = j;
  defaults.erase("runs");
  std::vector<ExperimentConfig> out;
  for (const auto& run : j.at("runs")) {
    Json merged = defaults;
    merged.update(run);
    out.push_back(experiment_config_from_json(merged));
  }
  return out;
}

Json to_json(const ExperimentConfig& c) {
  Json j = to_json(c.recovery);
  j.erase("seed");
  j["label"] = c.label;
  j["mixture"] = to_json(c.mixture);
  j["group_size"] = c.group_size;
  j["n_groups"] = c.n_groups;
  j["reps"] = c.reps;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  return j;
}

Json to_json(const ExperimentReport& r) {
  Json reps = Json::array();
  for (const auto& rep : r.reps) {
    Json e = {{"rep", rep.rep}, {"seed", rep.seed}, {"seconds", rep.seconds}};
    if (rep.error)
      e["error"] = *rep.error;
    else
      e["failure"] = rep.failure;
    reps.push_back(e);
  }
  return {{"config", to_json(r.config)},
          {"seed", r.config.seed},
          {"mean", r.mean},
          {"variance", r.variance},
          {"failed", r.failed},
          {"wall_seconds", r.wall_seconds},
          {"reps", reps}};
}

void write_reports_csv(std::ostream& out, const std::vector<ExperimentReport>& reports) {
  out << "scheme,n_groups,rep,error,seconds\n";
  for (const auto& r : reports)
    for (const auto& rep : r.reps) {
      out << '"' << r.config.recovery.dominating.to_string() << "\"," << r.config.n_groups << ',' << rep.rep << ',';
      if (rep.error) out << *rep.error;
      out << ',' << rep.seconds << '\n';
    }
}

}  // namespace gmix
