// gmix: recover mixtures of categorical distributions from grouped samples.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "gmix/counterexamples.hpp"
#include "gmix/errors.hpp"
#include "gmix/experiment.hpp"
#include "gmix/json_io.hpp"
#include "gmix/multinomial.hpp"
#include "gmix/recovery.hpp"
#include "gmix/sampling.hpp"

namespace {

using gmix::Json;

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return Json::parse(in);
}

gmix::GroupedDataset read_data(const std::string& path, int d) {
  if (path == "-") return gmix::read_groups(std::cin, d);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return gmix::read_groups(in, d);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

std::vector<double> parse_csv(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) out.push_back(std::stod(tok));
  return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral recovery of categorical mixtures from grouped samples"};
  app.require_subcommand(1);

  // recover
  auto* rec = app.add_subcommand("recover", "Estimate components and weights from grouped data");
  std::string rec_data, rec_out = "-", rec_dom = "none", rec_probe = "gaussian", rec_solver = "clip-renormalize",
              rec_method = "full";
  int rec_m = 0, rec_k = 0, rec_d = 0;
  std::uint64_t rec_seed = 0;
  bool rec_force = false;
  rec->add_option("--data", rec_data, "Group file (one group per line, 1-based categories) or -")->required();
  rec->add_option("--m", rec_m, "Number of components")->required()->check(CLI::PositiveNumber);
  rec->add_option("--group-size", rec_k, "Expected group size (checked against the data)");
  rec->add_option("--d", rec_d, "Number of categories (default: largest index seen)");
  rec->add_option("--dominating", rec_dom, "none | uniform | sqgauss:<sigma> | fixed:<y1,y2,...>");
  rec->add_option("--probe", rec_probe)->check(CLI::IsMember({"gaussian", "singular"}));
  rec->add_option("--weights", rec_solver)->check(CLI::IsMember({"clip-renormalize", "simplex-projection"}));
  rec->add_option("--method", rec_method, "full (2m-1 observations) or li4 (four observations)")
      ->check(CLI::IsMember({"full", "li4"}));
  rec->add_flag("--force", rec_force, "li4: skip the distinct-norm and eigen-gap checks");
  rec->add_option("--seed", rec_seed);
  rec->add_option("--out", rec_out, "Output JSON (default stdout)");

  // sample
  auto* smp = app.add_subcommand("sample", "Draw grouped samples from a mixture");
  std::string smp_mix, smp_out = "-";
  int smp_k = 0;
  std::size_t smp_n = 0;
  std::uint64_t smp_seed = 0;
  smp->add_option("--mixture", smp_mix, "Mixture JSON {weights, components}")->required();
  smp->add_option("--group-size", smp_k)->required()->check(CLI::PositiveNumber);
  smp->add_option("--n", smp_n, "Number of groups")->required();
  smp->add_option("--seed", smp_seed);
  smp->add_option("--out", smp_out);

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run repeated draw-and-recover experiments");
  std::string exp_cfg, exp_out = "-";
  int exp_threads = -1;
  exp->add_option("--config", exp_cfg)->required();
  exp->add_option("--out", exp_out, "Report path; *.csv writes per-replicate rows, anything else JSON");
  exp->add_option("--threads", exp_threads, "Override worker count (0 = hardware)");

  // counterexample
  auto* cex = app.add_subcommand("counterexample", "Build two mixtures with equal low-order grouped laws");
  int cex_m = 0;
  std::string cex_kind = "identifiability", cex_eps, cex_out = "-";
  cex->add_option("--m", cex_m)->required()->check(CLI::PositiveNumber);
  cex->add_option("--kind", cex_kind)->check(CLI::IsMember({"identifiability", "determinedness"}));
  cex->add_option("--eps", cex_eps, "Comma separated blend parameters in [0,1]");
  cex->add_option("--out", cex_out);

  // multinomial-check
  auto* mult = app.add_subcommand("multinomial-check", "Compare two multinomial mixtures");
  std::string mult_a, mult_b;
  double mult_tol = 1e-12;
  mult->add_option("--a", mult_a)->required();
  mult->add_option("--b", mult_b)->required();
  mult->add_option("--tol", mult_tol);

  // rank
  auto* rnk = app.add_subcommand("rank", "Estimate the number of components");
  std::string rnk_data;
  int rnk_power = 1, rnk_d = 0, rnk_max = 0;
  double rnk_tol = 1e-8;
  rnk->add_option("--data", rnk_data)->required();
  rnk->add_option("--power", rnk_power)->check(CLI::PositiveNumber);
  rnk->add_option("--tol", rnk_tol);
  rnk->add_option("--d", rnk_d);
  rnk->add_option("--max-m", rnk_max, "Cap on the estimate (0 = none)");

  // baseline
  auto* bas = app.add_subcommand("baseline", "Score randomly drawn components against the truth");
  int bas_d = 0, bas_m = 0, bas_trials = 1000;
  std::string bas_truth;
  std::uint64_t bas_seed = 0;
  bas->add_option("--d", bas_d);
  bas->add_option("--m", bas_m);
  bas->add_option("--trials", bas_trials)->check(CLI::PositiveNumber);
  bas->add_option("--truth", bas_truth, "Mixture JSON")->required();
  bas->add_option("--seed", bas_seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*rec) {
      const auto ds = read_data(rec_data, rec_d);
      if (rec_k > 0 && ds.group_size() != rec_k)
        throw std::runtime_error("data has group size " + std::to_string(ds.group_size()) + ", expected " +
                                 std::to_string(rec_k));
      gmix::RecoveryConfig cfg;
      cfg.m = rec_m;
      cfg.dominating = gmix::DominatingScheme::parse(rec_dom);
      cfg.probe = gmix::parse_probe(rec_probe);
      cfg.weight_solver = gmix::parse_weight_solver(rec_solver);
      cfg.seed = rec_seed;
      const auto src = gmix::MomentSource::from_tally(gmix::tally(ds));
      const auto res = rec_method == "li4" ? gmix::li_recover_4(src, cfg, rec_force) : gmix::recover_full(src, cfg);
      write_json(rec_out, gmix::to_json(res));
    } else if (*smp) {
      const auto mix = gmix::mixture_from_json(read_json(smp_mix));
      std::ostringstream os;
      gmix::write_groups(os, gmix::draw_groups(mix, smp_k, smp_n, smp_seed));
      write_text(smp_out, os.str());
    } else if (*exp) {
      auto configs = gmix::experiment_configs_from_json(read_json(exp_cfg));
      std::vector<gmix::ExperimentReport> reports;
      for (auto& c : configs) {
        if (exp_threads >= 0) c.threads = static_cast<unsigned>(exp_threads);
        reports.push_back(gmix::run_experiment(c));
        const auto& r = reports.back();
        std::cerr << (r.config.label.empty() ? r.config.recovery.dominating.to_string() : r.config.label) << " n="
                  << r.config.n_groups << " mean=" << r.mean << " var=" << r.variance << " failed=" << r.failed
                  << " (" << r.wall_seconds << " s)\n";
      }
      if (ends_with(exp_out, ".csv")) {
        std::ostringstream os;
        gmix::write_reports_csv(os, reports);
        write_text(exp_out, os.str());
      } else {
        Json all = Json::array();
        for (const auto& r : reports) all.push_back(gmix::to_json(r));
        write_json(exp_out, reports.size() == 1 ? all[0] : all);
      }
    } else if (*cex) {
      const int t = cex_kind == "identifiability" ? 2 * cex_m : 2 * cex_m + 1;
      std::optional<std::vector<double>> eps;
      if (!cex_eps.empty()) eps = parse_csv(cex_eps);
      write_json(cex_out, gmix::to_json(gmix::build_pair(cex_m, t, std::nullopt, eps)));
    } else if (*mult) {
      const auto a = gmix::multinomial_mixture_from_json(read_json(mult_a));
      const auto b = gmix::multinomial_mixture_from_json(read_json(mult_b));
      const bool equal = gmix::multinomial_mixture_equal(a, b, mult_tol);
      std::cout << Json{{"equal", equal}, {"tol", mult_tol}}.dump() << "\n";
      return equal ? 0 : 1;
    } else if (*rnk) {
      const auto ds = read_data(rnk_data, rnk_d);
      const int r = gmix::estimate_num_components(gmix::MomentSource::from_tally(gmix::tally(ds)), rnk_power, rnk_max,
                                                  rnk_tol);
      std::cout << Json{{"rank", r}, {"power", rnk_power}, {"tol", rnk_tol}}.dump() << "\n";
    } else if (*bas) {
      const auto truth = gmix::mixture_from_json(read_json(bas_truth));
      const int d = bas_d > 0 ? bas_d : truth.dim();
      const int m = bas_m > 0 ? bas_m : truth.order();
      const auto stats = gmix::random_baseline(d, m, bas_trials, bas_seed, truth.components());
      std::cout << Json{{"trials", bas_trials}, {"mean", stats.mean}, {"variance", stats.variance}}.dump() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "gmix: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
