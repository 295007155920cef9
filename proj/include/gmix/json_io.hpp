#pragma once

#include <iosfwd>
#include <vector>

#include "json.hpp"

#include "gmix/counterexamples.hpp"
#include "gmix/estimation.hpp"
#include "gmix/experiment.hpp"
#include "gmix/multinomial.hpp"
#include "gmix/recovery.hpp"

namespace gmix {

using Json = nlohmann::json;

Json to_json(const Vector& v);
Vector vector_from_json(const Json& j);

/// {"weights": [...], "components": [[...], ...]}
Json to_json(const MixtureSpec& mix);
MixtureSpec mixture_from_json(const Json& j);

Json to_json(const DominatingMeasure& xi);
Json to_json(const GroupTallyHistogram& h);
GroupTallyHistogram histogram_from_json(const Json& j);

/// Shape plus row-major flat entries.
Json to_json(const MomentEstimate& e);
Json to_json(const RecoveryConfig& c);
Json to_json(const RecoveryResult& r);

/// Includes the moment comparisons at orders eq_order and eq_order + 1.
Json to_json(const CounterexamplePair& pair);

/// [{"x": [...], "c": real}, ...]
Json to_json(const SignedCompositionMeasure& m);
SignedCompositionMeasure measure_from_json(const Json& j);

/// {"n": int, "weights": [...], "components": [[...], ...]}
std::vector<WeightedMultinomial> multinomial_mixture_from_json(const Json& j);

/// Either one run object or {"runs": [...]} where top-level keys other than
/// "runs" act as defaults for every run.
std::vector<ExperimentConfig> experiment_configs_from_json(const Json& j);
ExperimentConfig experiment_config_from_json(const Json& j);
Json to_json(const ExperimentConfig& c);
Json to_json(const ExperimentReport& r);

/// Columns: scheme,n_groups,rep,error,seconds. Failed replicates leave
/// `error` empty.
void write_reports_csv(std::ostream& out, const std::vector<ExperimentReport>& reports);

}  // namespace gmix
