#include "gmix/core_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gmix/rng.hpp"

namespace gmix {

ProbabilityVector::ProbabilityVector(Vector entries) : p_(std::move(entries)) {
  if (p_.size() == 0) throw std::invalid_argument("ProbabilityVector: empty");
  if ((p_.array() < 0.0).any() || !p_.allFinite())
    throw std::invalid_argument("ProbabilityVector: entries must be finite and nonnegative");
  if (std::abs(p_.sum() - 1.0) > 1e-12) throw std::invalid_argument("ProbabilityVector: entries must sum to 1");
}

ProbabilityVector ProbabilityVector::normalized(const Vector& v) {
  if ((v.array() < 0.0).any() || !v.allFinite())
    throw std::invalid_argument("ProbabilityVector::normalized: entries must be finite and nonnegative");
  const double s = v.sum();
  if (!(s > 0.0)) throw std::invalid_argument("ProbabilityVector::normalized: zero vector");
  return ProbabilityVector(v / s);
}

MixtureSpec::MixtureSpec(Vector weights, std::vector<ProbabilityVector> components)
    : w_(std::move(weights)), comps_(std::move(components)) {
  if (comps_.empty()) throw std::invalid_argument("MixtureSpec: no components");
  if (w_.size() != static_cast<Eigen::Index>(comps_.size()))
    throw std::invalid_argument("MixtureSpec: weight count does not match component count");
  for (const auto& c : comps_)
    if (c.dim() != comps_.front().dim()) throw std::invalid_argument("MixtureSpec: component dimension mismatch");
  if (!(w_.array() > 0.0).all()) throw std::invalid_argument("MixtureSpec: weights must be strictly positive");
  const double s = w_.sum();
  if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("MixtureSpec: weights do not sum to 1");
  w_ /= s;
  for (std::size_t i = 0; i < comps_.size(); ++i)
    for (std::size_t j = i + 1; j < comps_.size(); ++j)
      if ((comps_[i].entries() - comps_[j].entries()).cwiseAbs().maxCoeff() <= 1e-12)
        throw std::invalid_argument("MixtureSpec: duplicate components");
}

MixtureSpec make_mixture(const Vector& weights, const std::vector<Vector>& components) {
  std::vector<ProbabilityVector> comps;
  comps.reserve(components.size());
  for (const auto& c : components) comps.emplace_back(c);
  return MixtureSpec(weights, std::move(comps));
}

DominatingMeasure::DominatingMeasure(Vector y) : y_(std::move(y)) {
  if (y_.size() == 0) throw std::invalid_argument("DominatingMeasure: empty");
  if (!(y_.array() > 0.0).all() || !y_.allFinite())
    throw std::invalid_argument("DominatingMeasure: entries must be strictly positive");
}

SymTensor population_moment(const MixtureSpec& mix, int n) {
  return population_moment(mix, n, DiagonalMap::identity(mix.dim()));
}

SymTensor population_moment(const MixtureSpec& mix, int n, const DiagonalMap& b) {
  if (n < 0) throw std::invalid_argument("population_moment: negative order");
  if (b.dim() != mix.dim()) throw std::invalid_argument("population_moment: map dimension mismatch");
  DenseTensor acc(mix.dim(), n);
  for (int i = 0; i < mix.order(); ++i) {
    DenseTensor term = outer_power(b.apply(mix.components()[i].entries()), n).dense();
    term *= mix.weights()[i];
    acc += term;
  }
  return SymTensor::unchecked(std::move(acc));
}

DominatingScheme DominatingScheme::parse(const std::string& text) {
  if (text == "none") return none();
  if (text == "uniform") return uniform();
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "sqgauss") {
    if (rest.empty()) throw std::invalid_argument("dominating scheme: sqgauss needs a sigma");
    const double sigma = std::stod(rest);
    if (!(sigma > 0.0)) throw std::invalid_argument("dominating scheme: sigma must be positive");
    return squared_gaussian(sigma);
  }
  if (head == "fixed") {
    std::vector<double> vals;
    std::stringstream ss(rest);
    for (std::string tok; std::getline(ss, tok, ',');) vals.push_back(std::stod(tok));
    if (vals.empty()) throw std::invalid_argument("dominating scheme: fixed needs values");
    Vector y = Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
    if (!(y.array() > 0.0).all()) throw std::invalid_argument("dominating scheme: fixed entries must be positive");
    return fixed_measure(std::move(y));
  }
  throw std::invalid_argument("unknown dominating scheme '" + text + "'");
}

std::string DominatingScheme::to_string() const {
  auto fmt = [](double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  switch (kind) {
    case Kind::none: return "none";
    case Kind::uniform: return "uniform";
    case Kind::squared_gaussian: return "sqgauss:" + fmt(sigma);
    case Kind::fixed: {
      std::string out = "fixed:";
      for (Eigen::Index i = 0; i < fixed.size(); ++i) out += (i ? "," : "") + fmt(fixed[i]);
      return out;
    }
  }
  return "none";
}

DominatingMeasure random_dominating_measure(int d, const DominatingScheme& scheme, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("random_dominating_measure: d must be >= 1");
  CounterRng rng(seed, streams::kDominating);
  Vector y(d);
  switch (scheme.kind) {
    case DominatingScheme::Kind::none: y.setOnes(); break;
    case DominatingScheme::Kind::uniform:
      for (int i = 0; i < d; ++i) y[i] = 1.0 + rng.uniform();
      break;
    case DominatingScheme::Kind::squared_gaussian:
      if (!(scheme.sigma > 0.0)) throw std::invalid_argument("random_dominating_measure: sigma must be positive");
      for (int i = 0; i < d; ++i) {
        const double g = scheme.sigma * rng.normal();
        y[i] = std::max(g * g, 1e-12);
      }
      break;
    case DominatingScheme::Kind::fixed:
      if (scheme.fixed.size() != d) throw std::invalid_argument("random_dominating_measure: fixed vector has wrong length");
      y = scheme.fixed;
      break;
  }
  return DominatingMeasure(std::move(y));
}

DiagonalMap b_map(const DominatingMeasure& xi) { return DiagonalMap(xi.y().cwiseSqrt().cwiseInverse()); }

NormCheck check_distinct_norms(const MixtureSpec& mix, const DominatingMeasure& xi, double gap_tol) {
  if (xi.dim() != mix.dim()) throw std::invalid_argument("check_distinct_norms: dimension mismatch");
  NormCheck out;
  for (const auto& c : mix.components()) out.norms.push_back(c.entries().array().square().cwiseQuotient(xi.y().array()).sum());
  out.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.norms.size(); ++i)
    for (std::size_t j = i + 1; j < out.norms.size(); ++j)
      out.min_gap = std::min(out.min_gap, std::abs(out.norms[i] - out.norms[j]));
  out.distinct = out.min_gap > gap_tol;
  return out;
}

}  // namespace gmix
