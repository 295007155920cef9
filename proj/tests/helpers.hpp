#pragma once

#include <vector>

#include "gmix/core_model.hpp"
#include "gmix/tensor.hpp"
#include "oracles.hpp"

namespace testing {

inline gmix::Vector vec(const oracle::Vec& v) {
  return Eigen::Map<const gmix::Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline oracle::Vec std_vec(const gmix::Vector& v) { return {v.data(), v.data() + v.size()}; }

inline oracle::Vec std_vec(const gmix::DenseTensor& t) { return {t.entries().begin(), t.entries().end()}; }

inline oracle::Vec std_vec(const gmix::ProbabilityVector& p) { return std_vec(p.entries()); }

inline std::vector<oracle::Vec> std_vecs(const std::vector<gmix::ProbabilityVector>& ps) {
  std::vector<oracle::Vec> out;
  for (const auto& p : ps) out.push_back(std_vec(p));
  return out;
}

inline gmix::MixtureSpec mixture(const oracle::Vec& w, const std::vector<oracle::Vec>& comps) {
  std::vector<gmix::Vector> cs;
  for (const auto& c : comps) cs.push_back(vec(c));
  return gmix::make_mixture(vec(w), cs);
}

inline gmix::MixtureSpec reference() { return mixture(oracle::reference_weights(), oracle::reference_components()); }

inline double max_abs(const oracle::Vec& a, const oracle::Vec& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline oracle::Mat std_mat(const gmix::MatOperator& m) {
  oracle::Mat out(static_cast<std::size_t>(m.rows()), oracle::Vec(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  return out;
}

}  // namespace testing
