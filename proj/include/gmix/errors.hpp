#pragma once

#include <stdexcept>
#include <string>

namespace gmix {

/// A whitening or spectral step found fewer usable eigenvalues than requested.
/// Usually means the component count is overestimated or the mixture is
/// degenerate.
class RankDeficiencyError : public std::runtime_error {
 public:
  RankDeficiencyError(const std::string& what, int requested, int available)
      : std::runtime_error(what), requested_(requested), available_(available) {}
  int requested() const { return requested_; }
  int available() const { return available_; }

 private:
  int requested_;
  int available_;
};

/// Failure inside the recovery pipeline, tagged with the stage that raised it.
class RecoveryError : public std::runtime_error {
 public:
  RecoveryError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace gmix
