#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fairstream/independent_set.hpp"
#include "fairstream/metric.hpp"
#include "fairstream/stream_solver.hpp"

namespace fairstream {

/// A group-2 point standing in for a group-1 member at distance <= r̂.
struct Replacement {
  PointId replaced;
  Point replacement;
};

/// Fair k-center for two groups when every group-1 point arrives before any
/// group-2 point. A feasible result has cost at most 3r̂ over the processed
/// stream; when r̂ >= r* the result is always feasible.
///
/// Group-1 points build Γ'₁ at λ = 2r̂. Group-2 points go into Γ'₂ under a
/// rule that depends on whether |Γ'₁| fits its cap. When it does not, group-2
/// points within λ/2 of a not-yet-replaced Γ'₁ member are also kept as that
/// member's replacement.
class SemiInstance {
 public:
  enum class Phase { group1, group2 };

  SemiInstance(double r_hat, FairnessSpec spec, DistanceMetric metric = {});

  /// Throws StreamOrderError for a group-1 point after any group-2 point,
  /// InputError for groups outside {1, 2}. No-op once overflowed.
  void process(const Point& p);
  SolveOutcome finalize() const;

  double r_hat() const { return r_hat_; }
  double lambda() const { return lambda_; }
  const FairnessSpec& spec() const { return spec_; }
  Phase phase() const { return phase_; }
  const IndependentSet& gamma1() const { return gamma1_; }
  const IndependentSet& gamma2() const { return gamma2_; }
  /// Γ_sub in assignment order.
  const std::vector<Replacement>& replacements() const { return replacements_; }
  bool is_overflowed() const { return gamma1_.is_overflowed() || gamma2_.is_overflowed(); }

  /// Γ'₁ ∪ Γ'₂ ∪ Γ_sub ordered by id.
  std::vector<Point> stored() const;
  std::size_t stored_points() const { return gamma1_.size() + gamma2_.size() + replacements_.size(); }
  std::size_t peak_stored_points() const { return peak_stored_; }
  std::uint64_t processed() const { return processed_; }
  std::uint64_t distance_evaluations() const {
    return gamma1_.distance_evaluations() + gamma2_.distance_evaluations();
  }
  /// Points whose processing cost more than |Γ'₁| + |Γ'₂| + |Γ'₁| evaluations.
  std::uint64_t update_budget_violations() const { return budget_violations_; }

 private:
  void process_group2(const Point& p);

  double r_hat_;
  double lambda_;
  FairnessSpec spec_;
  DistanceMetric metric_;
  IndependentSet gamma1_;
  IndependentSet gamma2_;
  std::vector<Replacement> replacements_;
  std::vector<bool> replaced_;  // parallel to gamma1_.members()
  Phase phase_ = Phase::group1;
  std::size_t peak_stored_ = 0;
  std::uint64_t processed_ = 0;
  std::uint64_t budget_violations_ = 0;
};

}  // namespace fairstream
