#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fairstream/metric.hpp"

namespace fairstream {

enum class OfferKind { added, covered, overflow };

struct OfferResult {
  OfferKind kind;
  /// Index into members() of the nearest member when kind == covered.
  std::size_t covered_by = 0;
  /// Distance to the nearest member before the offer (+inf when empty).
  double distance = kInfinity;
};

/// Online lambda-independent center set.
///
/// Members are pairwise more than lambda apart, and every offered point is
/// within lambda of some member at the moment it was processed. Points at
/// distance exactly lambda are covered, not added. With a cap set, an offer
/// that would grow the set past the cap marks the structure overflowed; this
/// is sticky and certifies lambda < 2r* when cap = k.
///
/// Single writer. Every call that scans members adds |members| to the
/// distance-evaluation counter.
class IndependentSet {
 public:
  IndependentSet(double lambda, DistanceMetric metric, std::optional<std::size_t> cap = std::nullopt,
                 std::optional<GroupId> group_filter = std::nullopt);

  /// Throws InputError on group mismatch and std::logic_error once overflowed.
  OfferResult offer(const Point& p);

  /// Appends p after the caller has checked its own admission rule.
  /// Returns false (and overflows) when the cap is reached.
  bool admit(const Point& p);

  /// min over members of d(p, member); +inf when empty.
  double min_dist(const Point& p) const;
  /// Distances to each member in order.
  std::vector<double> distances(const Point& p) const;

  bool is_overflowed() const { return overflowed_; }
  double lambda() const { return lambda_; }
  std::optional<std::size_t> cap() const { return cap_; }
  std::optional<GroupId> group_filter() const { return group_filter_; }
  const std::vector<Point>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

  std::uint64_t distance_evaluations() const { return evaluations_; }

 private:
  void check_group(const Point& p) const;

  double lambda_;
  DistanceMetric metric_;
  std::optional<std::size_t> cap_;
  std::optional<GroupId> group_filter_;
  std::vector<Point> members_;
  bool overflowed_ = false;
  mutable std::uint64_t evaluations_ = 0;
};

}  // namespace fairstream
