#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairstream {

using PointId = std::int64_t;
using GroupId = int;  // 1-based

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Malformed input: dimension mismatch, bad group label, unparsable record.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A group-1 point arrived after a group-2 point in a semi-structured stream.
class StreamOrderError : public InputError {
 public:
  using InputError::InputError;
};

struct Point {
  PointId id = 0;
  std::vector<double> coords;
  GroupId group = 1;
};

bool same_location(const Point& a, const Point& b);

/// Per-group upper bounds on the number of chosen centers. The total budget
/// k is the sum of the caps.
class FairnessSpec {
 public:
  explicit FairnessSpec(std::vector<int> caps);

  int groups() const { return static_cast<int>(caps_.size()); }
  int cap(GroupId g) const { return caps_.at(static_cast<std::size_t>(g - 1)); }
  int k() const { return k_; }
  const std::vector<int>& caps() const { return caps_; }

  bool contains(GroupId g) const { return g >= 1 && g <= groups(); }

 private:
  std::vector<int> caps_;
  int k_ = 0;
};

/// Chosen centers with a running per-group tally.
class CenterSet {
 public:
  CenterSet() = default;

  /// Throws InputError when a point with the same id is already present.
  void add(const Point& p);
  bool contains(PointId id) const;

  const std::vector<Point>& centers() const { return centers_; }
  std::size_t size() const { return centers_.size(); }
  bool empty() const { return centers_.empty(); }

  /// |C ∩ S_g|.
  int count(GroupId g) const;
  /// Counts for groups 1..m.
  std::vector<int> per_group_counts(int m) const;

  std::vector<PointId> ids() const;

 private:
  std::vector<Point> centers_;
  std::vector<int> counts_;  // index g-1
};

/// Euclidean distance by default; any metric can be injected as a callback
/// over coordinate spans. The callback must be safe to call concurrently.
class DistanceMetric {
 public:
  enum class Kind { euclidean, custom };
  using Callback = std::function<double(std::span<const double>, std::span<const double>)>;

  DistanceMetric() = default;
  static DistanceMetric euclidean() { return DistanceMetric{}; }
  static DistanceMetric custom(Callback fn);

  Kind kind() const { return kind_; }
  std::string name() const { return kind_ == Kind::euclidean ? "euclidean" : "custom"; }

  /// Throws InputError on dimension mismatch.
  double operator()(const Point& p, const Point& q) const {
    return (*this)(std::span<const double>(p.coords), std::span<const double>(q.coords));
  }
  double operator()(std::span<const double> p, std::span<const double> q) const;

 private:
  Kind kind_ = Kind::euclidean;
  Callback fn_;
};

double distance(const Point& p, const Point& q, const DistanceMetric& metric = {});

/// d(p, C) = min over centers; +inf for an empty range.
double distance_to_set(const Point& p, std::span<const Point> set, const DistanceMetric& metric);

/// max_{s in S} min_{c in C} d(s, c). OpenMP-parallel over S.
/// Throws InputError when S or C is empty.
double clustering_cost(std::span<const Point> points, const CenterSet& centers,
                       const DistanceMetric& metric = {});

namespace serial {
/// Single-threaded reference for clustering_cost.
double clustering_cost(std::span<const Point> points, const CenterSet& centers,
                       const DistanceMetric& metric = {});
}  // namespace serial

struct GroupViolation {
  GroupId group;
  int count;
  int cap;
};

struct FairnessReport {
  std::vector<GroupViolation> groups;
  bool budget_exceeded = false;
  bool out_of_range_group = false;

  bool ok() const { return groups.empty() && !budget_exceeded && !out_of_range_group; }
};

FairnessReport check_fairness(const CenterSet& centers, const FairnessSpec& spec);

}  // namespace fairstream
