#include "fairstream/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fairstream {

bool same_location(const Point& a, const Point& b) { return a.coords == b.coords; }

FairnessSpec::FairnessSpec(std::vector<int> caps) : caps_(std::move(caps)) {
  if (caps_.empty()) throw InputError("fairness spec needs at least one group");
  for (int c : caps_) {
    if (c < 0) throw InputError("group caps must be non-negative");
  }
  k_ = std::accumulate(caps_.begin(), caps_.end(), 0);
  if (k_ < 1) throw InputError("at least one group cap must be positive");
}

void CenterSet::add(const Point& p) {
  if (p.group < 1) throw InputError("group index must be >= 1");
  if (contains(p.id)) throw InputError("duplicate center id " + std::to_string(p.id));
  centers_.push_back(p);
  if (counts_.size() < static_cast<std::size_t>(p.group)) counts_.resize(p.group, 0);
  ++counts_[p.group - 1];
}

bool CenterSet::contains(PointId id) const {
  return std::any_of(centers_.begin(), centers_.end(), [id](const Point& c) { return c.id == id; });
}

int CenterSet::count(GroupId g) const {
  if (g < 1 || static_cast<std::size_t>(g) > counts_.size()) return 0;
  return counts_[g - 1];
}

std::vector<int> CenterSet::per_group_counts(int m) const {
  std::vector<int> out(static_cast<std::size_t>(m), 0);
  for (int g = 1; g <= m; ++g) out[g - 1] = count(g);
  return out;
}

std::vector<PointId> CenterSet::ids() const {
  std::vector<PointId> out;
  out.reserve(centers_.size());
  for (const auto& c : centers_) out.push_back(c.id);
  return out;
}

DistanceMetric DistanceMetric::custom(Callback fn) {
  if (!fn) throw InputError("custom metric needs a callback");
  DistanceMetric m;
  m.kind_ = Kind::custom;
  m.fn_ = std::move(fn);
  return m;
}

double DistanceMetric::operator()(std::span<const double> p, std::span<const double> q) const {
  if (p.size() != q.size()) {
    throw InputError("dimension mismatch: " + std::to_string(p.size()) + " vs " +
                     std::to_string(q.size()));
  }
  if (kind_ == Kind::custom) return fn_(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double diff = p[i] - q[i];
    sum += diff * diff;
  }
  // sqrt(fl(x*x)) == |x| in binary IEEE arithmetic, so 1-D distances are exact.
  return std::sqrt(sum);
}

double distance(const Point& p, const Point& q, const DistanceMetric& metric) { return metric(p, q); }

double distance_to_set(const Point& p, std::span<const Point> set, const DistanceMetric& metric) {
  double best = kInfinity;
  for (const auto& q : set) best = std::min(best, metric(p, q));
  return best;
}

namespace {

void require_nonempty(std::span<const Point> points, const CenterSet& centers) {
  if (points.empty()) throw InputError("clustering cost of an empty point set");
  if (centers.empty()) throw InputError("clustering cost with no centers");
}

}  // namespace

double clustering_cost(std::span<const Point> points, const CenterSet& centers,
                       const DistanceMetric& metric) {
  require_nonempty(points, centers);
  const auto& cs = centers.centers();
  const auto n = static_cast<std::ptrdiff_t>(points.size());
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    worst = std::max(worst, distance_to_set(points[i], cs, metric));
  }
  return worst;
}

namespace serial {

double clustering_cost(std::span<const Point> points, const CenterSet& centers,
                       const DistanceMetric& metric) {
  require_nonempty(points, centers);
  double worst = 0.0;
  for (const auto& s : points) worst = std::max(worst, distance_to_set(s, centers.centers(), metric));
  return worst;
}

}  // namespace serial

FairnessReport check_fairness(const CenterSet& centers, const FairnessSpec& spec) {
  FairnessReport report;
  for (const auto& c : centers.centers()) {
    if (!spec.contains(c.group)) report.out_of_range_group = true;
  }
  for (GroupId g = 1; g <= spec.groups(); ++g) {
    const int n = centers.count(g);
    if (n > spec.cap(g)) report.groups.push_back({g, n, spec.cap(g)});
  }
  report.budget_exceeded = static_cast<int>(centers.size()) > spec.k();
  return report;
}

}  // namespace fairstream
