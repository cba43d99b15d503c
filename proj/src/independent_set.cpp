#include "fairstream/independent_set.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace fairstream {

IndependentSet::IndependentSet(double lambda, DistanceMetric metric, std::optional<std::size_t> cap,
                               std::optional<GroupId> group_filter)
    : lambda_(lambda), metric_(std::move(metric)), cap_(cap), group_filter_(group_filter) {
  if (!(lambda_ >= 0.0)) throw InputError("lambda must be non-negative");
}

void IndependentSet::check_group(const Point& p) const {
  if (group_filter_ && p.group != *group_filter_) {
    throw InputError("point " + std::to_string(p.id) + " of group " + std::to_string(p.group) +
                     " offered to the set of group " + std::to_string(*group_filter_));
  }
}

OfferResult IndependentSet::offer(const Point& p) {
  if (overflowed_) throw std::logic_error("offer on an overflowed independent set");
  check_group(p);

  OfferResult result{OfferKind::added, 0, kInfinity};
  for (std::size_t j = 0; j < members_.size(); ++j) {
    const double d = metric_(p, members_[j]);
    if (d < result.distance) {
      result.distance = d;
      result.covered_by = j;
    }
  }
  evaluations_ += members_.size();

  if (result.distance <= lambda_) {
    result.kind = OfferKind::covered;
    return result;
  }
  if (!admit(p)) result.kind = OfferKind::overflow;
  return result;
}

bool IndependentSet::admit(const Point& p) {
  if (overflowed_) return false;
  check_group(p);
  if (cap_ && members_.size() >= *cap_) {
    overflowed_ = true;
    return false;
  }
  members_.push_back(p);
  return true;
}

double IndependentSet::min_dist(const Point& p) const {
  double best = kInfinity;
  for (const auto& m : members_) best = std::min(best, metric_(p, m));
  evaluations_ += members_.size();
  return best;
}

std::vector<double> IndependentSet::distances(const Point& p) const {
  std::vector<double> out;
  out.reserve(members_.size());
  for (const auto& m : members_) out.push_back(metric_(p, m));
  evaluations_ += members_.size();
  return out;
}

}  // namespace fairstream
