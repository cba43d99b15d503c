#include "fairstream/semi_solver.hpp"

#include <algorithm>
#include <string>

namespace fairstream {

namespace {

FairnessSpec require_two_groups(FairnessSpec spec) {
  if (spec.groups() != 2) throw InputError("the semi-structured solver supports exactly two groups");
  return spec;
}

void add_unique(CenterSet& c, const Point& p) {
  if (!c.contains(p.id)) c.add(p);
}

}  // namespace

SemiInstance::SemiInstance(double r_hat, FairnessSpec spec, DistanceMetric metric)
    : r_hat_(r_hat),
      lambda_(2.0 * r_hat),
      spec_(require_two_groups(std::move(spec))),
      metric_(std::move(metric)),
      gamma1_(lambda_, metric_, static_cast<std::size_t>(spec_.k()), 1),
      gamma2_(lambda_, metric_, static_cast<std::size_t>(spec_.k()), 2) {
  if (!(r_hat >= 0.0)) throw InputError("radius guess must be non-negative");
}

void SemiInstance::process(const Point& p) {
  if (p.group != 1 && p.group != 2) {
    throw InputError("point " + std::to_string(p.id) + " has group " + std::to_string(p.group) +
                     "; the semi-structured solver supports groups 1 and 2");
  }
  if (p.group == 1 && phase_ == Phase::group2) {
    throw StreamOrderError("group-1 point " + std::to_string(p.id) + " arrived after group-2 points");
  }
  if (p.group == 2) phase_ = Phase::group2;
  if (is_overflowed()) return;

  ++processed_;
  const std::size_t budget = 2 * gamma1_.size() + gamma2_.size();
  const std::uint64_t before = distance_evaluations();
  if (p.group == 1) {
    if (gamma1_.offer(p).kind == OfferKind::added) replaced_.push_back(false);
  } else {
    process_group2(p);
  }
  if (distance_evaluations() - before > budget) ++budget_violations_;
  peak_stored_ = std::max(peak_stored_, stored_points());
}

void SemiInstance::process_group2(const Point& p) {
  if (static_cast<int>(gamma1_.size()) <= spec_.cap(1)) {
    if (gamma1_.min_dist(p) > 1.5 * lambda_ && gamma2_.min_dist(p) > lambda_) gamma2_.admit(p);
    return;
  }

  const auto to_gamma1 = gamma1_.distances(p);
  const double nearest1 = to_gamma1.empty() ? kInfinity : *std::min_element(to_gamma1.begin(), to_gamma1.end());
  if (nearest1 > lambda_ && gamma2_.min_dist(p) > lambda_) gamma2_.admit(p);

  // Γ'₁ is λ-separated, so at most one member lies within λ/2 of p.
  for (std::size_t j = 0; j < to_gamma1.size(); ++j) {
    if (!replaced_[j] && to_gamma1[j] <= lambda_ / 2.0) {
      replaced_[j] = true;
      replacements_.push_back({gamma1_.members()[j].id, p});
      break;
    }
  }
}

SolveOutcome SemiInstance::finalize() const {
  if (is_overflowed()) return SolveOutcome::infeasible(InfeasibleReason::stream_overflow);

  CenterSet c;
  const int k1 = spec_.cap(1);
  if (static_cast<int>(gamma1_.size()) <= k1) {
    for (const auto& p : gamma1_.members()) add_unique(c, p);
    for (const auto& p : gamma2_.members()) add_unique(c, p);
    return SolveOutcome::checked(std::move(c), spec_);
  }

  // Γ''₁: the t earliest-replaced members of Γ'₁.
  const std::size_t t = gamma1_.size() - static_cast<std::size_t>(k1);
  if (replacements_.size() < t) return SolveOutcome::infeasible(InfeasibleReason::fairness_violated);
  std::vector<PointId> dropped;
  for (std::size_t i = 0; i < t; ++i) dropped.push_back(replacements_[i].replaced);

  for (const auto& p : gamma2_.members()) add_unique(c, p);
  for (const auto& p : gamma1_.members()) {
    if (std::find(dropped.begin(), dropped.end(), p.id) == dropped.end()) add_unique(c, p);
  }
  for (std::size_t i = 0; i < t; ++i) add_unique(c, replacements_[i].replacement);
  return SolveOutcome::checked(std::move(c), spec_);
}

std::vector<Point> SemiInstance::stored() const {
  std::vector<Point> out(gamma1_.members().begin(), gamma1_.members().end());
  out.insert(out.end(), gamma2_.members().begin(), gamma2_.members().end());
  for (const auto& r : replacements_) out.push_back(r.replacement);
  std::sort(out.begin(), out.end(), [](const Point& a, const Point& b) { return a.id < b.id; });
  out.erase(std::unique(out.begin(), out.end(), [](const Point& a, const Point& b) { return a.id == b.id; }),
            out.end());
  return out;
}

}  // namespace fairstream
