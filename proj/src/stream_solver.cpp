#include "fairstream/stream_solver.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>

namespace fairstream {

std::string to_string(InfeasibleReason reason) {
  switch (reason) {
    case InfeasibleReason::stream_overflow:
      return "stream_overflow";
    case InfeasibleReason::case3_exhausted:
      return "case3_exhausted";
    case InfeasibleReason::fairness_violated:
      return "fairness_violated";
  }
  return "unknown";
}

SolveOutcome SolveOutcome::checked(CenterSet centers, const FairnessSpec& spec) {
  if (!check_fairness(centers, spec).ok()) return infeasible(InfeasibleReason::fairness_violated);
  return feasible(std::move(centers));
}

const CenterSet& SolveOutcome::centers() const {
  if (const auto* c = std::get_if<CenterSet>(&value_)) return *c;
  throw std::logic_error("infeasible outcome has no centers");
}

InfeasibleReason SolveOutcome::reason() const {
  if (const auto* r = std::get_if<InfeasibleReason>(&value_)) return *r;
  throw std::logic_error("feasible outcome has no infeasibility reason");
}

std::size_t AuxGraph::edge_count() const {
  std::size_t total = 0;
  for (std::size_t v = 0; v < left_count; ++v) total += adjacency[v].size();
  return total;
}

AuxGraph build_aux_graph(const IndependentSet& gamma1, const IndependentSet& gamma2, double r_hat,
                         const DistanceMetric& metric) {
  AuxGraph g;
  g.left_count = gamma1.size();
  g.vertices.reserve(gamma1.size() + gamma2.size());
  g.vertices.insert(g.vertices.end(), gamma1.members().begin(), gamma1.members().end());
  g.vertices.insert(g.vertices.end(), gamma2.members().begin(), gamma2.members().end());
  g.adjacency.assign(g.vertices.size(), {});

  const double threshold = 3.0 * r_hat;
  for (std::size_t p = 0; p < g.left_count; ++p) {
    for (std::size_t q = g.left_count; q < g.vertices.size(); ++q) {
      if (metric(g.vertices[p], g.vertices[q]) <= threshold) {
        g.adjacency[p].push_back(q);
        g.adjacency[q].push_back(p);
      }
    }
  }
  return g;
}

SolveOutcome solve_case2(const IndependentSet& over, const IndependentSet& under, double r_hat,
                         const FairnessSpec& spec, const DistanceMetric& metric) {
  CenterSet c;
  for (const auto& p : under.members()) c.add(p);

  const double threshold = 3.0 * r_hat;
  std::size_t kept = 0;
  for (const auto& p : over.members()) {
    if (distance_to_set(p, under.members(), metric) > threshold) {
      c.add(p);
      ++kept;
    }
  }
  if (!over.empty()) {
    const GroupId l = over.members().front().group;
    if (static_cast<int>(kept) > spec.cap(l)) return SolveOutcome::infeasible(InfeasibleReason::fairness_violated);
  }
  return SolveOutcome::checked(std::move(c), spec);
}

namespace {

// Working state of the Case-3 procedure: live vertices and live degrees.
class CoverState {
 public:
  explicit CoverState(const AuxGraph& g) : g_(g), live_(g.size(), true), degree_(g.size()) {
    for (std::size_t v = 0; v < g.size(); ++v) degree_[v] = g.adjacency[v].size();
    live_count_ = g.size();
  }

  bool live(std::size_t v) const { return live_[v]; }
  std::size_t degree(std::size_t v) const { return degree_[v]; }
  std::size_t live_count() const { return live_count_; }

  std::size_t live_on_side(GroupId side) const {
    std::size_t n = 0;
    for (std::size_t v = 0; v < g_.size(); ++v) n += (live_[v] && g_.side(v) == side) ? 1 : 0;
    return n;
  }

  void remove(std::size_t v) {
    if (!live_[v]) return;
    live_[v] = false;
    --live_count_;
    for (std::size_t u : g_.adjacency[v]) {
      if (live_[u]) --degree_[u];
    }
  }

  bool any_live_degree_zero() const {
    for (std::size_t v = 0; v < g_.size(); ++v) {
      if (live_[v] && degree_[v] == 0) return true;
    }
    return false;
  }

  std::vector<std::size_t> degree_one_neighbours(std::size_t v) const {
    std::vector<std::size_t> out;
    for (std::size_t u : g_.adjacency[v]) {
      if (live_[u] && degree_[u] == 1) out.push_back(u);
    }
    return out;
  }

 private:
  const AuxGraph& g_;
  std::vector<bool> live_;
  std::vector<std::size_t> degree_;
  std::size_t live_count_ = 0;
};

}  // namespace

SolveOutcome solve_case3(const AuxGraph& graph, const FairnessSpec& spec, double r_hat,
                         const DistanceMetric& metric, Case3Trace* trace) {
  if (spec.groups() != 2) throw InputError("case 3 is defined for two groups");
  CoverState state(graph);
  CenterSet c;
  const auto slack = [&](GroupId l) { return spec.cap(l) - c.count(l); };

  // Phase 1: isolated vertices.
  std::vector<std::size_t> isolated;
  for (std::size_t v = 0; v < graph.size(); ++v) {
    if (state.degree(v) != 0) continue;
    isolated.push_back(v);
    if (distance_to_set(graph.vertices[v], c.centers(), metric) > 2.0 * r_hat) {
      c.add(graph.vertices[v]);
      if (trace) ++trace->phase1_added;
    }
  }
  for (std::size_t v : isolated) state.remove(v);
  if (trace) trace->phase1_removed = isolated.size();

  const auto try_early_exit = [&]() -> std::optional<SolveOutcome> {
    for (GroupId l = 1; l <= 2; ++l) {
      if (c.count(l) + static_cast<int>(state.live_on_side(l)) > spec.cap(l)) continue;
      for (std::size_t v = 0; v < graph.size(); ++v) {
        if (state.live(v) && graph.side(v) == l) c.add(graph.vertices[v]);
      }
      // Γ'_{3-l}: live members of the other side not within 3r̂ of C.
      std::vector<Point> extra;
      for (std::size_t v = 0; v < graph.size(); ++v) {
        if (!state.live(v) || graph.side(v) == l) continue;
        if (distance_to_set(graph.vertices[v], c.centers(), metric) > 3.0 * r_hat) {
          extra.push_back(graph.vertices[v]);
        }
      }
      for (const auto& p : extra) c.add(p);
      if (trace) trace->early_exit_group = l;
      if (static_cast<int>(c.size()) > spec.k()) return SolveOutcome::infeasible(InfeasibleReason::case3_exhausted);
      return SolveOutcome::checked(std::move(c), spec);
    }
    return std::nullopt;
  };

  if (auto done = try_early_exit()) return std::move(*done);

  // Phase 2.
  while (static_cast<int>(c.size()) <= spec.k() && state.live_count() > 0) {
    Case3Iteration it;
    it.centers = c.size();
    it.gamma = {state.live_on_side(1), state.live_on_side(2)};
    it.live_before = state.live_count();

    bool has_degree_one = false;
    for (std::size_t v = 0; v < graph.size(); ++v) {
      if (state.live(v) && state.degree(v) == 1) {
        has_degree_one = true;
        break;
      }
    }

    if (!has_degree_one) {
      it.edge_branch = true;
      // Smallest live edge by (Γ₁ id, Γ₂ id).
      std::optional<std::pair<std::size_t, std::size_t>> edge;
      for (std::size_t p = 0; p < graph.left_count; ++p) {
        if (!state.live(p)) continue;
        for (std::size_t q : graph.adjacency[p]) {
          if (!state.live(q)) continue;
          const auto key = std::pair{graph.vertices[p].id, graph.vertices[q].id};
          if (!edge || key < std::pair{graph.vertices[edge->first].id, graph.vertices[edge->second].id}) {
            edge = std::pair{p, q};
          }
        }
      }
      if (!edge) throw std::logic_error("case 3: live vertices without edges in phase 2");
      auto [left, right] = *edge;
      const bool take_left = slack(1) >= slack(2);
      c.add(graph.vertices[take_left ? left : right]);
      state.remove(left);
      state.remove(right);
    } else {
      std::size_t best = graph.size();
      std::vector<std::size_t> best_n1;
      for (std::size_t v = 0; v < graph.size(); ++v) {
        if (!state.live(v)) continue;
        auto n1 = state.degree_one_neighbours(v);
        if (n1.empty()) continue;
        if (best == graph.size() || n1.size() > best_n1.size() ||
            (n1.size() == best_n1.size() && graph.vertices[v].id < graph.vertices[best].id)) {
          best = v;
          best_n1 = std::move(n1);
        }
      }
      c.add(graph.vertices[best]);
      state.remove(best);
      for (std::size_t u : best_n1) state.remove(u);
    }

    // Removals never isolate a surviving vertex: every neighbour loses at
    // most one live edge and had degree >= 2 unless it was itself removed.
    if (state.any_live_degree_zero()) {
      throw std::logic_error("case 3: phase 2 removal created a degree-0 vertex");
    }

    it.live_after = state.live_count();
    if (trace) trace->iterations.push_back(it);

    if (auto done = try_early_exit()) return std::move(*done);
  }

  if (state.live_count() > 0 || static_cast<int>(c.size()) > spec.k()) {
    return SolveOutcome::infeasible(InfeasibleReason::case3_exhausted);
  }
  return SolveOutcome::checked(std::move(c), spec);
}

namespace {

std::array<IndependentSet, 2> make_gammas(double lambda, const FairnessSpec& spec, const DistanceMetric& metric) {
  if (spec.groups() != 2) throw InputError("the general-stream solver supports exactly two groups");
  const auto cap = static_cast<std::size_t>(spec.k());
  return {IndependentSet(lambda, metric, cap, 1), IndependentSet(lambda, metric, cap, 2)};
}

}  // namespace

StreamInstance::StreamInstance(double r_hat, FairnessSpec spec, DistanceMetric metric)
    : r_hat_(r_hat),
      lambda_(2.0 * r_hat),
      spec_(std::move(spec)),
      metric_(std::move(metric)),
      gamma_(make_gammas(lambda_, spec_, metric_)) {
  if (!(r_hat >= 0.0)) throw InputError("radius guess must be non-negative");
}

bool StreamInstance::is_overflowed() const { return gamma_[0].is_overflowed() || gamma_[1].is_overflowed(); }

void StreamInstance::process(const Point& p) {
  if (p.group != 1 && p.group != 2) {
    throw InputError("point " + std::to_string(p.id) + " has group " + std::to_string(p.group) +
                     "; the general-stream solver supports groups 1 and 2");
  }
  if (is_overflowed()) return;
  ++processed_;
  const std::size_t budget = stored_points();
  const std::uint64_t before = distance_evaluations();
  gamma_[p.group - 1].offer(p);
  if (distance_evaluations() - before > budget) ++budget_violations_;
  peak_stored_ = std::max(peak_stored_, stored_points());
}

PostStreamingCase StreamInstance::classify() const {
  const bool over1 = static_cast<int>(gamma_[0].size()) > spec_.cap(1);
  const bool over2 = static_cast<int>(gamma_[1].size()) > spec_.cap(2);
  if (over1 && over2) return PostStreamingCase::case3;
  if (over1 || over2) return PostStreamingCase::case2;
  return PostStreamingCase::case1;
}

SolveOutcome StreamInstance::finalize(Case3Trace* trace) const {
  if (is_overflowed()) return SolveOutcome::infeasible(InfeasibleReason::stream_overflow);
  switch (classify()) {
    case PostStreamingCase::case1: {
      CenterSet c;
      for (const auto& g : gamma_) {
        for (const auto& p : g.members()) c.add(p);
      }
      return SolveOutcome::checked(std::move(c), spec_);
    }
    case PostStreamingCase::case2: {
      const bool over1 = static_cast<int>(gamma_[0].size()) > spec_.cap(1);
      const auto& over = over1 ? gamma_[0] : gamma_[1];
      const auto& under = over1 ? gamma_[1] : gamma_[0];
      return solve_case2(over, under, r_hat_, spec_, metric_);
    }
    case PostStreamingCase::case3:
      return solve_case3(build_aux_graph(gamma_[0], gamma_[1], r_hat_, metric_), spec_, r_hat_, metric_, trace);
  }
  throw std::logic_error("unreachable post-streaming case");
}

std::vector<Point> StreamInstance::stored() const {
  std::vector<Point> out;
  for (const auto& g : gamma_) out.insert(out.end(), g.members().begin(), g.members().end());
  std::sort(out.begin(), out.end(), [](const Point& a, const Point& b) { return a.id < b.id; });
  return out;
}

std::size_t StreamInstance::stored_points() const { return gamma_[0].size() + gamma_[1].size(); }

std::uint64_t StreamInstance::distance_evaluations() const {
  return gamma_[0].distance_evaluations() + gamma_[1].distance_evaluations();
}

}  // namespace fairstream
