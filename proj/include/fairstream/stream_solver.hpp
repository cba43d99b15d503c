#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "fairstream/independent_set.hpp"
#include "fairstream/metric.hpp"

namespace fairstream {

enum class InfeasibleReason { stream_overflow, case3_exhausted, fairness_violated };

std::string to_string(InfeasibleReason reason);

/// Result of a post-streaming stage: a fair center set, or a certificate that
/// the guessed radius was too small. A feasible outcome always passes
/// check_fairness against the spec it was solved for.
class SolveOutcome {
 public:
  static SolveOutcome feasible(CenterSet centers) { return SolveOutcome(std::move(centers)); }
  static SolveOutcome infeasible(InfeasibleReason reason) { return SolveOutcome(reason); }

  /// Feasible when `centers` passes check_fairness, fairness_violated otherwise.
  static SolveOutcome checked(CenterSet centers, const FairnessSpec& spec);

  bool is_feasible() const { return std::holds_alternative<CenterSet>(value_); }
  /// Throws std::logic_error when infeasible.
  const CenterSet& centers() const;
  /// Throws std::logic_error when feasible.
  InfeasibleReason reason() const;

 private:
  explicit SolveOutcome(CenterSet c) : value_(std::move(c)) {}
  explicit SolveOutcome(InfeasibleReason r) : value_(r) {}

  std::variant<CenterSet, InfeasibleReason> value_;
};

enum class PostStreamingCase { case1, case2, case3 };

/// Bipartite graph over Γ₁ ∪ Γ₂ with an edge for every cross pair within 3r̂.
/// Vertices [0, left_count) come from Γ₁, the rest from Γ₂.
struct AuxGraph {
  std::vector<Point> vertices;
  std::size_t left_count = 0;
  std::vector<std::vector<std::size_t>> adjacency;

  std::size_t size() const { return vertices.size(); }
  std::size_t edge_count() const;
  GroupId side(std::size_t v) const { return v < left_count ? 1 : 2; }
};

AuxGraph build_aux_graph(const IndependentSet& gamma1, const IndependentSet& gamma2, double r_hat,
                         const DistanceMetric& metric = {});

/// Snapshot taken at the top of each Phase-2 iteration, plus what it removed.
struct Case3Iteration {
  std::size_t centers = 0;                 // |C^j|
  std::array<std::size_t, 2> gamma{0, 0};  // |Γ^j_1|, |Γ^j_2| (live)
  std::size_t live_before = 0;
  std::size_t live_after = 0;
  bool edge_branch = false;  // no degree-1 vertex existed
};

struct Case3Trace {
  std::size_t phase1_added = 0;
  std::size_t phase1_removed = 0;
  std::vector<Case3Iteration> iterations;
  GroupId early_exit_group = 0;  // 0 when the loop ran to completion
};

/// Case 2: exactly one group l has |Γ_l| > k_l. Keeps the members of Γ_l that
/// are farther than 3r̂ from Γ_{3-l}.
SolveOutcome solve_case2(const IndependentSet& over, const IndependentSet& under, double r_hat,
                         const FairnessSpec& spec, const DistanceMetric& metric = {});

/// Case 3: both groups exceed their caps. Greedy cover of the auxiliary graph
/// (degree-0 pickup, then repeated degree-1 elimination or edge picks) with an
/// early exit once one side fits its cap.
///
/// Deterministic choices: the edge branch takes the smallest live edge by
/// (Γ₁ id, Γ₂ id) and keeps the endpoint whose group has more remaining
/// slack (ties to group 1); the degree-1 branch breaks ties on |N₁(i)| by
/// smallest point id.
SolveOutcome solve_case3(const AuxGraph& graph, const FairnessSpec& spec, double r_hat,
                         const DistanceMetric& metric = {}, Case3Trace* trace = nullptr);

/// One-pass fair k-center for two groups at a fixed radius guess r̂.
///
/// Streams points into Γ₁ and Γ₂ (each a 2r̂-independent set capped at k),
/// then resolves the three size cases. A feasible result has cost at most
/// 5r̂ over the processed stream; when r̂ >= r* the result is always feasible.
class StreamInstance {
 public:
  StreamInstance(double r_hat, FairnessSpec spec, DistanceMetric metric = {});

  /// Throws InputError for groups outside {1, 2}. No-op once overflowed.
  void process(const Point& p);

  PostStreamingCase classify() const;
  SolveOutcome finalize(Case3Trace* trace = nullptr) const;

  double r_hat() const { return r_hat_; }
  double lambda() const { return lambda_; }
  const FairnessSpec& spec() const { return spec_; }
  const IndependentSet& gamma(GroupId g) const { return gamma_.at(static_cast<std::size_t>(g - 1)); }
  bool is_overflowed() const;

  /// Γ₁ ∪ Γ₂ ordered by id.
  std::vector<Point> stored() const;
  std::size_t stored_points() const;
  std::size_t peak_stored_points() const { return peak_stored_; }
  std::uint64_t processed() const { return processed_; }
  std::uint64_t distance_evaluations() const;
  /// Points whose processing cost more distance evaluations than |Γ₁|+|Γ₂|.
  std::uint64_t update_budget_violations() const { return budget_violations_; }

 private:
  double r_hat_;
  double lambda_;
  FairnessSpec spec_;
  DistanceMetric metric_;
  std::array<IndependentSet, 2> gamma_;
  std::size_t peak_stored_ = 0;
  std::uint64_t processed_ = 0;
  std::uint64_t budget_violations_ = 0;
};

}  // namespace fairstream
