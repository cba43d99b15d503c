#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "fairstream/metric.hpp"
#include "fairstream/semi_solver.hpp"
#include "fairstream/stream_solver.hpp"

namespace fairstream {

enum class SolverMode { general, semi };

/// No radius guess produced a fair center set (e.g. a group with points but a
/// zero cap and no other group to cover it).
class NoFeasibleSolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A single fixed-radius solver of either flavour.
class RadiusGuess {
 public:
  RadiusGuess(double r_hat, const FairnessSpec& spec, SolverMode mode, const DistanceMetric& metric = {});

  void process(const Point& p);
  SolveOutcome finalize() const;

  double r_hat() const;
  SolverMode mode() const { return std::holds_alternative<StreamInstance>(solver_) ? SolverMode::general : SolverMode::semi; }
  bool is_overflowed() const;
  std::vector<Point> stored() const;
  std::size_t stored_points() const;
  std::size_t peak_stored_points() const;
  std::uint64_t processed() const;
  std::uint64_t distance_evaluations() const;
  std::uint64_t update_budget_violations() const;

  const std::variant<StreamInstance, SemiInstance>& solver() const { return solver_; }

 private:
  std::variant<StreamInstance, SemiInstance> solver_;
};

/// Single-instance run at a known radius.
SolveOutcome run_known(double r_star, std::span<const Point> stream, const FairnessSpec& spec, SolverMode mode,
                       const DistanceMetric& metric = {});

struct LadderOptions {
  double epsilon = 0.1;
  SolverMode mode = SolverMode::general;
  /// Fan points out to instances with OpenMP; false runs the serial reference path.
  bool parallel = true;
};

struct LadderStats {
  std::size_t instances = 0;
  std::size_t overflowed = 0;
  std::size_t spawned = 0;  // guesses added after bootstrap
  double low = 0.0;
  double high = 0.0;
  std::size_t peak_stored_per_instance = 0;
  std::size_t stored_points = 0;  // across all instances at the end of the stream
  std::size_t peak_stored_total = 0;
  std::uint64_t distance_evaluations = 0;
  std::uint64_t update_budget_violations = 0;
  std::uint64_t points_seen = 0;
};

struct LadderResult {
  double best_guess = 0.0;
  CenterSet centers;
  /// Guesses below best_guess that overflowed or finalized infeasible.
  std::size_t discarded = 0;
  /// Larger guesses that finalized infeasible although a smaller one succeeded.
  std::size_t monotonicity_warnings = 0;
  LadderStats stats;
};

/// Runs a geometric grid of radius guesses r̂_j = low·(1+ε)^j side by side
/// over one pass of the stream and returns the smallest feasible guess.
///
/// The first points are buffered until at least k+2 have arrived and k+1 of
/// them sit at distinct locations; two of those share an optimal cluster, so
/// half their minimum distance is a lower bound on r* and becomes `low`. The
/// grid then extends until its top guess exceeds twice the distance from the
/// first point to the farthest point seen, and grows lazily as farther points
/// arrive. New guesses are seeded by replaying the points stored by the
/// smallest live guess.
class Ladder {
 public:
  Ladder(FairnessSpec spec, LadderOptions options = {}, DistanceMetric metric = {});

  void observe(const Point& p);
  void observe_batch(std::span<const Point> points);

  /// Throws NoFeasibleSolution when no guess succeeds, InputError on an empty stream.
  LadderResult finish() const;

  bool bootstrapped() const { return bootstrapped_; }
  std::vector<double> guesses() const;
  const std::vector<RadiusGuess>& instances() const { return instances_; }
  LadderStats stats() const;
  const FairnessSpec& spec() const { return spec_; }
  const LadderOptions& options() const { return options_; }

 private:
  void validate(const Point& p);
  void buffer_point(const Point& p);
  void start_grid();
  bool needs_spawn(const Point& p);
  void spawn_to(double target);
  void dispatch(std::span<const Point> run);
  LadderResult finish_from_buffer() const;
  std::vector<Point> replay_order(std::vector<Point> pts) const;

  FairnessSpec spec_;
  LadderOptions options_;
  DistanceMetric metric_;

  bool bootstrapped_ = false;
  bool group2_seen_ = false;
  std::vector<Point> buffer_;
  std::size_t distinct_locations_ = 0;
  std::uint64_t seen_ = 0;

  Point anchor_;
  double reach_ = 0.0;  // max distance from the anchor seen so far
  double low_ = 0.0;
  std::vector<RadiusGuess> instances_;
  std::size_t spawned_ = 0;
  std::size_t peak_total_ = 0;
  std::uint64_t anchor_evaluations_ = 0;
};

}  // namespace fairstream
