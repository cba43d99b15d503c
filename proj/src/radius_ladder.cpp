#include "fairstream/radius_ladder.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

namespace fairstream {

namespace {

std::variant<StreamInstance, SemiInstance> make_solver(double r_hat, const FairnessSpec& spec, SolverMode mode,
                                                       const DistanceMetric& metric) {
  if (mode == SolverMode::semi) return SemiInstance(r_hat, spec, metric);
  return StreamInstance(r_hat, spec, metric);
}

}  // namespace

RadiusGuess::RadiusGuess(double r_hat, const FairnessSpec& spec, SolverMode mode, const DistanceMetric& metric)
    : solver_(make_solver(r_hat, spec, mode, metric)) {}

void RadiusGuess::process(const Point& p) {
  std::visit([&](auto& s) { s.process(p); }, solver_);
}

SolveOutcome RadiusGuess::finalize() const {
  return std::visit([](const auto& s) { return s.finalize(); }, solver_);
}

double RadiusGuess::r_hat() const {
  return std::visit([](const auto& s) { return s.r_hat(); }, solver_);
}

bool RadiusGuess::is_overflowed() const {
  return std::visit([](const auto& s) { return s.is_overflowed(); }, solver_);
}

std::vector<Point> RadiusGuess::stored() const {
  return std::visit([](const auto& s) { return s.stored(); }, solver_);
}

std::size_t RadiusGuess::stored_points() const {
  return std::visit([](const auto& s) { return s.stored_points(); }, solver_);
}

std::size_t RadiusGuess::peak_stored_points() const {
  return std::visit([](const auto& s) { return s.peak_stored_points(); }, solver_);
}

std::uint64_t RadiusGuess::processed() const {
  return std::visit([](const auto& s) { return s.processed(); }, solver_);
}

std::uint64_t RadiusGuess::distance_evaluations() const {
  return std::visit([](const auto& s) { return s.distance_evaluations(); }, solver_);
}

std::uint64_t RadiusGuess::update_budget_violations() const {
  return std::visit([](const auto& s) { return s.update_budget_violations(); }, solver_);
}

SolveOutcome run_known(double r_star, std::span<const Point> stream, const FairnessSpec& spec, SolverMode mode,
                       const DistanceMetric& metric) {
  if (!(r_star >= 0.0)) throw InputError("known radius must be non-negative");
  RadiusGuess guess(r_star, spec, mode, metric);
  for (const auto& p : stream) guess.process(p);
  return guess.finalize();
}

Ladder::Ladder(FairnessSpec spec, LadderOptions options, DistanceMetric metric)
    : spec_(std::move(spec)), options_(options), metric_(std::move(metric)) {
  if (spec_.groups() != 2) throw InputError("the radius ladder supports exactly two groups");
  if (!(options_.epsilon > 0.0)) throw InputError("epsilon must be positive");
}

void Ladder::validate(const Point& p) {
  if (p.group != 1 && p.group != 2) {
    throw InputError("point " + std::to_string(p.id) + " has group " + std::to_string(p.group) +
                     "; expected 1 or 2");
  }
  if (seen_ > 0) {
    const auto& ref = bootstrapped_ ? anchor_ : buffer_.front();
    if (ref.coords.size() != p.coords.size()) {
      throw InputError("point " + std::to_string(p.id) + " has dimension " + std::to_string(p.coords.size()) +
                       ", expected " + std::to_string(ref.coords.size()));
    }
  }
  if (options_.mode == SolverMode::semi) {
    if (p.group == 1 && group2_seen_) {
      throw StreamOrderError("group-1 point " + std::to_string(p.id) + " arrived after group-2 points");
    }
    if (p.group == 2) group2_seen_ = true;
  }
}

void Ladder::buffer_point(const Point& p) {
  bool new_location = true;
  for (const auto& b : buffer_) {
    if (!same_location(b, p)) continue;
    new_location = false;
    if (b.group == p.group) return;  // exact duplicate: covered at distance 0 by every guess
  }
  buffer_.push_back(p);
  if (new_location) ++distinct_locations_;
  peak_total_ = std::max(peak_total_, buffer_.size());
}

void Ladder::start_grid() {
  double delta = kInfinity;
  reach_ = 0.0;
  anchor_ = buffer_.front();
  for (std::size_t i = 0; i < buffer_.size(); ++i) {
    reach_ = std::max(reach_, metric_(anchor_, buffer_[i]));
    for (std::size_t j = i + 1; j < buffer_.size(); ++j) {
      const double d = metric_(buffer_[i], buffer_[j]);
      if (d > 0.0) delta = std::min(delta, d);
    }
  }
  low_ = delta / 2.0;

  const double target = 2.0 * reach_;
  for (std::size_t j = 0;; ++j) {
    const double r = low_ * std::pow(1.0 + options_.epsilon, static_cast<double>(j));
    instances_.emplace_back(r, spec_, options_.mode, metric_);
    if (r >= target) break;
  }
  bootstrapped_ = true;
  dispatch(buffer_);
  buffer_.clear();
  buffer_.shrink_to_fit();
}

bool Ladder::needs_spawn(const Point& p) {
  const double d = metric_(anchor_, p);
  ++anchor_evaluations_;
  if (d <= reach_) return false;
  reach_ = d;
  return 2.0 * reach_ > instances_.back().r_hat();
}

std::vector<Point> Ladder::replay_order(std::vector<Point> pts) const {
  if (options_.mode == SolverMode::semi) {
    std::stable_sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.group < b.group; });
  }
  return pts;
}

void Ladder::spawn_to(double target) {
  const RadiusGuess* seed = nullptr;
  for (const auto& g : instances_) {
    if (!g.is_overflowed()) {
      seed = &g;
      break;
    }
  }
  // The top guess covers everything seen within one member per group, so a
  // live instance always exists.
  if (seed == nullptr) seed = &instances_.back();
  const auto seeds = replay_order(seed->stored());

  while (instances_.back().r_hat() < target) {
    const double r = low_ * std::pow(1.0 + options_.epsilon, static_cast<double>(instances_.size()));
    RadiusGuess g(r, spec_, options_.mode, metric_);
    for (const auto& s : seeds) g.process(s);
    instances_.push_back(std::move(g));
    ++spawned_;
  }
}

void Ladder::dispatch(std::span<const Point> run) {
  if (run.empty() || instances_.empty()) return;
  const auto n = static_cast<std::ptrdiff_t>(instances_.size());
  std::vector<std::exception_ptr> errors(instances_.size());
  if (options_.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      try {
        for (const auto& p : run) instances_[j].process(p);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  } else {
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      for (const auto& p : run) instances_[j].process(p);
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::size_t total = 0;
  for (const auto& g : instances_) total += g.stored_points();
  peak_total_ = std::max(peak_total_, total);
}

void Ladder::observe(const Point& p) { observe_batch(std::span<const Point>(&p, 1)); }

void Ladder::observe_batch(std::span<const Point> points) {
  std::size_t run_begin = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    validate(p);
    ++seen_;
    if (!bootstrapped_) {
      buffer_point(p);
      const auto k = static_cast<std::uint64_t>(spec_.k());
      if (seen_ >= k + 2 && distinct_locations_ >= k + 1) start_grid();
      run_begin = i + 1;
      continue;
    }
    if (needs_spawn(p)) {
      dispatch(points.subspan(run_begin, i - run_begin));
      spawn_to(2.0 * reach_);
      run_begin = i;
    }
  }
  if (bootstrapped_) dispatch(points.subspan(run_begin));
}

std::vector<double> Ladder::guesses() const {
  std::vector<double> out;
  out.reserve(instances_.size());
  for (const auto& g : instances_) out.push_back(g.r_hat());
  return out;
}

LadderStats Ladder::stats() const {
  LadderStats s;
  s.instances = instances_.size();
  s.spawned = spawned_;
  s.low = low_;
  s.high = instances_.empty() ? 0.0 : instances_.back().r_hat();
  s.peak_stored_total = peak_total_;
  s.distance_evaluations = anchor_evaluations_;
  s.points_seen = seen_;
  for (const auto& g : instances_) {
    s.overflowed += g.is_overflowed() ? 1 : 0;
    s.peak_stored_per_instance = std::max(s.peak_stored_per_instance, g.peak_stored_points());
    s.stored_points += g.stored_points();
    s.distance_evaluations += g.distance_evaluations();
    s.update_budget_violations += g.update_budget_violations();
  }
  if (!bootstrapped_) s.stored_points = buffer_.size();
  return s;
}

LadderResult Ladder::finish_from_buffer() const {
  if (buffer_.empty()) throw InputError("empty stream");
  // The whole (deduplicated) stream is in memory: try every candidate radius.
  std::vector<double> radii{0.0};
  for (std::size_t i = 0; i < buffer_.size(); ++i) {
    for (std::size_t j = i + 1; j < buffer_.size(); ++j) {
      const double d = metric_(buffer_[i], buffer_[j]);
      radii.push_back(d);
      radii.push_back(d / 2.0);
    }
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  LadderResult result;
  for (double r : radii) {
    RadiusGuess g(r, spec_, options_.mode, metric_);
    for (const auto& p : replay_order(buffer_)) g.process(p);
    auto outcome = g.finalize();
    if (!outcome.is_feasible()) {
      ++result.discarded;
      continue;
    }
    result.best_guess = r;
    result.centers = outcome.centers();
    result.stats = stats();
    result.stats.instances = 1;
    result.stats.low = result.stats.high = r;
    result.stats.peak_stored_per_instance = g.peak_stored_points();
    result.stats.distance_evaluations = g.distance_evaluations();
    return result;
  }
  throw NoFeasibleSolution("no radius admits a fair center set for this input");
}

LadderResult Ladder::finish() const {
  if (!bootstrapped_) return finish_from_buffer();

  LadderResult result;
  bool found = false;
  for (const auto& g : instances_) {
    auto outcome = g.finalize();
    if (!found) {
      if (!outcome.is_feasible()) {
        ++result.discarded;
        continue;
      }
      found = true;
      result.best_guess = g.r_hat();
      result.centers = outcome.centers();
    } else if (!outcome.is_feasible()) {
      ++result.monotonicity_warnings;
    }
  }
  if (!found) throw NoFeasibleSolution("no radius guess admits a fair center set for this input");
  result.stats = stats();
  return result;
}

}  // namespace fairstream
