#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fairstream/metric.hpp"

namespace fairstream {

struct PlantedOptions {
  int n = 0;
  double radius = 1.0;
  /// Minimum center spacing in units of radius; must be >= 4.
  double separation = 4.0;
  int dim = 2;
  std::uint64_t seed = 0;
  int max_attempts = 10000;
};

struct PlantedDataset {
  std::vector<Point> points;  // shuffled stream order, ids 0..n-1
  double planted_r = 0.0;
  CenterSet planted_centers;
  std::uint64_t seed = 0;
};

/// Synthetic instance whose optimal fair k-center radius is known.
///
/// Places k centers more than separation·radius apart, k_l of them in group
/// l, and scatters the remaining points inside the radius ball of a center
/// (round robin) with that center's group. The first two extra points of each
/// cluster sit at exactly ±radius along the first axis, so no center inside
/// the cluster can do better than radius and the optimum is exactly radius
/// whenever n > k (and 0 when n == k).
///
/// Throws InputError on bad parameters and std::runtime_error when centers
/// cannot be placed within the attempt budget.
PlantedDataset generate_planted(const FairnessSpec& spec, const PlantedOptions& options);

/// Stable reordering with all group-1 points first, then group 2, and so on.
std::vector<Point> group_sorted(std::span<const Point> points);

}  // namespace fairstream
