#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fairstream/metric.hpp"

namespace fairstream {

struct OracleLimits {
  std::size_t max_points = 16;
  int max_k = 5;
};

struct OracleResult {
  double r_opt = 0.0;
  CenterSet optimal_centers;
  std::uint64_t evaluated = 0;  // fair subsets examined
};

/// Exact fair k-center by enumerating every fair subset of size 1..k in
/// order of increasing size, then lexicographic index order; the first
/// subset attaining the minimum cost is the witness. Subsets are costed in
/// parallel with a deterministic reduction.
///
/// Throws InputError when the instance exceeds `limits`, when S is empty, or
/// when no nonempty fair subset exists.
OracleResult brute_force_opt(std::span<const Point> points, const FairnessSpec& spec,
                             const DistanceMetric& metric = {}, OracleLimits limits = {});

namespace serial {
OracleResult brute_force_opt(std::span<const Point> points, const FairnessSpec& spec,
                             const DistanceMetric& metric = {}, OracleLimits limits = {});
}

/// Every pairwise distance and its half, sorted and deduplicated. A single
/// point yields {0}.
std::vector<double> candidate_radii(std::span<const Point> points, const DistanceMetric& metric = {});

/// Farthest-first traversal from the first point, ignoring groups. Stops at
/// k centers or once every point coincides with a center. Ties go to the
/// earliest point.
CenterSet gonzalez(std::span<const Point> points, int k, const DistanceMetric& metric = {});

namespace serial {
CenterSet gonzalez(std::span<const Point> points, int k, const DistanceMetric& metric = {});
}

}  // namespace fairstream
