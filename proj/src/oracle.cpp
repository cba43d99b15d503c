#include "fairstream/oracle.hpp"

#include <algorithm>
#include <string>

namespace fairstream {

namespace {

using Matrix = std::vector<std::vector<double>>;

Matrix distance_matrix(std::span<const Point> points, const DistanceMetric& metric) {
  const std::size_t n = points.size();
  Matrix d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = metric(points[i], points[j]);
  }
  return d;
}

void check_limits(std::span<const Point> points, const FairnessSpec& spec, OracleLimits limits) {
  if (points.empty()) throw InputError("oracle needs at least one point");
  if (points.size() > limits.max_points || spec.k() > limits.max_k) {
    throw InputError("oracle refused: n=" + std::to_string(points.size()) + ", k=" + std::to_string(spec.k()) +
                     " exceeds the brute-force limit (n<=" + std::to_string(limits.max_points) +
                     ", k<=" + std::to_string(limits.max_k) + ")");
  }
  for (const auto& p : points) {
    if (!spec.contains(p.group)) throw InputError("point " + std::to_string(p.id) + " has an out-of-range group");
  }
}

// Calls visit(indices) for every fair subset, by size then lexicographically.
template <typename Visit>
void for_each_fair_subset(std::span<const Point> points, const FairnessSpec& spec, Visit&& visit) {
  const int n = static_cast<int>(points.size());
  const int max_size = std::min(spec.k(), n);
  std::vector<int> counts(static_cast<std::size_t>(spec.groups()), 0);
  for (int size = 1; size <= max_size; ++size) {
    std::vector<int> idx(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      std::fill(counts.begin(), counts.end(), 0);
      bool fair = true;
      for (int i : idx) {
        const GroupId g = points[i].group;
        if (++counts[g - 1] > spec.cap(g)) {
          fair = false;
          break;
        }
      }
      if (fair) visit(idx);

      int pos = size - 1;
      while (pos >= 0 && idx[pos] == n - size + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < size; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
}

double subset_cost(const Matrix& d, const std::vector<int>& subset) {
  double worst = 0.0;
  for (std::size_t s = 0; s < d.size(); ++s) {
    double best = kInfinity;
    for (int c : subset) best = std::min(best, d[s][c]);
    worst = std::max(worst, best);
  }
  return worst;
}

OracleResult make_result(std::span<const Point> points, const std::vector<int>& best, double cost,
                         std::uint64_t evaluated) {
  if (best.empty()) throw InputError("no nonempty fair center set exists for these caps");
  OracleResult r;
  r.r_opt = cost;
  r.evaluated = evaluated;
  for (int i : best) r.optimal_centers.add(points[i]);
  return r;
}

}  // namespace

OracleResult brute_force_opt(std::span<const Point> points, const FairnessSpec& spec, const DistanceMetric& metric,
                             OracleLimits limits) {
  check_limits(points, spec, limits);
  const Matrix d = distance_matrix(points, metric);

  std::vector<std::vector<int>> subsets;
  for_each_fair_subset(points, spec, [&](const std::vector<int>& idx) { subsets.push_back(idx); });

  std::vector<double> costs(subsets.size());
  const auto m = static_cast<std::ptrdiff_t>(subsets.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < m; ++i) costs[i] = subset_cost(d, subsets[i]);

  std::size_t best = subsets.size();
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    if (best == subsets.size() || costs[i] < costs[best]) best = i;
  }
  if (best == subsets.size()) return make_result(points, {}, 0.0, 0);
  return make_result(points, subsets[best], costs[best], subsets.size());
}

namespace serial {

OracleResult brute_force_opt(std::span<const Point> points, const FairnessSpec& spec, const DistanceMetric& metric,
                             OracleLimits limits) {
  check_limits(points, spec, limits);
  const Matrix d = distance_matrix(points, metric);
  std::vector<int> best;
  double best_cost = kInfinity;
  std::uint64_t evaluated = 0;
  for_each_fair_subset(points, spec, [&](const std::vector<int>& idx) {
    ++evaluated;
    const double c = subset_cost(d, idx);
    if (best.empty() || c < best_cost) {
      best = idx;
      best_cost = c;
    }
  });
  return make_result(points, best, best_cost, evaluated);
}

}  // namespace serial

std::vector<double> candidate_radii(std::span<const Point> points, const DistanceMetric& metric) {
  std::vector<double> out;
  if (points.size() <= 1) return {0.0};
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = metric(points[i], points[j]);
      out.push_back(d);
      out.push_back(d / 2.0);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

void check_gonzalez(int k) {
  if (k < 1) throw InputError("gonzalez needs k >= 1");
}

}  // namespace

CenterSet gonzalez(std::span<const Point> points, int k, const DistanceMetric& metric) {
  check_gonzalez(k);
  CenterSet c;
  if (points.empty()) return c;
  const auto n = static_cast<std::ptrdiff_t>(points.size());
  std::vector<double> nearest(points.size(), kInfinity);
  std::size_t next = 0;
  while (static_cast<int>(c.size()) < k) {
    c.add(points[next]);
    const Point& center = points[next];
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], metric(points[i], center));

    // First index attaining the maximum.
    std::size_t far = 0;
#pragma omp parallel
    {
      std::size_t local = 0;
#pragma omp for schedule(static) nowait
      for (std::ptrdiff_t i = 0; i < n; ++i) {
        if (nearest[i] > nearest[local] || (nearest[i] == nearest[local] && static_cast<std::size_t>(i) < local)) {
          local = static_cast<std::size_t>(i);
        }
      }
#pragma omp critical
      {
        if (nearest[local] > nearest[far] || (nearest[local] == nearest[far] && local < far)) far = local;
      }
    }
    if (!(nearest[far] > 0.0)) break;
    next = far;
  }
  return c;
}

namespace serial {

CenterSet gonzalez(std::span<const Point> points, int k, const DistanceMetric& metric) {
  check_gonzalez(k);
  CenterSet c;
  if (points.empty()) return c;
  std::vector<double> nearest(points.size(), kInfinity);
  std::size_t next = 0;
  while (static_cast<int>(c.size()) < k) {
    c.add(points[next]);
    std::size_t far = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      nearest[i] = std::min(nearest[i], metric(points[i], points[next]));
      if (nearest[i] > nearest[far]) far = i;
    }
    if (!(nearest[far] > 0.0)) break;
    next = far;
  }
  return c;
}

}  // namespace serial

}  // namespace fairstream
