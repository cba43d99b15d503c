#include "fairstream/planted.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace fairstream {

namespace {

// Nudges the first coordinate until c ± r round-trips to exactly r.
bool make_axis_exact(std::vector<double>& c, double r) {
  for (int attempt = 0; attempt < 256; ++attempt) {
    const double up = c[0] + r;
    const double down = c[0] - r;
    if (up - c[0] == r && c[0] - down == r) return true;
    c[0] = std::nextafter(c[0], kInfinity);
  }
  return false;
}

std::vector<double> random_in_ball(std::mt19937_64& rng, const std::vector<double>& center, double radius) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t dim = center.size();
  std::vector<double> dir(dim);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (auto& x : dir) {
      x = normal(rng);
      norm += x * x;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  // Strictly inside the ball so rounding cannot push a point past the radius.
  const double rho = 0.999 * radius * std::pow(unit(rng), 1.0 / static_cast<double>(dim));
  std::vector<double> out(dim);
  for (std::size_t i = 0; i < dim; ++i) out[i] = center[i] + rho * dir[i] / norm;
  return out;
}

}  // namespace

PlantedDataset generate_planted(const FairnessSpec& spec, const PlantedOptions& options) {
  const int k = spec.k();
  if (options.n < k) throw InputError("planted dataset needs n >= k");
  if (!(options.radius > 0.0)) throw InputError("planted radius must be positive");
  if (!(options.separation >= 4.0)) throw InputError("separation must be at least 4");
  if (options.dim < 1) throw InputError("dimension must be positive");

  std::mt19937_64 rng(options.seed);
  const double spacing = options.separation * options.radius;
  const double per_axis = std::ceil(std::pow(static_cast<double>(k), 1.0 / options.dim));
  const double side = 2.0 * spacing * per_axis;
  std::uniform_real_distribution<double> coord(0.0, side);
  const DistanceMetric metric;

  std::vector<std::vector<double>> centers;
  int attempts = 0;
  while (static_cast<int>(centers.size()) < k) {
    if (++attempts > options.max_attempts) {
      throw std::runtime_error("could not place " + std::to_string(k) + " centers at separation " +
                               std::to_string(options.separation) + " within the retry budget");
    }
    std::vector<double> c(static_cast<std::size_t>(options.dim));
    for (auto& x : c) x = coord(rng);
    if (!make_axis_exact(c, options.radius)) continue;
    const bool clear = std::all_of(centers.begin(), centers.end(),
                                   [&](const auto& other) { return metric(c, other) > spacing; });
    if (clear) centers.push_back(std::move(c));
  }

  // Exactly k_l centers carry group l.
  std::vector<GroupId> labels;
  for (GroupId g = 1; g <= spec.groups(); ++g) labels.insert(labels.end(), spec.cap(g), g);
  std::shuffle(labels.begin(), labels.end(), rng);

  struct Draft {
    std::vector<double> coords;
    GroupId group;
    int cluster;  // -1 for ordinary points, else index of the planted center
  };
  std::vector<Draft> drafts;
  drafts.reserve(static_cast<std::size_t>(options.n));
  for (int j = 0; j < k; ++j) drafts.push_back({centers[j], labels[j], j});
  std::vector<int> extras(static_cast<std::size_t>(k), 0);
  for (int e = 0; e < options.n - k; ++e) {
    const int j = e % k;
    std::vector<double> p;
    if (extras[j] < 2) {
      p = centers[j];
      p[0] += extras[j] == 0 ? options.radius : -options.radius;
    } else {
      p = random_in_ball(rng, centers[j], options.radius);
    }
    ++extras[j];
    drafts.push_back({std::move(p), labels[j], -1});
  }
  std::shuffle(drafts.begin(), drafts.end(), rng);

  PlantedDataset out;
  out.seed = options.seed;
  out.planted_r = options.n > k ? options.radius : 0.0;
  out.points.reserve(drafts.size());
  std::vector<Point> planted(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    Point p{static_cast<PointId>(i), std::move(drafts[i].coords), drafts[i].group};
    if (drafts[i].cluster >= 0) planted[drafts[i].cluster] = p;
    out.points.push_back(std::move(p));
  }
  for (const auto& c : planted) out.planted_centers.add(c);
  return out;
}

std::vector<Point> group_sorted(std::span<const Point> points) {
  std::vector<Point> out(points.begin(), points.end());
  std::stable_sort(out.begin(), out.end(), [](const Point& a, const Point& b) { return a.group < b.group; });
  return out;
}

}  // namespace fairstream
