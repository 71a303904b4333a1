#pragma once

// Random generators and brute-force oracles shared by the unit tests and the
// acceptance binary.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "mpdist/mpdist.hpp"
#include "mpdist/oracle.hpp"

namespace mpdist::testsupport {

using detail::Rng;

/// n points; half the time on a small integer lattice so that distances tie.
inline PointCloud random_cloud(Rng& rng, std::size_t n, bool with_density = true) {
  const bool lattice = rng.index(2) == 0;
  const bool density_ties = rng.index(2) == 0;
  std::vector<Point2> pts;
  std::vector<double> dens;
  for (std::size_t i = 0; i < n; ++i) {
    if (lattice) {
      pts.push_back({static_cast<double>(rng.index(5)), static_cast<double>(rng.index(5))});
    } else {
      pts.push_back({rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)});
    }
    dens.push_back(density_ties ? static_cast<double>(rng.index(3)) : rng.uniform(0.0, 2.0));
  }
  if (!with_density) return PointCloud(std::move(pts));
  return PointCloud(std::move(pts), std::move(dens));
}

inline Line random_line(Rng& rng) {
  return Line(rng.uniform(1.0, 89.0), rng.uniform(-2.0, 2.0));
}

/// Density-Rips complex on up to `max_points` points truncated at the largest
/// edge length that keeps at most `max_simplices` simplices.
inline BifilteredComplex random_bifiltered(Rng& rng, std::size_t max_points, std::size_t max_simplices) {
  const std::size_t n = 2 + rng.index(max_points - 1);
  const PointCloud cloud = random_cloud(rng, n);
  std::vector<double> lengths;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) lengths.push_back(distance(cloud.points()[i], cloud.points()[j]));
  }
  std::sort(lengths.begin(), lengths.end(), std::greater<>());
  for (double cap : lengths) {
    auto bf = build_density_rips(cloud, 2, cap);
    if (bf.size() <= max_simplices) return bf;
  }
  return build_density_rips(cloud, 2, -1.0);  // vertices only
}

inline FilteredComplex random_filtered(Rng& rng, std::size_t max_points, std::size_t max_simplices) {
  return slice(random_bifiltered(rng, max_points, max_simplices), random_line(rng));
}

/// Up to `max_points` off-diagonal points, a few of them essential. Values are
/// drawn from a coarse grid half the time to provoke ties.
inline Diagram random_diagram(Rng& rng, std::size_t max_points, bool allow_infinite = true) {
  const std::size_t n = rng.index(max_points + 1);
  const bool coarse = rng.index(2) == 0;
  std::vector<Bar> pts;
  for (std::size_t i = 0; i < n; ++i) {
    double b = coarse ? static_cast<double>(rng.index(6)) : rng.uniform(0.0, 5.0);
    double d = b + (coarse ? static_cast<double>(1 + rng.index(4)) : rng.uniform(0.01, 4.0));
    if (allow_infinite && rng.index(5) == 0) d = kInfinity;
    pts.push_back({b, d});
  }
  return Diagram(std::move(pts));
}

inline double pair_cost(const Bar& a, const Bar& b) {
  if (a.infinite() != b.infinite()) return kInfinity;
  if (a.infinite()) return std::abs(a.birth - b.birth);
  return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

inline double to_diagonal(const Bar& a) { return a.infinite() ? kInfinity : (a.death - a.birth) / 2.0; }

/// Bottleneck by enumerating every partial bijection; unmatched points go to
/// the diagonal. Exponential, intended for at most five points per side.
inline double brute_force_bottleneck(const Diagram& a, const Diagram& b) {
  const auto& x = a.points;
  const auto& y = b.points;
  std::vector<bool> used(y.size(), false);
  double best = kInfinity;
  bool any = false;
  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double cur) {
    if (i == x.size()) {
      double total = cur;
      for (std::size_t j = 0; j < y.size(); ++j) {
        if (!used[j]) total = std::max(total, to_diagonal(y[j]));
      }
      if (!any || total < best) best = total;
      any = true;
      return;
    }
    rec(i + 1, std::max(cur, to_diagonal(x[i])));
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      rec(i + 1, std::max(cur, pair_cost(x[i], y[j])));
      used[j] = false;
    }
  };
  rec(0, 0.0);
  return best;
}

}  // namespace mpdist::testsupport
