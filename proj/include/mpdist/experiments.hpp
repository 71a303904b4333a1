#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpdist/bifiltration.hpp"
#include "mpdist/detail/random.hpp"
#include "mpdist/distances.hpp"
#include "mpdist/pointcloud.hpp"

namespace mpdist {

/// Density 1 for every point belonging to a closest pair, 2 for the rest.
/// This is the hand assignment used for the three-point and polygon datasets.
inline PointCloud closest_pair_density(const PointCloud& cloud) {
  const auto& pts = cloud.points();
  const std::size_t n = pts.size();
  if (n < 2) throw std::invalid_argument("closest_pair_density: need at least two points");
  double best = kInfinity;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) best = std::min(best, distance(pts[i], pts[j]));
  }
  std::vector<double> dens(n, 2.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (distance(pts[i], pts[j]) == best) dens[i] = dens[j] = 1.0;
    }
  }
  return set_density(cloud, std::move(dens));
}

inline BifilteredComplex complex_for_degree(const PointCloud& cloud, int degree,
                                            std::optional<double> scale_cap = std::nullopt) {
  // Triangles never change degree-0 barcodes, so H0 work stays on the 1-skeleton.
  return build_density_rips(cloud, degree + 1, scale_cap);
}

// ---------------------------------------------------------------------------
// Sweep results

struct SweepRow {
  std::vector<double> params;  // aligned with SweepResult::param_names
  double matching_distance = 0.0;
  std::optional<Line> argmax_line;
  std::uint64_t seed = 0;
  int grid_size = 0;
  int degree = 0;
};

struct SweepResult {
  std::vector<std::string> param_names;
  std::vector<SweepRow> rows;

  std::vector<double> distances() const {
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r.matching_distance);
    return out;
  }

  void write_csv(std::ostream& out) const {
    for (const auto& name : param_names) out << name << ',';
    out << "matching_distance,argmax_angle_deg,argmax_offset,seed,grid_size,degree\n";
    for (const auto& r : rows) {
      for (double p : r.params) out << detail::format_double(p) << ',';
      out << detail::format_double(r.matching_distance) << ',';
      if (r.argmax_line) {
        out << detail::format_double(r.argmax_line->angle_deg()) << ','
            << detail::format_double(r.argmax_line->offset()) << ',';
      } else {
        out << ",,";
      }
      out << r.seed << ',' << r.grid_size << ',' << r.degree << '\n';
    }
  }
};

inline SweepRow make_row(std::vector<double> params, const MatchResult& m, std::uint64_t seed,
                         const MatchConfig& cfg) {
  return SweepRow{std::move(params), m.distance, m.argmax_line, seed, cfg.grid_size, cfg.degree};
}

// ---------------------------------------------------------------------------
// Three-point datasets X_{x,s} = {A, B, (x, s)} with densities A=1, B=2, C=1.

inline PointCloud three_point_dataset(double x, double s) {
  return set_density(three_point(x, s), {1.0, 2.0, 1.0});
}

/// 0, 0.184, 0.368, ... up to 3.3.
inline std::vector<double> default_three_point_values() {
  std::vector<double> v;
  for (int k = 0; 0.184 * k <= 3.3 + 1e-12; ++k) v.push_back(0.184 * k);
  return v;
}

/// d_M in degree 0 between X_{r,s} and X_{t,s} for every (r, t).
inline SweepResult three_point_sweep(double s, const std::vector<double>& r_values,
                                     const std::vector<double>& t_values, MatchConfig cfg) {
  if (r_values.empty() || t_values.empty()) throw std::invalid_argument("three_point_sweep: empty value list");
  cfg.degree = 0;
  std::map<double, BifilteredComplex> complexes;
  auto complex_at = [&](double x) -> const BifilteredComplex& {
    auto it = complexes.find(x);
    if (it == complexes.end()) it = complexes.emplace(x, complex_for_degree(three_point_dataset(x, s), 0)).first;
    return it->second;
  };
  SweepResult out{{"s", "r", "t"}, {}};
  for (double r : r_values) {
    for (double t : t_values) {
      const MatchResult m = matching_distance(complex_at(r), complex_at(t), cfg);
      out.rows.push_back(make_row({s, r, t}, m, 0, cfg));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Two-circle datasets

enum class CircleSweepAxis { Separation, Radius };

struct TwoCircleSweepSpec {
  CircleSweepAxis axis = CircleSweepAxis::Separation;
  double radius = 3.0;                  // fixed radius for separation sweeps
  double separation = 3.0;              // fixed separation for radius sweeps
  std::vector<double> values;           // the varying parameter (d1 or r1)
  std::vector<double> references;       // compared against every value (d2 or r2)
  std::size_t points_per_circle = 50;
  std::size_t k = 20;
  std::uint64_t seed = 0;
  double noise_fraction = 0.0;
  double noise_magnitude = 0.0;

  void validate() const {
    if (values.empty() || references.empty()) throw std::invalid_argument("two_circle_sweep: empty value list");
    if (2 * points_per_circle <= k) throw std::invalid_argument("two_circle_sweep: need more points than k");
  }
};

/// Separations 0.5, 1, ..., 30.
inline std::vector<double> default_separations() {
  std::vector<double> v;
  for (int i = 1; i <= 60; ++i) v.push_back(0.5 * i);
  return v;
}

/// One dataset per parameter value. Every dataset draws its angles from the
/// same seed, so two datasets differ only in the varied parameter; noise uses
/// a stream derived from the seed and the parameter value.
inline PointCloud two_circle_dataset(const TwoCircleSweepSpec& spec, double value) {
  CircleSpec cs;
  cs.points_per_circle = spec.points_per_circle;
  cs.seed = spec.seed;
  cs.radius = spec.axis == CircleSweepAxis::Separation ? spec.radius : value;
  cs.separation = spec.axis == CircleSweepAxis::Separation ? value : spec.separation;
  PointCloud cloud = two_circles(cs);
  if (spec.noise_fraction > 0.0 && spec.noise_magnitude > 0.0) {
    std::uint64_t bits = 0;
    static_assert(sizeof bits == sizeof value);
    std::memcpy(&bits, &value, sizeof bits);
    cloud = add_noise(cloud, spec.noise_fraction, spec.noise_magnitude, detail::Rng::derive(spec.seed, bits));
  }
  return knn_density(cloud, spec.k);
}

/// d_M between the dataset for every value v and every reference v2 with
/// v <= v2, ordered by reference then by v2 - v ascending.
inline SweepResult two_circle_sweep(const TwoCircleSweepSpec& spec, const MatchConfig& cfg) {
  spec.validate();
  cfg.validate();
  std::map<double, BifilteredComplex> complexes;
  auto complex_at = [&](double v) -> const BifilteredComplex& {
    auto it = complexes.find(v);
    if (it == complexes.end()) it = complexes.emplace(v, complex_for_degree(two_circle_dataset(spec, v), cfg.degree)).first;
    return it->second;
  };
  const bool by_sep = spec.axis == CircleSweepAxis::Separation;
  SweepResult out;
  out.param_names = by_sep ? std::vector<std::string>{"radius", "d1", "d2", "delta"}
                           : std::vector<std::string>{"separation", "r1", "r2", "delta"};
  for (double ref : spec.references) {
    std::vector<double> vals;
    for (double v : spec.values) {
      if (v <= ref) vals.push_back(v);
    }
    std::sort(vals.begin(), vals.end(), std::greater<>());
    for (double v : vals) {
      const MatchResult m = matching_distance(complex_at(v), complex_at(ref), cfg);
      out.rows.push_back(make_row({by_sep ? spec.radius : spec.separation, v, ref, ref - v}, m, spec.seed, cfg));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rank correlation

inline std::vector<double> average_ranks(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

/// Spearman rank correlation with average ranks for ties; NaN if either
/// sequence is constant.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman: need two equal-length sequences");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

struct NoiseCurve {
  double fraction = 0.0;
  SweepResult sweep;
  double spearman = 0.0;
};

struct NoiseReport {
  SweepResult clean;
  std::vector<NoiseCurve> noisy;
};

/// Reruns a two-circle sweep with noise on a fraction of every dataset's points
/// and compares each noisy curve with the clean one by rank correlation.
inline NoiseReport noise_robustness(TwoCircleSweepSpec spec, const std::vector<double>& fractions, double magnitude,
                                    const MatchConfig& cfg) {
  spec.noise_fraction = 0.0;
  spec.noise_magnitude = 0.0;
  NoiseReport report;
  report.clean = two_circle_sweep(spec, cfg);
  for (double f : fractions) {
    TwoCircleSweepSpec noisy = spec;
    noisy.noise_fraction = f;
    noisy.noise_magnitude = magnitude;
    NoiseCurve curve{f, two_circle_sweep(noisy, cfg), 0.0};
    curve.spearman = spearman(report.clean.distances(), curve.sweep.distances());
    report.noisy.push_back(std::move(curve));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Exact zero-distance configurations

struct ZeroCheck {
  std::string label;
  PointCloud first;
  PointCloud second;
  bool in_hypothesis = true;
  double matching_distance = 0.0;
};

struct PropositionReport {
  std::size_t in_hypothesis = 0;
  std::size_t in_hypothesis_zero = 0;
  std::size_t out_of_hypothesis = 0;
  std::size_t out_of_hypothesis_nonzero = 0;
  std::size_t polygon_trials = 0;
  std::size_t polygon_zero = 0;
  std::vector<ZeroCheck> failures;  // in-hypothesis checks with nonzero distance

  bool passed() const { return failures.empty() && in_hypothesis == in_hypothesis_zero && polygon_trials == polygon_zero; }
};

namespace detail {

struct LatticePoint {
  std::int64_t x = 0;
  std::int64_t y = 0;
};

inline std::int64_t norm2(LatticePoint p) { return p.x * p.x + p.y * p.y; }

// Integer points on the circle x^2 + y^2 = r^2.
inline std::vector<LatticePoint> lattice_circle(std::int64_t r) {
  std::vector<LatticePoint> out;
  for (std::int64_t x = -r; x <= r; ++x) {
    const std::int64_t rest = r * r - x * x;
    const auto y = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(rest))));
    if (y * y != rest) continue;
    out.push_back({x, y});
    if (y != 0) out.push_back({x, -y});
  }
  return out;
}

inline Point2 to_point(LatticePoint p, LatticePoint shift) {
  return {static_cast<double>(p.x + shift.x), static_cast<double>(p.y + shift.y)};
}

// Regular n-gon with circumradius 1, vertex 0 on the positive x-axis, built so
// that reflection in the x-axis maps the vertex set onto itself bit-exactly.
inline std::vector<Point2> mirrored_polygon(int n) {
  std::vector<Point2> v(static_cast<std::size_t>(n));
  v[0] = {1.0, 0.0};
  for (int k = 1; 2 * k < n; ++k) {
    const double a = 2.0 * std::numbers::pi * k / n;
    v[static_cast<std::size_t>(k)] = {std::cos(a), std::sin(a)};
    v[static_cast<std::size_t>(n - k)] = {std::cos(a), -std::sin(a)};
  }
  if (n % 2 == 0) v[static_cast<std::size_t>(n / 2)] = {-1.0, 0.0};
  return v;
}

}  // namespace detail

inline double zero_check_distance(const PointCloud& first, const PointCloud& second, const MatchConfig& cfg) {
  MatchConfig c = cfg;
  c.degree = 0;
  return matching_distance(complex_for_degree(closest_pair_density(first), 0),
                           complex_for_degree(closest_pair_density(second), 0), c)
      .distance;
}

/// Randomized check of the three-point zero-distance result, plus its
/// regular-polygon generalization for n = 3..6.
///
/// Three-point configurations live on the integer lattice: A is an integer
/// point, C1 and C2 are lattice points on the circle of integer radius r about
/// A, and B is an integer point farther than r from A. All pairwise distances
/// are square roots of integers, so equal distances are bit-identical and the
/// distance is compared with 0 exactly. Polygon configurations mirror C1 in the
/// polygon's symmetry axis to obtain C2.
inline PropositionReport verify_proposition(std::size_t trials, std::uint64_t seed, const MatchConfig& cfg,
                                            std::size_t polygon_trials_per_n = 5) {
  if (trials < 1) throw std::invalid_argument("verify_proposition: trials must be >= 1");
  static const std::int64_t radii[] = {5, 25, 65, 85, 325, 1105};
  detail::Rng rng(seed);
  PropositionReport report;

  std::map<std::int64_t, std::vector<detail::LatticePoint>> circles;
  while (report.in_hypothesis < trials) {
    const std::int64_t r = radii[rng.index(std::size(radii))];
    auto& circle = circles[r];
    if (circle.empty()) circle = detail::lattice_circle(r);

    detail::LatticePoint b;
    do {
      b = {static_cast<std::int64_t>(rng.index(6 * r + 1)) - 3 * r,
           static_cast<std::int64_t>(rng.index(6 * r + 1)) - 3 * r};
    } while (detail::norm2(b) <= r * r);
    const std::int64_t d2 = detail::norm2(b);

    std::vector<detail::LatticePoint> far, near;
    for (auto c : circle) {
      (detail::norm2({c.x - b.x, c.y - b.y}) > d2 ? far : near).push_back(c);
    }
    if (far.size() < 2) continue;

    const detail::LatticePoint shift{static_cast<std::int64_t>(rng.index(2001)) - 1000,
                                     static_cast<std::int64_t>(rng.index(2001)) - 1000};
    const std::size_t i1 = rng.index(far.size());
    std::size_t i2 = rng.index(far.size() - 1);
    if (i2 >= i1) ++i2;
    const Point2 a = detail::to_point({0, 0}, shift);
    const Point2 bp = detail::to_point(b, shift);

    ZeroCheck check{"three-point", PointCloud({a, bp, detail::to_point(far[i1], shift)}),
                    PointCloud({a, bp, detail::to_point(far[i2], shift)}), true, 0.0};
    check.matching_distance = zero_check_distance(check.first, check.second, cfg);
    ++report.in_hypothesis;
    if (check.matching_distance == 0.0) {
      ++report.in_hypothesis_zero;
    } else {
      report.failures.push_back(std::move(check));
    }

    // Companion configuration with C2 inside the circle of radius d about B.
    // Points with |C2 - B| <= r would change the density assignment; skip them.
    std::vector<detail::LatticePoint> violating;
    for (auto c : near) {
      if (detail::norm2({c.x - b.x, c.y - b.y}) > r * r) violating.push_back(c);
    }
    if (!violating.empty()) {
      const auto c2 = violating[rng.index(violating.size())];
      const double dm = zero_check_distance(PointCloud({a, bp, detail::to_point(far[i1], shift)}),
                                            PointCloud({a, bp, detail::to_point(c2, shift)}), cfg);
      ++report.out_of_hypothesis;
      if (dm != 0.0) ++report.out_of_hypothesis_nonzero;
    }
  }

  for (int n = 3; n <= 6; ++n) {
    const auto poly = detail::mirrored_polygon(n);
    double min_side = kInfinity, max_side = 0.0;
    for (int k = 0; k < n; ++k) {
      const double s = distance(poly[static_cast<std::size_t>(k)], poly[static_cast<std::size_t>((k + 1) % n)]);
      min_side = std::min(min_side, s);
      max_side = std::max(max_side, s);
    }
    for (std::size_t trial = 0; trial < polygon_trials_per_n; ++trial) {
      Point2 c1;
      for (;;) {
        const std::size_t vi = rng.index(static_cast<std::uint64_t>(n));
        const double r = min_side * rng.uniform(0.05, 0.95);
        const double phi = 2.0 * std::numbers::pi * rng.uniform01();
        c1 = {poly[vi].x + r * std::cos(phi), poly[vi].y + r * std::sin(phi)};
        bool ok = distance(c1, poly[vi]) < min_side;
        for (std::size_t j = 0; j < poly.size() && ok; ++j) {
          if (j != vi && !(distance(c1, poly[j]) > max_side)) ok = false;
        }
        if (ok) break;
      }
      const Point2 c2{c1.x, -c1.y};
      std::vector<Point2> p1 = poly, p2 = poly;
      p1.push_back(c1);
      p2.push_back(c2);
      ZeroCheck check{std::to_string(n) + "-gon", PointCloud(p1), PointCloud(p2), true, 0.0};
      check.matching_distance = zero_check_distance(check.first, check.second, cfg);
      ++report.polygon_trials;
      if (check.matching_distance == 0.0) {
        ++report.polygon_zero;
      } else {
        report.failures.push_back(std::move(check));
      }
    }
  }
  return report;
}

struct CorollaryReport {
  std::size_t trials = 0;
  std::size_t zero_count = 0;       // trials with d_M <= zero_tolerance
  std::size_t event_count = 0;      // trials where both satellites are farther than d from the other anchor
  std::size_t agreement = 0;        // trials where the two counts agree
  double empirical = 0.0;           // zero_count / trials
  double geometric = 0.0;           // event_count / trials
  double predicted = 0.0;
};

/// (1 - arccos(r / 2d) / pi)^2
inline double corollary_probability(double r, double d) {
  const double p = 1.0 - std::acos(r / (2.0 * d)) / std::numbers::pi;
  return p * p;
}

/// Monte Carlo for the probability of zero distance with C1 uniform on the
/// circle of radius r about A = (0,0) and C2 uniform on the circle of radius r
/// about B = (d,0). Continuous sampling cannot make two distances bit-equal,
/// so "zero" means d_M <= zero_tolerance in normalized units.
inline CorollaryReport corollary_montecarlo(double r, double d, std::size_t trials, std::uint64_t seed,
                                            const MatchConfig& cfg, double zero_tolerance = 1e-9) {
  if (!(r > 0.0) || !(r < d) || !std::isfinite(d)) throw std::invalid_argument("corollary_montecarlo: need 0 < r < d");
  if (trials < 1) throw std::invalid_argument("corollary_montecarlo: trials must be >= 1");
  detail::Rng rng(seed);
  const Point2 a{0.0, 0.0}, b{d, 0.0};
  CorollaryReport rep;
  rep.trials = trials;
  rep.predicted = corollary_probability(r, d);
  for (std::size_t i = 0; i < trials; ++i) {
    const double p1 = 2.0 * std::numbers::pi * rng.uniform01();
    const double p2 = 2.0 * std::numbers::pi * rng.uniform01();
    const Point2 c1{a.x + r * std::cos(p1), a.y + r * std::sin(p1)};
    const Point2 c2{b.x + r * std::cos(p2), b.y + r * std::sin(p2)};
    const bool event = distance(c1, b) > d && distance(c2, a) > d;
    const bool zero = zero_check_distance(PointCloud({a, b, c1}), PointCloud({a, b, c2}), cfg) <= zero_tolerance;
    rep.event_count += event;
    rep.zero_count += zero;
    rep.agreement += (event == zero);
  }
  rep.empirical = static_cast<double>(rep.zero_count) / static_cast<double>(trials);
  rep.geometric = static_cast<double>(rep.event_count) / static_cast<double>(trials);
  return rep;
}

}  // namespace mpdist
