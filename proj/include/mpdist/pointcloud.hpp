#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mpdist/detail/random.hpp"

namespace mpdist {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

/// Planar points with an optional density value per point.
class PointCloud {
 public:
  PointCloud() = default;

  explicit PointCloud(std::vector<Point2> points) : points_(std::move(points)) {
    for (const auto& p : points_) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw std::invalid_argument("point coordinates must be finite");
      }
    }
  }

  PointCloud(std::vector<Point2> points, std::vector<double> densities)
      : PointCloud(std::move(points)) {
    set_densities(std::move(densities));
  }

  const std::vector<Point2>& points() const { return points_; }
  const std::optional<std::vector<double>>& densities() const { return densities_; }
  bool has_densities() const { return densities_.has_value(); }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  void set_densities(std::vector<double> values) {
    if (values.size() != points_.size()) {
      throw std::invalid_argument("density count " + std::to_string(values.size()) +
                                  " does not match point count " +
                                  std::to_string(points_.size()));
    }
    for (double v : values) {
      if (!std::isfinite(v)) throw std::invalid_argument("densities must be finite");
    }
    densities_ = std::move(values);
  }

  void clear_densities() { densities_.reset(); }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  std::vector<Point2> points_;
  std::optional<std::vector<double>> densities_;
};

/// Two circles of equal radius; the gap between their boundaries is `separation`.
struct CircleSpec {
  double radius = 1.0;
  double separation = 0.0;
  std::size_t points_per_circle = 200;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
      throw std::invalid_argument("circle radius must be positive");
    }
    if (!(separation >= 0.0) || !std::isfinite(separation)) {
      throw std::invalid_argument("circle separation must be nonnegative");
    }
    if (points_per_circle < 1) throw std::invalid_argument("points_per_circle must be >= 1");
  }
};

inline constexpr Point2 kThreePointA{1.0, 1.0};
inline constexpr Point2 kThreePointB{6.1, 1.0};

/// {A, B, C} with A = (1,1), B = (6.1,1) and C = (cx, cy).
inline PointCloud three_point(double cx, double cy) {
  if (!std::isfinite(cx) || !std::isfinite(cy)) {
    throw std::invalid_argument("three_point: coordinates must be finite");
  }
  return PointCloud({kThreePointA, kThreePointB, Point2{cx, cy}});
}

/// Uniform angle samples on two circles centered at (0,0) and (2r + d, 0).
/// The first circle's points come first.
inline PointCloud two_circles(const CircleSpec& spec) {
  spec.validate();
  detail::Rng rng(spec.seed);
  const double r = spec.radius;
  const double cx2 = 2.0 * r + spec.separation;
  std::vector<Point2> pts;
  pts.reserve(2 * spec.points_per_circle);
  for (double cx : {0.0, cx2}) {
    for (std::size_t i = 0; i < spec.points_per_circle; ++i) {
      const double theta = 2.0 * std::numbers::pi * rng.uniform01();
      pts.push_back({cx + r * std::cos(theta), r * std::sin(theta)});
    }
  }
  return PointCloud(std::move(pts));
}

/// Moves exactly round(fraction * n) points, chosen without replacement, by a
/// vector drawn uniformly from the disk of radius `magnitude`.
inline PointCloud add_noise(const PointCloud& cloud, double fraction, double magnitude,
                            std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("add_noise: fraction must lie in [0, 1]");
  }
  if (!(magnitude >= 0.0) || !std::isfinite(magnitude)) {
    throw std::invalid_argument("add_noise: magnitude must be nonnegative");
  }
  if (cloud.empty()) throw std::invalid_argument("add_noise: cloud is empty");

  const std::size_t n = cloud.size();
  const auto moved = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  std::vector<Point2> pts = cloud.points();
  if (moved == 0 || magnitude == 0.0) {
    return cloud;
  }

  detail::Rng rng(seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = 0; i < moved; ++i) {
    const std::size_t j = i + rng.index(n - i);
    std::swap(order[i], order[j]);
  }
  std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(moved));
  for (std::size_t i = 0; i < moved; ++i) {
    const double rho = magnitude * std::sqrt(rng.uniform01());
    const double phi = 2.0 * std::numbers::pi * rng.uniform01();
    pts[order[i]].x += rho * std::cos(phi);
    pts[order[i]].y += rho * std::sin(phi);
  }
  if (cloud.has_densities()) return PointCloud(std::move(pts), *cloud.densities());
  return PointCloud(std::move(pts));
}

/// density[i] = distance from point i to its k-th nearest other point.
inline PointCloud knn_density(const PointCloud& cloud, std::size_t k) {
  const std::size_t n = cloud.size();
  if (k < 1) throw std::invalid_argument("knn_density: k must be positive");
  if (k >= n) {
    throw std::invalid_argument("knn_density: need more than k=" + std::to_string(k) +
                                " points, got " + std::to_string(n));
  }
  const auto& pts = cloud.points();
  std::vector<double> dens(n);
  std::vector<double> dist(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t m = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) dist[m++] = distance(pts[i], pts[j]);
    }
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1), dist.end());
    dens[i] = dist[k - 1];
  }
  return PointCloud(pts, std::move(dens));
}

inline PointCloud set_density(const PointCloud& cloud, std::vector<double> values) {
  PointCloud out(cloud.points());
  out.set_densities(std::move(values));
  return out;
}

// ---------------------------------------------------------------------------
// CSV: one point per row, "x,y" or "x,y,density"; '#' lines are comments.

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline double parse_double(std::string_view field, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(line, "non-numeric field '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) throw ParseError(line, "non-finite value");
  return value;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline PointCloud parse_csv(std::istream& in) {
  std::vector<Point2> pts;
  std::vector<double> dens;
  std::size_t columns = 0;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 2 && fields.size() != 3) {
      throw ParseError(line_no, "expected 2 or 3 columns, got " + std::to_string(fields.size()));
    }
    if (columns == 0) {
      columns = fields.size();
    } else if (fields.size() != columns) {
      throw ParseError(line_no, "inconsistent column count (expected " + std::to_string(columns) +
                                    ", got " + std::to_string(fields.size()) + ")");
    }
    pts.push_back({detail::parse_double(fields[0], line_no), detail::parse_double(fields[1], line_no)});
    if (columns == 3) dens.push_back(detail::parse_double(fields[2], line_no));
  }
  if (columns == 3) return PointCloud(std::move(pts), std::move(dens));
  return PointCloud(std::move(pts));
}

inline void write_csv(const PointCloud& cloud, std::ostream& out) {
  const bool with_density = cloud.has_densities();
  out << (with_density ? "# x,y,density\n" : "# x,y\n");
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& p = cloud.points()[i];
    out << detail::format_double(p.x) << ',' << detail::format_double(p.y);
    if (with_density) out << ',' << detail::format_double((*cloud.densities())[i]);
    out << '\n';
  }
}

inline PointCloud read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return parse_csv(in);
}

inline void write_csv(const PointCloud& cloud, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(cloud, out);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace mpdist
