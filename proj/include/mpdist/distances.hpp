#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mpdist/bifiltration.hpp"
#include "mpdist/detail/parallel.hpp"
#include "mpdist/persistence.hpp"
#include "mpdist/slicing.hpp"

namespace mpdist {

/// Persistence diagram: the points (birth, death) of a barcode, birth < death.
struct Diagram {
  std::vector<Bar> points;

  Diagram() = default;
  explicit Diagram(std::vector<Bar> pts) : points(std::move(pts)) {
    for (const auto& p : points) {
      if (!std::isfinite(p.birth) || !(p.birth < p.death) || std::isnan(p.death)) {
        throw std::invalid_argument("diagram points need finite birth < death");
      }
    }
  }
  explicit Diagram(const Barcode& barcode) : points(barcode.bars) {}
};

namespace detail {

inline double linf(const Bar& a, const Bar& b) {
  return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

inline double diagonal_cost(const Bar& a) { return (a.death - a.birth) / 2.0; }

// Does the threshold graph admit a matching that covers every point whose
// diagonal cost exceeds delta, on both sides? Two one-sided checks suffice: a
// matching covering X on the left and one covering Y on the right can always be
// combined into one covering both (Mendelsohn-Dulmage).
class ThresholdMatcher {
 public:
  ThresholdMatcher(const std::vector<Bar>& left, const std::vector<Bar>& right)
      : left_(left), right_(right), cost_(left.size() * right.size()) {
    for (std::size_t i = 0; i < left.size(); ++i) {
      for (std::size_t j = 0; j < right.size(); ++j) cost_[i * right.size() + j] = linf(left[i], right[j]);
    }
  }

  const std::vector<double>& costs() const { return cost_; }

  bool feasible(double delta) {
    return covers(delta, /*from_left=*/true) && covers(delta, /*from_left=*/false);
  }

 private:
  double cost(std::size_t i, std::size_t j) const { return cost_[i * right_.size() + j]; }

  bool covers(double delta, bool from_left) {
    const auto& src = from_left ? left_ : right_;
    const std::size_t nsrc = src.size();
    const std::size_t ndst = from_left ? right_.size() : left_.size();
    match_.assign(ndst, SIZE_MAX);
    for (std::size_t u = 0; u < nsrc; ++u) {
      if (diagonal_cost(src[u]) <= delta) continue;
      seen_.assign(ndst, false);
      if (!augment(u, delta, from_left, ndst)) return false;
    }
    return true;
  }

  bool augment(std::size_t u, double delta, bool from_left, std::size_t ndst) {
    for (std::size_t v = 0; v < ndst; ++v) {
      if (seen_[v]) continue;
      const double c = from_left ? cost(u, v) : cost(v, u);
      if (c > delta) continue;
      seen_[v] = true;
      if (match_[v] == SIZE_MAX || augment(match_[v], delta, from_left, ndst)) {
        match_[v] = u;
        return true;
      }
    }
    return false;
  }

  const std::vector<Bar>& left_;
  const std::vector<Bar>& right_;
  std::vector<double> cost_;
  std::vector<std::size_t> match_;
  std::vector<bool> seen_;
};

}  // namespace detail

/// Bottleneck distance under the L-infinity ground metric.
///
/// Finite points may match each other or the diagonal (cost (death-birth)/2).
/// Essential points only match essential points, at cost |birth gap|; if the
/// essential counts differ the distance is +infinity. The finite part is the
/// smallest candidate cost whose threshold graph is feasible.
inline double bottleneck(const Diagram& a, const Diagram& b) {
  std::vector<Bar> fin_a, fin_b;
  std::vector<double> inf_a, inf_b;
  for (const auto& p : a.points) (p.infinite() ? inf_a.push_back(p.birth) : fin_a.push_back(p));
  for (const auto& p : b.points) (p.infinite() ? inf_b.push_back(p.birth) : fin_b.push_back(p));
  if (inf_a.size() != inf_b.size()) return kInfinity;

  // Sorted matching is optimal for points on a line.
  std::sort(inf_a.begin(), inf_a.end());
  std::sort(inf_b.begin(), inf_b.end());
  double lower = 0.0;
  for (std::size_t i = 0; i < inf_a.size(); ++i) lower = std::max(lower, std::abs(inf_a[i] - inf_b[i]));

  double upper = 0.0;
  for (const auto& p : fin_a) upper = std::max(upper, detail::diagonal_cost(p));
  for (const auto& p : fin_b) upper = std::max(upper, detail::diagonal_cost(p));
  if (upper <= lower) return lower;

  detail::ThresholdMatcher matcher(fin_a, fin_b);
  std::vector<double> candidates{lower, upper};
  for (double c : matcher.costs()) {
    if (c > lower && c < upper) candidates.push_back(c);
  }
  for (const auto* side : {&fin_a, &fin_b}) {
    for (const auto& p : *side) {
      const double c = detail::diagonal_cost(p);
      if (c > lower && c < upper) candidates.push_back(c);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // candidates.back() == upper is always feasible.
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (matcher.feasible(candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

inline double bottleneck(const Barcode& a, const Barcode& b) { return bottleneck(Diagram(a), Diagram(b)); }

/// Line weight 1/sqrt(1 + q^2) with q = max(m, 1/m).
inline double weight(double slope) {
  if (!(slope > 0.0) || !std::isfinite(slope)) throw std::invalid_argument("weight: slope must be positive and finite");
  const double q = std::max(slope, 1.0 / slope);
  return 1.0 / std::sqrt(1.0 + q * q);
}

struct MatchConfig {
  int grid_size = 20;
  int degree = 0;
  bool normalize = true;
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const {
    if (grid_size < 1) throw std::invalid_argument("grid_size must be >= 1");
    if (degree != 0 && degree != 1) throw std::invalid_argument("degree must be 0 or 1");
  }
};

/// x -> (x - lo) / (hi - lo); a degenerate range maps everything to 0.
struct AxisMap {
  double lo = 0.0;
  double hi = 1.0;

  double operator()(double x) const { return hi > lo ? (x - lo) / (hi - lo) : 0.0; }
};

struct NormalizedPair {
  BifilteredComplex first;
  BifilteredComplex second;
  AxisMap density;
  AxisMap scale;
};

/// Rescales both complexes with one shared affine map per axis that sends the
/// joint [min, max] of their grades to [0, 1].
inline NormalizedPair normalize_pair(const BifilteredComplex& a, const BifilteredComplex& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("normalize_pair: complexes must be nonempty");
  AxisMap dmap{kInfinity, -kInfinity}, smap{kInfinity, -kInfinity};
  for (const auto* c : {&a, &b}) {
    for (const auto& g : c->grades()) {
      dmap.lo = std::min(dmap.lo, g.density);
      dmap.hi = std::max(dmap.hi, g.density);
      smap.lo = std::min(smap.lo, g.scale);
      smap.hi = std::max(smap.hi, g.scale);
    }
  }
  auto rescale = [&](const BifilteredComplex& c) {
    std::vector<Bigrade> grades;
    grades.reserve(c.size());
    for (const auto& g : c.grades()) grades.push_back({dmap(g.density), smap(g.scale)});
    return c.with_grades(std::move(grades));
  };
  return {rescale(a), rescale(b), dmap, smap};
}

/// Axis-aligned box in the (density, scale) plane.
struct GradeBox {
  double density_lo = 0.0, density_hi = 1.0;
  double scale_lo = 0.0, scale_hi = 1.0;
};

inline GradeBox bounding_box(const BifilteredComplex& a, const BifilteredComplex& b) {
  GradeBox box{kInfinity, -kInfinity, kInfinity, -kInfinity};
  for (const auto* c : {&a, &b}) {
    for (const auto& g : c->grades()) {
      box.density_lo = std::min(box.density_lo, g.density);
      box.density_hi = std::max(box.density_hi, g.density);
      box.scale_lo = std::min(box.scale_lo, g.scale);
      box.scale_hi = std::max(box.scale_hi, g.scale);
    }
  }
  return box;
}

/// grid_size angles 90 i / (grid_size + 1) and, per angle, grid_size offsets at
/// the cell midpoints of the offset range of lines meeting `box`.
inline std::vector<Line> line_grid(int grid_size, const GradeBox& box = {}) {
  if (grid_size < 1) throw std::invalid_argument("line_grid: grid_size must be >= 1");
  std::vector<Line> lines;
  lines.reserve(static_cast<std::size_t>(grid_size) * static_cast<std::size_t>(grid_size));
  for (int i = 1; i <= grid_size; ++i) {
    const double angle = 90.0 * i / (grid_size + 1);
    const double rad = angle * std::numbers::pi / 180.0;
    const double s = std::sin(rad), c = std::cos(rad);
    // Offset of a point is its projection on the normal (-sin, cos).
    const double lo = -box.density_hi * s + box.scale_lo * c;
    const double hi = -box.density_lo * s + box.scale_hi * c;
    for (int j = 0; j < grid_size; ++j) {
      lines.emplace_back(angle, lo + (hi - lo) * (j + 0.5) / grid_size);
    }
  }
  return lines;
}

inline std::vector<Line> line_grid(const MatchConfig& cfg) { return line_grid(cfg.grid_size); }

struct MatchResult {
  double distance = 0.0;
  std::optional<Line> argmax_line;    // first line (grid order) attaining the maximum
  double argmax_bottleneck = 0.0;     // unweighted bottleneck on that line
  bool infinite = false;
  std::size_t lines = 0;
};

/// Max over `lines` of weight(slope) * bottleneck of the fibered barcodes.
/// Complexes are used as given (no normalization).
inline MatchResult matching_distance_over(const BifilteredComplex& a, const BifilteredComplex& b,
                                          const std::vector<Line>& lines, int degree, unsigned threads = 0) {
  const Slicer slice_a(a, degree);
  const Slicer slice_b(b, degree);
  std::vector<double> raw(lines.size(), 0.0);
  detail::parallel_for(lines.size(), threads, [&](std::size_t i) {
    raw[i] = bottleneck(slice_a(lines[i]), slice_b(lines[i]));
  });
  MatchResult result;
  result.lines = lines.size();
  double best = -1.0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const double value = raw[i] * weight(lines[i].slope());
    if (value > best) {
      best = value;
      result.argmax_line = lines[i];
      result.argmax_bottleneck = raw[i];
    }
  }
  result.distance = std::max(best, 0.0);
  result.infinite = std::isinf(result.distance);
  return result;
}

/// Grid approximation of the matching distance (a lower bound of the supremum
/// over all positive-slope lines). With normalization the weights apply to
/// slopes in normalized coordinates; without it the grid covers the joint
/// bounding box of the raw grades.
inline MatchResult matching_distance(const BifilteredComplex& a, const BifilteredComplex& b,
                                     const MatchConfig& cfg = {}) {
  cfg.validate();
  if (a.empty() || b.empty()) throw std::invalid_argument("matching_distance: complexes must be nonempty");
  if (cfg.normalize) {
    const NormalizedPair np = normalize_pair(a, b);
    return matching_distance_over(np.first, np.second, line_grid(cfg.grid_size), cfg.degree, cfg.threads);
  }
  return matching_distance_over(a, b, line_grid(cfg.grid_size, bounding_box(a, b)), cfg.degree, cfg.threads);
}

}  // namespace mpdist
