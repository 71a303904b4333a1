#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <utility>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpdist/bifiltration.hpp"
#include "mpdist/detail/union_find.hpp"
#include "mpdist/persistence.hpp"

namespace mpdist {

/// A line of positive slope in the (density, scale) plane.
///
/// `angle_deg` is the angle with the density axis, strictly inside (0, 90).
/// `offset` is the signed distance from the origin along the upper-left
/// normal (-sin, cos), so positive offsets move the line toward the upper left.
/// Points on the line are parametrized by arclength from the foot of the
/// perpendicular through the origin.
class Line {
 public:
  Line(double angle_deg, double offset) : angle_deg_(angle_deg), offset_(offset) {
    if (!(angle_deg > 0.0 && angle_deg < 90.0) || !std::isfinite(offset)) {
      throw std::invalid_argument("line angle must lie strictly between 0 and 90 degrees");
    }
    const double rad = angle_deg * std::numbers::pi / 180.0;
    cos_ = std::cos(rad);
    sin_ = std::sin(rad);
    base_density_ = -offset * sin_;
    base_scale_ = offset * cos_;
  }

  double angle_deg() const { return angle_deg_; }
  double offset() const { return offset_; }
  double cos_angle() const { return cos_; }
  double sin_angle() const { return sin_; }
  double slope() const { return sin_ / cos_; }

  Bigrade point_at(double t) const { return {base_density_ + t * cos_, base_scale_ + t * sin_}; }

  /// Arclength parameter of the first point on the line that dominates `g`.
  double push(const Bigrade& g) const {
    return std::max((g.density - base_density_) / cos_, (g.scale - base_scale_) / sin_);
  }

  friend bool operator==(const Line& a, const Line& b) {
    return a.angle_deg_ == b.angle_deg_ && a.offset_ == b.offset_;
  }

 private:
  double angle_deg_;
  double offset_;
  double cos_ = 0.0;
  double sin_ = 0.0;
  double base_density_ = 0.0;
  double base_scale_ = 0.0;
};

inline double push(const Line& line, const Bigrade& g) { return line.push(g); }

/// Restriction of a bifiltration to a line: each simplex enters at the push of
/// its grade. Ties are broken by dimension, then by position in `complex`.
inline FilteredComplex slice(const BifilteredComplex& complex, const Line& line) {
  const std::size_t n = complex.size();
  const auto& simplices = complex.simplices();
  const auto& grades = complex.grades();

  // (t, dim << 32 | position) sorts faster than an index sort with a lambda.
  std::vector<std::pair<double, std::uint64_t>> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    keys[i] = {line.push(grades[i]), static_cast<std::uint64_t>(simplices[i].dim()) << 32 | i};
  }
  std::sort(keys.begin(), keys.end());

  std::vector<std::uint32_t> position(n);
  for (std::size_t i = 0; i < n; ++i) position[keys[i].second & 0xffffffffu] = static_cast<std::uint32_t>(i);

  std::vector<Simplex> out_simplices(n);
  std::vector<double> out_app(n);
  std::vector<FacetIndices> out_facets(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto src = static_cast<std::uint32_t>(keys[i].second & 0xffffffffu);
    out_simplices[i] = simplices[src];
    out_app[i] = keys[i].first;
    FacetIndices f = complex.facets()[src];
    for (std::size_t k = 0; k < f.count; ++k) f.index[k] = position[f.index[k]];
    out_facets[i] = f;
  }
  return FilteredComplex(std::move(out_simplices), std::move(out_app), std::move(out_facets));
}

/// Reference path: slice, then reduce.
inline Barcode fibered_barcode(const BifilteredComplex& complex, const Line& line, int degree) {
  return reduce(slice(complex, line), degree);
}

/// Fibered barcodes of one complex along many lines. Work that does not depend
/// on the line is done once in the constructor.
///
/// Degree 0 slices the sparsified 1-skeleton. Degree 1 uses persistent
/// cohomology, which yields the same pairs as homology: the coboundaries of
/// the positive edges are reduced from the last edge to the first, each pivot
/// being the earliest triangle. Negative edges are found by union-find and
/// skipped, since their coboundary columns reduce to zero.
class Slicer {
 public:
  Slicer(const BifilteredComplex& complex, int degree) : degree_(degree) {
    if (degree != 0 && degree != 1) throw std::invalid_argument("Slicer: degree must be 0 or 1");
    if (degree == 0) {
      complex_ = sparsify_h0(complex);
      return;
    }
    complex_ = complex;
    const auto& simplices = complex_.simplices();
    std::vector<std::uint32_t> local(simplices.size(), UINT32_MAX);
    for (std::size_t i = 0; i < simplices.size(); ++i) {
      if (simplices[i].dim() == 1) {
        local[i] = static_cast<std::uint32_t>(edges_.size());
        edges_.push_back(static_cast<std::uint32_t>(i));
      } else if (simplices[i].dim() == 2) {
        triangles_.push_back(static_cast<std::uint32_t>(i));
      }
    }
    // Edge-to-triangle incidence in compressed rows.
    cofacet_start_.assign(edges_.size() + 1, 0);
    for (auto tri : triangles_) {
      for (auto f : complex_.facets()[tri].span()) ++cofacet_start_[local[f] + 1];
    }
    for (std::size_t e = 0; e < edges_.size(); ++e) cofacet_start_[e + 1] += cofacet_start_[e];
    cofacets_.resize(cofacet_start_.back());
    std::vector<std::uint32_t> fill(cofacet_start_.begin(), cofacet_start_.end() - 1);
    for (auto tri : triangles_) {
      for (auto f : complex_.facets()[tri].span()) cofacets_[fill[local[f]]++] = tri;
    }
  }

  int degree() const { return degree_; }
  const BifilteredComplex& complex() const { return complex_; }

  Barcode operator()(const Line& line) const {
    if (degree_ == 0) return reduce(slice(complex_, line), 0);
    return cohomology_h1(line);
  }

 private:
  Barcode cohomology_h1(const Line& line) const {
    const auto& simplices = complex_.simplices();
    const auto& grades = complex_.grades();
    const std::size_t n = complex_.size();
    std::vector<double> t(n);
    for (auto e : edges_) t[e] = line.push(grades[e]);
    for (auto tri : triangles_) t[tri] = line.push(grades[tri]);
    // Triangles are ordered by (t, position), matching slice().
    auto earlier = [&](std::uint32_t a, std::uint32_t b) { return t[a] != t[b] ? t[a] < t[b] : a < b; };

    std::vector<std::uint32_t> order(edges_.size());
    for (std::size_t k = 0; k < edges_.size(); ++k) order[k] = static_cast<std::uint32_t>(k);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return earlier(edges_[a], edges_[b]); });

    detail::ElderUnionFind uf(complex_.vertex_count());
    std::vector<std::uint32_t> positive;
    for (auto k : order) {
      const Simplex& s = simplices[edges_[k]];
      const std::uint32_t ra = uf.find(s[0]);
      const std::uint32_t rb = uf.find(s[1]);
      if (ra == rb) {
        positive.push_back(k);
      } else {
        uf.merge(ra, rb);
      }
    }

    Barcode out{1, {}};
    // Most columns keep their first pivot, so a column is only sorted once it
    // has to be added to another one.
    std::vector<std::uint32_t> pivot_owner(n, UINT32_MAX);
    std::vector<detail::Column> reduced;
    std::vector<std::uint32_t> source;
    auto materialize = [&](std::uint32_t owner) -> const detail::Column& {
      detail::Column& c = reduced[owner];
      if (c.empty()) {
        c.assign(cofacets_.begin() + cofacet_start_[source[owner]], cofacets_.begin() + cofacet_start_[source[owner] + 1]);
        std::sort(c.begin(), c.end(), earlier);
      }
      return c;
    };
    detail::Column col, scratch;
    for (auto it = positive.rbegin(); it != positive.rend(); ++it) {
      const std::uint32_t k = *it;
      const double birth = t[edges_[k]];
      const auto first = cofacets_.begin() + cofacet_start_[k];
      const auto last = cofacets_.begin() + cofacet_start_[k + 1];
      if (first == last) {
        out.add(birth, kInfinity);
        continue;
      }
      const std::uint32_t low = *std::min_element(first, last, earlier);
      if (pivot_owner[low] == UINT32_MAX) {
        pivot_owner[low] = static_cast<std::uint32_t>(reduced.size());
        reduced.emplace_back();
        source.push_back(k);
        out.add(birth, t[low]);
        continue;
      }
      col.assign(first, last);
      std::sort(col.begin(), col.end(), earlier);
      while (!col.empty() && pivot_owner[col.front()] != UINT32_MAX) {
        const detail::Column& other = materialize(pivot_owner[col.front()]);
        scratch.clear();
        std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                      std::back_inserter(scratch), earlier);
        col.swap(scratch);
      }
      if (col.empty()) {
        out.add(birth, kInfinity);
        continue;
      }
      pivot_owner[col.front()] = static_cast<std::uint32_t>(reduced.size());
      out.add(birth, t[col.front()]);
      reduced.push_back(col);
      source.push_back(k);
    }
    return out;
  }

  int degree_;
  BifilteredComplex complex_;
  std::vector<std::uint32_t> edges_;
  std::vector<std::uint32_t> triangles_;
  std::vector<std::uint32_t> cofacet_start_;
  std::vector<std::uint32_t> cofacets_;
};

}  // namespace mpdist
