#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mpdist/pointcloud.hpp"

namespace mpdist {

/// A simplex of dimension 0, 1 or 2 given by strictly increasing vertex ids.
class Simplex {
 public:
  Simplex() = default;

  static Simplex vertex(std::uint32_t a) { return Simplex({a, 0, 0}, 1); }
  static Simplex edge(std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return Simplex({a, b, 0}, 2);
  }
  static Simplex triangle(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    std::array<std::uint32_t, 3> v{a, b, c};
    std::sort(v.begin(), v.end());
    return Simplex(v, 3);
  }
  static Simplex from(std::span<const std::uint32_t> vertices) {
    switch (vertices.size()) {
      case 1: return vertex(vertices[0]);
      case 2: return edge(vertices[0], vertices[1]);
      case 3: return triangle(vertices[0], vertices[1], vertices[2]);
      default: throw std::invalid_argument("simplex must have 1 to 3 vertices");
    }
  }

  int dim() const { return static_cast<int>(size_) - 1; }
  std::size_t size() const { return size_; }
  std::uint32_t operator[](std::size_t i) const { return v_[i]; }
  std::span<const std::uint32_t> vertices() const { return {v_.data(), size_}; }

  /// Codimension-one faces; empty for a vertex.
  std::vector<Simplex> facets() const {
    switch (size_) {
      case 2: return {vertex(v_[0]), vertex(v_[1])};
      case 3: return {edge(v_[1], v_[2]), edge(v_[0], v_[2]), edge(v_[0], v_[1])};
      default: return {};
    }
  }

  // Dimension first, then lexicographic vertices.
  friend bool operator<(const Simplex& a, const Simplex& b) {
    if (a.size_ != b.size_) return a.size_ < b.size_;
    return a.v_ < b.v_;
  }
  friend bool operator==(const Simplex& a, const Simplex& b) {
    return a.size_ == b.size_ && a.v_ == b.v_;
  }

 private:
  Simplex(std::array<std::uint32_t, 3> v, std::uint8_t size) : v_(v), size_(size) {
    for (std::size_t i = 1; i < size_; ++i) {
      if (v_[i - 1] == v_[i]) throw std::invalid_argument("simplex vertices must be distinct");
    }
  }

  std::array<std::uint32_t, 3> v_{};
  std::uint8_t size_ = 0;
};

/// (density, scale) at which a simplex enters the bifiltration.
struct Bigrade {
  double density = 0.0;
  double scale = 0.0;

  friend bool operator==(const Bigrade&, const Bigrade&) = default;
};

/// Componentwise partial order.
inline bool dominated(const Bigrade& a, const Bigrade& b) {
  return a.density <= b.density && a.scale <= b.scale;
}

/// Indices of a simplex's facets inside its owning complex.
struct FacetIndices {
  std::array<std::uint32_t, 3> index{};
  std::uint8_t count = 0;

  std::span<const std::uint32_t> span() const { return {index.data(), count}; }
};

namespace detail {

// Facet positions for a face-closed simplex list; throws if a facet is missing
// or a simplex repeats.
inline std::vector<FacetIndices> resolve_facets(const std::vector<Simplex>& simplices) {
  std::map<Simplex, std::uint32_t> position;
  for (std::size_t i = 0; i < simplices.size(); ++i) {
    if (!position.emplace(simplices[i], static_cast<std::uint32_t>(i)).second) {
      throw std::invalid_argument("duplicate simplex at position " + std::to_string(i));
    }
  }
  std::vector<FacetIndices> facets(simplices.size());
  for (std::size_t i = 0; i < simplices.size(); ++i) {
    const auto faces = simplices[i].facets();
    facets[i].count = static_cast<std::uint8_t>(faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f) {
      auto it = position.find(faces[f]);
      if (it == position.end()) {
        throw std::invalid_argument("complex is not closed under faces (position " +
                                    std::to_string(i) + ")");
      }
      facets[i].index[f] = it->second;
    }
  }
  return facets;
}

}  // namespace detail

/// Simplices of dimension <= 2, each tagged with its unique minimal bigrade.
///
/// Invariants: closed under faces, no duplicates, and every face's grade is
/// componentwise <= the grade of its coface. Immutable after construction.
class BifilteredComplex {
 public:
  BifilteredComplex() = default;

  /// Validating constructor for hand-built complexes.
  BifilteredComplex(std::vector<Simplex> simplices, std::vector<Bigrade> grades,
                    std::size_t vertex_count)
      : simplices_(std::move(simplices)), grades_(std::move(grades)), vertex_count_(vertex_count) {
    if (simplices_.size() != grades_.size()) {
      throw std::invalid_argument("simplex and grade lists differ in length");
    }
    for (const auto& s : simplices_) {
      for (auto v : s.vertices()) {
        if (v >= vertex_count_) throw std::invalid_argument("vertex id out of range");
      }
    }
    for (const auto& g : grades_) {
      if (!std::isfinite(g.density) || !std::isfinite(g.scale) || g.scale < 0.0) {
        throw std::invalid_argument("bigrades must be finite with nonnegative scale");
      }
    }
    facets_ = detail::resolve_facets(simplices_);
    for (std::size_t i = 0; i < simplices_.size(); ++i) {
      for (auto f : facets_[i].span()) {
        if (!dominated(grades_[f], grades_[i])) {
          throw std::invalid_argument("face grade exceeds coface grade at position " +
                                      std::to_string(i));
        }
      }
    }
  }

  std::size_t size() const { return simplices_.size(); }
  bool empty() const { return simplices_.empty(); }
  std::size_t vertex_count() const { return vertex_count_; }
  const std::vector<Simplex>& simplices() const { return simplices_; }
  const std::vector<Bigrade>& grades() const { return grades_; }
  const std::vector<FacetIndices>& facets() const { return facets_; }

  /// Same simplices with grades replaced; the caller supplies a map that is
  /// nondecreasing on each axis, which preserves grade monotonicity.
  BifilteredComplex with_grades(std::vector<Bigrade> grades) const {
    if (grades.size() != grades_.size()) throw std::invalid_argument("grade count mismatch");
    BifilteredComplex out;
    out.simplices_ = simplices_;
    out.grades_ = std::move(grades);
    out.vertex_count_ = vertex_count_;
    out.facets_ = facets_;
    return out;
  }

  std::size_t count_of_dim(int d) const {
    return static_cast<std::size_t>(std::count_if(simplices_.begin(), simplices_.end(),
                                                  [d](const Simplex& s) { return s.dim() == d; }));
  }

 private:
  friend BifilteredComplex build_density_rips(const PointCloud&, int, std::optional<double>);

  std::vector<Simplex> simplices_;
  std::vector<Bigrade> grades_;
  std::size_t vertex_count_ = 0;
  std::vector<FacetIndices> facets_;
};

/// Density-Rips bifiltration: vertex i at (f_i, 0), edge at (max f, length),
/// triangle at (max f, longest side). Simplices above `scale_cap` are omitted.
/// Output is sorted by (scale, density, dimension, vertices).
inline BifilteredComplex build_density_rips(const PointCloud& cloud, int max_dim,
                                            std::optional<double> scale_cap = std::nullopt) {
  if (!cloud.has_densities()) {
    throw std::invalid_argument("build_density_rips: point cloud has no densities");
  }
  if (max_dim != 1 && max_dim != 2) {
    throw std::invalid_argument("build_density_rips: max_dim must be 1 or 2");
  }
  const std::size_t n = cloud.size();
  const auto& pts = cloud.points();
  const auto& dens = *cloud.densities();
  const double cap = scale_cap.value_or(std::numeric_limits<double>::infinity());

  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      dist[i * n + j] = dist[j * n + i] = distance(pts[i], pts[j]);
    }
  }

  std::vector<Simplex> simplices;
  std::vector<Bigrade> grades;
  for (std::size_t i = 0; i < n; ++i) {
    simplices.push_back(Simplex::vertex(static_cast<std::uint32_t>(i)));
    grades.push_back({dens[i], 0.0});
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = dist[i * n + j];
      if (d > cap) continue;
      simplices.push_back(Simplex::edge(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)));
      grades.push_back({std::max(dens[i], dens[j]), d});
    }
  }
  if (max_dim == 2) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dij = dist[i * n + j];
        if (dij > cap) continue;
        for (std::size_t k = j + 1; k < n; ++k) {
          const double d = std::max({dij, dist[i * n + k], dist[j * n + k]});
          if (d > cap) continue;
          simplices.push_back(Simplex::triangle(static_cast<std::uint32_t>(i),
                                                static_cast<std::uint32_t>(j),
                                                static_cast<std::uint32_t>(k)));
          grades.push_back({std::max({dens[i], dens[j], dens[k]}), d});
        }
      }
    }
  }

  std::vector<std::uint32_t> order(simplices.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    const Bigrade& ga = grades[a];
    const Bigrade& gb = grades[b];
    if (ga.scale != gb.scale) return ga.scale < gb.scale;
    if (ga.density != gb.density) return ga.density < gb.density;
    return simplices[a] < simplices[b];
  });

  BifilteredComplex out;
  out.vertex_count_ = n;
  out.simplices_.reserve(order.size());
  out.grades_.reserve(order.size());
  for (auto idx : order) {
    out.simplices_.push_back(simplices[idx]);
    out.grades_.push_back(grades[idx]);
  }

  // Facet lookup through dense vertex/edge position tables.
  std::vector<std::uint32_t> vertex_pos(n);
  std::vector<std::uint32_t> edge_pos(n * n, UINT32_MAX);
  for (std::size_t i = 0; i < out.simplices_.size(); ++i) {
    const Simplex& s = out.simplices_[i];
    if (s.dim() == 0) vertex_pos[s[0]] = static_cast<std::uint32_t>(i);
    if (s.dim() == 1) edge_pos[s[0] * n + s[1]] = static_cast<std::uint32_t>(i);
  }
  out.facets_.resize(out.simplices_.size());
  for (std::size_t i = 0; i < out.simplices_.size(); ++i) {
    const Simplex& s = out.simplices_[i];
    FacetIndices& f = out.facets_[i];
    if (s.dim() == 1) {
      f.count = 2;
      f.index = {vertex_pos[s[0]], vertex_pos[s[1]], 0};
    } else if (s.dim() == 2) {
      f.count = 3;
      f.index = {edge_pos[s[1] * n + s[2]], edge_pos[s[0] * n + s[2]], edge_pos[s[0] * n + s[1]]};
    }
  }
  return out;
}

/// Vertices plus the edges that can matter for connectivity. Edge uv is dropped
/// when some vertex w has edges uw and wv placed earlier in the complex with
/// grades <= grade(uv): at any grade where uv is present, u and v are already
/// joined through w. Induction on position shows every line then sees the same
/// components at every parameter, so degree-0 fibered barcodes are unchanged.
inline BifilteredComplex sparsify_h0(const BifilteredComplex& complex) {
  const std::size_t n = complex.vertex_count();
  const auto& simplices = complex.simplices();
  const auto& grades = complex.grades();
  std::vector<std::uint32_t> edge_at(n * n, UINT32_MAX);
  for (std::size_t i = 0; i < simplices.size(); ++i) {
    if (simplices[i].dim() != 1) continue;
    const auto u = simplices[i][0], v = simplices[i][1];
    edge_at[u * n + v] = edge_at[v * n + u] = static_cast<std::uint32_t>(i);
  }
  std::vector<Simplex> kept;
  std::vector<Bigrade> kept_grades;
  for (std::size_t i = 0; i < simplices.size(); ++i) {
    const Simplex& s = simplices[i];
    if (s.dim() > 1) continue;
    bool implied = false;
    if (s.dim() == 1) {
      const auto u = s[0], v = s[1];
      for (std::size_t w = 0; w < n && !implied; ++w) {
        const std::uint32_t a = edge_at[u * n + w];
        const std::uint32_t b = edge_at[w * n + v];
        implied = a < i && b < i && dominated(grades[a], grades[i]) && dominated(grades[b], grades[i]);
      }
    }
    if (!implied) {
      kept.push_back(s);
      kept_grades.push_back(grades[i]);
    }
  }
  return BifilteredComplex(std::move(kept), std::move(kept_grades), n);
}

struct GradeAxes {
  std::vector<double> density;
  std::vector<double> scale;
};

/// Sorted distinct grade values on each axis.
inline GradeAxes grade_axes(const BifilteredComplex& complex) {
  if (complex.empty()) throw std::invalid_argument("grade_axes: complex is empty");
  GradeAxes axes;
  for (const auto& g : complex.grades()) {
    axes.density.push_back(g.density);
    axes.scale.push_back(g.scale);
  }
  for (auto* axis : {&axes.density, &axes.scale}) {
    std::sort(axis->begin(), axis->end());
    axis->erase(std::unique(axis->begin(), axis->end()), axis->end());
  }
  return axes;
}

/// Debug dump, one simplex per line: "v1 v2 v3 ; density scale".
inline void dump(const BifilteredComplex& complex, std::ostream& out) {
  for (std::size_t i = 0; i < complex.size(); ++i) {
    const auto& s = complex.simplices()[i];
    for (std::size_t k = 0; k < s.size(); ++k) out << (k ? " " : "") << s[k];
    out << " ; " << detail::format_double(complex.grades()[i].density) << ' '
        << detail::format_double(complex.grades()[i].scale) << '\n';
  }
}

}  // namespace mpdist
