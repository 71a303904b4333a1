#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpdist/bifiltration.hpp"
#include "mpdist/detail/union_find.hpp"

namespace mpdist {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A one-parameter filtration: simplices in entry order with the parameter
/// value at which each enters.
///
/// Invariants: faces precede cofaces, appearance values are nondecreasing.
class FilteredComplex {
 public:
  FilteredComplex() = default;

  /// Validating constructor; facets are resolved by lookup.
  FilteredComplex(std::vector<Simplex> simplices, std::vector<double> appearance)
      : simplices_(std::move(simplices)), appearance_(std::move(appearance)) {
    if (simplices_.size() != appearance_.size()) {
      throw std::invalid_argument("simplex and appearance lists differ in length");
    }
    facets_ = detail::resolve_facets(simplices_);
    check_invariants();
  }

  /// Trusted constructor for callers that already hold facet positions.
  FilteredComplex(std::vector<Simplex> simplices, std::vector<double> appearance,
                  std::vector<FacetIndices> facets)
      : simplices_(std::move(simplices)),
        appearance_(std::move(appearance)),
        facets_(std::move(facets)) {
    check_invariants();
  }

  std::size_t size() const { return simplices_.size(); }
  bool empty() const { return simplices_.empty(); }
  const std::vector<Simplex>& simplices() const { return simplices_; }
  const std::vector<double>& appearance() const { return appearance_; }
  const std::vector<FacetIndices>& facets() const { return facets_; }

  /// The first `count` simplices, which always form a subfiltration.
  FilteredComplex prefix(std::size_t count) const {
    count = std::min(count, size());
    return FilteredComplex(
        std::vector<Simplex>(simplices_.begin(), simplices_.begin() + static_cast<std::ptrdiff_t>(count)),
        std::vector<double>(appearance_.begin(), appearance_.begin() + static_cast<std::ptrdiff_t>(count)),
        std::vector<FacetIndices>(facets_.begin(), facets_.begin() + static_cast<std::ptrdiff_t>(count)));
  }

 private:
  void check_invariants() const {
    if (facets_.size() != simplices_.size()) throw std::logic_error("facet table size mismatch");
    for (std::size_t i = 0; i < simplices_.size(); ++i) {
      if (!std::isfinite(appearance_[i])) {
        throw std::logic_error("non-finite appearance value at position " + std::to_string(i));
      }
      if (i > 0 && appearance_[i] < appearance_[i - 1]) {
        throw std::logic_error("appearance values decrease at position " + std::to_string(i));
      }
      for (auto f : facets_[i].span()) {
        if (f >= i) throw std::logic_error("face does not precede coface at position " + std::to_string(i));
      }
    }
  }

  std::vector<Simplex> simplices_;
  std::vector<double> appearance_;
  std::vector<FacetIndices> facets_;
};

/// One interval; death is +infinity for an essential class.
struct Bar {
  double birth = 0.0;
  double death = kInfinity;

  bool infinite() const { return std::isinf(death); }
  double persistence() const { return death - birth; }

  friend bool operator==(const Bar&, const Bar&) = default;
  friend bool operator<(const Bar& a, const Bar& b) {
    if (a.birth != b.birth) return a.birth < b.birth;
    return a.death < b.death;
  }
};

/// Multiset of bars in one homology degree, zero-length bars excluded.
struct Barcode {
  int degree = 0;
  std::vector<Bar> bars;

  /// Adds [birth, death) unless it is empty.
  void add(double birth, double death) {
    if (birth < death) bars.push_back({birth, death});
  }

  std::size_t infinite_count() const {
    return static_cast<std::size_t>(std::count_if(bars.begin(), bars.end(), [](const Bar& b) { return b.infinite(); }));
  }
  std::size_t finite_count() const { return bars.size() - infinite_count(); }

  /// Sorted copy, so multiset equality becomes vector equality.
  Barcode canonical() const {
    Barcode out = *this;
    std::sort(out.bars.begin(), out.bars.end());
    return out;
  }

  friend bool operator==(const Barcode& a, const Barcode& b) {
    return a.degree == b.degree && a.canonical().bars == b.canonical().bars;
  }
};

/// Persistence pair by filtration position; death == kUnpaired for essential classes.
struct PersistencePair {
  static constexpr std::uint32_t kUnpaired = UINT32_MAX;
  int dim = 0;
  std::uint32_t birth = 0;
  std::uint32_t death = kUnpaired;
};

namespace detail {

using Column = std::vector<std::uint32_t>;  // sorted ascending; lowest one is back()

inline void add_column(Column& target, const Column& source, Column& scratch) {
  scratch.clear();
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                std::back_inserter(scratch));
  target.swap(scratch);
}

}  // namespace detail

/// Plain left-to-right reduction of the full boundary matrix over the
/// two-element field, using a lowest-one lookup table. Returns every pair in
/// every dimension. Used as the reference path for reduce().
inline std::vector<PersistencePair> persistence_pairs(const FilteredComplex& fc) {
  const std::size_t n = fc.size();
  std::vector<detail::Column> reduced(n);
  std::vector<std::uint32_t> pivot_owner(n, PersistencePair::kUnpaired);
  std::vector<bool> is_death(n, false), is_birth_paired(n, false);
  std::vector<PersistencePair> pairs;
  detail::Column scratch;

  for (std::uint32_t j = 0; j < n; ++j) {
    detail::Column col(fc.facets()[j].span().begin(), fc.facets()[j].span().end());
    std::sort(col.begin(), col.end());
    while (!col.empty() && pivot_owner[col.back()] != PersistencePair::kUnpaired) {
      detail::add_column(col, reduced[pivot_owner[col.back()]], scratch);
    }
    if (!col.empty()) {
      const std::uint32_t low = col.back();
      pivot_owner[low] = j;
      is_death[j] = true;
      is_birth_paired[low] = true;
      pairs.push_back({fc.simplices()[low].dim(), low, j});
      reduced[j] = std::move(col);
    }
  }
  for (std::uint32_t j = 0; j < n; ++j) {
    if (!is_death[j] && !is_birth_paired[j]) pairs.push_back({fc.simplices()[j].dim(), j, PersistencePair::kUnpaired});
  }
  return pairs;
}

/// Barcode in `degree` read off a pair list.
inline Barcode barcode_from_pairs(const FilteredComplex& fc, const std::vector<PersistencePair>& pairs,
                                  int degree) {
  Barcode out{degree, {}};
  for (const auto& p : pairs) {
    if (p.dim != degree) continue;
    const double death = p.death == PersistencePair::kUnpaired ? kInfinity : fc.appearance()[p.death];
    out.add(fc.appearance()[p.birth], death);
  }
  return out;
}

/// Barcode of the filtration in homology degree 0 or 1 over the two-element field.
///
/// Degree 0 runs the elder-rule union-find, which produces the same pairing as
/// column reduction of the edge columns. Degree 1 classifies edges with the
/// same union-find (an edge is positive iff it closes a cycle) and reduces the
/// triangle columns left to right with a lowest-one table.
inline Barcode reduce(const FilteredComplex& fc, int degree) {
  if (degree != 0 && degree != 1) throw std::invalid_argument("reduce: degree must be 0 or 1");
  const std::size_t n = fc.size();
  const auto& simplices = fc.simplices();
  const auto& app = fc.appearance();
  Barcode out{degree, {}};

  // Vertex ids are arbitrary labels; union-find runs on filtration positions.
  detail::ElderUnionFind uf(n);
  std::vector<bool> positive_edge(degree == 1 ? n : 0, false);
  for (std::uint32_t j = 0; j < n; ++j) {
    if (simplices[j].dim() != 1) continue;
    const auto f = fc.facets()[j].span();
    const std::uint32_t ra = uf.find(f[0]);
    const std::uint32_t rb = uf.find(f[1]);
    if (ra == rb) {
      if (degree == 1) positive_edge[j] = true;
      continue;
    }
    const std::uint32_t killed = uf.merge(ra, rb);
    if (degree == 0) out.add(app[killed], app[j]);
  }
  if (degree == 0) {
    for (std::uint32_t j = 0; j < n; ++j) {
      if (simplices[j].dim() == 0 && uf.find(j) == j) out.add(app[uf.oldest(j)], kInfinity);
    }
    return out;
  }

  std::vector<detail::Column> reduced;
  std::vector<std::uint32_t> pivot_owner(n, PersistencePair::kUnpaired);
  detail::Column col, scratch;
  for (std::uint32_t j = 0; j < n; ++j) {
    if (simplices[j].dim() != 2) continue;
    const auto f = fc.facets()[j].span();
    col.assign(f.begin(), f.end());
    std::sort(col.begin(), col.end());
    while (!col.empty() && pivot_owner[col.back()] != PersistencePair::kUnpaired) {
      detail::add_column(col, reduced[pivot_owner[col.back()]], scratch);
    }
    if (col.empty()) continue;
    const std::uint32_t low = col.back();
    pivot_owner[low] = static_cast<std::uint32_t>(reduced.size());
    reduced.push_back(col);
    out.add(app[low], app[j]);
  }
  for (std::uint32_t j = 0; j < n; ++j) {
    if (simplices[j].dim() == 1 && positive_edge[j] && pivot_owner[j] == PersistencePair::kUnpaired) {
      out.add(app[j], kInfinity);
    }
  }
  return out;
}

}  // namespace mpdist
