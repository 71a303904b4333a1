#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mpdist/persistence.hpp"

namespace mpdist {

// Brute-force persistence for tiny filtrations. Deliberately naive: chains are
// 64-bit masks over simplex positions, every persistent Betti number comes from
// a dense rank computation, and bar multiplicities are recovered by
// inclusion-exclusion. Shares nothing with reduce() beyond the input type.

inline constexpr std::size_t kOracleMaxSimplices = 64;

namespace oracle_detail {

using Chain = std::uint64_t;

// Rank over the two-element field of a set of vectors.
inline int gf2_rank(std::vector<Chain> vectors) {
  int rank = 0;
  for (int bit = 63; bit >= 0; --bit) {
    const Chain mask = Chain{1} << bit;
    auto it = std::find_if(vectors.begin(), vectors.end(), [&](Chain v) { return v & mask; });
    if (it == vectors.end()) continue;
    const Chain pivot = *it;
    vectors.erase(it);
    for (auto& v : vectors) {
      if (v & mask) v ^= pivot;
    }
    ++rank;
  }
  return rank;
}

// Basis of the kernel of the boundary map restricted to the given simplices.
inline std::vector<Chain> cycle_basis(const std::vector<Chain>& boundary, const std::vector<int>& simplices) {
  struct Row {
    Chain image;
    Chain source;
  };
  std::vector<Row> basis;
  std::vector<Chain> cycles;
  for (int s : simplices) {
    Row row{boundary[static_cast<std::size_t>(s)], Chain{1} << s};
    for (const auto& b : basis) {
      const Chain lead = Chain{1} << (63 - std::countl_zero(b.image));
      if (row.image & lead) {
        row.image ^= b.image;
        row.source ^= b.source;
      }
    }
    if (row.image == 0) {
      cycles.push_back(row.source);
    } else {
      basis.push_back(row);
      std::sort(basis.begin(), basis.end(), [](const Row& a, const Row& b) { return a.image > b.image; });
    }
  }
  return cycles;
}

}  // namespace oracle_detail

/// Rank of the boundary map from k-simplices to (k-1)-simplices of the full complex.
inline int boundary_rank(const FilteredComplex& fc, int k) {
  if (fc.size() > kOracleMaxSimplices) throw std::length_error("boundary_rank: at most 64 simplices");
  std::vector<oracle_detail::Chain> cols;
  for (std::size_t i = 0; i < fc.size(); ++i) {
    if (fc.simplices()[i].dim() != k) continue;
    oracle_detail::Chain c = 0;
    for (auto f : fc.facets()[i].span()) c ^= oracle_detail::Chain{1} << f;
    cols.push_back(c);
  }
  return oracle_detail::gf2_rank(std::move(cols));
}

/// Barcode from persistent Betti numbers; refuses inputs above 64 simplices.
inline Barcode oracle_barcode(const FilteredComplex& fc, int degree) {
  using oracle_detail::Chain;
  if (fc.size() > kOracleMaxSimplices) {
    throw std::length_error("oracle_barcode: refusing complex with more than 64 simplices");
  }
  if (degree < 0) throw std::invalid_argument("oracle_barcode: negative degree");
  Barcode out{degree, {}};
  if (fc.empty()) return out;

  const std::size_t n = fc.size();
  std::vector<Chain> boundary(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto f : fc.facets()[i].span()) boundary[i] ^= Chain{1} << f;
  }

  std::vector<double> values(fc.appearance());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  const int m = static_cast<int>(values.size());

  // Simplices present at each distinct value.
  auto present = [&](int step, int dim) {
    std::vector<int> out_idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (fc.appearance()[i] <= values[static_cast<std::size_t>(step)] && fc.simplices()[i].dim() == dim) {
        out_idx.push_back(static_cast<int>(i));
      }
    }
    return out_idx;
  };

  std::vector<std::vector<Chain>> cycles(static_cast<std::size_t>(m));
  std::vector<std::vector<Chain>> boundaries(static_cast<std::size_t>(m));
  for (int s = 0; s < m; ++s) {
    cycles[static_cast<std::size_t>(s)] = oracle_detail::cycle_basis(boundary, present(s, degree));
    for (int c : present(s, degree + 1)) boundaries[static_cast<std::size_t>(s)].push_back(boundary[static_cast<std::size_t>(c)]);
  }

  // beta[s][t] = rank of H(X_s) -> H(X_t) = dim(Z_s + B_t) - dim(B_t).
  std::vector<std::vector<int>> beta(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(m), 0));
  for (int t = 0; t < m; ++t) {
    const auto& bt = boundaries[static_cast<std::size_t>(t)];
    const int rank_b = oracle_detail::gf2_rank(bt);
    for (int s = 0; s <= t; ++s) {
      std::vector<Chain> joined = bt;
      const auto& zs = cycles[static_cast<std::size_t>(s)];
      joined.insert(joined.end(), zs.begin(), zs.end());
      beta[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] = oracle_detail::gf2_rank(std::move(joined)) - rank_b;
    }
  }
  auto b = [&](int s, int t) { return s < 0 ? 0 : beta[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)]; };

  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const int mult = b(i, j - 1) - b(i, j) - b(i - 1, j - 1) + b(i - 1, j);
      if (mult < 0) throw std::logic_error("oracle_barcode: negative multiplicity");
      for (int r = 0; r < mult; ++r) out.add(values[static_cast<std::size_t>(i)], values[static_cast<std::size_t>(j)]);
    }
    const int essential = b(i, m - 1) - b(i - 1, m - 1);
    for (int r = 0; r < essential; ++r) out.add(values[static_cast<std::size_t>(i)], kInfinity);
  }
  return out.canonical();
}

}  // namespace mpdist
