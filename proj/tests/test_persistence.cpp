#include <gtest/gtest.h>

#include <cmath>

#include "mpdist/oracle.hpp"
#include "mpdist/persistence.hpp"
#include "support.hpp"

using namespace mpdist;

namespace {

// Rips filtration of a cloud by scale alone, as a one-parameter filtration.
FilteredComplex rips_filtration(const std::vector<Point2>& pts) {
  const BifilteredComplex bf = build_density_rips(PointCloud(pts, std::vector<double>(pts.size(), 0.0)), 2);
  std::vector<double> app;
  for (const auto& g : bf.grades()) app.push_back(g.scale);
  return FilteredComplex(bf.simplices(), app);
}

Barcode pairs_barcode(const FilteredComplex& fc, int degree) {
  return barcode_from_pairs(fc, persistence_pairs(fc), degree);
}

}  // namespace

TEST(Barcode, AddDropsEmptyBarsAndComparesAsMultiset) {
  Barcode a{0, {}};
  a.add(1.0, 1.0);
  a.add(2.0, 3.0);
  a.add(0.0, kInfinity);
  EXPECT_EQ(a.bars.size(), 2u);
  EXPECT_EQ(a.infinite_count(), 1u);
  EXPECT_EQ(a.finite_count(), 1u);
  Barcode b{0, {{0.0, kInfinity}, {2.0, 3.0}}};
  EXPECT_EQ(a, b);
  b.degree = 1;
  EXPECT_FALSE(a == b);
}

TEST(FilteredComplex, RejectsBrokenFiltrations) {
  using S = Simplex;
  EXPECT_THROW(FilteredComplex({S::vertex(0), S::vertex(1)}, {1.0, 0.0}), std::logic_error);
  EXPECT_THROW(FilteredComplex({S::vertex(0), S::edge(0, 1), S::vertex(1)}, {0, 0, 0}), std::logic_error);
  EXPECT_THROW(FilteredComplex({S::vertex(0), S::edge(0, 1)}, {0, 0}), std::invalid_argument);
  EXPECT_THROW(FilteredComplex({S::vertex(0)}, {NAN}), std::logic_error);
  EXPECT_THROW(reduce(FilteredComplex(), 2), std::invalid_argument);
}

// Five points whose Rips barcodes are worked out by hand: H0 dies at 1, 2,
// sqrt(17), sqrt(18) and H1 is the square-ish loop born at sqrt(20), filled at
// sqrt(26).
TEST(Reduce, FivePointRipsByHand) {
  const FilteredComplex fc = rips_filtration({{0, 0}, {0, 1}, {2, 0}, {1, 5}, {5, 3}});
  const Barcode h0 = reduce(fc, 0);
  const Barcode h1 = reduce(fc, 1);
  EXPECT_EQ(h0, (Barcode{0, {{0, 1}, {0, 2}, {0, std::sqrt(17.0)}, {0, std::sqrt(18.0)}, {0, kInfinity}}}));
  EXPECT_EQ(h1, (Barcode{1, {{std::sqrt(20.0), std::sqrt(26.0)}}}));
  EXPECT_EQ(h0, oracle_barcode(fc, 0));
  EXPECT_EQ(h1, oracle_barcode(fc, 1));
}

TEST(Reduce, SquareHasOneLoop) {
  const FilteredComplex fc = rips_filtration({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  EXPECT_EQ(reduce(fc, 1), (Barcode{1, {{1.0, std::sqrt(2.0)}}}));
  EXPECT_EQ(reduce(fc, 0).infinite_count(), 1u);
}

TEST(Reduce, AgreesWithOracleAndFullReduction) {
  detail::Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const FilteredComplex fc = testsupport::random_filtered(rng, 10, kOracleMaxSimplices);
    for (int degree : {0, 1}) {
      const Barcode fast = reduce(fc, degree);
      ASSERT_EQ(fast, oracle_barcode(fc, degree)) << "trial " << trial << " degree " << degree;
      ASSERT_EQ(fast, pairs_barcode(fc, degree)) << "trial " << trial << " degree " << degree;
    }
  }
}

TEST(Reduce, AgreesWithFullReductionOnLargerComplexes) {
  detail::Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const PointCloud c = testsupport::random_cloud(rng, 18);
    const FilteredComplex fc = slice(build_density_rips(c, 2), testsupport::random_line(rng));
    for (int degree : {0, 1}) EXPECT_EQ(reduce(fc, degree), pairs_barcode(fc, degree));
  }
}

// Essential classes of the whole complex match dim C_k - rank d_k - rank d_{k+1}.
TEST(Reduce, EssentialCountsMatchRankNullity) {
  detail::Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const FilteredComplex fc = testsupport::random_filtered(rng, 9, kOracleMaxSimplices);
    for (int k : {0, 1}) {
      std::size_t n_k = 0;
      for (const auto& s : fc.simplices()) n_k += s.dim() == k;
      const int betti = static_cast<int>(n_k) - boundary_rank(fc, k) - boundary_rank(fc, k + 1);
      std::size_t essential = 0;
      for (const auto& p : persistence_pairs(fc)) {
        essential += p.dim == k && p.death == PersistencePair::kUnpaired;
      }
      EXPECT_EQ(static_cast<int>(essential), betti);
      EXPECT_EQ(static_cast<int>(reduce(fc, k).infinite_count()), betti);
    }
  }
}

// Reordering simplices that enter at the same value leaves the barcode alone.
TEST(Reduce, InvariantUnderTieReordering) {
  detail::Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const FilteredComplex fc = testsupport::random_filtered(rng, 8, 64);
    std::vector<std::size_t> order(fc.size());
    std::vector<std::uint64_t> key(fc.size());
    for (std::size_t i = 0; i < fc.size(); ++i) {
      order[i] = i;
      key[i] = rng.next();
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (fc.appearance()[a] != fc.appearance()[b]) return fc.appearance()[a] < fc.appearance()[b];
      if (fc.simplices()[a].dim() != fc.simplices()[b].dim()) return fc.simplices()[a].dim() < fc.simplices()[b].dim();
      return key[a] < key[b];
    });
    std::vector<Simplex> s;
    std::vector<double> app;
    for (auto i : order) {
      s.push_back(fc.simplices()[i]);
      app.push_back(fc.appearance()[i]);
    }
    const FilteredComplex shuffled(s, app);
    for (int degree : {0, 1}) EXPECT_EQ(reduce(shuffled, degree), reduce(fc, degree));
  }
}

// Every prefix of a filtration is a filtration; the oracle on the prefix sees
// only the classes alive in it.
TEST(Reduce, PrefixAgreesWithOracle) {
  detail::Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const FilteredComplex fc = testsupport::random_filtered(rng, 7, 40);
    const FilteredComplex pre = fc.prefix(rng.index(fc.size() + 1));
    for (int degree : {0, 1}) EXPECT_EQ(reduce(pre, degree), oracle_barcode(pre, degree));
  }
}

TEST(Oracle, RefusesLargeInputs) {
  std::vector<Simplex> s;
  for (std::uint32_t i = 0; i < 65; ++i) s.push_back(Simplex::vertex(i));
  const FilteredComplex fc(s, std::vector<double>(65, 0.0));
  EXPECT_THROW(oracle_barcode(fc, 0), std::length_error);
  EXPECT_EQ(reduce(fc, 0).infinite_count(), 65u);
}

TEST(Oracle, EmptyComplex) {
  EXPECT_TRUE(oracle_barcode(FilteredComplex(), 0).bars.empty());
  EXPECT_TRUE(reduce(FilteredComplex(), 1).bars.empty());
}
