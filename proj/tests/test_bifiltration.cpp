#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "mpdist/bifiltration.hpp"
#include "support.hpp"

using namespace mpdist;

TEST(Simplex, NormalizesAndOrders) {
  EXPECT_EQ(Simplex::edge(3, 1), Simplex::edge(1, 3));
  EXPECT_EQ(Simplex::triangle(2, 0, 1), Simplex::triangle(0, 1, 2));
  EXPECT_THROW(Simplex::edge(2, 2), std::invalid_argument);
  EXPECT_TRUE(Simplex::vertex(9) < Simplex::edge(0, 1));
  EXPECT_TRUE(Simplex::edge(0, 2) < Simplex::edge(1, 2));
  EXPECT_EQ(Simplex::triangle(0, 1, 2).facets().size(), 3u);
  EXPECT_TRUE(Simplex::vertex(0).facets().empty());
}

TEST(DensityRips, ThreePointGrades) {
  const PointCloud c = set_density(three_point(1.0, 3.0), {1.0, 2.0, 1.0});
  const BifilteredComplex bf = build_density_rips(c, 2);
  ASSERT_EQ(bf.size(), 7u);
  std::map<Simplex, Bigrade> g;
  for (std::size_t i = 0; i < bf.size(); ++i) g[bf.simplices()[i]] = bf.grades()[i];
  EXPECT_EQ(g[Simplex::vertex(1)], (Bigrade{2.0, 0.0}));
  EXPECT_EQ(g[Simplex::edge(0, 2)], (Bigrade{1.0, 2.0}));
  EXPECT_EQ(g[Simplex::edge(0, 1)], (Bigrade{2.0, 6.1 - 1.0}));
  const double bc = distance(kThreePointB, {1.0, 3.0});
  EXPECT_EQ(g[Simplex::edge(1, 2)], (Bigrade{2.0, bc}));
  EXPECT_EQ(g[Simplex::triangle(0, 1, 2)], (Bigrade{2.0, bc}));
}

TEST(DensityRips, CountsAndInvariants) {
  detail::Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.index(9);
    const PointCloud c = testsupport::random_cloud(rng, n);
    for (int max_dim : {1, 2}) {
      const BifilteredComplex bf = build_density_rips(c, max_dim);
      EXPECT_EQ(bf.count_of_dim(0), n);
      EXPECT_EQ(bf.count_of_dim(1), n * (n - 1) / 2);
      EXPECT_EQ(bf.count_of_dim(2), max_dim == 2 ? n * (n - 1) * (n - 2) / 6 : 0u);
      std::set<Simplex> seen;
      for (std::size_t i = 0; i < bf.size(); ++i) {
        EXPECT_TRUE(seen.insert(bf.simplices()[i]).second);
        if (i > 0) {
          EXPECT_LE(bf.grades()[i - 1].scale, bf.grades()[i].scale);
        }
        for (auto f : bf.facets()[i].span()) {
          EXPECT_LT(f, i);
          EXPECT_TRUE(dominated(bf.grades()[f], bf.grades()[i]));
        }
      }
      // The dense facet tables agree with the generic lookup.
      const BifilteredComplex checked(bf.simplices(), bf.grades(), n);
      for (std::size_t i = 0; i < bf.size(); ++i) {
        const auto a = bf.facets()[i].span();
        const auto b = checked.facets()[i].span();
        EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
      }
    }
  }
}

TEST(DensityRips, GradesFollowDefinition) {
  detail::Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const PointCloud c = testsupport::random_cloud(rng, 6);
    const auto& p = c.points();
    const auto& f = *c.densities();
    const BifilteredComplex bf = build_density_rips(c, 2);
    for (std::size_t i = 0; i < bf.size(); ++i) {
      const auto v = bf.simplices()[i].vertices();
      double dens = -kInfinity, scale = 0.0;
      for (auto a : v) {
        dens = std::max(dens, f[a]);
        for (auto b : v) scale = std::max(scale, distance(p[a], p[b]));
      }
      EXPECT_EQ(bf.grades()[i], (Bigrade{dens, scale}));
    }
  }
}

TEST(DensityRips, ScaleCapDropsLongSimplices) {
  const PointCloud c({{0, 0}, {1, 0}, {0, 3}}, {0, 0, 0});
  const BifilteredComplex bf = build_density_rips(c, 2, 1.0);
  EXPECT_EQ(bf.count_of_dim(1), 1u);
  EXPECT_EQ(bf.count_of_dim(2), 0u);
  EXPECT_EQ(build_density_rips(c, 2, 3.0).count_of_dim(1), 2u);
}

TEST(DensityRips, Errors) {
  EXPECT_THROW(build_density_rips(PointCloud({{0, 0}}), 2), std::invalid_argument);
  EXPECT_THROW(build_density_rips(PointCloud({{0, 0}}, {0}), 3), std::invalid_argument);
  EXPECT_THROW(build_density_rips(PointCloud({{0, 0}}, {0}), 0), std::invalid_argument);
}

TEST(BifilteredComplex, ValidatingConstructor) {
  using S = Simplex;
  EXPECT_NO_THROW(BifilteredComplex({S::vertex(0), S::vertex(1), S::edge(0, 1)}, {{0, 0}, {1, 0}, {1, 1}}, 2));
  // Missing face.
  EXPECT_THROW(BifilteredComplex({S::vertex(0), S::edge(0, 1)}, {{0, 0}, {1, 1}}, 2), std::invalid_argument);
  // Face grade not dominated.
  EXPECT_THROW(BifilteredComplex({S::vertex(0), S::vertex(1), S::edge(0, 1)}, {{0, 0}, {2, 0}, {1, 1}}, 2),
               std::invalid_argument);
  // Duplicate.
  EXPECT_THROW(BifilteredComplex({S::vertex(0), S::vertex(0)}, {{0, 0}, {0, 0}}, 1), std::invalid_argument);
  // Vertex id out of range.
  EXPECT_THROW(BifilteredComplex({S::vertex(3)}, {{0, 0}}, 2), std::invalid_argument);
}

TEST(BifilteredComplex, GradeAxesAndDump) {
  const PointCloud c({{0, 0}, {3, 4}}, {2.0, 0.5});
  const BifilteredComplex bf = build_density_rips(c, 2);
  const GradeAxes axes = grade_axes(bf);
  EXPECT_EQ(axes.density, (std::vector<double>{0.5, 2.0}));
  EXPECT_EQ(axes.scale, (std::vector<double>{0.0, 5.0}));
  std::ostringstream out;
  dump(bf, out);
  EXPECT_EQ(out.str(), "1 ; 0.5 0\n0 ; 2 0\n0 1 ; 2 5\n");
  EXPECT_THROW(grade_axes(BifilteredComplex()), std::invalid_argument);
}
