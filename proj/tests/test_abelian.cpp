#include "doctest.h"

#include <random>

#include "gca/abelian.hpp"

using namespace gca;

namespace {

FGAbelianGroup z_mod(int n) {
  IntMatrix r(1, 1);
  r(0, 0) = n;
  return FGAbelianGroup(1, r);
}

}  // namespace

TEST_CASE("structure of basic presentations") {
  CHECK(FGAbelianGroup::trivial().is_trivial());
  CHECK(FGAbelianGroup::free_group(2).free_rank() == 2);
  CHECK(z_mod(6).torsion() == std::vector<Int>{6});
  CHECK(z_mod(1).is_trivial());

  // Z^3 / <(2,0,0),(0,3,0)> = Z/2 + Z/3 + Z = Z/6 + Z
  IntMatrix r(3, 2);
  r(0, 0) = 2;
  r(1, 1) = 3;
  FGAbelianGroup g(3, r);
  CHECK(g.free_rank() == 1);
  CHECK(g.torsion() == std::vector<Int>{6});
  CHECK(g.structure_string() == "Z/6 + Z");
}

TEST_CASE("canonical coordinates separate classes") {
  FGAbelianGroup g = z_mod(4);
  CHECK(g.equal({1}, {5}));
  CHECK_FALSE(g.equal({1}, {2}));
  CHECK(g.is_zero({8}));

  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> entry(-5, 5);
  for (int trial = 0; trial < 100; ++trial) {
    IntMatrix r(3, 2);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) r(i, j) = entry(rng);
    FGAbelianGroup h(3, r);
    std::vector<Int> x{entry(rng), entry(rng), entry(rng)};
    std::vector<Int> shift{entry(rng), entry(rng)};
    std::vector<Int> y = x;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) y[i] += r(i, j) * shift[j];
    CHECK(h.equal(x, y));
  }
}

TEST_CASE("hom well definedness certificates") {
  FGAbelianGroup z4 = z_mod(4), z2 = z_mod(2);
  IntMatrix one(1, 1);
  one(0, 0) = 1;
  CHECK(GroupHom(z4, z2, one).is_well_defined());   // 4 | 2*2
  CHECK_FALSE(GroupHom(z2, z4, one).is_well_defined());
  IntMatrix two(1, 1);
  two(0, 0) = 2;
  CHECK(GroupHom(z2, z4, two).is_well_defined());
}

TEST_CASE("kernel and cokernel of multiplication maps") {
  FGAbelianGroup z = FGAbelianGroup::free_group(1);
  IntMatrix three(1, 1);
  three(0, 0) = 3;
  GroupHom mul3(z, z, three);
  CHECK(kernel(mul3).group.is_trivial());
  FGAbelianGroup c = cokernel(mul3);
  CHECK(c.torsion() == std::vector<Int>{3});
  CHECK(is_injective(mul3));
  CHECK_FALSE(is_surjective(mul3));

  GroupHom red(z, z_mod(3), IntMatrix::identity(1));
  SubgroupPresentation k = kernel(red);
  CHECK(k.group.free_rank() == 1);
  CHECK(k.inclusion(0, 0) == 3);
  CHECK(is_surjective(red));
}

TEST_CASE("kernel generators actually map to zero") {
  std::mt19937_64 rng(32);
  std::uniform_int_distribution<int> entry(-4, 4);
  for (int trial = 0; trial < 100; ++trial) {
    IntMatrix rel(2, 1);
    rel(0, 0) = entry(rng);
    rel(1, 0) = entry(rng);
    FGAbelianGroup dom = FGAbelianGroup::free_group(3);
    FGAbelianGroup cod(2, rel);
    IntMatrix m(2, 3);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = entry(rng);
    GroupHom f(dom, cod, m);
    SubgroupPresentation k = kernel(f);
    for (int j = 0; j < k.inclusion.cols(); ++j)
      CHECK(cod.is_zero(f.apply(k.inclusion.column_vec(j))));
  }
}

TEST_CASE("express_in_subgroup") {
  IntMatrix s(2, 1);
  s(0, 0) = 2;
  s(1, 0) = 4;
  auto z = express_in_subgroup(s, IntMatrix(2, 0), {6, 12});
  REQUIRE(z.has_value());
  CHECK((*z)[0] == 3);
  CHECK_FALSE(express_in_subgroup(s, IntMatrix(2, 0), {1, 2}).has_value());
}

TEST_CASE("homology of a short complex") {
  // Z -2-> Z -proj-> Z/2 has trivial homology at the middle
  FGAbelianGroup z = FGAbelianGroup::free_group(1);
  IntMatrix two(1, 1);
  two(0, 0) = 2;
  GroupHom f(z, z, two);
  GroupHom g(z, z_mod(2), IntMatrix::identity(1));
  HomologyGroup h = homology(f, g);
  CHECK(h.group.is_trivial());

  // Z -4-> Z -proj-> Z/2 has homology Z/2 at the middle
  IntMatrix four(1, 1);
  four(0, 0) = 4;
  HomologyGroup h2 = homology(GroupHom(z, z, four), g);
  CHECK(h2.group.torsion() == std::vector<Int>{2});
  CHECK(h2.class_coords({2}, z) != std::vector<Int>{0});
  CHECK(h2.class_coords({4}, z) == std::vector<Int>{0});
}

TEST_CASE("isomorphism class comparison") {
  IntMatrix r(2, 2);
  r(0, 0) = 2;
  r(1, 1) = 3;
  FGAbelianGroup a(2, r);  // Z/6
  CHECK(a.isomorphic_to(z_mod(6)));
  CHECK_FALSE(a.isomorphic_to(z_mod(4)));
}
