#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "modvar/census.hpp"
#include "test_support.hpp"

using namespace modvar;
using namespace modvar::testing;

TEST_CASE("enumerate points") {
  PrimeField f2{2}, f3{3};
  auto a2 = arrow_a2();
  CHECK(enumerate_points(a2, DimVec{{1, 1}}, f2).size() == 2);

  // two-vertex cycle at (1,1) over F_3: pairs with both products zero
  auto cyc = cycle2();
  auto pts = enumerate_points(cyc, DimVec{{1, 1}}, f3);
  CHECK(pts.size() == 5);
  for (const auto& p : pts) CHECK(is_valid_point(p));

  // zero dimension vector: exactly one empty point
  CHECK(enumerate_points(cyc, DimVec{{0, 0}}, f3).size() == 1);

  // deterministic lexicographic order
  auto pts2 = enumerate_points(cyc, DimVec{{1, 1}}, f3);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t a = 0; a < pts[i].arrow.size(); ++a)
      CHECK(mat_eq(f3, pts[i].arrow[a], pts2[i].arrow[a]));

  CHECK_THROWS_AS(enumerate_points(a2, DimVec{{4, 4}}, PrimeField{17}, 1000), domain_error);
}

TEST_CASE("brute dimensions on the spot-check pairs") {
  PrimeField f2{2};
  auto dual = dual_numbers();
  ModulePoint<PrimeField> k1 = simple_point(dual, f2, 0);
  BruteDims bd = brute_dims(k1, k1);
  CHECK(bd.hom == 1);
  CHECK(bd.der == 1);

  // the cross pair of vertex simples carries exactly the inner direction
  auto ss = semisimple2();
  ModulePoint<PrimeField> t1 = simple_point(ss, f2, 0);
  ModulePoint<PrimeField> t2 = simple_point(ss, f2, 1);
  BruteDims cross = brute_dims(t1, t2);
  CHECK(cross.hom == 0);
  CHECK(cross.der == 1);

  // 2-dim Jordan loop module: the commutant is 2-dimensional
  ModulePoint<PrimeField> j = jordan_loop_point(f2);
  CHECK(brute_hom_dim(j, j) == 2);
}

TEST_CASE("enumeration agrees with the linear-system kernel") {
  PrimeField f2{2};
  for (auto pres : {dual_numbers(), cycle2()}) {
    std::vector<ModulePoint<PrimeField>> all;
    const int nv = pres->quiver.num_vertices();
    // all dimension vectors of total dimension <= 2
    std::vector<DimVec> dvecs;
    {
      DimVec d;
      d.d.assign(static_cast<std::size_t>(nv), 0);
      std::function<void(int, int)> gen = [&](int v, int left) {
        if (v == nv) {
          if (d.total() > 0) dvecs.push_back(d);
          return;
        }
        for (int x = 0; x <= left; ++x) {
          d.d[static_cast<std::size_t>(v)] = x;
          gen(v + 1, left - x);
        }
        d.d[static_cast<std::size_t>(v)] = 0;
      };
      gen(0, 2);
    }
    for (const DimVec& d : dvecs)
      for (auto& p : enumerate_points(pres, d, f2)) all.push_back(std::move(p));
    REQUIRE(!all.empty());
    for (const auto& m : all)
      for (const auto& n : all) {
        BruteDims bd = brute_dims(m, n, 1ULL << 30);
        CHECK(bd.hom == hom_dim(m, n));
        CHECK(bd.der == der_dim(m, n));
        CHECK(bd.der == der_dim_reference(m, n));
      }
  }
}

TEST_CASE("orbit counting") {
  PrimeField f2{2}, f3{3};
  auto cyc = cycle2();
  auto pts = enumerate_points(cyc, DimVec{{1, 1}}, f3);
  CHECK(count_orbits(pts) == 3);

  auto a2 = arrow_a2();
  CHECK(count_orbits(enumerate_points(a2, DimVec{{1, 1}}, f2)) == 2);

  // 2x2 matrices over F_2 up to conjugacy
  auto lp = free_loop();
  auto mats = enumerate_points(lp, DimVec{{2}}, f2);
  CHECK(mats.size() == 16);
  CHECK(count_orbits(mats) == 6);
}

TEST_CASE("budget gating") {
  PrimeField f2{2};
  auto c4 = chain4();
  ModulePoint<PrimeField> big = zero_point(c4, f2, DimVec{{2, 2, 2, 2}});
  // 7 generators, 8x8 values: far beyond any sane budget
  CHECK_THROWS_AS(brute_der_dim(big, big, 1000000), domain_error);
}
