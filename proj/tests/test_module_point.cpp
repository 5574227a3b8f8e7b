#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "modvar/poly_system.hpp"
#include "test_support.hpp"

using namespace modvar;
using namespace modvar::testing;

namespace {

const PrimeField kF;

template <class F>
ModulePoint<F> cycle2_point(const F& k, long long a, long long b) {
  Mat<F> ma = zero_mat(k, 1, 1), mb = zero_mat(k, 1, 1);
  ma.at(0, 0) = k.from_int(a);
  mb.at(0, 0) = k.from_int(b);
  return make_point(cycle2(), k, DimVec{{1, 1}}, {ma, mb});
}

}  // namespace

TEST_CASE("check_point") {
  CHECK(check_point(cycle2_point(kF, 1, 0)).empty());
  auto bad = check_point(cycle2_point(kF, 1, 1));
  CHECK(bad == std::vector<int>{0, 1});
  // relation-free presentations accept everything
  Rng rng(3);
  auto pres = arrow_a2();
  Mat<PrimeField> x = random_matrix(kF, 2, 3, rng);
  CHECK(check_point(make_point(pres, kF, DimVec{{2, 3}}, {x})).empty());
}

TEST_CASE("hom dimensions") {
  auto a2 = arrow_a2();
  ModulePoint<PrimeField> s1 = simple_point(a2, kF, 0);
  ModulePoint<PrimeField> s2 = simple_point(a2, kF, 1);
  CHECK(hom_dim(s1, s1) == 1);
  CHECK(hom_dim(s1, s2) == 0);
  CHECK(hom_dim(s2, s1) == 0);
  CHECK(end_dim(jordan_loop_point(kF)) == 2);
  CHECK(end_dim(direct_sum<PrimeField>({s1, s1})) == 4);
}

TEST_CASE("hom basis elements intertwine") {
  Rng rng(17);
  auto pres = cycle2();
  for (int t = 0; t < 10; ++t) {
    auto m = random_valid_point(pres, kF, rng, 2);
    auto n = random_valid_point(pres, kF, rng, 2);
    HomBasis<PrimeField> hb = hom_basis(m, n);
    CHECK(hb.dim() == hom_dim(m, n));
    for (const auto& theta : hb.elems) CHECK(verify_intertwiner(m, n, theta));
  }
}

TEST_CASE("derivation dimensions against the dense reference") {
  // dual numbers, both modules the 1-dim module with nilpotent action
  auto dual = dual_numbers();
  ModulePoint<PrimeField> k1 = simple_point(dual, kF, 0);
  CHECK(der_dim(k1, k1) == 1);
  CHECK(der_dim_reference(k1, k1) == 1);

  // semisimple pair: the cross block carries exactly the inner direction
  auto ss = semisimple2();
  ModulePoint<PrimeField> t1 = simple_point(ss, kF, 0);
  ModulePoint<PrimeField> t2 = simple_point(ss, kF, 1);
  CHECK(der_dim(t1, t2) == 1);
  CHECK(der_dim_reference(t1, t2) == 1);
  CHECK(inner_der_dim(t1, t2) == 1);
  CHECK(ext1_dim(t1, t2) == 0);

  // free loop, 1-dim modules: the loop value is unconstrained
  auto lp = free_loop();
  ModulePoint<PrimeField> l1 = simple_point(lp, kF, 0);
  CHECK(der_dim(l1, l1) == 1);
  CHECK(der_dim_reference(l1, l1) == 1);
}

TEST_CASE("derivation basis satisfies every generator-form relation") {
  Rng rng(21);
  for (auto pres : {cycle2(), chain4(), loop_pair()}) {
    GeneratorForm gf = to_generator_form(*pres);
    for (int t = 0; t < 4; ++t) {
      auto m = random_valid_point(pres, kF, rng, 2);
      auto n = random_valid_point(pres, kF, rng, 2);
      DerBasis<PrimeField> db = der_basis(m, n);
      CHECK(db.dim() == der_dim(m, n));
      CHECK(db.dim() == der_dim_reference(m, n));
      for (const auto& tuple : db.elems) CHECK(check_derivation(m, n, gf, tuple).empty());
    }
  }
}

TEST_CASE("ext dimensions") {
  auto dual = dual_numbers();
  ModulePoint<PrimeField> k1 = simple_point(dual, kF, 0);
  CHECK(ext1_dim(k1, k1) == 1);

  auto ss = semisimple2();
  CHECK(ext1_dim(simple_point(ss, kF, 0), simple_point(ss, kF, 1)) == 0);
  CHECK(ext1_dim(simple_point(ss, kF, 0), simple_point(ss, kF, 0)) == 0);

  // one arrow: extensions of the source simple by the target simple
  auto a2 = arrow_a2();
  ModulePoint<PrimeField> s1 = simple_point(a2, kF, 0);
  ModulePoint<PrimeField> s2 = simple_point(a2, kF, 1);
  CHECK(ext1_dim(s1, s2) == 1);
  CHECK(ext1_dim(s2, s1) == 0);
}

TEST_CASE("inner derivation dimension") {
  auto a2 = arrow_a2();
  ModulePoint<PrimeField> s1 = simple_point(a2, kF, 0);
  ModulePoint<PrimeField> s2 = simple_point(a2, kF, 1);
  CHECK(inner_der_dim(s1, s1) == 0);
  CHECK(inner_der_dim(s1, s2) == 1);
  Rng rng(5);
  auto m = random_valid_point(cycle2(), kF, rng, 2);
  CHECK(inner_der_dim(m, m) == m.total_dim() * m.total_dim() - end_dim(m));
}

TEST_CASE("ext double entry: formula route vs dense reference route") {
  Rng rng(101);
  for (auto pres : {dual_numbers(), cycle2(), chain4(), loop_pair(), arrow_a2()}) {
    GeneratorForm gf = to_generator_form(*pres);
    for (int t = 0; t < 6; ++t) {
      auto m = random_valid_point(pres, kF, rng, 2);
      auto n = random_valid_point(pres, kF, rng, 2);
      int lhs = ext1_dim(m, n);
      int rhs = der_dim_reference(m, n) - rank(kF, inner_map_matrix(m, n, gf));
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("direct sum") {
  auto ss = semisimple2();
  ModulePoint<PrimeField> s1 = simple_point(ss, kF, 0);
  ModulePoint<PrimeField> s2 = simple_point(ss, kF, 1);
  ModulePoint<PrimeField> sum = direct_sum<PrimeField>({s1, s2});
  CHECK(sum.dvec == DimVec{{1, 1}});
  ModulePoint<PrimeField> single = direct_sum<PrimeField>({s1});
  CHECK(single.dvec == s1.dvec);
}

TEST_CASE("hom and ext are additive in direct sums") {
  Rng rng(47);
  for (auto pres : {cycle2(), loop_pair()}) {
    for (int t = 0; t < 6; ++t) {
      auto a = random_valid_point(pres, kF, rng, 1);
      auto b = random_valid_point(pres, kF, rng, 1);
      auto c = random_valid_point(pres, kF, rng, 2);
      auto ab = direct_sum<PrimeField>({a, b});
      CHECK(hom_dim(ab, c) == hom_dim(a, c) + hom_dim(b, c));
      CHECK(hom_dim(c, ab) == hom_dim(c, a) + hom_dim(c, b));
      CHECK(ext1_dim(ab, c) == ext1_dim(a, c) + ext1_dim(b, c));
      CHECK(ext1_dim(c, ab) == ext1_dim(c, a) + ext1_dim(c, b));
    }
  }
}

TEST_CASE("extension middle terms") {
  // zero derivation gives the direct sum on the nose
  auto a2 = arrow_a2();
  ModulePoint<PrimeField> s1 = simple_point(a2, kF, 0);
  ModulePoint<PrimeField> s2 = simple_point(a2, kF, 1);
  GeneratorForm gf = to_generator_form(*a2);
  std::vector<Mat<PrimeField>> zero_tuple;
  for (int g = 0; g < gf.num_generators(); ++g) zero_tuple.push_back(zero_mat(kF, 1, 1));
  ModulePoint<PrimeField> split = extension_from_derivation(s1, s2, zero_tuple);
  ModulePoint<PrimeField> plain = direct_sum<PrimeField>({s1, s2});
  CHECK(split.dvec == plain.dvec);
  for (std::size_t a = 0; a < split.arrow.size(); ++a)
    CHECK(mat_eq(kF, split.arrow[a], plain.arrow[a]));

  // one inner cross-vertex direction plus one arrow-block direction
  DerBasis<PrimeField> db = der_basis(s1, s2);
  REQUIRE(db.dim() == 2);
  // the inner element produces the split sum again
  ModulePoint<PrimeField> from_inner = extension_from_derivation(s1, s2, db.elems[0]);
  CHECK(end_dim(from_inner) == 2);
  // the arrow-block element spans the extension class: indecomposable
  ModulePoint<PrimeField> mid = extension_from_derivation(s1, s2, db.elems[1]);
  CHECK(is_valid_point(mid));
  CHECK(end_dim(mid) == 1);

  // dual numbers: nonzero class gives the regular module, End of dim 2
  auto dual = dual_numbers();
  ModulePoint<PrimeField> k1 = simple_point(dual, kF, 0);
  DerBasis<PrimeField> dd = der_basis(k1, k1);
  // one inner-free direction: the loop value
  REQUIRE(dd.dim() == 1);
  ModulePoint<PrimeField> reg = extension_from_derivation(k1, k1, dd.elems[0]);
  CHECK(is_valid_point(reg));
  CHECK_FALSE(mat_is_zero(kF, reg.arrow[0]));
  CHECK(end_dim(reg) == 2);
}

TEST_CASE("extension output is valid and the sub block is arrow-stable") {
  Rng rng(7);
  for (auto pres : {cycle2(), chain4(), loop_pair()}) {
    for (int t = 0; t < 8; ++t) {
      auto m1 = random_valid_point(pres, kF, rng, 1);
      auto m2 = random_valid_point(pres, kF, rng, 1);
      auto dval = sample_arrow_derivation(m1, m2, rng);
      ModulePoint<PrimeField> mid = extension_from_derivation(m1, m2, dval);
      CHECK(is_valid_point(mid));
      // block convention: quotient structure upper left, sub structure
      // lower right, zero lower left (the last-d2 coordinates are the
      // submodule)
      for (int a = 0; a < pres->quiver.num_arrows(); ++a) {
        const Arrow& ar = pres->quiver.arrows[static_cast<std::size_t>(a)];
        const Mat<PrimeField>& x = mid.arrow[static_cast<std::size_t>(a)];
        Mat<PrimeField> low = get_block(kF, x, m1.dim_at(ar.source), 0, m2.dim_at(ar.source),
                                        m1.dim_at(ar.target));
        CHECK(mat_is_zero(kF, low));
        CHECK(mat_eq(kF, get_block(kF, x, 0, 0, m1.dim_at(ar.source), m1.dim_at(ar.target)),
                     m1.arrow[static_cast<std::size_t>(a)]));
        CHECK(mat_eq(kF,
                     get_block(kF, x, m1.dim_at(ar.source), m1.dim_at(ar.target),
                               m2.dim_at(ar.source), m2.dim_at(ar.target)),
                     m2.arrow[static_cast<std::size_t>(a)]));
      }
    }
  }
}

TEST_CASE("specialization to the split sum never lowers hom/der/ext") {
  // scaling the off-diagonal block to zero is a one-parameter
  // degeneration, so dimensions at the sum dominate those at the
  // extension
  Rng rng(2024);
  int violations = 0;
  const int trials = 40;
  for (int t = 0; t < trials; ++t) {
    auto pres = t % 2 ? cycle2() : loop_pair();
    auto m1 = random_valid_point(pres, kF, rng, 1);
    auto m2 = random_valid_point(pres, kF, rng, 1);
    auto dval = sample_arrow_derivation(m1, m2, rng);
    ModulePoint<PrimeField> mid = extension_from_derivation(m1, m2, dval);
    ModulePoint<PrimeField> sum = direct_sum<PrimeField>({m1, m2});
    auto n = random_valid_point(pres, kF, rng, 1);
    bool ok = hom_dim(sum, n) >= hom_dim(mid, n) && hom_dim(n, sum) >= hom_dim(n, mid) &&
              der_dim(sum, n) >= der_dim(mid, n) && der_dim(n, sum) >= der_dim(n, mid) &&
              ext1_dim(sum, n) >= ext1_dim(mid, n) && ext1_dim(n, sum) >= ext1_dim(n, mid) &&
              end_dim(sum) >= end_dim(mid);
    if (!ok) {
      ++violations;
      MESSAGE("semicontinuity violated at trial " << t);
    }
  }
  CHECK(violations * 20 <= trials);
}

TEST_CASE("variety equations") {
  auto a2 = arrow_a2();
  CHECK(variety_equations(*a2, DimVec{{1, 1}}).equations.empty());

  PolySystem sys = variety_equations(*cycle2(), DimVec{{1, 1}});
  REQUIRE(sys.equations.size() == 2);
  for (const Poly& p : sys.equations) {
    REQUIRE(p.terms.size() == 1);
    CHECK(p.terms.begin()->first.size() == 2);  // quadratic monomial
  }

  PolySystem dual2 = variety_equations(*dual_numbers(), DimVec{{2}});
  CHECK(dual2.equations.size() == 4);

  // evaluating the system reproduces the relation values entrywise
  Rng rng(9);
  for (int t = 0; t < 5; ++t) {
    Mat<PrimeField> a = random_matrix(kF, 1, 1, rng), b = random_matrix(kF, 1, 1, rng);
    ModulePoint<PrimeField> pt = make_point(cycle2(), kF, DimVec{{1, 1}}, {a, b});
    auto vals = evaluate_system(kF, sys, pt);
    std::vector<PrimeField::Elt> expect;
    for (const Relation& rel : pt.pres->relations)
      for (const auto& e : eval_relation(pt, rel).a) expect.push_back(e);
    CHECK(vals == expect);
  }
}

TEST_CASE("tangent dimensions") {
  // relation-free: the whole arrow space
  auto a2 = arrow_a2();
  Rng rng(12);
  Mat<PrimeField> x = random_matrix(kF, 2, 3, rng);
  CHECK(tangent_dim(make_point(a2, kF, DimVec{{2, 3}}, {x})) == 6);

  auto dual = dual_numbers();
  CHECK(tangent_dim(simple_point(dual, kF, 0)) == 1);

  CHECK(tangent_dim(cycle2_point(kF, 1, 0)) == 1);
}

TEST_CASE("jet Jacobian agrees with the symbolic derivative") {
  Rng rng(77);
  for (auto pres : {cycle2(), chain4()}) {
    for (int t = 0; t < 4; ++t) {
      auto m = random_valid_point(pres, kF, rng, 2);
      PolySystem sys = variety_equations(*pres, m.dvec);
      Mat<PrimeField> jet = variety_jacobian(m);
      auto vars = system_variables_at(sys, m);
      Mat<PrimeField> sym = zero_mat(kF, static_cast<int>(sys.equations.size()), sys.num_vars());
      for (int e = 0; e < sym.rows; ++e)
        for (int v = 0; v < sym.cols; ++v)
          sym.at(e, v) =
              evaluate_poly(kF, poly_derivative(sys.equations[static_cast<std::size_t>(e)], v), vars);
      CHECK(mat_eq(kF, jet, sym));
    }
  }
}

TEST_CASE("tangent dimension dominates the graded orbit dimension") {
  Rng rng(88);
  for (auto pres : {cycle2(), loop_pair(), dual_numbers()}) {
    for (int t = 0; t < 6; ++t) {
      auto m = random_valid_point(pres, kF, rng, 2);
      long long group = 0;
      for (int x : m.dvec.d) group += static_cast<long long>(x) * x;
      CHECK(tangent_dim(m) >= group - end_dim(m));
    }
  }
}

TEST_CASE("module point file round trip") {
  Rng rng(55);
  auto pres = chain4();
  for (int t = 0; t < 5; ++t) {
    auto m = random_valid_point(pres, kF, rng, 2);
    ModulePoint<PrimeField> back = read_module_point(write_module_point(m), pres, kF);
    CHECK(back.dvec == m.dvec);
    for (std::size_t a = 0; a < m.arrow.size(); ++a) CHECK(mat_eq(kF, back.arrow[a], m.arrow[a]));
  }
  RationalField q;
  Rng rng2(56);
  auto mq = random_valid_point(loop_pair(), q, rng2, 2);
  ModulePoint<RationalField> backq = read_module_point(write_module_point(mq), loop_pair(), q);
  CHECK(backq.dvec == mq.dvec);
  for (std::size_t a = 0; a < mq.arrow.size(); ++a)
    CHECK(mat_eq(q, backq.arrow[a], mq.arrow[a]));

  CHECK_THROWS_AS(read_module_point("module wrong over GF(2147483647)\n", pres, kF), domain_error);
}

TEST_CASE("mismatched inputs are rejected") {
  ModulePoint<PrimeField> s1 = simple_point(arrow_a2(), kF, 0);
  ModulePoint<PrimeField> t1 = simple_point(cycle2(), kF, 0);
  CHECK_THROWS_AS(hom_dim(s1, t1), domain_error);
  CHECK_THROWS_AS(der_dim(s1, t1), domain_error);
  CHECK_THROWS_AS(direct_sum<PrimeField>({s1, t1}), domain_error);
  PrimeField other{7};
  ModulePoint<PrimeField> s1b = simple_point(arrow_a2(), other, 0);
  CHECK_THROWS_AS(hom_dim(s1, s1b), domain_error);
  // shape validation at construction
  CHECK_THROWS_AS(make_point(arrow_a2(), kF, DimVec{{1, 1}}, {zero_mat(kF, 2, 1)}),
                  domain_error);
}

TEST_CASE("rationals agree with the prime field on small dimensions") {
  RationalField q;
  auto a2 = arrow_a2();
  ModulePoint<RationalField> s1 = simple_point(a2, q, 0);
  ModulePoint<RationalField> s2 = simple_point(a2, q, 1);
  CHECK(ext1_dim(s1, s2) == 1);
  CHECK(ext1_dim(s2, s1) == 0);
  CHECK(der_dim(s1, s2) == der_dim_reference(s1, s2));
  ModulePoint<RationalField> jq = jordan_loop_point(q);
  CHECK(end_dim(jq) == 2);
}
