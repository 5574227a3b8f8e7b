// Acceptance suite: end-to-end checks with exact expected values and
// wall-clock budgets. Each criterion prints one PASS/FAIL line; the
// process exits nonzero if any fail.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "modvar/census.hpp"
#include "modvar/deform.hpp"
#include "modvar/family.hpp"
#include "modvar/poly_system.hpp"
#include "test_support.hpp"

using namespace modvar;
using namespace modvar::testing;

namespace {

const PrimeField kF;

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(bool cond, const std::string& what) {
  if (!cond) throw CheckFailure(what);
}

// 1. loop-pair algebra: the generic extension space of (point component,
//    plane component) vanishes, and the two components of the extension
//    set at (1,1) have saturated dimensions exactly 3 and 4.
void criterion_loop_pair() {
  Rng rng(1001);
  auto lp = loop_pair();
  auto c1 = make_slice<PrimeField>("c1", lp, kF, DimVec{{1, 0}}, {});
  auto c2 = make_orbit("c2", simple_point(lp, kF, 1));
  GenericStats e = generic_ext(*c2, *c1, kDefaultTrials, rng);
  check(e.value == 0, "generic ext of (point, plane) must vanish, got " +
                          std::to_string(e.value));
  FamilyDim small = family_dim(*make_slice<PrimeField>("ga-free", lp, kF, DimVec{{1, 1}}, {0, 1}),
                               rng);
  FamilyDim big = family_dim(*make_slice<PrimeField>("loops-free", lp, kF, DimVec{{1, 1}}, {2}),
                             rng);
  check(small.saturated == 3, "gamma-free component saturated dim " +
                                  std::to_string(small.saturated) + " != 3");
  check(big.saturated == 4, "loops-free component saturated dim " +
                                std::to_string(big.saturated) + " != 4");
}

// 2. two-vertex cycle: generic ext is nonzero in both directions between
//    the two point components, yet both one-sided extension families are
//    components of saturated dimension exactly 3.
void criterion_cycle_pair() {
  Rng rng(1002);
  auto cyc = cycle2();
  auto c1 = make_orbit("c1", simple_point(cyc, kF, 0));
  auto c2 = make_orbit("c2", simple_point(cyc, kF, 1));
  GenericStats e12 = generic_ext(*c1, *c2, kDefaultTrials, rng);
  GenericStats e21 = generic_ext(*c2, *c1, kDefaultTrials, rng);
  check(e12.value > 0 && e21.value > 0, "both generic ext values must be nonzero");
  FamilyDim d12 = family_dim(*make_extfam<PrimeField>("e12", c1, c2), rng);
  FamilyDim d21 = family_dim(*make_extfam<PrimeField>("e21", c2, c1), rng);
  check(d12.saturated == 3, "extension family dim " + std::to_string(d12.saturated) + " != 3");
  check(d21.saturated == 3, "swapped extension family dim " + std::to_string(d21.saturated) +
                                " != 3");
}

// 3. chain algebra: inside the extension set at (1,1,1,1), the slice with
//    the middle arrow and last arrow zero is strictly smaller than the
//    middle-arrow-only slice and is contained in its zero set, so it is
//    not a component.
void criterion_chain_slices() {
  Rng rng(1003);
  auto c4 = chain4();
  auto small = make_slice<PrimeField>("mid-last-zero", c4, kF, DimVec{{1, 1, 1, 1}}, {1, 2});
  auto big = make_slice<PrimeField>("mid-zero", c4, kF, DimVec{{1, 1, 1, 1}}, {1});
  FamilyDim ds = family_dim(*small, rng);
  FamilyDim db = family_dim(*big, rng);
  check(ds.saturated < db.saturated, "small slice must have strictly smaller dimension");
  check(ds.graded < db.graded, "graded dimensions must also be strictly ordered");
  for (int t = 0; t < 20; ++t) {
    ModulePoint<PrimeField> pt = sample(*small, rng);
    check(pt.dvec == big->dvec, "sampled point has the wrong dimension vector");
    for (int a : big->zeroed)
      check(mat_is_zero(kF, pt.arrow[static_cast<std::size_t>(a)]),
            "sampled point leaves the larger slice's zero set");
    check(is_valid_point(pt), "sampled point violates the relations");
  }
}

// 4. hereditary Euler identity: generic hom minus generic ext equals the
//    bilinear form, exactly, on 100 random (quiver, a, b) instances.
void criterion_euler_identity() {
  Rng rng(1004);
  for (int inst = 0; inst < 100; ++inst) {
    int nv = 1 + static_cast<int>(rng.uniform(4));
    int na = static_cast<int>(rng.uniform(6));
    AlgebraPresentation p;
    p.label = "rand" + std::to_string(inst);
    for (int v = 0; v < nv; ++v) p.quiver.vertices.push_back("v" + std::to_string(v));
    for (int a = 0; a < na; ++a)
      p.quiver.arrows.push_back({"a" + std::to_string(a),
                                 static_cast<int>(rng.uniform(static_cast<std::uint64_t>(nv))),
                                 static_cast<int>(rng.uniform(static_cast<std::uint64_t>(nv)))});
    auto pres = std::make_shared<const AlgebraPresentation>(std::move(p));
    DimVec a, b;
    for (int v = 0; v < nv; ++v) {
      a.d.push_back(static_cast<int>(rng.uniform(4)));
      b.d.push_back(static_cast<int>(rng.uniform(4)));
    }
    auto fa = make_repspace<PrimeField>("a", pres, kF, a);
    auto fb = make_repspace<PrimeField>("b", pres, kF, b);
    Rng r1 = rng.split(1), r2 = rng.split(2);
    long long h = generic_hom(*fa, *fb, 4, r1).value;
    long long e = generic_ext(*fa, *fb, 4, r2).value;
    long long want = ringel_form(pres->quiver, a, b);
    check(h - e == want, "instance " + std::to_string(inst) + ": hom - ext = " +
                             std::to_string(h - e) + " but the form gives " +
                             std::to_string(want));
  }
}

// 5. census oracle: exhaustive counting over F_2 matches the solver on
//    every ordered pair of module points of total dimension <= 2, for
//    the three fixed test presentations.
void criterion_census_oracle() {
  PrimeField f2{2};
  const std::uint64_t budget = 1ULL << 29;
  for (auto pres : {dual_numbers(), chain4(), cycle2()}) {
    std::vector<ModulePoint<PrimeField>> all;
    const int nv = pres->quiver.num_vertices();
    std::vector<DimVec> dvecs;
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
    for (const DimVec& dv : dvecs)
      for (auto& pt : enumerate_points(pres, dv, f2, budget)) all.push_back(std::move(pt));
    check(!all.empty(), "no points enumerated for " + pres->label);
    for (const auto& m : all)
      for (const auto& n : all) {
        BruteDims bd = brute_dims(m, n, budget);
        check(bd.hom == hom_dim(m, n), pres->label + ": hom mismatch");
        check(bd.der == der_dim(m, n), pres->label + ": der mismatch");
      }
  }
}

// 6. double entry for the extension dimension: the formula route
//    (structured derivation system plus hom) equals the dense reference
//    system modulo inner derivations, on 200 random pairs.
void criterion_ext_double_entry() {
  Rng rng(1006);
  std::vector<std::shared_ptr<const AlgebraPresentation>> presentations{
      dual_numbers(), semisimple2(), arrow_a2(), free_loop(), cycle2(), chain4(), loop_pair()};
  for (int pair = 0; pair < 200; ++pair) {
    auto pres = presentations[pair % presentations.size()];
    GeneratorForm gf = to_generator_form(*pres);
    auto m = random_valid_point(pres, kF, rng, 2);
    auto n = random_valid_point(pres, kF, rng, 2);
    int formula = ext1_dim(m, n);
    int reference = der_dim_reference(m, n) - rank(kF, inner_map_matrix(m, n, gf));
    check(formula == reference, "pair " + std::to_string(pair) + ": " +
                                    std::to_string(formula) + " != " + std::to_string(reference));
  }
}

// 7. direct-sum criterion and canonical decomposition, smallest cases:
//    the two simples over one arrow do not sum to a component, and the
//    generic (1,1) module is a single indecomposable class.
void criterion_sum_smoke() {
  Rng rng(1007);
  auto a2 = arrow_a2();
  auto s1 = make_orbit("s1", simple_point(a2, kF, 0));
  auto s2 = make_orbit("s2", simple_point(a2, kF, 1));
  auto rep = sum_is_component<PrimeField>({s1, s2}, kDefaultTrials, rng);
  check(!rep.is_component, "sum of the two simples must not be a component");
  auto cd = canonical_decomposition(*make_repspace<PrimeField>("r11", a2, kF, DimVec{{1, 1}}),
                                    rng);
  check(cd.stable, "canonical decomposition must stabilize");
  check(cd.classes.size() == 1 && cd.classes[0].multiplicity == 1,
        "generic (1,1) module must be one indecomposable class");
  check(cd.classes[0].certified, "the (1,1) indecomposable has a one-dimensional End");
}

// 8. deformation lemma: a random order-8 deformation of the split
//    semisimple pair triangularizes exactly, and the square-zero loop
//    deformation with lower-left T obstructs at order one.
void criterion_deformation() {
  Rng rng(1008);
  auto ss = semisimple2();
  ModulePoint<PrimeField> m =
      direct_sum<PrimeField>({simple_point(ss, kF, 0), simple_point(ss, kF, 1)});
  const int N = 8;
  TruncatedPoint<PrimeField> tp = constant_deformation(m, N);
  TruncMat<PrimeField> g = tmat_identity(kF, 2, N);
  for (int r = 1; r < N; ++r) g.coeff[static_cast<std::size_t>(r)] = random_matrix(kF, 2, 2, rng);
  TruncatedPoint<PrimeField> deformed = conjugate_truncated(tp, g, *tmat_inverse(kF, g));
  check(check_truncated(deformed).ok(), "conjugated deformation must be valid");
  auto res = triangularize(deformed, make_split(deformed, 1, 1));
  check(std::holds_alternative<TriangularizeSuccess<PrimeField>>(res),
        "triangularization must succeed when the extension space vanishes");
  const auto& s = std::get<TriangularizeSuccess<PrimeField>>(res);
  check(mat_eq(kF, s.g.coeff[0], identity_mat(kF, 2)), "base change must be 1 mod T");
  for (int r = 0; r < N; ++r) {
    check(kF.is_zero(s.g.coeff[static_cast<std::size_t>(r)].at(0, 1)),
          "base change must have zero upper-right block");
    for (const auto& val : s.tp.gen_values)
      check(kF.is_zero(val.coeff[static_cast<std::size_t>(r)].at(1, 0)),
            "output must be exactly upper triangular through order 8");
  }

  auto dual = dual_numbers();
  TruncatedPoint<PrimeField> obstructed =
      constant_deformation(zero_point(dual, kF, DimVec{{2}}), 4);
  obstructed.gen_values[1].coeff[1].at(1, 0) = kF.one();  // loop = [[0,0],[T,0]]
  check(check_truncated(obstructed).ok(), "square-zero deformation must be valid");
  auto res2 = triangularize(obstructed, make_split(obstructed, 1, 1));
  check(std::holds_alternative<ObstructionAt<PrimeField>>(res2),
        "square-zero loop deformation must obstruct");
  check(std::get<ObstructionAt<PrimeField>>(res2).order == 1, "obstruction must be at order 1");
}

// 9. decompose round trip: random direct sums of 2-3 small modules are
//    decomposed and reassembled isomorphic to the input, witness checked
//    exactly.
void criterion_decompose_round_trip() {
  Rng rng(1009);
  std::vector<std::shared_ptr<const AlgebraPresentation>> presentations{
      cycle2(), chain4(), loop_pair(), free_loop(), arrow_a2()};
  for (int t = 0; t < 50; ++t) {
    auto pres = presentations[t % presentations.size()];
    std::vector<ModulePoint<PrimeField>> parts;
    int count = 2 + static_cast<int>(rng.uniform(2));
    for (int i = 0; i < count; ++i) parts.push_back(random_valid_point(pres, kF, rng, 1));
    ModulePoint<PrimeField> m = direct_sum(parts);
    auto dec = decompose(m, rng);
    ModulePoint<PrimeField> sum = reassemble(dec);
    auto theta = reassembly_witness(kF, m, dec);
    check(verify_intertwiner(sum, m, theta), "witness fails the intertwiner equations");
    for (const auto& tv : theta)
      check(rank(kF, tv) == tv.rows, "witness must be invertible at every vertex");
    auto iso = is_isomorphic(sum, m, rng);
    check(iso.isomorphic, "randomized isomorphism check must confirm the round trip");
  }
}

struct Criterion {
  std::string name;
  double limit_seconds;
  std::function<void()> body;
};

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {"loop-pair algebra: extension-set components of dimensions 3 and 4", 10,
       criterion_loop_pair},
      {"two-vertex cycle: ext nonzero both ways, extension families of dimension 3", 10,
       criterion_cycle_pair},
      {"chain algebra: nested slice is strictly smaller and contained", 10,
       criterion_chain_slices},
      {"hereditary Euler identity on 100 random instances", 60, criterion_euler_identity},
      {"census oracle equals the solver on all points of dimension <= 2", 120,
       criterion_census_oracle},
      {"extension dimension double entry on 200 random pairs", 60, criterion_ext_double_entry},
      {"direct-sum criterion and canonical decomposition smoke test", 5, criterion_sum_smoke},
      {"order-by-order triangularization and its obstruction", 5, criterion_deformation},
      {"decompose round trip on 50 random sums", 60, criterion_decompose_round_trip},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& c = criteria[i];
    auto start = std::chrono::steady_clock::now();
    std::string verdict = "PASS";
    std::string detail;
    try {
      c.body();
    } catch (const std::exception& e) {
      verdict = "FAIL";
      detail = e.what();
      ++failures;
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (verdict == "PASS" && secs > c.limit_seconds) {
      verdict = "FAIL";
      detail = "runtime limit exceeded";
      ++failures;
    }
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << "[" << (i + 1) << "/" << criteria.size() << "] " << verdict << "  " << c.name
         << "  (" << secs << "s, limit " << c.limit_seconds << "s)";
    if (!detail.empty()) line << "  -- " << detail;
    std::cout << line.str() << std::endl;
  }
  if (failures) {
    std::cout << failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all criteria passed" << std::endl;
  return 0;
}
