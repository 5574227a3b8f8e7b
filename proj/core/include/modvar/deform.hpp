#pragma once

#include <sstream>
#include <variant>

#include "modvar/hom_der.hpp"
#include "modvar/module_point.hpp"
#include "modvar/trunc_series.hpp"

namespace modvar {

inline constexpr int kDefaultTruncationOrder = 8;

// Algebra homomorphism into matrices over the truncated power-series
// ring: one value per generator of the generator form, each a total
// d x d matrix of series. The constant term must be a valid graded
// module structure written in total form (idempotents at the standard
// projectors).
template <class F>
struct TruncatedPoint {
  std::shared_ptr<const AlgebraPresentation> pres;
  F field;
  DimVec dvec;  // grading of the constant term
  std::vector<TruncMat<F>> gen_values;

  int order() const { return gen_values.empty() ? 0 : gen_values[0].order(); }
  int total_dim() const { return dvec.total(); }
};

// Constant deformation of a valid module point.
template <class F>
TruncatedPoint<F> constant_deformation(const ModulePoint<F>& m, int order) {
  GeneratorForm gf = to_generator_form(*m.pres);
  TruncatedPoint<F> tp{m.pres, m.field, m.dvec, {}};
  for (int g = 0; g < gf.num_generators(); ++g)
    tp.gen_values.push_back(tmat_from_constant(m.field, generator_image(m, gf, g), order));
  return tp;
}

// Conjugates every generator value by g (with inverse supplied).
template <class F>
TruncatedPoint<F> conjugate_truncated(const TruncatedPoint<F>& tp, const TruncMat<F>& g,
                                      const TruncMat<F>& ginv) {
  TruncatedPoint<F> out = tp;
  for (auto& val : out.gen_values) val = tmat_mul(tp.field, tmat_mul(tp.field, g, val), ginv);
  return out;
}

// Evaluates a generator-form relation polynomial on truncated matrices.
template <class F>
TruncMat<F> eval_nc_poly_trunc(const F& k, const NCPoly& poly,
                               const std::vector<TruncMat<F>>& values, int dim, int order) {
  TruncMat<F> acc = tmat_zero(k, dim, dim, order);
  for (const NCTerm& term : poly) {
    TruncMat<F> prod = tmat_identity(k, dim, order);
    for (int g : term.word) prod = tmat_mul(k, prod, values[static_cast<std::size_t>(g)]);
    const auto c = k.from_fraction(term.coeff.num, term.coeff.den);
    for (auto& coeff : prod.coeff) coeff = mat_scale(k, c, coeff);
    acc = tmat_add(k, acc, prod);
  }
  return acc;
}

// Indices of generator-form relations whose evaluation is nonzero mod
// T^order; empty means valid. Also flags a constant term whose
// idempotent images are off the standard graded projectors.
template <class F>
struct TruncatedReport {
  std::vector<int> violated_relations;
  bool constant_term_graded = true;
  bool ok() const { return violated_relations.empty() && constant_term_graded; }
};

template <class F>
TruncatedReport<F> check_truncated(const TruncatedPoint<F>& tp) {
  const F& k = tp.field;
  GeneratorForm gf = to_generator_form(*tp.pres);
  TruncatedReport<F> rep;
  const int d = tp.total_dim();
  for (std::size_t r = 0; r < gf.relations.size(); ++r) {
    TruncMat<F> val = eval_nc_poly_trunc(k, gf.relations[r], tp.gen_values, d, tp.order());
    if (!tmat_is_zero(k, val)) rep.violated_relations.push_back(static_cast<int>(r));
  }
  for (int v = 0; v < gf.num_vertices; ++v) {
    Mat<F> proj = zero_mat(k, d, d);
    int off = vertex_offset(tp.dvec, v);
    for (int i = 0; i < tp.dvec.d[static_cast<std::size_t>(v)]; ++i)
      proj.at(off + i, off + i) = k.one();
    if (!mat_eq(k, tp.gen_values[static_cast<std::size_t>(v)].coeff[0], proj))
      rep.constant_term_graded = false;
  }
  return rep;
}

// ---- order-by-order triangularization ---------------------------------

// Block sizes of an upper-triangular split, with the two diagonal
// constant-term structures (as generator-indexed total matrices).
template <class F>
struct SplitData {
  int d1 = 0;
  int d2 = 0;
  std::vector<Mat<F>> m11;  // per generator, d1 x d1
  std::vector<Mat<F>> m22;  // per generator, d2 x d2
};

// Builds the split from the constant term; requires the lower-left
// d2 x d1 block of every generator's constant term to vanish.
template <class F>
SplitData<F> make_split(const TruncatedPoint<F>& tp, int d1, int d2) {
  if (d1 < 0 || d2 < 0 || d1 + d2 != tp.total_dim())
    throw domain_error("make_split: block sizes do not sum to the total dimension");
  const F& k = tp.field;
  SplitData<F> s;
  s.d1 = d1;
  s.d2 = d2;
  for (const TruncMat<F>& val : tp.gen_values) {
    const Mat<F>& c0 = val.coeff[0];
    if (!mat_is_zero(k, get_block(k, c0, d1, 0, d2, d1)))
      throw domain_error("make_split: constant term is not block upper triangular");
    s.m11.push_back(get_block(k, c0, 0, 0, d1, d1));
    s.m22.push_back(get_block(k, c0, d1, d1, d2, d2));
  }
  return s;
}

// Failure value of solve_theta: the derivation class blocking the step.
template <class F>
struct Obstruction {
  std::vector<Mat<F>> c21;  // per generator, d2 x d1
};

// Solves c21(g) = m22(g) theta - theta m11(g) for a d2 x d1 matrix
// theta over all generators; c21 must satisfy the derivation condition
// for the generator-form relations (checked, internal fault if not).
// No solution means the class of c21 is a nonzero extension class.
template <class F>
std::variant<Mat<F>, Obstruction<F>> solve_theta(const F& k, const GeneratorForm& gf,
                                                 const std::vector<Mat<F>>& c21,
                                                 const std::vector<Mat<F>>& m11,
                                                 const std::vector<Mat<F>>& m22) {
  const int d1 = m11.empty() ? 0 : m11[0].rows;
  const int d2 = m22.empty() ? 0 : m22[0].rows;
  // derivation pre-check: product-rule expansion of every relation,
  // algebra acting through m22 on the left and m11 on the right
  for (const NCPoly& poly : gf.relations) {
    Mat<F> acc = zero_mat(k, d2, d1);
    for (const NCTerm& term : poly) {
      const auto c = k.from_fraction(term.coeff.num, term.coeff.den);
      const int len = static_cast<int>(term.word.size());
      for (int j = 0; j < len; ++j) {
        Mat<F> val = identity_mat(k, d2);
        for (int l = 0; l < j; ++l)
          val = mat_mul(k, val, m22[static_cast<std::size_t>(term.word[static_cast<std::size_t>(l)])]);
        val = mat_mul(k, val, c21[static_cast<std::size_t>(term.word[static_cast<std::size_t>(j)])]);
        for (int l = j + 1; l < len; ++l)
          val = mat_mul(k, val, m11[static_cast<std::size_t>(term.word[static_cast<std::size_t>(l)])]);
        acc = mat_add(k, acc, mat_scale(k, c, val));
      }
    }
    if (!mat_is_zero(k, acc))
      throw internal_error("solve_theta: block is not a derivation; deformation data corrupt");
  }
  // stacked linear system over the entries of theta
  const int unknowns = d1 * d2;
  Mat<F> sys = zero_mat(k, static_cast<int>(gf.num_generators()) * d2 * d1, unknowns);
  Mat<F> rhs = zero_mat(k, sys.rows, 1);
  for (int g = 0; g < gf.num_generators(); ++g) {
    const Mat<F>& a22 = m22[static_cast<std::size_t>(g)];
    const Mat<F>& a11 = m11[static_cast<std::size_t>(g)];
    for (int r = 0; r < d2; ++r)
      for (int c = 0; c < d1; ++c) {
        int row = g * d2 * d1 + r * d1 + c;
        for (int i = 0; i < d2; ++i) {
          auto& cell = sys.at(row, i * d1 + c);
          cell = k.add(cell, a22.at(r, i));
        }
        for (int j = 0; j < d1; ++j) {
          auto& cell = sys.at(row, r * d1 + j);
          cell = k.sub(cell, a11.at(j, c));
        }
        rhs.at(row, 0) = c21[static_cast<std::size_t>(g)].at(r, c);
      }
  }
  auto sol = solve_linear(k, sys, rhs);
  if (!sol) return Obstruction<F>{c21};
  Mat<F> theta = zero_mat(k, d2, d1);
  for (int r = 0; r < d2; ++r)
    for (int c = 0; c < d1; ++c) theta.at(r, c) = sol->at(r * d1 + c, 0);
  return theta;
}

template <class F>
struct TriangularizeSuccess {
  TruncMat<F> g;         // accumulated base change, identity mod T, zero (1,2) block
  TruncatedPoint<F> tp;  // conjugated point, upper triangular mod T^N
};

template <class F>
struct ObstructionAt {
  int order = 0;
  std::vector<Mat<F>> witness;  // the obstructing derivation block c^n_21
};

// Order-by-order triangularization: at each order n the lower-left block
// defines a derivation block; when it is inner, conjugation by
// [[1,0],[T^n theta,1]] pushes the lower-left block into T^{n+1}(...).
// Succeeds whenever the extension space of the diagonal pair vanishes.
template <class F>
std::variant<TriangularizeSuccess<F>, ObstructionAt<F>> triangularize(const TruncatedPoint<F>& tp0,
                                                                      const SplitData<F>& split) {
  const F& k = tp0.field;
  GeneratorForm gf = to_generator_form(*tp0.pres);
  const int N = tp0.order();
  const int d = tp0.total_dim();
  const int d1 = split.d1, d2 = split.d2;
  TruncatedPoint<F> tp = tp0;
  TruncMat<F> g_acc = tmat_identity(k, d, N);
  for (int n = 1; n < N; ++n) {
    std::vector<Mat<F>> c21;
    bool zero = true;
    for (const TruncMat<F>& val : tp.gen_values) {
      Mat<F> block = get_block(k, val.coeff[static_cast<std::size_t>(n)], d1, 0, d2, d1);
      if (!mat_is_zero(k, block)) zero = false;
      c21.push_back(std::move(block));
    }
    if (zero) continue;
    auto sol = solve_theta(k, gf, c21, split.m11, split.m22);
    if (std::holds_alternative<Obstruction<F>>(sol))
      return ObstructionAt<F>{n, std::get<Obstruction<F>>(sol).c21};
    const Mat<F>& theta = std::get<Mat<F>>(sol);
    // g_n = 1 + T^n [[0,0],[theta,0]]; its inverse flips the sign
    TruncMat<F> gn = tmat_identity(k, d, N);
    TruncMat<F> gninv = tmat_identity(k, d, N);
    set_block(gn.coeff[static_cast<std::size_t>(n)], d1, 0, theta);
    set_block(gninv.coeff[static_cast<std::size_t>(n)], d1, 0, mat_neg(k, theta));
    for (auto& val : tp.gen_values) val = tmat_mul(k, tmat_mul(k, gn, val), gninv);
    g_acc = tmat_mul(k, gn, g_acc);
    // progress invariant: orders <= n of the lower-left block now vanish
    for (const TruncMat<F>& val : tp.gen_values)
      for (int r = 0; r <= n; ++r)
        if (!mat_is_zero(k, get_block(k, val.coeff[static_cast<std::size_t>(r)], d1, 0, d2, d1)))
          throw internal_error("triangularize: lower-left block survived its elimination order");
  }
  return TriangularizeSuccess<F>{std::move(g_acc), std::move(tp)};
}

// ---- file format --------------------------------------------------------
//
//   tmodule <presentation-label> over <field> trunc <N>
//   dim <vertex> = <n>
//   gen <name>:            (idempotent names are the vertex names)
//   <entries, each a comma-separated coefficient list c0,c1,...,c_{N-1}>

template <class F>
std::string write_truncated_point(const TruncatedPoint<F>& tp) {
  std::ostringstream os;
  const Quiver& q = tp.pres->quiver;
  os << "tmodule " << tp.pres->label << " over " << tp.field.name() << " trunc " << tp.order()
     << "\n";
  for (int v = 0; v < q.num_vertices(); ++v)
    os << "dim " << q.vertices[static_cast<std::size_t>(v)] << " = "
       << tp.dvec.d[static_cast<std::size_t>(v)] << "\n";
  GeneratorForm gf = to_generator_form(*tp.pres);
  const int d = tp.total_dim();
  for (int g = 0; g < gf.num_generators(); ++g) {
    os << "gen "
       << (g < gf.num_vertices ? q.vertices[static_cast<std::size_t>(g)]
                               : q.arrows[static_cast<std::size_t>(g - gf.num_vertices)].name)
       << ":\n";
    const TruncMat<F>& val = tp.gen_values[static_cast<std::size_t>(g)];
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (j) os << " ";
        for (int r = 0; r < tp.order(); ++r)
          os << (r ? "," : "") << tp.field.to_string(val.coeff[static_cast<std::size_t>(r)].at(i, j));
      }
      os << "\n";
    }
  }
  return os.str();
}

template <class F>
TruncatedPoint<F> read_truncated_point(const std::string& text,
                                       std::shared_ptr<const AlgebraPresentation> pres,
                                       const F& field) {
  std::istringstream is(text);
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      bool blank = true;
      for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
      if (!blank) return true;
    }
    return false;
  };
  if (!next_line()) throw domain_error("tmodule file: empty");
  int order = 0;
  {
    std::istringstream hs(line);
    std::string kw, label, over, fieldname, trunc;
    hs >> kw >> label >> over >> fieldname >> trunc >> order;
    if (kw != "tmodule" || over != "over" || trunc != "trunc" || order < 1)
      throw domain_error("tmodule file: bad header");
    if (label != pres->label) throw domain_error("tmodule file: presentation label mismatch");
    if (fieldname != field.name()) throw domain_error("tmodule file: field mismatch");
  }
  const Quiver& q = pres->quiver;
  DimVec d;
  d.d.assign(static_cast<std::size_t>(q.num_vertices()), 0);
  for (int v = 0; v < q.num_vertices(); ++v) {
    if (!next_line()) throw domain_error("tmodule file: missing dim line");
    std::istringstream ls(line);
    std::string kw, vname, eq;
    int n = 0;
    ls >> kw >> vname >> eq >> n;
    if (kw != "dim" || eq != "=" || n < 0) throw domain_error("tmodule file: bad dim line");
    int vi = q.vertex_index(vname);
    if (vi < 0) throw domain_error("tmodule file: unknown vertex '" + vname + "'");
    d.d[static_cast<std::size_t>(vi)] = n;
  }
  GeneratorForm gf = to_generator_form(*pres);
  const int dt = d.total();
  TruncatedPoint<F> tp{pres, field, d, {}};
  tp.gen_values.assign(static_cast<std::size_t>(gf.num_generators()),
                       tmat_zero(field, dt, dt, order));
  std::vector<bool> seen(static_cast<std::size_t>(gf.num_generators()), false);
  for (int count = 0; count < gf.num_generators(); ++count) {
    if (!next_line()) throw domain_error("tmodule file: missing generator block");
    std::istringstream ls(line);
    std::string kw, gname;
    ls >> kw >> gname;
    if (kw != "gen" || gname.empty() || gname.back() != ':')
      throw domain_error("tmodule file: bad generator header: " + line);
    gname.pop_back();
    int gen = q.vertex_index(gname);
    if (gen < 0) {
      int a = q.arrow_index(gname);
      if (a < 0) throw domain_error("tmodule file: unknown generator '" + gname + "'");
      gen = gf.arrow_gen(a);
    }
    if (seen[static_cast<std::size_t>(gen)])
      throw domain_error("tmodule file: duplicate generator '" + gname + "'");
    seen[static_cast<std::size_t>(gen)] = true;
    TruncMat<F>& val = tp.gen_values[static_cast<std::size_t>(gen)];
    for (int i = 0; i < dt; ++i) {
      if (!next_line()) throw domain_error("tmodule file: truncated matrix block");
      std::istringstream rs(line);
      for (int j = 0; j < dt; ++j) {
        std::string tok;
        if (!(rs >> tok)) throw domain_error("tmodule file: short matrix row");
        std::istringstream cs(tok);
        std::string piece;
        int r = 0;
        while (std::getline(cs, piece, ',')) {
          if (r >= order) throw domain_error("tmodule file: too many coefficients in an entry");
          val.coeff[static_cast<std::size_t>(r)].at(i, j) = field.parse(piece);
          ++r;
        }
        if (r != order) throw domain_error("tmodule file: entry has wrong coefficient count");
      }
    }
  }
  return tp;
}

}  // namespace modvar
