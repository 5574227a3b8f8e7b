#pragma once

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "modvar/generator_form.hpp"
#include "modvar/mat.hpp"
#include "modvar/presentation_io.hpp"
#include "modvar/quiver.hpp"

namespace modvar {

// A point of the module variety: one matrix per arrow over an exact
// field. Modules are row vectors acted on from the right, so a path
// evaluates to the left-to-right product of its arrow matrices.
// Construction does not force validity; check_point reports violations.
template <class F>
struct ModulePoint {
  std::shared_ptr<const AlgebraPresentation> pres;
  F field;
  DimVec dvec;
  std::vector<Mat<F>> arrow;

  int dim_at(int v) const { return dvec.d[static_cast<std::size_t>(v)]; }
  int total_dim() const { return dvec.total(); }
};

template <class F>
void require_compatible(const ModulePoint<F>& m, const ModulePoint<F>& n) {
  if (m.pres.get() != n.pres.get() && (!m.pres || !n.pres || m.pres->label != n.pres->label))
    throw domain_error("module points over different presentations");
  if constexpr (std::is_same_v<F, PrimeField>) {
    if (m.field.p != n.field.p) throw domain_error("module points over different fields");
  }
}

// Offset of vertex v's coordinate block inside the total space.
inline int vertex_offset(const DimVec& d, int v) {
  int off = 0;
  for (int i = 0; i < v; ++i) off += d.d[static_cast<std::size_t>(i)];
  return off;
}

template <class F>
ModulePoint<F> make_point(std::shared_ptr<const AlgebraPresentation> pres, const F& field,
                          DimVec dvec, std::vector<Mat<F>> arrows) {
  if (dvec.size() != pres->quiver.num_vertices())
    throw domain_error("dimension vector does not match vertex count");
  for (int x : dvec.d)
    if (x < 0) throw domain_error("negative entry in dimension vector");
  if (static_cast<int>(arrows.size()) != pres->quiver.num_arrows())
    throw domain_error("wrong number of arrow matrices");
  for (int a = 0; a < pres->quiver.num_arrows(); ++a) {
    const Arrow& ar = pres->quiver.arrows[static_cast<std::size_t>(a)];
    const Mat<F>& x = arrows[static_cast<std::size_t>(a)];
    if (x.rows != dvec.d[static_cast<std::size_t>(ar.source)] ||
        x.cols != dvec.d[static_cast<std::size_t>(ar.target)])
      throw domain_error("arrow matrix '" + ar.name + "' has wrong shape");
  }
  return ModulePoint<F>{std::move(pres), field, std::move(dvec), std::move(arrows)};
}

// Zero module structure (all arrows act as zero) for a dimension vector.
template <class F>
ModulePoint<F> zero_point(std::shared_ptr<const AlgebraPresentation> pres, const F& field,
                          DimVec dvec) {
  std::vector<Mat<F>> arrows;
  for (const Arrow& ar : pres->quiver.arrows)
    arrows.push_back(zero_mat(field, dvec.d[static_cast<std::size_t>(ar.source)],
                              dvec.d[static_cast<std::size_t>(ar.target)]));
  return make_point(std::move(pres), field, std::move(dvec), std::move(arrows));
}

// Simple module concentrated at one vertex.
template <class F>
ModulePoint<F> simple_point(std::shared_ptr<const AlgebraPresentation> pres, const F& field,
                            int vertex) {
  DimVec d;
  d.d.assign(static_cast<std::size_t>(pres->quiver.num_vertices()), 0);
  d.d[static_cast<std::size_t>(vertex)] = 1;
  return zero_point(std::move(pres), field, std::move(d));
}

// Product of the arrow matrices along a path (graded shapes).
template <class F>
Mat<F> eval_path(const ModulePoint<F>& m, const PathWord& w) {
  const Quiver& q = m.pres->quiver;
  Mat<F> acc = identity_mat(m.field, m.dim_at(path_source(q, w)));
  for (int a : w.arrows) acc = mat_mul(m.field, acc, m.arrow[static_cast<std::size_t>(a)]);
  return acc;
}

template <class F>
Mat<F> eval_relation(const ModulePoint<F>& m, const Relation& rel) {
  const Quiver& q = m.pres->quiver;
  int s = path_source(q, rel.terms.front().path);
  int t = path_target(q, rel.terms.front().path);
  Mat<F> acc = zero_mat(m.field, m.dim_at(s), m.dim_at(t));
  for (const RelationTerm& term : rel.terms) {
    auto c = m.field.from_fraction(term.coeff.num, term.coeff.den);
    acc = mat_add(m.field, acc, mat_scale(m.field, c, eval_path(m, term.path)));
  }
  return acc;
}

// Indices of the presentation relations whose evaluation is nonzero;
// empty means the point is a valid module structure.
template <class F>
std::vector<int> check_point(const ModulePoint<F>& m) {
  std::vector<int> bad;
  for (std::size_t r = 0; r < m.pres->relations.size(); ++r)
    if (!mat_is_zero(m.field, eval_relation(m, m.pres->relations[r])))
      bad.push_back(static_cast<int>(r));
  return bad;
}

template <class F>
bool is_valid_point(const ModulePoint<F>& m) {
  return check_point(m).empty();
}

// Total-dimension image of a generator of the generator form: the
// block-diagonal projector for an idempotent, the embedded arrow block
// for an arrow generator.
template <class F>
Mat<F> generator_image(const ModulePoint<F>& m, const GeneratorForm& gf, int gen) {
  const int d = m.total_dim();
  Mat<F> img = zero_mat(m.field, d, d);
  if (!gf.is_arrow_gen(gen)) {
    int off = vertex_offset(m.dvec, gen);
    for (int i = 0; i < m.dim_at(gen); ++i) img.at(off + i, off + i) = m.field.one();
  } else {
    int a = gen - gf.num_vertices;
    const Arrow& ar = m.pres->quiver.arrows[static_cast<std::size_t>(a)];
    set_block(img, vertex_offset(m.dvec, ar.source), vertex_offset(m.dvec, ar.target),
              m.arrow[static_cast<std::size_t>(a)]);
  }
  return img;
}

// Block-diagonal direct sum; dimension vectors add per vertex, and each
// vertex block is ordered by the order of `parts`.
template <class F>
ModulePoint<F> direct_sum(const std::vector<ModulePoint<F>>& parts) {
  if (parts.empty()) throw domain_error("direct_sum: empty part list");
  for (std::size_t i = 1; i < parts.size(); ++i) require_compatible(parts[0], parts[i]);
  const auto& q = parts[0].pres->quiver;
  const F& k = parts[0].field;
  DimVec d;
  d.d.assign(static_cast<std::size_t>(q.num_vertices()), 0);
  for (const auto& p : parts)
    for (int v = 0; v < q.num_vertices(); ++v) d.d[static_cast<std::size_t>(v)] += p.dim_at(v);
  std::vector<Mat<F>> arrows;
  for (int a = 0; a < q.num_arrows(); ++a) {
    const Arrow& ar = q.arrows[static_cast<std::size_t>(a)];
    Mat<F> x = zero_mat(k, d.d[static_cast<std::size_t>(ar.source)],
                        d.d[static_cast<std::size_t>(ar.target)]);
    int ro = 0, co = 0;
    for (const auto& p : parts) {
      set_block(x, ro, co, p.arrow[static_cast<std::size_t>(a)]);
      ro += p.dim_at(ar.source);
      co += p.dim_at(ar.target);
    }
    arrows.push_back(std::move(x));
  }
  return make_point(parts[0].pres, k, std::move(d), std::move(arrows));
}

// ---- file format ----------------------------------------------------
//
//   module <presentation-label> over <field>
//   dim <vertex> = <n>        (one line per vertex)
//   arrow <name>:             (then one line per matrix row)
//   <entries separated by spaces>
//
// Entries are integers or fractions p/q; the round trip is exact.

template <class F>
std::string write_module_point(const ModulePoint<F>& m) {
  std::ostringstream os;
  os << "module " << m.pres->label << " over " << m.field.name() << "\n";
  const Quiver& q = m.pres->quiver;
  for (int v = 0; v < q.num_vertices(); ++v)
    os << "dim " << q.vertices[static_cast<std::size_t>(v)] << " = " << m.dim_at(v) << "\n";
  for (int a = 0; a < q.num_arrows(); ++a) {
    const Mat<F>& x = m.arrow[static_cast<std::size_t>(a)];
    os << "arrow " << q.arrows[static_cast<std::size_t>(a)].name << ":\n";
    if (x.cols == 0) continue;  // blank rows would not survive the round trip
    for (int i = 0; i < x.rows; ++i) {
      for (int j = 0; j < x.cols; ++j) os << (j ? " " : "") << m.field.to_string(x.at(i, j));
      os << "\n";
    }
  }
  return os.str();
}

template <class F>
ModulePoint<F> read_module_point(const std::string& text,
                                 std::shared_ptr<const AlgebraPresentation> pres,
                                 const F& field) {
  std::istringstream is(text);
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::size_t h = line.find('#');
      if (h != std::string::npos) line.resize(h);
      bool blank = true;
      for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
      if (!blank) return true;
    }
    return false;
  };
  if (!next_line()) throw domain_error("module file: empty");
  {
    std::istringstream hs(line);
    std::string kw, label, over, fieldname;
    hs >> kw >> label >> over >> fieldname;
    if (kw != "module" || over != "over") throw domain_error("module file: bad header");
    if (label != pres->label)
      throw domain_error("module file: presentation label '" + label + "' does not match '" +
                         pres->label + "'");
    if (fieldname != field.name())
      throw domain_error("module file: field " + fieldname + " does not match " + field.name());
  }
  const Quiver& q = pres->quiver;
  DimVec d;
  d.d.assign(static_cast<std::size_t>(q.num_vertices()), 0);
  for (int v = 0; v < q.num_vertices(); ++v) {
    if (!next_line()) throw domain_error("module file: missing dim line");
    std::istringstream ls(line);
    std::string kw, vname, eq;
    int n = 0;
    ls >> kw >> vname >> eq >> n;
    if (kw != "dim" || eq != "=") throw domain_error("module file: bad dim line: " + line);
    int vi = q.vertex_index(vname);
    if (vi < 0) throw domain_error("module file: unknown vertex '" + vname + "'");
    if (n < 0) throw domain_error("module file: negative dimension");
    d.d[static_cast<std::size_t>(vi)] = n;
  }
  std::vector<Mat<F>> arrows(static_cast<std::size_t>(q.num_arrows()));
  std::vector<bool> seen(static_cast<std::size_t>(q.num_arrows()), false);
  for (int count = 0; count < q.num_arrows(); ++count) {
    if (!next_line()) throw domain_error("module file: missing arrow block");
    std::istringstream ls(line);
    std::string kw, aname;
    ls >> kw >> aname;
    if (kw != "arrow" || aname.empty() || aname.back() != ':')
      throw domain_error("module file: bad arrow header: " + line);
    aname.pop_back();
    int ai = q.arrow_index(aname);
    if (ai < 0) throw domain_error("module file: unknown arrow '" + aname + "'");
    if (seen[static_cast<std::size_t>(ai)])
      throw domain_error("module file: duplicate arrow block '" + aname + "'");
    seen[static_cast<std::size_t>(ai)] = true;
    const Arrow& ar = q.arrows[static_cast<std::size_t>(ai)];
    int r = d.d[static_cast<std::size_t>(ar.source)];
    int c = d.d[static_cast<std::size_t>(ar.target)];
    Mat<F> x = zero_mat(field, r, c);
    for (int i = 0; i < r && c > 0; ++i) {
      if (!next_line()) throw domain_error("module file: truncated matrix for '" + aname + "'");
      std::istringstream rs(line);
      for (int j = 0; j < c; ++j) {
        std::string tok;
        if (!(rs >> tok))
          throw domain_error("module file: short row in matrix for '" + aname + "'");
        x.at(i, j) = field.parse(tok);
      }
      std::string extra;
      if (rs >> extra) throw domain_error("module file: long row in matrix for '" + aname + "'");
    }
    arrows[static_cast<std::size_t>(ai)] = std::move(x);
  }
  if (next_line()) throw domain_error("module file: trailing content: " + line);
  return make_point(std::move(pres), field, std::move(d), std::move(arrows));
}

}  // namespace modvar
