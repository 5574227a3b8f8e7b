#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "modvar/census.hpp"
#include "modvar/deform.hpp"
#include "modvar/family_io.hpp"
#include "modvar/poly_system.hpp"

namespace modvar {

namespace {

using json = nlohmann::ordered_json;

struct Options {
  std::string alg_path;
  std::string m_path, n_path, point_path;
  std::vector<std::string> family_paths;
  std::string field_text = "p";
  std::uint64_t seed = 1;
  int samples = kDefaultTrials;
  int trunc = 0;  // 0 = use the input file's truncation order
  std::uint64_t budget = kCensusBudget;
  std::string out_format = "json";
  std::string dvec_text, da_text, db_text, split_text;
  std::string q_text;
  bool orbits = false;
  bool pairs = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw domain_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

DimVec parse_dvec(const std::string& text, int vertices, const char* what) {
  DimVec d;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    try {
      d.d.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw domain_error(std::string(what) + ": bad entry '" + tok + "'");
    }
  }
  if (d.size() != vertices)
    throw domain_error(std::string(what) + ": expected " + std::to_string(vertices) + " entries");
  for (int x : d.d)
    if (x < 0) throw domain_error(std::string(what) + ": negative entry");
  return d;
}

std::string family_label(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

json stats_json(const GenericStats& st) {
  return json{{"value", st.value},
              {"trials", st.trials},
              {"seed", st.seed},
              {"per_trial", st.per_trial}};
}

void emit(const json& j, const Options& opt, std::ostream& out) {
  if (opt.out_format == "text") {
    for (auto it = j.begin(); it != j.end(); ++it)
      out << it.key() << ": " << it.value().dump() << "\n";
  } else {
    out << j.dump(2) << "\n";
  }
}

template <class F>
json run_command(const std::string& cmd, const Options& opt, const F& field, std::ostream& out);

// Everything below runs under a concrete field type.
template <class F>
struct Session {
  const Options& opt;
  F field;
  std::shared_ptr<const AlgebraPresentation> pres;
  Rng rng;

  Session(const Options& o, const F& f)
      : opt(o), field(f), rng(o.seed) {
    if (o.alg_path.empty()) throw domain_error("--alg is required");
    pres = std::make_shared<AlgebraPresentation>(parse_presentation(read_file(o.alg_path)));
  }

  ModulePoint<F> load_module(const std::string& path) const {
    return read_module_point(read_file(path), pres, field);
  }

  FamilyPtr<F> load_family(const std::string& path) const {
    std::string dir = std::filesystem::path(path).parent_path().string();
    return parse_family(read_file(path), pres, field, dir, family_label(path));
  }

  std::vector<FamilyPtr<F>> load_families() const {
    if (opt.family_paths.empty()) throw domain_error("at least one --family is required");
    std::vector<FamilyPtr<F>> fams;
    for (const auto& p : opt.family_paths) fams.push_back(load_family(p));
    return fams;
  }

  json header(const char* command) const {
    return json{{"command", command},
                {"presentation", pres->label},
                {"field", field.name()},
                {"seed", opt.seed}};
  }
};

template <class F>
json cmd_validate(Session<F>& s) {
  json j = s.header("validate");
  if (!s.opt.m_path.empty()) {
    ModulePoint<F> m = s.load_module(s.opt.m_path);
    auto bad = check_point(m);
    j["module"] = s.opt.m_path;
    j["valid"] = bad.empty();
    j["violated_relations"] = bad;
  } else if (!s.opt.point_path.empty()) {
    auto tp = read_truncated_point(read_file(s.opt.point_path), s.pres, s.field);
    auto rep = check_truncated(tp);
    j["tmodule"] = s.opt.point_path;
    j["valid"] = rep.ok();
    j["violated_relations"] = rep.violated_relations;
    j["constant_term_graded"] = rep.constant_term_graded;
  } else {
    j["valid"] = true;  // presentation parsed and validated
  }
  return j;
}

template <class F>
json cmd_hom(Session<F>& s) {
  ModulePoint<F> m = s.load_module(s.opt.m_path);
  ModulePoint<F> n = s.load_module(s.opt.n_path);
  json j = s.header("hom");
  j["hom"] = hom_dim(m, n);
  return j;
}

template <class F>
json cmd_der(Session<F>& s) {
  ModulePoint<F> m = s.load_module(s.opt.m_path);
  ModulePoint<F> n = s.load_module(s.opt.n_path);
  json j = s.header("der");
  j["der"] = der_dim(m, n);
  return j;
}

template <class F>
json cmd_ext(Session<F>& s) {
  ModulePoint<F> m = s.load_module(s.opt.m_path);
  ModulePoint<F> n = s.load_module(s.opt.n_path);
  json j = s.header("ext");
  j["ext1"] = ext1_dim(m, n);
  j["hom"] = hom_dim(m, n);
  j["der"] = der_dim(m, n);
  j["inner_der"] = inner_der_dim(m, n);
  return j;
}

template <class F>
json cmd_decompose(Session<F>& s) {
  ModulePoint<F> m = s.load_module(s.opt.m_path);
  DecompositionResult<F> dec = decompose(m, s.rng);
  json classes = json::array();
  for (const auto& c : dec.classes)
    classes.push_back(json{{"dvec", c.rep.dvec.d},
                           {"multiplicity", c.multiplicity},
                           {"indecomposability",
                            c.certified ? "certified" : "probabilistic"}});
  json j = s.header("decompose");
  j["classes"] = classes;
  j["summands"] = dec.summands.size();
  return j;
}

template <class F>
json cmd_sum_check(Session<F>& s) {
  auto fams = s.load_families();
  SumComponentReport<F> rep = sum_is_component(fams, s.opt.samples, s.rng);
  json matrix = json::array();
  for (std::size_t i = 0; i < fams.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < fams.size(); ++j)
      row.push_back(i == j ? json(nullptr) : stats_json(rep.ext_matrix[i][j]));
    matrix.push_back(row);
  }
  json j = s.header("sum-check");
  j["labels"] = [&] {
    std::vector<std::string> l;
    for (const auto& f : fams) l.push_back(f->label);
    return l;
  }();
  j["is_component"] = rep.is_component;
  j["generic_ext"] = matrix;
  j["trials"] = s.opt.samples;
  return j;
}

template <class F>
json cmd_dim(Session<F>& s) {
  auto fams = s.load_families();
  json j = s.header("dim");
  json list = json::array();
  for (const auto& f : fams) {
    Rng sub = s.rng.split(list.size());
    FamilyDim fd = family_dim(*f, sub);
    list.push_back(json{{"label", f->label}, {"graded", fd.graded}, {"saturated", fd.saturated}});
  }
  j["families"] = list;
  if (fams.size() > 1) {
    Rng sub = s.rng.split(0x5d);
    j["sum_dim"] = sum_dim(fams, s.opt.samples, sub);
    j["trials"] = s.opt.samples;
  }
  return j;
}

template <class F>
json cmd_graph(Session<F>& s, std::ostream& out, bool* emitted) {
  auto fams = s.load_families();
  ComponentGraph g = component_graph(fams, s.opt.samples, s.rng);
  if (s.opt.out_format == "dot") {
    out << component_graph_dot(g);
    *emitted = true;
    return {};
  }
  json arrows = json::array();
  for (auto [a, b] : g.arrows) arrows.push_back(json::array({g.labels[a], g.labels[b]}));
  json edges = json::array();
  for (auto [a, b] : g.edges) edges.push_back(json::array({g.labels[a], g.labels[b]}));
  json j = s.header("graph");
  j["vertices"] = g.labels;
  j["arrows"] = arrows;
  j["edges"] = edges;
  j["trials"] = s.opt.samples;
  return j;
}

template <class F>
json cmd_deform(Session<F>& s) {
  if (s.opt.point_path.empty()) throw domain_error("deform: --point is required");
  if (s.opt.split_text.empty()) throw domain_error("deform: --split d1,d2 is required");
  auto tp = read_truncated_point(read_file(s.opt.point_path), s.pres, s.field);
  if (s.opt.trunc > 0 && s.opt.trunc != tp.order()) {
    if (s.opt.trunc > tp.order())
      throw domain_error("deform: --trunc exceeds the file's truncation order");
    for (auto& val : tp.gen_values) val.coeff.resize(static_cast<std::size_t>(s.opt.trunc));
  }
  auto rep = check_truncated(tp);
  if (!rep.ok()) throw domain_error("deform: input is not a valid truncated point");
  std::size_t comma = s.opt.split_text.find(',');
  if (comma == std::string::npos) throw domain_error("deform: --split wants d1,d2");
  int d1 = std::stoi(s.opt.split_text.substr(0, comma));
  int d2 = std::stoi(s.opt.split_text.substr(comma + 1));
  SplitData<F> split = make_split(tp, d1, d2);
  auto res = triangularize(tp, split);
  json j = s.header("deform");
  j["trunc"] = tp.order();
  j["split"] = json::array({d1, d2});
  if (std::holds_alternative<TriangularizeSuccess<F>>(res)) {
    j["status"] = "triangularized";
  } else {
    const auto& ob = std::get<ObstructionAt<F>>(res);
    j["status"] = "obstruction";
    j["order"] = ob.order;
  }
  return j;
}

template <class F>
json cmd_census(Session<F>& s) {
  if constexpr (!std::is_same_v<F, PrimeField>) {
    throw domain_error("census: only prime fields are supported");
  } else {
    if (s.opt.dvec_text.empty()) throw domain_error("census: --dvec is required");
    DimVec d = parse_dvec(s.opt.dvec_text, s.pres->quiver.num_vertices(), "--dvec");
    PrimeField fq{2};  // tiny fields only; the default prime would blow the budget
    if (!s.opt.q_text.empty()) {
      FieldSpec fs = parse_field_spec(s.opt.q_text);
      if (fs.kind != FieldSpec::Kind::prime) throw domain_error("census: --q must be a prime");
      fq = PrimeField{fs.p};
    }
    auto points = enumerate_points(s.pres, d, fq, s.opt.budget);
    json j = s.header("census");
    j["field"] = fq.name();
    j["dvec"] = d.d;
    j["q"] = fq.p;
    j["point_count"] = points.size();
    if (s.opt.orbits) j["orbit_count"] = count_orbits(points, s.opt.budget);
    if (s.opt.pairs) {
      json pairs = json::array();
      for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t jdx = 0; jdx < points.size(); ++jdx) {
          BruteDims bd = brute_dims(points[i], points[jdx], s.opt.budget);
          int fast_hom = hom_dim(points[i], points[jdx]);
          int fast_der = der_dim(points[i], points[jdx]);
          if (bd.hom != fast_hom || bd.der != fast_der)
            throw internal_error("census: enumeration disagrees with the solver");
          pairs.push_back(json{{"i", i}, {"j", jdx}, {"hom", bd.hom}, {"der", bd.der}});
        }
      j["pairs"] = pairs;
    }
    return j;
  }
}

template <class F>
json cmd_euler_check(Session<F>& s) {
  if (!s.pres->relations.empty())
    throw domain_error("euler-check: presentation must be relation-free");
  if (s.opt.da_text.empty() || s.opt.db_text.empty())
    throw domain_error("euler-check: --da and --db are required");
  DimVec a = parse_dvec(s.opt.da_text, s.pres->quiver.num_vertices(), "--da");
  DimVec b = parse_dvec(s.opt.db_text, s.pres->quiver.num_vertices(), "--db");
  FamilyPtr<F> fa = make_repspace<F>("a", s.pres, s.field, a);
  FamilyPtr<F> fb = make_repspace<F>("b", s.pres, s.field, b);
  Rng r1 = s.rng.split(1), r2 = s.rng.split(2);
  GenericStats h = generic_hom(*fa, *fb, s.opt.samples, r1);
  GenericStats e = generic_ext(*fa, *fb, s.opt.samples, r2);
  long long ringel = ringel_form(s.pres->quiver, a, b);
  json j = s.header("euler-check");
  j["da"] = a.d;
  j["db"] = b.d;
  j["hom"] = stats_json(h);
  j["ext1"] = stats_json(e);
  j["ringel"] = ringel;
  j["match"] = (static_cast<long long>(h.value) - e.value == ringel);
  return j;
}

template <class F>
int dispatch(const std::string& cmd, const Options& opt, const F& field, std::ostream& out) {
  Session<F> s(opt, field);
  json j;
  bool emitted = false;
  if (cmd == "validate") j = cmd_validate(s);
  else if (cmd == "hom") j = cmd_hom(s);
  else if (cmd == "der") j = cmd_der(s);
  else if (cmd == "ext") j = cmd_ext(s);
  else if (cmd == "decompose") j = cmd_decompose(s);
  else if (cmd == "sum-check") j = cmd_sum_check(s);
  else if (cmd == "dim") j = cmd_dim(s);
  else if (cmd == "graph") j = cmd_graph(s, out, &emitted);
  else if (cmd == "deform") j = cmd_deform(s);
  else if (cmd == "census") j = cmd_census(s);
  else if (cmd == "euler-check") j = cmd_euler_check(s);
  else throw domain_error("unknown subcommand '" + cmd + "'");
  if (!emitted) emit(j, opt, out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact randomized invariants of quiver module varieties"};
  app.require_subcommand(1);
  Options opt;

  std::vector<CLI::App*> subs;
  for (const char* name : {"validate", "hom", "der", "ext", "decompose", "sum-check", "dim",
                           "graph", "deform", "census", "euler-check"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--alg", opt.alg_path, "presentation file");
    sub->add_option("--m", opt.m_path, "module point file");
    sub->add_option("--n", opt.n_path, "module point file");
    sub->add_option("--point", opt.point_path, "truncated point file");
    sub->add_option("--family", opt.family_paths, "family expression file (repeatable)");
    sub->add_option("--field", opt.field_text, "p | rat | <prime>");
    sub->add_option("--seed", opt.seed, "random seed");
    sub->add_option("--samples", opt.samples, "sampling trials");
    sub->add_option("--trunc", opt.trunc, "truncation order");
    sub->add_option("--budget", opt.budget, "census enumeration budget");
    sub->add_option("--out", opt.out_format, "json | dot | text");
    sub->add_option("--dvec", opt.dvec_text, "dimension vector, comma separated");
    sub->add_option("--da", opt.da_text, "first dimension vector");
    sub->add_option("--db", opt.db_text, "second dimension vector");
    sub->add_option("--split", opt.split_text, "block sizes d1,d2");
    sub->add_option("--q", opt.q_text, "census field size (small prime)");
    sub->add_flag("--orbits", opt.orbits, "count base-change orbits");
    sub->add_flag("--pairs", opt.pairs, "brute-force hom/der for all point pairs");
    subs.push_back(sub);
  }

  std::vector<const char*> argv;
  argv.push_back("modvar");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return 64;
  }

  try {
    std::string cmd = app.get_subcommands().front()->get_name();
    FieldSpec fs = parse_field_spec(opt.field_text);
    return with_field(fs, [&](auto field) { return dispatch(cmd, opt, field, out); });
  } catch (const internal_error& e) {
    err << "internal fault: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace modvar
