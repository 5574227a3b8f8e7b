#pragma once

#include <fstream>

#include "modvar/family.hpp"

namespace modvar {

namespace detail {

struct SexprToken {
  std::string text;
  bool is_paren = false;
};

inline std::vector<SexprToken> sexpr_tokenize(const std::string& text) {
  std::vector<SexprToken> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == ';' || c == '#') {  // comment to end of line
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == '(' || c == ')') {
      out.push_back({std::string(1, c), true});
      ++i;
      continue;
    }
    if (c == '"') {
      std::string s;
      ++i;
      while (i < text.size() && text[i] != '"') s.push_back(text[i++]);
      if (i >= text.size()) throw domain_error("family file: unterminated string");
      ++i;
      out.push_back({std::move(s), false});
      continue;
    }
    std::string s;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
           text[i] != '(' && text[i] != ')')
      s.push_back(text[i++]);
    out.push_back({std::move(s), false});
  }
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw domain_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace detail

// Family expression syntax:
//   (orbit "point.mod")
//   (repspace d1 ... dn)
//   (slice (d1 ... dn) zero: a b ...)      zero: section may be absent
//   (sum expr expr ...)
//   (extfam quotient-expr sub-expr)
// Module files referenced by orbit are resolved relative to base_dir.
template <class F>
class FamilyParser {
 public:
  FamilyParser(std::shared_ptr<const AlgebraPresentation> pres, const F& field,
               std::string base_dir)
      : pres_(std::move(pres)), field_(field), base_dir_(std::move(base_dir)) {}

  FamilyPtr<F> parse(const std::string& text, const std::string& label) {
    toks_ = detail::sexpr_tokenize(text);
    pos_ = 0;
    label_ = label;
    counter_ = 0;
    FamilyPtr<F> f = parse_expr(label);
    if (pos_ != toks_.size()) throw domain_error("family file: trailing tokens");
    return f;
  }

 private:
  std::shared_ptr<const AlgebraPresentation> pres_;
  F field_;
  std::string base_dir_;
  std::vector<detail::SexprToken> toks_;
  std::size_t pos_ = 0;
  std::string label_;
  int counter_ = 0;

  const detail::SexprToken& cur() const {
    if (pos_ >= toks_.size()) throw domain_error("family file: unexpected end of input");
    return toks_[pos_];
  }

  void expect(const char* t) {
    if (cur().text != t) throw domain_error("family file: expected '" + std::string(t) + "'");
    ++pos_;
  }

  std::string sub_label() { return label_ + "#" + std::to_string(++counter_); }

  DimVec parse_dims_until_paren() {
    DimVec d;
    while (cur().text != ")") {
      try {
        d.d.push_back(std::stoi(cur().text));
      } catch (const std::exception&) {
        throw domain_error("family file: bad dimension '" + cur().text + "'");
      }
      ++pos_;
    }
    if (d.size() != pres_->quiver.num_vertices())
      throw domain_error("family file: dimension vector does not match vertex count");
    return d;
  }

  FamilyPtr<F> parse_expr(const std::string& label) {
    expect("(");
    std::string head = cur().text;
    ++pos_;
    FamilyPtr<F> result;
    if (head == "orbit") {
      std::string path = cur().text;
      ++pos_;
      std::string full = base_dir_.empty() ? path : base_dir_ + "/" + path;
      ModulePoint<F> m = read_module_point(detail::read_text_file(full), pres_, field_);
      result = make_orbit(label, std::move(m));
    } else if (head == "repspace") {
      DimVec d = parse_dims_until_paren();
      result = make_repspace(label, pres_, field_, std::move(d));
    } else if (head == "slice") {
      expect("(");
      DimVec d = parse_dims_until_paren();
      expect(")");
      std::vector<int> zeroed;
      if (cur().text == "zero:") {
        ++pos_;
        while (cur().text != ")") {
          int a = pres_->quiver.arrow_index(cur().text);
          if (a < 0) throw domain_error("family file: unknown arrow '" + cur().text + "'");
          zeroed.push_back(a);
          ++pos_;
        }
      }
      result = make_slice(label, pres_, field_, std::move(d), std::move(zeroed));
    } else if (head == "sum") {
      std::vector<FamilyPtr<F>> children;
      while (cur().text != ")") children.push_back(parse_expr(sub_label()));
      result = make_sum(label, std::move(children));
    } else if (head == "extfam") {
      FamilyPtr<F> quot = parse_expr(sub_label());
      FamilyPtr<F> sub = parse_expr(sub_label());
      result = make_extfam(label, std::move(quot), std::move(sub));
    } else {
      throw domain_error("family file: unknown family kind '" + head + "'");
    }
    expect(")");
    return result;
  }
};

template <class F>
FamilyPtr<F> parse_family(const std::string& text,
                          std::shared_ptr<const AlgebraPresentation> pres, const F& field,
                          const std::string& base_dir, const std::string& label) {
  FamilyParser<F> p(std::move(pres), field, base_dir);
  return p.parse(text, label);
}

}  // namespace modvar
