#include "modvar/presentation_io.hpp"

#include <cctype>
#include <sstream>

namespace modvar {

namespace {

struct Token {
  std::string text;
  int line = 0;
  int col = 0;
};

bool is_punct(char c) { return c == ':' || c == ';' || c == '*' || c == '+' || c == '-'; }

// Splits into identifier / number / punctuation tokens with positions.
// "->" is kept as a single token.
std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(text[i++]);
      continue;
    }
    if (c == '\n') {
      out.push_back({"\n", line, col});
      advance(c);
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(c);
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({"->", line, col});
      advance(c);
      advance('>');
      i += 2;
      continue;
    }
    if (is_punct(c)) {
      out.push_back({std::string(1, c), line, col});
      advance(c);
      ++i;
      continue;
    }
    Token t{"", line, col};
    while (i < text.size()) {
      c = text[i];
      if (std::isspace(static_cast<unsigned char>(c)) || is_punct(c) || c == '#') break;
      if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') break;
      t.text.push_back(c);
      advance(c);
      ++i;
    }
    out.push_back(std::move(t));
  }
  out.push_back({"\n", line, col});  // sentinel newline keeps line logic uniform
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

  AlgebraPresentation run() {
    AlgebraPresentation p;
    skip_newlines();
    expect_word("algebra");
    p.label = take_identifier("algebra label");
    expect_newline();

    skip_newlines();
    expect_word("vertices");
    expect(":");
    while (!at_newline()) p.quiver.vertices.push_back(take_identifier("vertex name"));
    expect_newline();

    skip_newlines();
    if (peek_word("arrows")) {
      next();
      expect(":");
      parse_arrows(p);
      expect_newline();
    }

    skip_newlines();
    if (peek_word("relations")) {
      next();
      expect(":");
      parse_relations(p);
    }
    skip_newlines();
    if (pos_ < toks_.size()) fail("unexpected trailing input");
    validate_presentation(p);
    return p;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = pos_ < toks_.size() ? toks_[pos_] : toks_.back();
    throw parse_error(msg, t.line, t.col);
  }

  bool at_newline() const { return pos_ < toks_.size() && toks_[pos_].text == "\n"; }
  bool at_end() const { return pos_ >= toks_.size(); }

  const Token& cur() const {
    if (at_end()) throw parse_error("unexpected end of input", toks_.back().line, toks_.back().col);
    return toks_[pos_];
  }

  void next() { ++pos_; }

  void skip_newlines() {
    while (!at_end() && at_newline()) next();
  }

  void expect_newline() {
    if (!at_newline()) fail("expected end of line, found '" + cur().text + "'");
    next();
  }

  void expect(const std::string& s) {
    if (at_end() || cur().text != s) fail("expected '" + s + "'");
    next();
  }

  void expect_word(const std::string& s) {
    if (at_end() || cur().text != s) fail("expected keyword '" + s + "'");
    next();
  }

  bool peek_word(const std::string& s) const { return !at_end() && toks_[pos_].text == s; }

  std::string take_identifier(const std::string& what) {
    if (at_end() || at_newline() || is_punct(cur().text[0]) || cur().text == "->")
      fail("expected " + what);
    std::string s = cur().text;
    next();
    return s;
  }

  void parse_arrows(AlgebraPresentation& p) {
    if (at_newline()) return;  // empty section
    while (true) {
      Token name_tok = cur();
      std::string name = take_identifier("arrow name");
      expect(":");
      Token src_tok = cur();
      std::string src = take_identifier("source vertex");
      expect("->");
      Token dst_tok = cur();
      std::string dst = take_identifier("target vertex");
      int s = p.quiver.vertex_index(src);
      if (s < 0) throw parse_error("unknown vertex '" + src + "'", src_tok.line, src_tok.col);
      int t = p.quiver.vertex_index(dst);
      if (t < 0) throw parse_error("unknown vertex '" + dst + "'", dst_tok.line, dst_tok.col);
      if (p.quiver.arrow_index(name) >= 0 || p.quiver.vertex_index(name) >= 0)
        throw parse_error("duplicate name '" + name + "'", name_tok.line, name_tok.col);
      p.quiver.arrows.push_back({name, s, t});
      if (at_newline()) break;
      expect(";");
      if (at_newline()) break;  // tolerate trailing ';'
    }
  }

  bool token_is_number(const std::string& s) const {
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/') return false;
    return std::isdigit(static_cast<unsigned char>(s[0]));
  }

  Coeff parse_coeff_token(const std::string& s) {
    Coeff c;
    std::size_t slash = s.find('/');
    try {
      if (slash == std::string::npos) {
        c.num = std::stoll(s);
        c.den = 1;
      } else {
        c.num = std::stoll(s.substr(0, slash));
        c.den = std::stoll(s.substr(slash + 1));
      }
    } catch (const std::exception&) {
      fail("bad coefficient '" + s + "'");
    }
    if (c.den == 0) fail("coefficient with zero denominator");
    return c;
  }

  // term = [coeff *] arrow (* arrow)*
  RelationTerm parse_term(const AlgebraPresentation& p, bool negate) {
    RelationTerm term;
    term.coeff = {1, 1};
    if (token_is_number(cur().text)) {
      term.coeff = parse_coeff_token(cur().text);
      next();
      expect("*");
    }
    while (true) {
      Token t = cur();
      std::string name = take_identifier("arrow name in relation");
      int a = p.quiver.arrow_index(name);
      if (a < 0) throw parse_error("unknown arrow '" + name + "'", t.line, t.col);
      term.path.arrows.push_back(a);
      if (!at_end() && cur().text == "*") {
        next();
        continue;
      }
      break;
    }
    if (negate) term.coeff.num = -term.coeff.num;
    return term;
  }

  void parse_relations(AlgebraPresentation& p) {
    skip_newlines_in_section();
    while (!at_end()) {
      if (at_newline()) {
        skip_newlines_in_section();
        if (at_end()) break;
      }
      Relation rel;
      bool neg = false;
      if (cur().text == "-") {
        neg = true;
        next();
      }
      rel.terms.push_back(parse_term(p, neg));
      while (!at_end() && (cur().text == "+" || cur().text == "-")) {
        bool minus = cur().text == "-";
        next();
        rel.terms.push_back(parse_term(p, minus));
      }
      p.relations.push_back(std::move(rel));
      if (at_end()) break;
      if (cur().text == ";") {
        next();
        continue;
      }
      if (at_newline()) {
        skip_newlines_in_section();
        continue;
      }
      fail("expected ';' or end of line after relation");
    }
  }

  void skip_newlines_in_section() {
    while (!at_end() && at_newline()) next();
  }
};

std::string coeff_str(const Coeff& c) {
  std::string s = std::to_string(c.num);
  if (c.den != 1) s += "/" + std::to_string(c.den);
  return s;
}

}  // namespace

AlgebraPresentation parse_presentation(const std::string& text) {
  return Parser(text).run();
}

std::string print_presentation(const AlgebraPresentation& p) {
  std::ostringstream os;
  os << "algebra " << p.label << "\n";
  os << "vertices:";
  for (const auto& v : p.quiver.vertices) os << " " << v;
  os << "\n";
  os << "arrows:";
  for (std::size_t i = 0; i < p.quiver.arrows.size(); ++i) {
    const Arrow& a = p.quiver.arrows[i];
    os << (i ? " ; " : " ") << a.name << ": "
       << p.quiver.vertices[static_cast<std::size_t>(a.source)] << " -> "
       << p.quiver.vertices[static_cast<std::size_t>(a.target)];
  }
  os << "\n";
  os << "relations:";
  for (std::size_t r = 0; r < p.relations.size(); ++r) {
    os << (r ? " ; " : " ");
    const Relation& rel = p.relations[r];
    for (std::size_t t = 0; t < rel.terms.size(); ++t) {
      const RelationTerm& term = rel.terms[t];
      Coeff c = term.coeff;
      if (t == 0) {
        if (c.num < 0) {
          os << "-";
          c.num = -c.num;
        }
      } else {
        os << (c.num < 0 ? " - " : " + ");
        c.num = std::abs(c.num);
      }
      if (!(c.num == 1 && c.den == 1)) os << coeff_str(c) << "*";
      for (std::size_t j = 0; j < term.path.arrows.size(); ++j) {
        if (j) os << "*";
        os << p.quiver.arrows[static_cast<std::size_t>(term.path.arrows[j])].name;
      }
    }
  }
  os << "\n";
  return os.str();
}

}  // namespace modvar
