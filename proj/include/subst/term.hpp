#pragma once

// Terms of the substitution-algebra language and their modal twin.
//
//   term    := or
//   or      := and ('|' and)*
//   and     := unary ('&' unary)*
//   unary   := '~' unary | 's[' i ',' j ']' unary | 's[' i '/' j ']' unary | atom
//   atom    := 'x'N | '0' | '1' | 'd[' i ',' j ']' | '(' term ')'
//
//   formula := imp ('<->' imp)*
//   imp     := or ('->' imp)?
//   or/and  := as above with '|' and '&'
//   unary   := '!' unary | '<' i ',' j '>' unary | '<' i '/' j '>' unary
//            | '[' i ',' j ']' unary | '[' i '/' j ']' unary | atom
//   atom    := 'p'N | 'true' | 'false' | 'd[' i ',' j ']' | '(' formula ')'

#include "subst/core.hpp"
#include "subst/perm.hpp"

#include <cctype>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace subst {
class Term {
 public:
  enum class Kind : std::uint8_t { Var, Top, Bottom, Not, And, Or, Subst, Diag };

  static Term var(int i) { return make(Kind::Var, i, 0); }
  static Term top() { return make(Kind::Top, 0, 0); }
  static Term bottom() { return make(Kind::Bottom, 0, 0); }
  static Term diag(int i, int j) { return make(Kind::Diag, i, j); }
  static Term negate(Term a) { return make(Kind::Not, 0, 0, {}, std::move(a.node_)); }
  static Term conj(Term a, Term b) { return make(Kind::And, 0, 0, {}, std::move(a.node_), std::move(b.node_)); }
  static Term disj(Term a, Term b) { return make(Kind::Or, 0, 0, {}, std::move(a.node_), std::move(b.node_)); }
  static Term subst(Letter l, Term a) { return make(Kind::Subst, l.i, l.j, l, std::move(a.node_)); }
  /// s_w t for a whole word: the leftmost letter is outermost.
  static Term apply_word(const SubstWord& w, Term t) {
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) t = subst(*it, std::move(t));
    return t;
  }

  Kind kind() const { return node_->kind; }
  int index() const { return node_->a; }
  int diag_i() const { return node_->a; }
  int diag_j() const { return node_->b; }
  const Letter& letter() const { return node_->letter; }
  Term child() const { return Term(node_->left); }
  Term left() const { return Term(node_->left); }
  Term right() const { return Term(node_->right); }

  bool operator==(const Term& o) const {
    if (node_ == o.node_) return true;
    if (kind() != o.kind()) return false;
    switch (kind()) {
      case Kind::Var: return index() == o.index();
      case Kind::Top:
      case Kind::Bottom: return true;
      case Kind::Diag: return diag_i() == o.diag_i() && diag_j() == o.diag_j();
      case Kind::Not: return child() == o.child();
      case Kind::Subst: return letter() == o.letter() && child() == o.child();
      case Kind::And:
      case Kind::Or: return left() == o.left() && right() == o.right();
    }
    return false;
  }

  std::size_t depth() const {
    switch (kind()) {
      case Kind::Not:
      case Kind::Subst: return 1 + child().depth();
      case Kind::And:
      case Kind::Or: return 1 + std::max(left().depth(), right().depth());
      default: return 0;
    }
  }

  std::size_t size() const {
    switch (kind()) {
      case Kind::Not:
      case Kind::Subst: return 1 + child().size();
      case Kind::And:
      case Kind::Or: return 1 + left().size() + right().size();
      default: return 1;
    }
  }

  Term() : Term(top()) {}

 private:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;
  struct Node {
    Kind kind;
    int a = 0, b = 0;
    Letter letter{};
    NodePtr left, right;
  };
  explicit Term(NodePtr n) : node_(std::move(n)) {}
  static Term make(Kind k, int a, int b, Letter l = {}, NodePtr left = nullptr, NodePtr right = nullptr) {
    return Term(std::make_shared<const Node>(Node{k, a, b, l, std::move(left), std::move(right)}));
  }

  NodePtr node_;
};

struct Equation {
  Term lhs;
  Term rhs;

  bool operator==(const Equation& o) const { return lhs == o.lhs && rhs == o.rhs; }
};

struct QuasiEquation {
  std::vector<Equation> premises;
  Equation conclusion;
};

class Formula {
 public:
  enum class Kind : std::uint8_t { Prop, True, False, Not, And, Or, Implies, Iff, Diamond, Box, Diag };

  static Formula prop(int i) { return make(Kind::Prop, i, 0); }
  static Formula truth() { return make(Kind::True, 0, 0); }
  static Formula falsity() { return make(Kind::False, 0, 0); }
  static Formula diag(int i, int j) { return make(Kind::Diag, i, j); }
  static Formula negate(Formula a) { return make(Kind::Not, 0, 0, {}, std::move(a.node_)); }
  static Formula conj(Formula a, Formula b) { return make(Kind::And, 0, 0, {}, std::move(a.node_), std::move(b.node_)); }
  static Formula disj(Formula a, Formula b) { return make(Kind::Or, 0, 0, {}, std::move(a.node_), std::move(b.node_)); }
  static Formula implies(Formula a, Formula b) { return make(Kind::Implies, 0, 0, {}, std::move(a.node_), std::move(b.node_)); }
  static Formula iff(Formula a, Formula b) { return make(Kind::Iff, 0, 0, {}, std::move(a.node_), std::move(b.node_)); }
  static Formula diamond(Letter l, Formula a) { return make(Kind::Diamond, 0, 0, l, std::move(a.node_)); }
  static Formula box(Letter l, Formula a) { return make(Kind::Box, 0, 0, l, std::move(a.node_)); }

  Kind kind() const { return node_->kind; }
  int index() const { return node_->a; }
  int diag_i() const { return node_->a; }
  int diag_j() const { return node_->b; }
  const Letter& letter() const { return node_->letter; }
  Formula child() const { return Formula(node_->left); }
  Formula left() const { return Formula(node_->left); }
  Formula right() const { return Formula(node_->right); }

  bool operator==(const Formula& o) const {
    if (node_ == o.node_) return true;
    if (kind() != o.kind()) return false;
    switch (kind()) {
      case Kind::Prop: return index() == o.index();
      case Kind::True:
      case Kind::False: return true;
      case Kind::Diag: return diag_i() == o.diag_i() && diag_j() == o.diag_j();
      case Kind::Not: return child() == o.child();
      case Kind::Diamond:
      case Kind::Box: return letter() == o.letter() && child() == o.child();
      default: return left() == o.left() && right() == o.right();
    }
  }

  Formula() : Formula(truth()) {}

 private:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;
  struct Node {
    Kind kind;
    int a = 0, b = 0;
    Letter letter{};
    NodePtr left, right;
  };
  explicit Formula(NodePtr n) : node_(std::move(n)) {}
  static Formula make(Kind k, int a, int b, Letter l = {}, NodePtr left = nullptr, NodePtr right = nullptr) {
    return Formula(std::make_shared<const Node>(Node{k, a, b, l, std::move(left), std::move(right)}));
  }

  NodePtr node_;
};

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline int term_prec(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Or: return 1;
    case Term::Kind::And: return 2;
    default: return 3;
  }
}

inline void print_term(const Term& t, std::string& out) {
  auto sub = [&](const Term& c, int min_prec) {
    if (term_prec(c) < min_prec) {
      out += '(';
      print_term(c, out);
      out += ')';
    } else {
      print_term(c, out);
    }
  };
  switch (t.kind()) {
    case Term::Kind::Var: out += "x" + std::to_string(t.index()); break;
    case Term::Kind::Top: out += "1"; break;
    case Term::Kind::Bottom: out += "0"; break;
    case Term::Kind::Diag: out += "d[" + std::to_string(t.diag_i()) + "," + std::to_string(t.diag_j()) + "]"; break;
    case Term::Kind::Not: out += "~"; sub(t.child(), 3); break;
    case Term::Kind::Subst: out += t.letter().to_string() + " "; sub(t.child(), 3); break;
    case Term::Kind::And: sub(t.left(), 2); out += " & "; sub(t.right(), 3); break;
    case Term::Kind::Or: sub(t.left(), 1); out += " | "; sub(t.right(), 2); break;
  }
}

inline int formula_prec(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Iff: return 0;
    case Formula::Kind::Implies: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    default: return 4;
  }
}

inline std::string modal_tag(const Letter& l, bool box) {
  std::string s = box ? "[" : "<";
  s += std::to_string(l.i) + (l.is_transpose() ? "," : "/") + std::to_string(l.j);
  return s + (box ? "]" : ">");
}

inline void print_formula(const Formula& f, std::string& out) {
  auto sub = [&](const Formula& c, int min_prec) {
    if (formula_prec(c) < min_prec) {
      out += '(';
      print_formula(c, out);
      out += ')';
    } else {
      print_formula(c, out);
    }
  };
  switch (f.kind()) {
    case Formula::Kind::Prop: out += "p" + std::to_string(f.index()); break;
    case Formula::Kind::True: out += "true"; break;
    case Formula::Kind::False: out += "false"; break;
    case Formula::Kind::Diag: out += "d[" + std::to_string(f.diag_i()) + "," + std::to_string(f.diag_j()) + "]"; break;
    case Formula::Kind::Not: out += "!"; sub(f.child(), 4); break;
    case Formula::Kind::Diamond: out += modal_tag(f.letter(), false) + " "; sub(f.child(), 4); break;
    case Formula::Kind::Box: out += modal_tag(f.letter(), true) + " "; sub(f.child(), 4); break;
    case Formula::Kind::And: sub(f.left(), 3); out += " & "; sub(f.right(), 4); break;
    case Formula::Kind::Or: sub(f.left(), 2); out += " | "; sub(f.right(), 3); break;
    case Formula::Kind::Implies: sub(f.left(), 2); out += " -> "; sub(f.right(), 1); break;
    case Formula::Kind::Iff: sub(f.left(), 0); out += " <-> "; sub(f.right(), 1); break;
  }
}

}  // namespace detail

inline std::string to_string(const Term& t) {
  std::string s;
  detail::print_term(t, s);
  return s;
}
inline std::string to_string(const Formula& f) {
  std::string s;
  detail::print_formula(f, s);
  return s;
}
inline std::string to_string(const Equation& e) { return to_string(e.lhs) + " = " + to_string(e.rhs); }
inline std::string to_string(const QuasiEquation& q) {
  std::string s;
  for (std::size_t k = 0; k < q.premises.size(); ++k) {
    if (k) s += " ; ";
    s += to_string(q.premises[k]);
  }
  return s + (q.premises.empty() ? "=> " : " => ") + to_string(q.conclusion);
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip();
    return pos_ >= text_.size();
  }
  bool peek(std::string_view tok) {
    skip();
    return text_.substr(pos_, tok.size()) == tok;
  }
  char peek_char() {
    skip();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  char peek_char_at(std::size_t off) const { return pos_ + off < text_.size() ? text_[pos_ + off] : '\0'; }
  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }
  void expect(std::string_view tok) {
    if (!accept(tok)) throw ParseError("expected '" + std::string(tok) + "'", pos_);
  }
  int number() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("expected a number", pos_);
    if (pos_ - start > 6) throw ParseError("number too large", start);
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
  }
  std::size_t pos() const { return pos_; }
  void advance(std::size_t k) { pos_ += k; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

class TermParser {
 public:
  TermParser(Lexer& lx, Signature sig) : lx_(lx), sig_(sig) {}

  Term term() {
    Term t = conj();
    while (lx_.accept("|")) t = Term::disj(t, conj());
    return t;
  }

 private:
  Term conj() {
    Term t = unary();
    while (lx_.accept("&")) t = Term::conj(t, unary());
    return t;
  }

  void check_index(int i, std::size_t at) {
    if (i >= sig_.dim) throw ParseError("index " + std::to_string(i) + " out of range for dimension " + std::to_string(sig_.dim), at);
  }

  Term unary() {
    if (lx_.accept("~")) return Term::negate(unary());
    if (lx_.peek("s[")) {
      std::size_t at = lx_.pos();
      lx_.expect("s[");
      int i = lx_.number();
      bool repl;
      if (lx_.accept(",")) repl = false;
      else if (lx_.accept("/")) repl = true;
      else throw ParseError("expected ',' or '/'", lx_.pos());
      int j = lx_.number();
      lx_.expect("]");
      check_index(i, at);
      check_index(j, at);
      if (i == j) throw ParseError("substitution indices must differ", at);
      if (repl && !sig_.replacements()) throw ParseError("replacement s[" + std::to_string(i) + "/" + std::to_string(j) + "] not in signature " + to_string(sig_.kind), at);
      return Term::subst(repl ? Letter::replace(i, j) : Letter::transpose(i, j), unary());
    }
    return atom();
  }

  Term atom() {
    std::size_t at = lx_.pos();
    if (lx_.accept("(")) {
      Term t = term();
      lx_.expect(")");
      return t;
    }
    if (lx_.peek("d[")) {
      lx_.expect("d[");
      int i = lx_.number();
      lx_.expect(",");
      int j = lx_.number();
      lx_.expect("]");
      check_index(i, at);
      check_index(j, at);
      if (!sig_.diagonals()) throw ParseError("diagonal d[" + std::to_string(i) + "," + std::to_string(j) + "] not in signature " + to_string(sig_.kind), at);
      return Term::diag(i, j);
    }
    char c = lx_.peek_char();
    if (c == 'x') {
      lx_.advance(1);
      return Term::var(lx_.number());
    }
    if (c == '0' && !std::isdigit(static_cast<unsigned char>(lx_.peek_char_at(1)))) {
      lx_.advance(1);
      return Term::bottom();
    }
    if (c == '1' && !std::isdigit(static_cast<unsigned char>(lx_.peek_char_at(1)))) {
      lx_.advance(1);
      return Term::top();
    }
    throw ParseError("expected a term", lx_.pos());
  }

  Lexer& lx_;
  Signature sig_;
};

class FormulaParser {
 public:
  FormulaParser(Lexer& lx, Signature sig) : lx_(lx), sig_(sig) {}

  Formula formula() {
    Formula f = imp();
    while (lx_.accept("<->")) f = Formula::iff(f, imp());
    return f;
  }

 private:
  Formula imp() {
    Formula f = disj();
    if (lx_.accept("->")) return Formula::implies(f, imp());
    return f;
  }
  Formula disj() {
    Formula f = conj();
    while (lx_.accept("|")) f = Formula::disj(f, conj());
    return f;
  }
  Formula conj() {
    Formula f = unary();
    while (lx_.accept("&")) f = Formula::conj(f, unary());
    return f;
  }

  void check_index(int i, std::size_t at) {
    if (i >= sig_.dim) throw ParseError("index " + std::to_string(i) + " out of range for dimension " + std::to_string(sig_.dim), at);
  }

  Letter modal(char close) {
    std::size_t at = lx_.pos();
    int i = lx_.number();
    bool repl;
    if (lx_.accept(",")) repl = false;
    else if (lx_.accept("/")) repl = true;
    else throw ParseError("expected ',' or '/'", lx_.pos());
    int j = lx_.number();
    lx_.expect(std::string(1, close));
    check_index(i, at);
    check_index(j, at);
    if (i == j) throw ParseError("modality indices must differ", at);
    if (repl && !sig_.replacements()) throw ParseError("replacement modality not in signature " + to_string(sig_.kind), at);
    return repl ? Letter::replace(i, j) : Letter::transpose(i, j);
  }

  Formula unary() {
    if (lx_.accept("!")) return Formula::negate(unary());
    if (lx_.peek_char() == '<' && std::isdigit(static_cast<unsigned char>(lx_.peek_char_at(1)))) {
      lx_.advance(1);
      Letter l = modal('>');
      return Formula::diamond(l, unary());
    }
    if (lx_.peek_char() == '[') {
      lx_.advance(1);
      Letter l = modal(']');
      return Formula::box(l, unary());
    }
    return atom();
  }

  Formula atom() {
    std::size_t at = lx_.pos();
    if (lx_.accept("(")) {
      Formula f = formula();
      lx_.expect(")");
      return f;
    }
    if (lx_.accept("true")) return Formula::truth();
    if (lx_.accept("false")) return Formula::falsity();
    if (lx_.peek("d[")) {
      lx_.expect("d[");
      int i = lx_.number();
      lx_.expect(",");
      int j = lx_.number();
      lx_.expect("]");
      check_index(i, at);
      check_index(j, at);
      if (!sig_.diagonals()) throw ParseError("diagonal not in signature " + to_string(sig_.kind), at);
      return Formula::diag(i, j);
    }
    if (lx_.peek_char() == 'p') {
      lx_.advance(1);
      return Formula::prop(lx_.number());
    }
    throw ParseError("expected a formula", lx_.pos());
  }

  Lexer& lx_;
  Signature sig_;
};

}  // namespace detail

inline Term parse_term(std::string_view text, Signature sig) {
  detail::Lexer lx(text);
  detail::TermParser p(lx, sig);
  Term t = p.term();
  if (!lx.at_end()) throw ParseError("unexpected trailing input", lx.pos());
  return t;
}

inline Formula parse_formula(std::string_view text, Signature sig) {
  detail::Lexer lx(text);
  detail::FormulaParser p(lx, sig);
  Formula f = p.formula();
  if (!lx.at_end()) throw ParseError("unexpected trailing input", lx.pos());
  return f;
}

namespace detail {
inline Equation parse_equation_at(Lexer& lx, Signature sig) {
  TermParser p(lx, sig);
  Term l = p.term();
  lx.expect("=");
  Term r = p.term();
  return {l, r};
}
}  // namespace detail

inline Equation parse_equation(std::string_view text, Signature sig) {
  detail::Lexer lx(text);
  auto e = detail::parse_equation_at(lx, sig);
  if (!lx.at_end()) throw ParseError("unexpected trailing input", lx.pos());
  return e;
}

/// `t1 = u1 ; ... ; tk = uk => t = u`; an empty premise list is written `=> t = u`.
inline QuasiEquation parse_quasi_equation(std::string_view text, Signature sig) {
  detail::Lexer lx(text);
  QuasiEquation q;
  if (!lx.accept("=>")) {
    q.premises.push_back(detail::parse_equation_at(lx, sig));
    while (lx.accept(";")) q.premises.push_back(detail::parse_equation_at(lx, sig));
    lx.expect("=>");
  }
  q.conclusion = detail::parse_equation_at(lx, sig);
  if (!lx.at_end()) throw ParseError("unexpected trailing input", lx.pos());
  return q;
}

inline bool is_quasi_equation_text(std::string_view text) { return text.find("=>") != std::string_view::npos; }

// ---------------------------------------------------------------------------
// Inspection

inline void collect_vars(const Term& t, std::set<int>& out) {
  switch (t.kind()) {
    case Term::Kind::Var: out.insert(t.index()); break;
    case Term::Kind::Not:
    case Term::Kind::Subst: collect_vars(t.child(), out); break;
    case Term::Kind::And:
    case Term::Kind::Or:
      collect_vars(t.left(), out);
      collect_vars(t.right(), out);
      break;
    default: break;
  }
}

inline std::set<int> vars_of(const Term& t) {
  std::set<int> s;
  collect_vars(t, s);
  return s;
}

inline std::set<int> vars_of(const Equation& e) {
  auto s = vars_of(e.lhs);
  collect_vars(e.rhs, s);
  return s;
}

inline std::set<int> vars_of(const QuasiEquation& q) {
  auto s = vars_of(q.conclusion);
  for (const auto& e : q.premises) {
    collect_vars(e.lhs, s);
    collect_vars(e.rhs, s);
  }
  return s;
}

inline bool has_diagonal(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Diag: return true;
    case Term::Kind::Not:
    case Term::Kind::Subst: return has_diagonal(t.child());
    case Term::Kind::And:
    case Term::Kind::Or: return has_diagonal(t.left()) || has_diagonal(t.right());
    default: return false;
  }
}

inline bool has_replacement(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Subst: return !t.letter().is_transpose() || has_replacement(t.child());
    case Term::Kind::Not: return has_replacement(t.child());
    case Term::Kind::And:
    case Term::Kind::Or: return has_replacement(t.left()) || has_replacement(t.right());
    default: return false;
  }
}

/// Throws if the term uses an index or operator outside the signature.
inline void check_term(const Term& t, Signature sig) {
  switch (t.kind()) {
    case Term::Kind::Var:
      if (t.index() < 0) throw Error("negative variable index");
      break;
    case Term::Kind::Diag:
      if (!sig.diagonals()) throw Error("diagonal constant outside the SAD signature");
      if (t.diag_i() < 0 || t.diag_j() < 0 || t.diag_i() >= sig.dim || t.diag_j() >= sig.dim) throw Error("diagonal index out of range");
      break;
    case Term::Kind::Subst:
      check_letter(t.letter(), sig.dim);
      if (!t.letter().is_transpose() && !sig.replacements()) throw Error("replacement outside the TA signature");
      check_term(t.child(), sig);
      break;
    case Term::Kind::Not: check_term(t.child(), sig); break;
    case Term::Kind::And:
    case Term::Kind::Or:
      check_term(t.left(), sig);
      check_term(t.right(), sig);
      break;
    default: break;
  }
}

// ---------------------------------------------------------------------------
// Formula <-> term translation. Box and Diamond with the same tag denote the
// same operator because each accessibility relation is a total function.

inline Term translate(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Prop: return Term::var(f.index());
    case Formula::Kind::True: return Term::top();
    case Formula::Kind::False: return Term::bottom();
    case Formula::Kind::Diag: return Term::diag(f.diag_i(), f.diag_j());
    case Formula::Kind::Not: return Term::negate(translate(f.child()));
    case Formula::Kind::And: return Term::conj(translate(f.left()), translate(f.right()));
    case Formula::Kind::Or: return Term::disj(translate(f.left()), translate(f.right()));
    case Formula::Kind::Implies: return Term::disj(Term::negate(translate(f.left())), translate(f.right()));
    case Formula::Kind::Iff: {
      Term a = translate(f.left()), b = translate(f.right());
      return Term::conj(Term::disj(Term::negate(a), b), Term::disj(a, Term::negate(b)));
    }
    case Formula::Kind::Diamond:
    case Formula::Kind::Box: return Term::subst(f.letter(), translate(f.child()));
  }
  throw Error("translate: unknown formula kind");
}

inline Formula translate_back(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var: return Formula::prop(t.index());
    case Term::Kind::Top: return Formula::truth();
    case Term::Kind::Bottom: return Formula::falsity();
    case Term::Kind::Diag: return Formula::diag(t.diag_i(), t.diag_j());
    case Term::Kind::Not: return Formula::negate(translate_back(t.child()));
    case Term::Kind::And: return Formula::conj(translate_back(t.left()), translate_back(t.right()));
    case Term::Kind::Or: return Formula::disj(translate_back(t.left()), translate_back(t.right()));
    case Term::Kind::Subst: return Formula::diamond(t.letter(), translate_back(t.child()));
  }
  throw Error("translate_back: unknown term kind");
}

}  // namespace subst
