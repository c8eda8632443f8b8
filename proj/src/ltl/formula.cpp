#include "hybridmc/ltl/formula.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "hybridmc/errors.hpp"

namespace hmc::ltl {

namespace {

Formula make(Kind k, Formula l = nullptr, Formula r = nullptr, std::string name = {}) {
  return std::make_shared<const Node>(Node{k, std::move(name), std::move(l), std::move(r)});
}

Formula need(Formula f) {
  if (!f)
    throw UsageError("null LTL operand");
  return f;
}

enum class Tok {
  End,
  Ident,
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Next,
  Until,
  Release,
  Finally,
  Globally,
  LParen,
  RParen,
};

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (c == '(') {
      out.push_back({Tok::LParen, start, "("});
      ++i;
    } else if (c == ')') {
      out.push_back({Tok::RParen, start, ")"});
      ++i;
    } else if (c == '!') {
      out.push_back({Tok::Not, start, "!"});
      ++i;
    } else if (c == '&') {
      i += (i + 1 < s.size() && s[i + 1] == '&') ? 2 : 1;
      out.push_back({Tok::And, start, "&&"});
    } else if (c == '|') {
      i += (i + 1 < s.size() && s[i + 1] == '|') ? 2 : 1;
      out.push_back({Tok::Or, start, "||"});
    } else if (c == '-') {
      if (i + 1 < s.size() && s[i + 1] == '>') {
        out.push_back({Tok::Implies, start, "->"});
        i += 2;
      } else {
        throw ParseError("unexpected character '-' at offset " + std::to_string(start), start);
      }
    } else if (ident_start(c)) {
      while (i < s.size() && ident_char(s[i]))
        ++i;
      std::string word(s.substr(start, i - start));
      Tok k = Tok::Ident;
      if (word == "true")
        k = Tok::True;
      else if (word == "false")
        k = Tok::False;
      else if (word == "X")
        k = Tok::Next;
      else if (word == "F")
        k = Tok::Finally;
      else if (word == "G")
        k = Tok::Globally;
      else if (word == "U")
        k = Tok::Until;
      else if (word == "R")
        k = Tok::Release;
      out.push_back({k, start, std::move(word)});
    } else {
      throw ParseError(std::string("unexpected character '") + c + "' at offset " +
                           std::to_string(start),
                       start);
    }
  }
  out.push_back({Tok::End, s.size(), ""});
  return out;
}

class Parser {
public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  Formula run() {
    Formula f = parse_implies();
    if (peek().kind != Tok::End)
      fail("unexpected token '" + peek().text + "'");
    return f;
  }

private:
  const Token &peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string &msg) const {
    std::size_t at = peek().pos;
    std::string m = peek().kind == Tok::End ? "unexpected end of formula" : msg;
    throw ParseError("syntax error at offset " + std::to_string(at) + ": " + m, at);
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (peek().kind == Tok::Implies) {
      take();
      return implies(lhs, parse_implies());
    }
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (peek().kind == Tok::Or) {
      take();
      lhs = lor(lhs, parse_and());
    }
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_binary();
    while (peek().kind == Tok::And) {
      take();
      lhs = land(lhs, parse_binary());
    }
    return lhs;
  }

  Formula parse_binary() {
    Formula lhs = parse_unary();
    if (peek().kind == Tok::Until) {
      take();
      return until(lhs, parse_binary());
    }
    if (peek().kind == Tok::Release) {
      take();
      return release(lhs, parse_binary());
    }
    return lhs;
  }

  Formula parse_unary() {
    switch (peek().kind) {
    case Tok::Not:
      take();
      return lnot(parse_unary());
    case Tok::Next:
      take();
      return next(parse_unary());
    case Tok::Finally:
      take();
      return finally(parse_unary());
    case Tok::Globally:
      take();
      return globally(parse_unary());
    default:
      return parse_atom();
    }
  }

  Formula parse_atom() {
    switch (peek().kind) {
    case Tok::True:
      take();
      return tt();
    case Tok::False:
      take();
      return ff();
    case Tok::Ident:
      return prop(take().text);
    case Tok::LParen: {
      take();
      Formula f = parse_implies();
      if (peek().kind != Tok::RParen)
        fail("expected ')'");
      take();
      return f;
    }
    default:
      fail("unexpected token '" + peek().text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

const char *binary_symbol(Kind k) {
  switch (k) {
  case Kind::And:
    return "&&";
  case Kind::Or:
    return "||";
  case Kind::Implies:
    return "->";
  case Kind::Until:
    return "U";
  case Kind::Release:
    return "R";
  default:
    return "?";
  }
}

const char *unary_symbol(Kind k) {
  switch (k) {
  case Kind::Not:
    return "!";
  case Kind::Next:
    return "X ";
  case Kind::Finally:
    return "F ";
  case Kind::Globally:
    return "G ";
  default:
    return "?";
  }
}

void print(const Formula &f, std::string &out) {
  switch (f->kind) {
  case Kind::Prop:
    out += f->name;
    return;
  case Kind::True:
    out += "true";
    return;
  case Kind::False:
    out += "false";
    return;
  default:
    break;
  }
  if (is_unary(f->kind)) {
    out += unary_symbol(f->kind);
    print(f->left, out);
    return;
  }
  out += '(';
  print(f->left, out);
  out += ' ';
  out += binary_symbol(f->kind);
  out += ' ';
  print(f->right, out);
  out += ')';
}

bool any_node(const Formula &f, Kind k) {
  if (!f)
    return false;
  if (f->kind == k)
    return true;
  return any_node(f->left, k) || any_node(f->right, k);
}

Formula nnf_rec(const Formula &f, bool neg) {
  switch (f->kind) {
  case Kind::Prop:
    return neg ? lnot(f) : f;
  case Kind::True:
    return neg ? ff() : tt();
  case Kind::False:
    return neg ? tt() : ff();
  case Kind::Not:
    return nnf_rec(f->left, !neg);
  case Kind::And:
    return neg ? lor(nnf_rec(f->left, true), nnf_rec(f->right, true))
               : land(nnf_rec(f->left, false), nnf_rec(f->right, false));
  case Kind::Or:
    return neg ? land(nnf_rec(f->left, true), nnf_rec(f->right, true))
               : lor(nnf_rec(f->left, false), nnf_rec(f->right, false));
  case Kind::Implies:
    return neg ? land(nnf_rec(f->left, false), nnf_rec(f->right, true))
               : lor(nnf_rec(f->left, true), nnf_rec(f->right, false));
  case Kind::Next:
    return next(nnf_rec(f->left, neg));
  case Kind::Until:
    return neg ? release(nnf_rec(f->left, true), nnf_rec(f->right, true))
               : until(nnf_rec(f->left, false), nnf_rec(f->right, false));
  case Kind::Release:
    return neg ? until(nnf_rec(f->left, true), nnf_rec(f->right, true))
               : release(nnf_rec(f->left, false), nnf_rec(f->right, false));
  case Kind::Finally:
    return neg ? globally(nnf_rec(f->left, true)) : finally(nnf_rec(f->left, false));
  case Kind::Globally:
    return neg ? finally(nnf_rec(f->left, true)) : globally(nnf_rec(f->left, false));
  }
  throw UsageError("unknown LTL node");
}

void collect_props(const Formula &f, std::set<std::string> &out) {
  if (!f)
    return;
  if (f->kind == Kind::Prop)
    out.insert(f->name);
  collect_props(f->left, out);
  collect_props(f->right, out);
}

} // namespace

Formula prop(std::string name) {
  if (name.empty() || !ident_start(name[0]) ||
      !std::all_of(name.begin(), name.end(), ident_char))
    throw UsageError("invalid proposition name '" + name + "'");
  return make(Kind::Prop, nullptr, nullptr, std::move(name));
}
Formula tt() { return make(Kind::True); }
Formula ff() { return make(Kind::False); }
Formula lnot(Formula f) { return make(Kind::Not, need(std::move(f))); }
Formula land(Formula a, Formula b) { return make(Kind::And, need(std::move(a)), need(std::move(b))); }
Formula lor(Formula a, Formula b) { return make(Kind::Or, need(std::move(a)), need(std::move(b))); }
Formula implies(Formula a, Formula b) {
  return make(Kind::Implies, need(std::move(a)), need(std::move(b)));
}
Formula next(Formula f) { return make(Kind::Next, need(std::move(f))); }
Formula until(Formula a, Formula b) {
  return make(Kind::Until, need(std::move(a)), need(std::move(b)));
}
Formula release(Formula a, Formula b) {
  return make(Kind::Release, need(std::move(a)), need(std::move(b)));
}
Formula finally(Formula f) { return make(Kind::Finally, need(std::move(f))); }
Formula globally(Formula f) { return make(Kind::Globally, need(std::move(f))); }

Formula parse(std::string_view text) { return Parser(text).run(); }

std::string to_string(const Formula &f) {
  std::string out;
  print(need(f), out);
  return out;
}

bool structurally_equal(const Formula &a, const Formula &b) {
  if (!a || !b)
    return !a && !b;
  if (a.get() == b.get())
    return true;
  return a->kind == b->kind && a->name == b->name && structurally_equal(a->left, b->left) &&
         structurally_equal(a->right, b->right);
}

bool is_unary(Kind k) {
  return k == Kind::Not || k == Kind::Next || k == Kind::Finally || k == Kind::Globally;
}

bool is_binary(Kind k) {
  return k == Kind::And || k == Kind::Or || k == Kind::Implies || k == Kind::Until ||
         k == Kind::Release;
}

bool contains_next(const Formula &f) { return any_node(f, Kind::Next); }

bool is_syntactically_stutter_invariant(const Formula &f) { return !contains_next(f); }

bool is_propositional(const Formula &f) {
  if (!f)
    return true;
  switch (f->kind) {
  case Kind::Next:
  case Kind::Until:
  case Kind::Release:
  case Kind::Finally:
  case Kind::Globally:
    return false;
  default:
    return is_propositional(f->left) && is_propositional(f->right);
  }
}

std::set<std::string> propositions(const Formula &f) {
  std::set<std::string> out;
  collect_props(f, out);
  return out;
}

int depth(const Formula &f) {
  if (!f)
    return 0;
  if (!f->left)
    return 0;
  return 1 + std::max(depth(f->left), depth(f->right));
}

std::size_t size(const Formula &f) {
  if (!f)
    return 0;
  return 1 + size(f->left) + size(f->right);
}

Formula nnf(const Formula &f) { return nnf_rec(need(f), false); }

} // namespace hmc::ltl
