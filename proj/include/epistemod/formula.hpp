// Syntax of the n-agent epistemic language: formulas, parsing, printing,
// and structural queries. Everything here is immutable and pure.

#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace epistemod {

/// Base error type for the library. Precondition violations and malformed
/// inputs throw this (or a subclass); resource exhaustion in the prover is
/// reported as a verdict, never as an exception.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Syntax error with a character offset into the offending text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// A declared vocabulary: ordered atom names plus the number of agents.
/// Atom names are identifiers; "true" and "false" are reserved, as is any
/// name of the form K, K1, K2, ... (they lex as knowledge modalities).
struct Signature {
  std::vector<std::string> atoms;
  int agents = 1;

  bool has_atom(const std::string& name) const {
    return std::find(atoms.begin(), atoms.end(), name) != atoms.end();
  }
  int atom_index(const std::string& name) const {
    auto it = std::find(atoms.begin(), atoms.end(), name);
    if (it == atoms.end()) throw Error("unknown atom: " + name);
    return static_cast<int>(it - atoms.begin());
  }
};

inline bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

/// True for names the lexer reserves: literals and modality spellings.
inline bool is_reserved_word(const std::string& s) {
  if (s == "true" || s == "false") return true;
  if (s[0] == 'K' &&
      std::all_of(s.begin() + 1, s.end(),
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return true;
  return false;
}

/// Throws unless the signature is well formed: identifiers, no reserved
/// names, pairwise distinct atoms, at least one agent.
inline void check_signature(const Signature& sig) {
  if (sig.agents < 1) throw Error("signature needs at least one agent");
  std::set<std::string> seen;
  for (const auto& a : sig.atoms) {
    if (!is_identifier(a)) throw Error("atom name is not an identifier: '" + a + "'");
    if (is_reserved_word(a)) throw Error("atom name is reserved: '" + a + "'");
    if (!seen.insert(a).second) throw Error("duplicate atom name: '" + a + "'");
  }
}

// ── Formula ─────────────────────────────────────────────────────────────────

/// An immutable modal formula. Copies share structure; structural equality
/// and hashing are O(size) worst case but short-circuit via cached hashes.
///
/// Connectives: atoms, true, false, ~, &, |, ->, <->, and Ki (knowledge of
/// agent i). Implication and equivalence are primitive nodes, not sugar.
class Formula {
 public:
  enum class Kind { Atom, Top, Bot, Not, And, Or, Implies, Iff, Know };

  Formula() : Formula(top()) {}

  static Formula atom(std::string name) {
    return Formula(std::make_shared<const Node>(
        Node{Kind::Atom, std::move(name), 0, nullptr, nullptr, 0}));
  }
  static Formula top() {
    return Formula(std::make_shared<const Node>(
        Node{Kind::Top, {}, 0, nullptr, nullptr, 0}));
  }
  static Formula bot() {
    return Formula(std::make_shared<const Node>(
        Node{Kind::Bot, {}, 0, nullptr, nullptr, 0}));
  }
  static Formula neg(Formula f) {
    return Formula(std::make_shared<const Node>(
        Node{Kind::Not, {}, 0, f.node_, nullptr, 0}));
  }
  static Formula conj(Formula a, Formula b) { return binary(Kind::And, a, b); }
  static Formula disj(Formula a, Formula b) { return binary(Kind::Or, a, b); }
  static Formula implies(Formula a, Formula b) { return binary(Kind::Implies, a, b); }
  static Formula iff(Formula a, Formula b) { return binary(Kind::Iff, a, b); }
  static Formula know(int agent, Formula f) {
    if (agent < 1) throw Error("agent index must be positive");
    return Formula(std::make_shared<const Node>(
        Node{Kind::Know, {}, agent, f.node_, nullptr, 0}));
  }

  Kind kind() const { return node_->kind; }
  const std::string& atom_name() const { return node_->name; }
  int agent() const { return node_->agent; }

  /// Child of Not / Know.
  Formula child() const { return Formula(node_->a); }
  Formula lhs() const { return Formula(node_->a); }
  Formula rhs() const { return Formula(node_->b); }

  std::size_t hash() const { return node_->hash; }

  bool operator==(const Formula& o) const {
    return equal(node_.get(), o.node_.get());
  }
  bool operator!=(const Formula& o) const { return !(*this == o); }

  /// Total structural order, used for deterministic containers and output.
  bool operator<(const Formula& o) const {
    return compare(node_.get(), o.node_.get()) < 0;
  }

  /// Raw node identity; stable for the lifetime of the formula. Useful for
  /// memoization over shared subtrees.
  const void* id() const { return node_.get(); }

 private:
  struct Node {
    Kind kind;
    std::string name;  // Atom only
    int agent;         // Know only
    std::shared_ptr<const Node> a, b;
    std::size_t hash;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {
    if (!node_) throw Error("null formula node");
    if (node_->hash == 0) const_cast<Node*>(node_.get())->hash = compute_hash(*node_);
  }

  static Formula binary(Kind k, const Formula& a, const Formula& b) {
    return Formula(std::make_shared<const Node>(Node{k, {}, 0, a.node_, b.node_, 0}));
  }

  static std::size_t compute_hash(const Node& n) {
    std::size_t h = static_cast<std::size_t>(n.kind) * 0x9e3779b97f4a7c15ull + 0x517cc1b7;
    h ^= std::hash<std::string>{}(n.name) + (h << 6);
    h ^= static_cast<std::size_t>(n.agent) * 0x2545f4914f6cdd1dull;
    if (n.a) h ^= n.a->hash + 0x9e3779b9 + (h << 6) + (h >> 2);
    if (n.b) h ^= n.b->hash + 0x85ebca6b + (h << 5) + (h >> 3);
    if (h == 0) h = 1;
    return h;
  }

  static bool equal(const Node* x, const Node* y) {
    if (x == y) return true;
    if (x->hash != y->hash || x->kind != y->kind) return false;
    if (x->agent != y->agent || x->name != y->name) return false;
    if (!!x->a != !!y->a || !!x->b != !!y->b) return false;
    if (x->a && !equal(x->a.get(), y->a.get())) return false;
    if (x->b && !equal(x->b.get(), y->b.get())) return false;
    return true;
  }

  static int compare(const Node* x, const Node* y) {
    if (x == y) return 0;
    if (x->kind != y->kind) return x->kind < y->kind ? -1 : 1;
    if (x->agent != y->agent) return x->agent < y->agent ? -1 : 1;
    if (int c = x->name.compare(y->name)) return c < 0 ? -1 : 1;
    if (!!x->a != !!y->a) return x->a ? 1 : -1;
    if (x->a)
      if (int c = compare(x->a.get(), y->a.get())) return c;
    if (!!x->b != !!y->b) return x->b ? 1 : -1;
    if (x->b)
      if (int c = compare(x->b.get(), y->b.get())) return c;
    return 0;
  }

  std::shared_ptr<const Node> node_;
};

// ── Parsing ─────────────────────────────────────────────────────────────────
//
// Grammar, loosest to tightest:
//   iff     := imp ( "<->" iff )?
//   imp     := or  ( "->"  imp )?          (right associative)
//   or      := and ( "|" and )*            (left associative)
//   and     := unary ( "&" unary )*        (left associative)
//   unary   := "~" unary | Ki unary | "K" unary | primary
//   primary := "true" | "false" | atom | "(" iff ")"
//
// "K" without an index is shorthand for "K1".

namespace detail {

class Parser {
 public:
  Parser(const std::string& text, const Signature& sig) : text_(text), sig_(sig) {}

  Formula run() {
    skip_ws();
    Formula f = parse_iff();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return f;
  }

 private:
  Formula parse_iff() {
    Formula lhs = parse_imp();
    skip_ws();
    if (match("<->")) return Formula::iff(lhs, parse_iff());
    return lhs;
  }

  Formula parse_imp() {
    Formula lhs = parse_or();
    skip_ws();
    if (match("->")) return Formula::implies(lhs, parse_imp());
    return lhs;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (skip_ws(), match("|")) f = Formula::disj(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (skip_ws(), match("&")) f = Formula::conj(f, parse_unary());
    return f;
  }

  Formula parse_unary() {
    skip_ws();
    if (match("~")) return Formula::neg(parse_unary());
    std::size_t start = pos_;
    std::string word = peek_word();
    if (!word.empty() && word[0] == 'K' &&
        std::all_of(word.begin() + 1, word.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      pos_ += word.size();
      int agent = 1;
      if (word.size() > 1) {
        try {
          agent = std::stoi(word.substr(1));
        } catch (const std::exception&) {
          throw ParseError("bad agent index '" + word + "'", start);
        }
      }
      if (agent < 1 || agent > sig_.agents)
        throw ParseError("agent index out of range: " + word + " (signature has " +
                             std::to_string(sig_.agents) + " agent(s))",
                         start);
      return Formula::know(agent, parse_unary());
    }
    return parse_primary();
  }

  Formula parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    if (match("(")) {
      Formula f = parse_iff();
      skip_ws();
      if (!match(")")) throw ParseError("expected ')'", pos_);
      return f;
    }
    std::size_t start = pos_;
    std::string word = peek_word();
    if (word.empty())
      throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
    pos_ += word.size();
    if (word == "true") return Formula::top();
    if (word == "false") return Formula::bot();
    if (!sig_.has_atom(word)) throw ParseError("unknown atom '" + word + "'", start);
    return Formula::atom(word);
  }

  std::string peek_word() const {
    std::size_t p = pos_;
    if (p >= text_.size() || !std::isalpha(static_cast<unsigned char>(text_[p]))) return {};
    std::size_t q = p;
    while (q < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[q])) || text_[q] == '_'))
      ++q;
    return text_.substr(p, q - p);
  }

  bool match(const std::string& tok) {
    if (text_.compare(pos_, tok.size(), tok) == 0) {
      // Do not let "-" of "->" eat the arrow of "<->" etc.; tokens here are
      // punctuation-only or handled via peek_word, so prefix clashes cannot
      // occur except "<->" vs "->", which the call order resolves.
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  const std::string& text_;
  const Signature& sig_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses `text` against `sig`. Throws ParseError on syntax errors, unknown
/// atoms, and agent indices outside 1..sig.agents.
inline Formula parse(const std::string& text, const Signature& sig) {
  check_signature(sig);
  return detail::Parser(text, sig).run();
}

// ── Printing ────────────────────────────────────────────────────────────────

namespace detail {

inline int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Iff: return 1;
    case Formula::Kind::Implies: return 2;
    case Formula::Kind::Or: return 3;
    case Formula::Kind::And: return 4;
    case Formula::Kind::Not:
    case Formula::Kind::Know: return 5;
    default: return 6;
  }
}

inline void render_to(const Formula& f, std::string& out) {
  const int prec = precedence(f.kind());
  auto child_needs_parens = [&](const Formula& c, bool right_side) {
    int cp = precedence(c.kind());
    if (cp > prec) return false;
    if (cp < prec) return true;
    // Equal precedence: & and | associate left, -> and <-> associate right.
    bool right_assoc =
        f.kind() == Formula::Kind::Implies || f.kind() == Formula::Kind::Iff;
    return right_assoc ? !right_side : right_side;
  };
  auto emit_child = [&](const Formula& c, bool right_side) {
    if (child_needs_parens(c, right_side)) {
      out += '(';
      render_to(c, out);
      out += ')';
    } else {
      render_to(c, out);
    }
  };
  switch (f.kind()) {
    case Formula::Kind::Atom: out += f.atom_name(); return;
    case Formula::Kind::Top: out += "true"; return;
    case Formula::Kind::Bot: out += "false"; return;
    case Formula::Kind::Not: {
      out += '~';
      Formula c = f.child();
      if (precedence(c.kind()) < prec) {
        out += '(';
        render_to(c, out);
        out += ')';
      } else {
        render_to(c, out);
      }
      return;
    }
    case Formula::Kind::Know: {
      out += 'K';
      out += std::to_string(f.agent());
      out += ' ';
      Formula c = f.child();
      if (precedence(c.kind()) < prec) {
        out += '(';
        render_to(c, out);
        out += ')';
      } else {
        render_to(c, out);
      }
      return;
    }
    case Formula::Kind::And:
      emit_child(f.lhs(), false);
      out += " & ";
      emit_child(f.rhs(), true);
      return;
    case Formula::Kind::Or:
      emit_child(f.lhs(), false);
      out += " | ";
      emit_child(f.rhs(), true);
      return;
    case Formula::Kind::Implies:
      emit_child(f.lhs(), false);
      out += " -> ";
      emit_child(f.rhs(), true);
      return;
    case Formula::Kind::Iff:
      emit_child(f.lhs(), false);
      out += " <-> ";
      emit_child(f.rhs(), true);
      return;
  }
}

}  // namespace detail

/// Precedence-correct text form; parse(render(f), sig) == f for any f that
/// is well formed over sig.
inline std::string render(const Formula& f) {
  std::string out;
  detail::render_to(f, out);
  return out;
}

// ── Structural queries ──────────────────────────────────────────────────────

/// Maximum nesting of knowledge modalities. Memoized on shared subtrees,
/// so formulas built as DAGs (characteristic formulas, normal forms) stay
/// cheap to measure.
inline int modal_depth(const Formula& f) {
  std::unordered_map<const void*, int> memo;
  auto rec = [&](auto&& self, const Formula& g) -> int {
    auto it = memo.find(g.id());
    if (it != memo.end()) return it->second;
    int d = 0;
    switch (g.kind()) {
      case Formula::Kind::Atom:
      case Formula::Kind::Top:
      case Formula::Kind::Bot: break;
      case Formula::Kind::Not: d = self(self, g.child()); break;
      case Formula::Kind::Know: d = 1 + self(self, g.child()); break;
      default: d = std::max(self(self, g.lhs()), self(self, g.rhs()));
    }
    memo.emplace(g.id(), d);
    return d;
  };
  return rec(rec, f);
}

/// All subformulas of f, closed under a single negation: every subformula g
/// appears, and so does ~g unless g is itself a negation.
inline std::set<Formula> subformula_closure(const Formula& f) {
  std::set<Formula> out;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula g = stack.back();
    stack.pop_back();
    if (!out.insert(g).second) continue;
    switch (g.kind()) {
      case Formula::Kind::Not: stack.push_back(g.child()); break;
      case Formula::Kind::Know: stack.push_back(g.child()); break;
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Implies:
      case Formula::Kind::Iff:
        stack.push_back(g.lhs());
        stack.push_back(g.rhs());
        break;
      default: break;
    }
  }
  std::set<Formula> closed = out;
  for (const Formula& g : out)
    if (g.kind() != Formula::Kind::Not) closed.insert(Formula::neg(g));
  return closed;
}

/// Optional bottom-up cleanup: constant folding, double negation,
/// idempotent & / |, and Ki true/false collapse (sound on serial frames,
/// which partitions always are). Equivalence-preserving; not a normal form.
inline Formula simplify(const Formula& f) {
  using K = Formula::Kind;
  auto negate = [](const Formula& g) {
    if (g.kind() == K::Top) return Formula::bot();
    if (g.kind() == K::Bot) return Formula::top();
    if (g.kind() == K::Not) return g.child();
    return Formula::neg(g);
  };
  switch (f.kind()) {
    case K::Atom:
    case K::Top:
    case K::Bot: return f;
    case K::Not: return negate(simplify(f.child()));
    case K::Know: {
      Formula c = simplify(f.child());
      if (c.kind() == K::Top || c.kind() == K::Bot) return c;
      return Formula::know(f.agent(), c);
    }
    case K::And: {
      Formula a = simplify(f.lhs()), b = simplify(f.rhs());
      if (a.kind() == K::Bot || b.kind() == K::Bot) return Formula::bot();
      if (a.kind() == K::Top) return b;
      if (b.kind() == K::Top) return a;
      if (a == b) return a;
      return Formula::conj(a, b);
    }
    case K::Or: {
      Formula a = simplify(f.lhs()), b = simplify(f.rhs());
      if (a.kind() == K::Top || b.kind() == K::Top) return Formula::top();
      if (a.kind() == K::Bot) return b;
      if (b.kind() == K::Bot) return a;
      if (a == b) return a;
      return Formula::disj(a, b);
    }
    case K::Implies: {
      Formula a = simplify(f.lhs()), b = simplify(f.rhs());
      if (a.kind() == K::Bot || b.kind() == K::Top) return Formula::top();
      if (a.kind() == K::Top) return b;
      if (b.kind() == K::Bot) return negate(a);
      if (a == b) return Formula::top();
      return Formula::implies(a, b);
    }
    case K::Iff: {
      Formula a = simplify(f.lhs()), b = simplify(f.rhs());
      if (a.kind() == K::Top) return b;
      if (b.kind() == K::Top) return a;
      if (a.kind() == K::Bot) return negate(b);
      if (b.kind() == K::Bot) return negate(a);
      if (a == b) return Formula::top();
      return Formula::iff(a, b);
    }
  }
  return f;
}

/// Left-associated conjunction; empty input yields true, singleton yields
/// its element unchanged.
inline Formula conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::top();
  Formula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = Formula::conj(out, fs[i]);
  return out;
}

/// Left-associated disjunction; empty input yields false.
inline Formula disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::bot();
  Formula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = Formula::disj(out, fs[i]);
  return out;
}

/// Checks that every atom of f is declared and every agent index is within
/// range; throws Error otherwise. Shared subtrees are visited once.
inline void check_formula(const Formula& f, const Signature& sig) {
  std::unordered_set<const void*> seen;
  auto rec = [&](auto&& self, const Formula& g) -> void {
    if (!seen.insert(g.id()).second) return;
    switch (g.kind()) {
      case Formula::Kind::Atom:
        if (!sig.has_atom(g.atom_name()))
          throw Error("unknown atom: " + g.atom_name());
        return;
      case Formula::Kind::Top:
      case Formula::Kind::Bot: return;
      case Formula::Kind::Not: self(self, g.child()); return;
      case Formula::Kind::Know:
        if (g.agent() < 1 || g.agent() > sig.agents)
          throw Error("agent index out of range: " + std::to_string(g.agent()));
        self(self, g.child());
        return;
      default:
        self(self, g.lhs());
        self(self, g.rhs());
        return;
    }
  };
  rec(rec, f);
}

}  // namespace epistemod

template <>
struct std::hash<epistemod::Formula> {
  std::size_t operator()(const epistemod::Formula& f) const { return f.hash(); }
};
