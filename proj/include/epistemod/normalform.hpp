// Single-agent S5 normal forms: every formula is provably equivalent to a
// disjunction of conjunctions
//
//     alpha & K beta & ~K gamma_1 & ... & ~K gamma_m
//
// with all components propositional. The conversion runs negation through
// the boolean structure, flattens nested modalities using the S5 collapse
// laws (modal subformulas are invariant across an agent's cluster, so they
// hoist out of a K over a disjunction, and K distributes over conjunction),
// and finishes with a propositional DNF over atoms and modal literals.
// Blowup is inherent; a disjunct budget turns it into an explicit error.

#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "epistemod/formula.hpp"

namespace epistemod::normalform {

/// One conjunct of the normal form; absent parts are represented by true.
struct Disjunct {
  Formula alpha = Formula::top();  // propositional facts
  Formula beta = Formula::top();   // conjoined bodies of the positive K's
  std::vector<Formula> gammas;     // bodies of the negated K's
};

struct NormalForm {
  std::vector<Disjunct> disjuncts;  // nonempty; a refuted formula is (false, true, [])
};

inline bool is_propositional(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Top:
    case Formula::Kind::Bot: return true;
    case Formula::Kind::Know: return false;
    case Formula::Kind::Not: return is_propositional(f.child());
    default: return is_propositional(f.lhs()) && is_propositional(f.rhs());
  }
}

/// The formula a normal form denotes, with agent 1's modality; trivial
/// conjuncts (true, K true) are omitted for readability.
inline Formula to_formula(const NormalForm& nf) {
  std::vector<Formula> disjuncts;
  for (const auto& d : nf.disjuncts) {
    std::vector<Formula> parts;
    if (d.alpha.kind() != Formula::Kind::Top) parts.push_back(d.alpha);
    if (d.beta.kind() != Formula::Kind::Top) parts.push_back(Formula::know(1, d.beta));
    for (const auto& g : d.gammas) parts.push_back(Formula::neg(Formula::know(1, g)));
    disjuncts.push_back(conj_all(parts));
  }
  return disj_all(disjuncts);
}

namespace detail {

// Clauses are sets of units: propositional literals and flat modal
// literals K(pi) / ~K(pi) with pi propositional. Structural set order
// keeps every stage deterministic.
using Clause = std::set<Formula>;
using ClauseSet = std::set<Clause>;

inline Formula complement_unit(const Formula& u) {
  if (u.kind() == Formula::Kind::Not) return u.child();
  return Formula::neg(u);
}

/// Union of two clauses, or nothing when a complementary pair arises
/// (a tautological disjunction or a contradictory conjunction, depending
/// on the reading).
inline std::optional<Clause> merge(const Clause& a, const Clause& b) {
  Clause out = a;
  for (const auto& u : b) {
    if (out.count(complement_unit(u))) return std::nullopt;
    out.insert(u);
  }
  return out;
}

inline void check_budget(const ClauseSet& cs, std::size_t max_disjuncts) {
  if (cs.size() > max_disjuncts)
    throw Error("normal form exceeds the disjunct budget of " +
                std::to_string(max_disjuncts) +
                "; rerun with a larger budget if the blowup is intended");
}

/// Conjunctive (cnf=true) or disjunctive (cnf=false) normal form of a flat
/// formula, treating modal literals as units. An empty set is the neutral
/// element (true for CNF, false for DNF); an empty clause is the absorbing
/// one.
inline ClauseSet clauses(const Formula& f, bool cnf, std::size_t max_disjuncts) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Top: return cnf ? ClauseSet{} : ClauseSet{Clause{}};
    case K::Bot: return cnf ? ClauseSet{Clause{}} : ClauseSet{};
    case K::Atom:
    case K::Know: return {Clause{f}};
    case K::Not: return {Clause{f}};  // flat: negation only on atoms / K
    case K::And:
    case K::Or: {
      ClauseSet a = clauses(f.lhs(), cnf, max_disjuncts);
      ClauseSet b = clauses(f.rhs(), cnf, max_disjuncts);
      bool unions = (cnf == (f.kind() == K::And));
      ClauseSet out;
      if (unions) {
        out = std::move(a);
        out.insert(b.begin(), b.end());
      } else {
        for (const auto& x : a)
          for (const auto& y : b) {
            if (auto m = merge(x, y)) out.insert(std::move(*m));
            check_budget(out, max_disjuncts);
          }
      }
      check_budget(out, max_disjuncts);
      return out;
    }
    default:
      throw Error("internal error: implication survived flattening");
  }
}

inline Formula negate_flat(const Formula& f);

/// K applied to a flat body: distribute over the body's CNF, hoisting the
/// modal units of each clause out of the K (they hold uniformly across the
/// cluster, so K(pi | m) is K(pi) | m; an empty pi leaves just m, because
/// K never holds of a falsehood on reflexive frames).
inline Formula flatten_know(const Formula& body, std::size_t max_disjuncts) {
  if (is_propositional(body)) return Formula::know(1, body);
  ClauseSet cs = clauses(body, /*cnf=*/true, max_disjuncts);
  std::vector<Formula> conjuncts;
  for (const auto& clause : cs) {
    std::vector<Formula> props, modals;
    for (const auto& u : clause)
      (is_propositional(u) ? props : modals).push_back(u);
    std::vector<Formula> parts;
    if (!props.empty()) parts.push_back(Formula::know(1, disj_all(props)));
    for (const auto& m : modals) parts.push_back(m);
    conjuncts.push_back(disj_all(parts));
  }
  return conj_all(conjuncts);
}

/// Rewrites f into a boolean combination of propositional literals and
/// flat modal literals.
inline Formula flat(const Formula& f, std::size_t max_disjuncts) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
    case K::Top:
    case K::Bot: return f;
    case K::Not: return negate_flat(flat(f.child(), max_disjuncts));
    case K::And:
      return Formula::conj(flat(f.lhs(), max_disjuncts), flat(f.rhs(), max_disjuncts));
    case K::Or:
      return Formula::disj(flat(f.lhs(), max_disjuncts), flat(f.rhs(), max_disjuncts));
    case K::Implies:
      return Formula::disj(negate_flat(flat(f.lhs(), max_disjuncts)),
                           flat(f.rhs(), max_disjuncts));
    case K::Iff: {
      Formula a = flat(f.lhs(), max_disjuncts), b = flat(f.rhs(), max_disjuncts);
      return Formula::disj(Formula::conj(a, b),
                           Formula::conj(negate_flat(a), negate_flat(b)));
    }
    case K::Know: return flatten_know(flat(f.child(), max_disjuncts), max_disjuncts);
  }
  throw Error("unreachable formula kind");
}

/// De Morgan over an already-flat formula; modal literals just flip sign.
inline Formula negate_flat(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Top: return Formula::bot();
    case K::Bot: return Formula::top();
    case K::Atom:
    case K::Know: return Formula::neg(f);
    case K::Not: return f.child();
    case K::And: return Formula::disj(negate_flat(f.lhs()), negate_flat(f.rhs()));
    case K::Or: return Formula::conj(negate_flat(f.lhs()), negate_flat(f.rhs()));
    default: throw Error("internal error: implication survived flattening");
  }
}

}  // namespace detail

/// Converts a single-agent formula to normal form. The result is provably
/// equivalent to the input (the test suites discharge this with the
/// decision procedure) and structurally of modal depth <= 1.
inline NormalForm to_normal_form(const Signature& sig, const Formula& f,
                                 std::size_t max_disjuncts = 4096) {
  check_signature(sig);
  if (sig.agents != 1)
    throw Error("normal forms are single-agent; the signature declares " +
                std::to_string(sig.agents) + " agents");
  check_formula(f, sig);
  Formula flattened = detail::flat(f, max_disjuncts);
  detail::ClauseSet dnf = detail::clauses(flattened, /*cnf=*/false, max_disjuncts);
  NormalForm nf;
  for (const auto& conjunct : dnf) {
    Disjunct d;
    std::vector<Formula> props, betas;
    for (const auto& u : conjunct) {
      if (is_propositional(u)) {
        props.push_back(u);
      } else if (u.kind() == Formula::Kind::Know) {
        betas.push_back(u.child());
      } else {
        d.gammas.push_back(u.child().child());  // ~K gamma
      }
    }
    d.alpha = conj_all(props);
    d.beta = conj_all(betas);
    nf.disjuncts.push_back(std::move(d));
  }
  if (nf.disjuncts.empty())
    nf.disjuncts.push_back({Formula::bot(), Formula::top(), {}});
  return nf;
}

/// Over a one-atom signature, replaces every component by its equivalent
/// in {true, false, p, ~p} (propositional truth-table over the atom).
inline NormalForm restrict_basis(const Signature& sig, const NormalForm& nf) {
  check_signature(sig);
  if (sig.atoms.size() != 1)
    throw Error("basis restriction needs exactly one atom; the signature has " +
                std::to_string(sig.atoms.size()));
  const std::string& p = sig.atoms[0];
  auto eval = [&](auto&& self, const Formula& g, bool value) -> bool {
    switch (g.kind()) {
      case Formula::Kind::Atom:
        if (g.atom_name() != p) throw Error("unknown atom: " + g.atom_name());
        return value;
      case Formula::Kind::Top: return true;
      case Formula::Kind::Bot: return false;
      case Formula::Kind::Not: return !self(self, g.child(), value);
      case Formula::Kind::And: return self(self, g.lhs(), value) && self(self, g.rhs(), value);
      case Formula::Kind::Or: return self(self, g.lhs(), value) || self(self, g.rhs(), value);
      case Formula::Kind::Implies:
        return !self(self, g.lhs(), value) || self(self, g.rhs(), value);
      case Formula::Kind::Iff:
        return self(self, g.lhs(), value) == self(self, g.rhs(), value);
      case Formula::Kind::Know:
        throw Error("normal-form component is not propositional");
    }
    return false;
  };
  auto basis = [&](const Formula& g) {
    bool hi = eval(eval, g, true), lo = eval(eval, g, false);
    if (hi && lo) return Formula::top();
    if (!hi && !lo) return Formula::bot();
    if (hi) return Formula::atom(p);
    return Formula::neg(Formula::atom(p));
  };
  NormalForm out;
  for (const auto& d : nf.disjuncts) {
    Disjunct r;
    r.alpha = basis(d.alpha);
    r.beta = basis(d.beta);
    for (const auto& g : d.gammas) r.gammas.push_back(basis(g));
    out.disjuncts.push_back(std::move(r));
  }
  return out;
}

}  // namespace epistemod::normalform
