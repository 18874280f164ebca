// Decision procedures for multi-agent S5: validity, consequence from a
// finite hypothesis set under Modus Ponens only, closure of hypotheses
// under the knowledge rule, iterated-knowledge unfolding, and an
// independent brute-force satisfiability oracle.
//
// The decision procedure is a tableau working directly on the S5 block
// structure: each agent's accessible states form one cluster (block), Ki f
// pushes f into every state of the cluster, and ~Ki f spawns at most one
// witness state per distinct obligation. Cross-agent witness states strictly
// decrease the modal depth of the formulas they carry, and within a cluster
// the number of spawns is bounded by the number of distinct diamond
// obligations, so the construction terminates without any loop checking.
// Budgets still cap pathological blowup (branching is exponential in the
// worst case) and turn it into an explicit Unknown verdict.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "epistemod/formula.hpp"
#include "epistemod/kripke.hpp"

namespace epistemod::prover {

enum class Verdict { Valid, Invalid, Unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Valid: return "Valid";
    case Verdict::Invalid: return "Invalid";
    default: return "Unknown";
  }
}

/// Node and wall-clock caps for one query. Exhaustion yields Unknown,
/// never a wrong verdict.
struct Budget {
  std::uint64_t max_nodes = 1'000'000;
  double max_seconds = 10.0;
};

struct ProofResult {
  Verdict verdict = Verdict::Unknown;
  /// Present iff Invalid: a pointed model falsifying the queried formula
  /// (for consequence queries: satisfying every hypothesis and the negated
  /// conclusion).
  std::optional<kripke::PointedModel> countermodel;
  /// Tableau nodes expanded; diagnostic only.
  std::uint64_t nodes = 0;
};

/// A finite hypothesis set. Order is kept; duplicates are dropped.
struct Hypotheses {
  std::vector<Formula> formulas;

  Hypotheses() = default;
  explicit Hypotheses(const std::vector<Formula>& fs) {
    for (const auto& f : fs)
      if (std::find(formulas.begin(), formulas.end(), f) == formulas.end())
        formulas.push_back(f);
  }
};

// ── Negation normal form arena ──────────────────────────────────────────────

namespace detail {

/// Hash-consed NNF nodes: literals, conjunction, disjunction, and per-agent
/// box/diamond. Implication and equivalence are compiled away.
struct Arena {
  enum class Op : std::uint8_t { True, False, Lit, And, Or, Box, Dia };
  struct Node {
    Op op;
    bool neg = false;  // Lit
    int atom = -1;     // Lit
    int agent = 0;     // Box/Dia
    int a = -1, b = -1;
  };

  std::vector<Node> nodes;
  std::map<std::tuple<Op, bool, int, int, int, int>, int> memo;

  int put(const Node& n) {
    auto key = std::make_tuple(n.op, n.neg, n.atom, n.agent, n.a, n.b);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    nodes.push_back(n);
    int id = static_cast<int>(nodes.size()) - 1;
    memo.emplace(key, id);
    return id;
  }

  /// Lookup without creating; -1 when the node was never built.
  int find(const Node& n) const {
    auto it = memo.find(std::make_tuple(n.op, n.neg, n.atom, n.agent, n.a, n.b));
    return it == memo.end() ? -1 : it->second;
  }

  int mk_true() { return put({Op::True}); }
  int mk_false() { return put({Op::False}); }
  int lit(int atom, bool neg) { return put({Op::Lit, neg, atom}); }
  int conj(int a, int b) { return put({Op::And, false, -1, 0, a, b}); }
  int disj(int a, int b) { return put({Op::Or, false, -1, 0, a, b}); }
  int box(int agent, int a) { return put({Op::Box, false, -1, agent, a}); }
  int dia(int agent, int a) { return put({Op::Dia, false, -1, agent, a}); }

  int translate(const Formula& f, bool positive, const Signature& sig) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Atom: return lit(sig.atom_index(f.atom_name()), !positive);
      case K::Top: return positive ? mk_true() : mk_false();
      case K::Bot: return positive ? mk_false() : mk_true();
      case K::Not: return translate(f.child(), !positive, sig);
      case K::And: {
        int a = translate(f.lhs(), positive, sig);
        int b = translate(f.rhs(), positive, sig);
        return positive ? conj(a, b) : disj(a, b);
      }
      case K::Or: {
        int a = translate(f.lhs(), positive, sig);
        int b = translate(f.rhs(), positive, sig);
        return positive ? disj(a, b) : conj(a, b);
      }
      case K::Implies: {
        int a = translate(f.lhs(), !positive, sig);
        int b = translate(f.rhs(), positive, sig);
        return positive ? disj(a, b) : conj(a, b);
      }
      case K::Iff: {
        int ap = translate(f.lhs(), true, sig), an = translate(f.lhs(), false, sig);
        int bp = translate(f.rhs(), true, sig), bn = translate(f.rhs(), false, sig);
        return positive ? disj(conj(ap, bp), conj(an, bn))
                        : disj(conj(ap, bn), conj(an, bp));
      }
      case K::Know: {
        int a = translate(f.child(), positive, sig);
        return positive ? box(f.agent(), a) : dia(f.agent(), a);
      }
    }
    throw Error("unreachable formula kind");
  }
};

// ── Tableau ─────────────────────────────────────────────────────────────────

enum class Outcome { AllClosed, Open, OutOfBudget };

struct Tableau {
  const Signature& sig;
  Arena& ar;
  std::uint64_t max_nodes;
  std::chrono::steady_clock::time_point deadline;
  std::uint64_t nodes = 0;

  struct Cluster {
    int agent;
    std::vector<int> members;
    std::vector<int> boxes;    // box arguments, already in every member
    std::set<int> handled;     // diamond arguments already witnessed
  };
  struct State {
    std::set<int> labels;
    std::vector<int> cluster_of;  // per agent, -1 = none yet
  };
  struct Branch {
    std::vector<State> states;
    std::vector<Cluster> clusters;
    std::vector<std::pair<int, int>> linear, splits, dias;  // (state, node)
    bool closed = false;
  };

  Tableau(const Signature& s, Arena& a, const Budget& budget)
      : sig(s),
        ar(a),
        max_nodes(budget.max_nodes),
        deadline(std::chrono::steady_clock::now() +
                 std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                     std::chrono::duration<double>(budget.max_seconds))) {}

  void add(Branch& b, int s, int n) {
    if (b.closed || !b.states[s].labels.insert(n).second) return;
    const Arena::Node& node = ar.nodes[n];
    switch (node.op) {
      case Arena::Op::True: return;
      case Arena::Op::False: b.closed = true; return;
      case Arena::Op::Lit: {
        int compl_id = ar.find({Arena::Op::Lit, !node.neg, node.atom});
        if (compl_id >= 0 && b.states[s].labels.count(compl_id)) b.closed = true;
        return;
      }
      case Arena::Op::And:
      case Arena::Op::Box: b.linear.emplace_back(s, n); return;
      case Arena::Op::Or: b.splits.emplace_back(s, n); return;
      case Arena::Op::Dia: b.dias.emplace_back(s, n); return;
    }
  }

  int ensure_cluster(Branch& b, int s, int agent) {
    int& cid = b.states[s].cluster_of[agent - 1];
    if (cid < 0) {
      cid = static_cast<int>(b.clusters.size());
      b.clusters.push_back({agent, {s}, {}, {}});
    }
    return cid;
  }

  bool over_budget() {
    ++nodes;
    if (nodes > max_nodes) return true;
    if ((nodes & 1023) == 0 && std::chrono::steady_clock::now() > deadline) return true;
    return false;
  }

  /// Runs the tableau rooted at `root`. Open means a saturated branch was
  /// found and `model` holds the extracted pointed model.
  Outcome run(int root, kripke::PointedModel& model) {
    Branch start;
    start.states.push_back(State{{}, std::vector<int>(sig.agents, -1)});
    add(start, 0, root);
    std::vector<Branch> work;
    work.push_back(std::move(start));
    while (!work.empty()) {
      Branch b = std::move(work.back());
      work.pop_back();
      while (!b.closed) {
        if (over_budget()) return Outcome::OutOfBudget;
        if (!b.linear.empty()) {
          auto [s, n] = b.linear.back();
          b.linear.pop_back();
          const Arena::Node& node = ar.nodes[n];
          if (node.op == Arena::Op::And) {
            add(b, s, node.a);
            add(b, s, node.b);
          } else {  // Box
            int cid = ensure_cluster(b, s, node.agent);
            if (std::find(b.clusters[cid].boxes.begin(), b.clusters[cid].boxes.end(),
                          node.a) == b.clusters[cid].boxes.end()) {
              b.clusters[cid].boxes.push_back(node.a);
              auto members = b.clusters[cid].members;  // add() may not grow it, copy for safety
              for (int m : members) add(b, m, node.a);
            }
          }
        } else if (!b.splits.empty()) {
          auto [s, n] = b.splits.back();
          b.splits.pop_back();
          const Arena::Node& node = ar.nodes[n];
          if (b.states[s].labels.count(node.a) || b.states[s].labels.count(node.b))
            continue;  // already satisfied
          Branch other = b;
          add(other, s, node.b);
          work.push_back(std::move(other));
          add(b, s, node.a);
        } else if (!b.dias.empty()) {
          auto [s, n] = b.dias.back();
          b.dias.pop_back();
          const Arena::Node& node = ar.nodes[n];
          int cid = ensure_cluster(b, s, node.agent);
          if (b.clusters[cid].handled.count(node.a)) continue;
          bool present = false;
          for (int m : b.clusters[cid].members)
            if (b.states[m].labels.count(node.a)) { present = true; break; }
          b.clusters[cid].handled.insert(node.a);
          if (present) continue;
          int fresh = static_cast<int>(b.states.size());
          b.states.push_back(State{{}, std::vector<int>(sig.agents, -1)});
          b.states[fresh].cluster_of[node.agent - 1] = cid;
          b.clusters[cid].members.push_back(fresh);
          add(b, fresh, node.a);
          auto boxes = b.clusters[cid].boxes;
          for (int g : boxes) add(b, fresh, g);
        } else {
          model = extract(b);
          return Outcome::Open;
        }
      }
    }
    return Outcome::AllClosed;
  }

  kripke::PointedModel extract(const Branch& b) const {
    kripke::Model m;
    m.sig = sig;
    for (std::size_t s = 0; s < b.states.size(); ++s)
      m.states.push_back("s" + std::to_string(s + 1));
    for (std::size_t s = 0; s < b.states.size(); ++s) {
      std::set<std::string> atoms;
      for (int n : b.states[s].labels) {
        const Arena::Node& node = ar.nodes[n];
        if (node.op == Arena::Op::Lit && !node.neg) atoms.insert(sig.atoms[node.atom]);
      }
      m.valuation[m.states[s]] = std::move(atoms);
    }
    for (int agent = 1; agent <= sig.agents; ++agent) {
      std::vector<std::vector<std::string>> blocks;
      for (const auto& c : b.clusters) {
        if (c.agent != agent) continue;
        std::vector<std::string> block;
        for (int s : c.members) block.push_back(m.states[s]);
        blocks.push_back(std::move(block));
      }
      for (std::size_t s = 0; s < b.states.size(); ++s)
        if (b.states[s].cluster_of[agent - 1] < 0) blocks.push_back({m.states[s]});
      m.partitions[agent] = std::move(blocks);
    }
    return {std::move(m), "s1"};
  }
};

}  // namespace detail

// ── Public operations ───────────────────────────────────────────────────────

/// Valid iff f holds at every state of every S5 model for sig's agents.
/// Invalid comes with a pointed countermodel (verified internally against
/// the model checker before being returned). Budget exhaustion gives
/// Unknown.
inline ProofResult decide_validity(const Signature& sig, const Formula& f,
                                   const Budget& budget = {}) {
  check_signature(sig);
  check_formula(f, sig);
  detail::Arena arena;
  int root = arena.translate(f, false, sig);  // satisfiability of ~f
  detail::Tableau tab(sig, arena, budget);
  kripke::PointedModel cm;
  ProofResult out;
  switch (tab.run(root, cm)) {
    case detail::Outcome::AllClosed:
      out.verdict = Verdict::Valid;
      break;
    case detail::Outcome::Open:
      if (kripke::model_check(cm.model, cm.state, f))
        throw Error("internal error: extracted countermodel does not falsify the formula");
      out.verdict = Verdict::Invalid;
      out.countermodel = std::move(cm);
      break;
    case detail::Outcome::OutOfBudget:
      out.verdict = Verdict::Unknown;
      break;
  }
  out.nodes = tab.nodes;
  return out;
}

/// The conjunction of all hypotheses (true when empty).
inline Formula conjunction(const Hypotheses& gamma) {
  return conj_all(gamma.formulas);
}

/// Does f follow from gamma with Modus Ponens over all S5 theorems?
/// Since gamma is finite and the calculus has no other rule, this is the
/// validity of (and-of-gamma -> f); an Invalid verdict carries a pointed
/// model satisfying every hypothesis and falsifying f.
inline ProofResult consequence(const Signature& sig, const Hypotheses& gamma,
                               const Formula& f, const Budget& budget = {}) {
  return decide_validity(sig, Formula::implies(conjunction(gamma), f), budget);
}

enum class Tri { Yes, No, Unknown };

inline const char* to_string(Tri t) {
  switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    default: return "unknown";
  }
}

struct NecEntry {
  Formula g;
  int agent = 1;
  ProofResult result;
};

/// Closure report: one entry per (hypothesis, agent) pair in order. closed
/// is Yes when every entry derives, No when some entry is refuted (its
/// countermodel shows the failure), Unknown when budget exhaustion hides
/// the answer.
struct NecReport {
  Tri closed = Tri::Yes;
  std::vector<NecEntry> entries;
};

/// Is gamma closed under the knowledge rule? By the one-step criterion it
/// suffices that gamma derives Ki G for every member G and agent i; the
/// induction consuming one modal layer per step then yields every iterated
/// prefix, i.e. common knowledge of gamma.
inline NecReport necessitation_closed(const Signature& sig, const Hypotheses& gamma,
                                      const Budget& budget = {}) {
  NecReport report;
  bool unknown = false;
  for (const auto& g : gamma.formulas)
    for (int agent = 1; agent <= sig.agents; ++agent) {
      NecEntry e{g, agent, consequence(sig, gamma, Formula::know(agent, g), budget)};
      if (e.result.verdict == Verdict::Invalid) report.closed = Tri::No;
      if (e.result.verdict == Verdict::Unknown) unknown = true;
      report.entries.push_back(std::move(e));
    }
  if (report.closed == Tri::Yes && unknown) report.closed = Tri::Unknown;
  return report;
}

/// All of f prefixed by 0..depth knowledge modalities, in
/// length-then-lexicographic prefix order: f, K1 f, ..., Kn f, K1 K1 f, ...
inline std::vector<Formula> ck_unfold(const Formula& f, int depth, const Signature& sig) {
  if (depth < 0) throw Error("depth must be nonnegative");
  check_signature(sig);
  check_formula(f, sig);
  std::vector<Formula> out{f};
  std::vector<std::vector<Formula>> levels{{f}};
  for (int len = 1; len <= depth; ++len) {
    std::vector<Formula> level;
    // Prefixes of length `len` in lex order: the first modality is the
    // outermost, so prepend each agent to every length-(len-1) prefix.
    for (int agent = 1; agent <= sig.agents; ++agent)
      for (const auto& g : levels.back()) level.push_back(Formula::know(agent, g));
    for (const auto& g : level) out.push_back(g);
    levels.push_back(std::move(level));
  }
  return out;
}

/// Exhaustive search over all pointed models with at most max_states states
/// (designated state fixed to the first one, which is complete because the
/// enumerated family is closed under state renaming). Returns a satisfying
/// pointed model or nothing — absence is NOT a proof of unsatisfiability.
inline std::optional<kripke::PointedModel> oracle_satisfiable(const Signature& sig,
                                                              const Formula& f,
                                                              int max_states) {
  check_signature(sig);
  check_formula(f, sig);
  std::optional<kripke::PointedModel> found;
  kripke::for_each_model(sig, max_states, [&](const kripke::Model& m) {
    kripke::Index ix = kripke::make_index(m);
    kripke::detail::TruthCache cache;
    if (kripke::detail::bit(kripke::detail::eval(ix, f, cache), 0)) {
      found = kripke::PointedModel{m, m.states[0]};
      return true;
    }
    return false;
  });
  return found;
}

}  // namespace epistemod::prover
