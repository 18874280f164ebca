// Finite Kripke models for n agents whose accessibility relations are
// equivalence relations, stored as partitions of the state set. Provides
// validation, model checking, bisimulation, characteristic formulas, and a
// plain-text document format.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "epistemod/formula.hpp"

namespace epistemod::kripke {

/// A model: named states, a valuation (set of true atoms per state; states
/// absent from the map are treated as making every atom false), and one
/// partition of the state set per agent. Agent keys run 1..sig.agents.
struct Model {
  Signature sig;
  std::vector<std::string> states;
  std::map<std::string, std::set<std::string>> valuation;
  std::map<int, std::vector<std::vector<std::string>>> partitions;
};

/// A model with a designated state, e.g. a countermodel.
struct PointedModel {
  Model model;
  std::string state;
};

/// Collects every invariant violation: signature problems, missing or
/// duplicate states, valuation outside the declared states/atoms, and per
/// agent any non-partition (empty, overlapping, or non-covering blocks).
/// An empty result means the model is well formed.
inline std::vector<std::string> validate(const Model& m) {
  std::vector<std::string> out;
  try {
    check_signature(m.sig);
  } catch (const Error& e) {
    out.push_back(e.what());
  }
  if (m.states.empty()) out.push_back("model has no states");
  std::set<std::string> known;
  for (const auto& s : m.states) {
    if (!is_identifier(s)) out.push_back("state id is not an identifier: '" + s + "'");
    if (!known.insert(s).second) out.push_back("duplicate state id: " + s);
  }
  for (const auto& [s, atoms] : m.valuation) {
    if (!known.count(s)) out.push_back("valuation mentions unknown state: " + s);
    for (const auto& a : atoms)
      if (!m.sig.has_atom(a))
        out.push_back("valuation at " + s + " mentions unknown atom: " + a);
  }
  for (int agent = 1; agent <= m.sig.agents; ++agent)
    if (!m.partitions.count(agent))
      out.push_back("no blocks given for agent " + std::to_string(agent));
  for (const auto& [agent, blocks] : m.partitions) {
    std::string who = "agent " + std::to_string(agent);
    if (agent < 1 || agent > m.sig.agents) {
      out.push_back("blocks given for out-of-range " + who);
      continue;
    }
    std::set<std::string> covered;
    bool overlap = false, unknown_member = false;
    for (const auto& block : blocks) {
      if (block.empty()) out.push_back(who + " has an empty block");
      for (const auto& s : block) {
        if (!known.count(s)) {
          if (!unknown_member)
            out.push_back(who + " block mentions unknown state: " + s);
          unknown_member = true;
        } else if (!covered.insert(s).second) {
          if (!overlap) out.push_back(who + " blocks overlap at state: " + s);
          overlap = true;
        }
      }
    }
    if (covered.size() != known.size())
      out.push_back(who + " blocks do not cover all states");
  }
  return out;
}

/// Throws Error (joining all violations) unless validate() is empty.
inline void require_valid(const Model& m) {
  auto violations = validate(m);
  if (violations.empty()) return;
  std::string msg = "invalid model:";
  for (const auto& v : violations) msg += "\n  " + v;
  throw Error(msg);
}

// ── Index ───────────────────────────────────────────────────────────────────

/// Integer view of a validated model, built once and reused by the
/// evaluation and refinement loops. States and atoms are numbered in model
/// and signature order respectively.
struct Index {
  int nstates = 0;
  int natoms = 0;
  int nagents = 0;
  std::unordered_map<std::string, int> state_id;
  std::unordered_map<std::string, int> atom_id;
  std::vector<std::vector<bool>> val;               // [state][atom]
  std::vector<std::vector<int>> block_of;           // [agent-1][state] -> block
  std::vector<std::vector<std::vector<int>>> blocks;  // [agent-1][block] -> members
};

inline Index make_index(const Model& m) {
  Index ix;
  ix.nstates = static_cast<int>(m.states.size());
  ix.natoms = static_cast<int>(m.sig.atoms.size());
  ix.nagents = m.sig.agents;
  for (int s = 0; s < ix.nstates; ++s) ix.state_id[m.states[s]] = s;
  for (int a = 0; a < ix.natoms; ++a) ix.atom_id[m.sig.atoms[a]] = a;
  ix.val.assign(ix.nstates, std::vector<bool>(ix.natoms, false));
  for (const auto& [s, atoms] : m.valuation) {
    int sid = ix.state_id.at(s);
    for (const auto& a : atoms) ix.val[sid][ix.atom_id.at(a)] = true;
  }
  ix.block_of.assign(ix.nagents, std::vector<int>(ix.nstates, -1));
  ix.blocks.assign(ix.nagents, {});
  for (const auto& [agent, blocks] : m.partitions) {
    int i = agent - 1;
    for (const auto& block : blocks) {
      std::vector<int> members;
      members.reserve(block.size());
      for (const auto& s : block) members.push_back(ix.state_id.at(s));
      std::sort(members.begin(), members.end());
      int bid = static_cast<int>(ix.blocks[i].size());
      for (int s : members) ix.block_of[i][s] = bid;
      ix.blocks[i].push_back(std::move(members));
    }
  }
  return ix;
}

namespace detail {

/// Truth sets as packed bit vectors (bit s = truth at state s), memoized by
/// formula node identity so shared subtrees (for instance inside
/// characteristic formulas) are evaluated once.
using Bits = std::vector<std::uint64_t>;
using TruthCache = std::unordered_map<const void*, Bits>;

inline bool bit(const Bits& b, int s) { return (b[s >> 6] >> (s & 63)) & 1; }

inline void trim(Bits& b, int n) {
  if (n & 63) b.back() &= (std::uint64_t(1) << (n & 63)) - 1;
}

inline Bits eval(const Index& ix, const Formula& f, TruthCache& cache) {
  if (auto it = cache.find(f.id()); it != cache.end()) return it->second;
  const int n = ix.nstates;
  const int words = (n + 63) / 64;
  Bits out(words, 0);
  auto set = [&](int s) { out[s >> 6] |= std::uint64_t(1) << (s & 63); };
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      int a = ix.atom_id.at(f.atom_name());
      for (int s = 0; s < n; ++s)
        if (ix.val[s][a]) set(s);
      break;
    }
    case Formula::Kind::Top:
      out.assign(words, ~std::uint64_t(0));
      trim(out, n);
      break;
    case Formula::Kind::Bot:
      break;
    case Formula::Kind::Not: {
      auto c = eval(ix, f.child(), cache);
      for (int w = 0; w < words; ++w) out[w] = ~c[w];
      trim(out, n);
      break;
    }
    case Formula::Kind::And: {
      auto l = eval(ix, f.lhs(), cache);
      auto r = eval(ix, f.rhs(), cache);
      for (int w = 0; w < words; ++w) out[w] = l[w] & r[w];
      break;
    }
    case Formula::Kind::Or: {
      auto l = eval(ix, f.lhs(), cache);
      auto r = eval(ix, f.rhs(), cache);
      for (int w = 0; w < words; ++w) out[w] = l[w] | r[w];
      break;
    }
    case Formula::Kind::Implies: {
      auto l = eval(ix, f.lhs(), cache);
      auto r = eval(ix, f.rhs(), cache);
      for (int w = 0; w < words; ++w) out[w] = ~l[w] | r[w];
      trim(out, n);
      break;
    }
    case Formula::Kind::Iff: {
      auto l = eval(ix, f.lhs(), cache);
      auto r = eval(ix, f.rhs(), cache);
      for (int w = 0; w < words; ++w) out[w] = ~(l[w] ^ r[w]);
      trim(out, n);
      break;
    }
    case Formula::Kind::Know: {
      auto c = eval(ix, f.child(), cache);
      for (const auto& block : ix.blocks[f.agent() - 1]) {
        bool all = true;
        for (int s : block)
          if (!bit(c, s)) { all = false; break; }
        if (all)
          for (int s : block) set(s);
      }
      break;
    }
  }
  cache.emplace(f.id(), out);
  return out;
}

}  // namespace detail

/// Truth of f at the named state. Knowledge is quantification over the
/// agent's block: Ki f holds at w iff f holds throughout agent i's block
/// containing w. The model must pass validate().
inline bool model_check(const Model& m, const std::string& state, const Formula& f) {
  require_valid(m);
  check_formula(f, m.sig);
  Index ix = make_index(m);
  auto it = ix.state_id.find(state);
  if (it == ix.state_id.end()) throw Error("unknown state: " + state);
  detail::TruthCache cache;
  return detail::bit(detail::eval(ix, f, cache), it->second);
}

/// All states where f holds, in model state order.
inline std::vector<std::string> satisfying_states(const Model& m, const Formula& f) {
  require_valid(m);
  check_formula(f, m.sig);
  Index ix = make_index(m);
  detail::TruthCache cache;
  auto truth = detail::eval(ix, f, cache);
  std::vector<std::string> out;
  for (int s = 0; s < ix.nstates; ++s)
    if (detail::bit(truth, s)) out.push_back(m.states[s]);
  return out;
}

// ── Bisimulation ────────────────────────────────────────────────────────────

namespace detail {

/// Partition refinement. Starts from valuation classes and repeatedly
/// splits by the set of classes an agent's block reaches, until stable.
/// Returns the class of each state (numbered by first occurrence in state
/// order) and the number of refinement rounds performed.
inline std::pair<std::vector<int>, int> refine_classes(const Index& ix) {
  int k = ix.nstates;
  // Class ids are assigned by first occurrence in state order, so the
  // numbering is deterministic regardless of map internals.
  std::vector<int> cls(k, 0);
  {
    std::map<std::vector<bool>, int> ids;
    for (int s = 0; s < k; ++s) {
      auto [it, fresh] = ids.emplace(ix.val[s], static_cast<int>(ids.size()));
      (void)fresh;
      cls[s] = it->second;
    }
  }
  int rounds = 0;
  for (;;) {
    std::map<std::vector<int>, int> ids;
    std::vector<int> next(k, 0);
    for (int s = 0; s < k; ++s) {
      std::vector<int> sg{cls[s]};
      for (int i = 0; i < ix.nagents; ++i) {
        std::set<int> reach;
        for (int x : ix.blocks[i][ix.block_of[i][s]]) reach.insert(cls[x]);
        sg.push_back(-1);  // separator between agents
        sg.insert(sg.end(), reach.begin(), reach.end());
      }
      auto [it, fresh] = ids.emplace(std::move(sg), static_cast<int>(ids.size()));
      (void)fresh;
      next[s] = it->second;
    }
    // Refinement only ever splits classes, so an unchanged count means an
    // unchanged partition.
    bool stable = ids.size() == static_cast<std::size_t>(
                                    1 + *std::max_element(cls.begin(), cls.end()));
    cls = std::move(next);
    if (stable) break;
    ++rounds;
  }
  return {cls, rounds};
}

}  // namespace detail

/// Partition of the states into bisimilarity classes. Classes are ordered
/// by their first member in state order; members keep state order.
inline std::vector<std::vector<std::string>> bisim_classes(const Model& m) {
  require_valid(m);
  Index ix = make_index(m);
  auto [cls, rounds] = detail::refine_classes(ix);
  (void)rounds;
  int nclasses = 1 + *std::max_element(cls.begin(), cls.end());
  std::vector<std::vector<std::string>> out(nclasses);
  for (int s = 0; s < ix.nstates; ++s) out[cls[s]].push_back(m.states[s]);
  return out;
}

/// Bisimilarity across two models over the same signature, decided by
/// refining their disjoint union. Both models must pass validate().
inline bool bisimilar(const Model& m1, const std::string& s1, const Model& m2,
                      const std::string& s2) {
  if (m1.sig.atoms != m2.sig.atoms || m1.sig.agents != m2.sig.agents)
    throw Error("bisimilarity requires identical signatures");
  Index a = make_index(m1);
  Index b = make_index(m2);
  auto ita = a.state_id.find(s1);
  if (ita == a.state_id.end()) throw Error("unknown state: " + s1);
  auto itb = b.state_id.find(s2);
  if (itb == b.state_id.end()) throw Error("unknown state: " + s2);
  Index u;
  u.nstates = a.nstates + b.nstates;
  u.natoms = a.natoms;
  u.nagents = a.nagents;
  u.val = a.val;
  u.val.insert(u.val.end(), b.val.begin(), b.val.end());
  u.blocks.resize(u.nagents);
  u.block_of.assign(u.nagents, std::vector<int>(u.nstates, -1));
  for (int i = 0; i < u.nagents; ++i) {
    u.blocks[i] = a.blocks[i];
    for (const auto& block : b.blocks[i]) {
      std::vector<int> shifted;
      shifted.reserve(block.size());
      for (int s : block) shifted.push_back(s + a.nstates);
      u.blocks[i].push_back(std::move(shifted));
    }
    for (int bid = 0; bid < static_cast<int>(u.blocks[i].size()); ++bid)
      for (int s : u.blocks[i][bid]) u.block_of[i][s] = bid;
  }
  auto [cls, rounds] = detail::refine_classes(u);
  (void)rounds;
  return cls[ita->second] == cls[a.nstates + itb->second];
}

// ── Characteristic formulas ─────────────────────────────────────────────────

/// A formula true exactly at the states bisimilar to `state`, in this model
/// and in any other model over the same signature with at most as many
/// states. Built by the usual layered construction: level 0 is the state's
/// atom description; level j+1 adds, per agent, knowledge of the disjunction
/// of the block's level-j formulas plus one ~Ki~ conjunct per distinct
/// member formula. Depth 2k-1 (k = state count) suffices because refining
/// the disjoint union of two k-state models stabilizes within 2k-1 rounds.
///
/// The result shares subtrees heavily; callers should evaluate it with
/// model_check (memoized), and render it only for small models.
inline Formula characteristic_formula(const Model& m, const std::string& state) {
  require_valid(m);
  Index ix = make_index(m);
  auto it = ix.state_id.find(state);
  if (it == ix.state_id.end()) throw Error("unknown state: " + state);
  int k = ix.nstates;
  std::vector<Formula> base(k);
  for (int s = 0; s < k; ++s) {
    std::vector<Formula> lits;
    for (int a = 0; a < ix.natoms; ++a) {
      Formula atom = Formula::atom(m.sig.atoms[a]);
      lits.push_back(ix.val[s][a] ? atom : Formula::neg(atom));
    }
    base[s] = conj_all(lits);
  }
  std::vector<Formula> cur = base;
  int depth = 2 * k - 1;
  for (int level = 1; level <= depth; ++level) {
    std::vector<Formula> next(k);
    for (int s = 0; s < k; ++s) {
      std::vector<Formula> parts{base[s]};
      for (int i = 0; i < ix.nagents; ++i) {
        std::set<Formula> reach;
        for (int x : ix.blocks[i][ix.block_of[i][s]]) reach.insert(cur[x]);
        std::vector<Formula> reach_v(reach.begin(), reach.end());
        parts.push_back(Formula::know(i + 1, disj_all(reach_v)));
        for (const Formula& g : reach_v)
          parts.push_back(Formula::neg(Formula::know(i + 1, Formula::neg(g))));
      }
      next[s] = conj_all(parts);
    }
    cur = std::move(next);
  }
  return cur[it->second];
}

// ── Document format ─────────────────────────────────────────────────────────
//
//   atoms heads, tails
//   agents 2
//   state w : heads
//   state v : tails
//   agent 1 blocks { {w, v} }
//   agent 2 blocks { {w} {v} }
//
// Blank lines and '#' comments are ignored. Line order is free except that
// every state and agent line must be self-contained as above.

namespace detail {

inline std::vector<std::string> split_names(const std::string& text, std::size_t lineno) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!cur.empty()) out.push_back(std::exchange(cur, {}));
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  for (const auto& n : out)
    if (!is_identifier(n))
      throw Error("line " + std::to_string(lineno) + ": bad name '" + n + "'");
  return out;
}

}  // namespace detail

/// Parses the document format above and validates the result.
inline Model import_model(const std::string& text) {
  Model m;
  bool saw_atoms = false, saw_agents = false;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    auto fail = [&](const std::string& why) -> Error {
      return Error("line " + std::to_string(lineno) + ": " + why);
    };
    if (head == "atoms") {
      if (saw_atoms) throw fail("duplicate atoms line");
      saw_atoms = true;
      std::string rest;
      std::getline(ls, rest);
      m.sig.atoms = detail::split_names(rest, lineno);
    } else if (head == "agents") {
      if (saw_agents) throw fail("duplicate agents line");
      saw_agents = true;
      if (!(ls >> m.sig.agents)) throw fail("expected agent count");
      std::string junk;
      if (ls >> junk) throw fail("unexpected trailing input");
    } else if (head == "state") {
      std::string id, colon;
      if (!(ls >> id)) throw fail("expected state id");
      if (!(ls >> colon) || colon != ":") throw fail("expected ':' after state id");
      std::string rest;
      std::getline(ls, rest);
      auto atoms = detail::split_names(rest, lineno);
      m.states.push_back(id);
      m.valuation[id] = std::set<std::string>(atoms.begin(), atoms.end());
    } else if (head == "agent") {
      int agent = 0;
      std::string kw;
      if (!(ls >> agent)) throw fail("expected agent index");
      if (!(ls >> kw) || kw != "blocks") throw fail("expected 'blocks'");
      std::string rest;
      std::getline(ls, rest);
      // Parse "{ {a, b} {c} }" character by character.
      std::vector<std::vector<std::string>> blocks;
      std::size_t p = 0;
      auto skip = [&] {
        while (p < rest.size() && std::isspace(static_cast<unsigned char>(rest[p]))) ++p;
      };
      skip();
      if (p >= rest.size() || rest[p] != '{') throw fail("expected '{'");
      ++p;
      for (;;) {
        skip();
        if (p >= rest.size()) throw fail("unterminated block list");
        if (rest[p] == '}') { ++p; break; }
        if (rest[p] != '{') throw fail("expected '{' or '}'");
        std::size_t close = rest.find('}', p);
        if (close == std::string::npos) throw fail("unterminated block");
        blocks.push_back(detail::split_names(rest.substr(p + 1, close - p - 1), lineno));
        if (blocks.back().empty()) throw fail("empty block");
        p = close + 1;
      }
      skip();
      if (p != rest.size()) throw fail("unexpected trailing input");
      if (m.partitions.count(agent)) throw fail("duplicate blocks line for agent " + std::to_string(agent));
      m.partitions[agent] = std::move(blocks);
    } else {
      throw fail("unrecognized line '" + head + " ...'");
    }
  }
  require_valid(m);
  return m;
}

/// Canonical text form: atoms and agents first, states in model order with
/// their atoms in signature order, then each agent's blocks ordered by
/// first member (in state order) with members in state order. Importing the
/// result reproduces the model.
inline std::string export_model(const Model& m) {
  require_valid(m);
  Index ix = make_index(m);
  std::string out = "atoms";
  for (std::size_t a = 0; a < m.sig.atoms.size(); ++a)
    out += (a ? ", " : " ") + m.sig.atoms[a];
  out += "\nagents " + std::to_string(m.sig.agents) + "\n";
  for (int s = 0; s < ix.nstates; ++s) {
    out += "state " + m.states[s] + " :";
    bool first = true;
    for (int a = 0; a < ix.natoms; ++a)
      if (ix.val[s][a]) {
        out += (first ? " " : ", ") + m.sig.atoms[a];
        first = false;
      }
    out += "\n";
  }
  for (int i = 0; i < ix.nagents; ++i) {
    auto blocks = ix.blocks[i];  // members already sorted by state index
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    out += "agent " + std::to_string(i + 1) + " blocks {";
    for (const auto& block : blocks) {
      out += " {";
      for (std::size_t j = 0; j < block.size(); ++j)
        out += (j ? ", " : "") + m.states[block[j]];
      out += "}";
    }
    out += " }\n";
  }
  return out;
}

/// Graphviz form. States are nodes labeled with their true atoms; each pair
/// of distinct states sharing a block gets one undirected edge labeled with
/// the agents relating them. Reflexive loops are left implicit. States named
/// in `highlight` are drawn inside an enclosing boundary (used to mark a
/// carved subset against its parent).
inline std::string export_dot(const Model& m,
                              const std::set<std::string>& highlight = {}) {
  require_valid(m);
  Index ix = make_index(m);
  for (const auto& h : highlight)
    if (!ix.state_id.count(h)) throw Error("unknown state: " + h);
  auto node_line = [&](int s, const std::string& indent) {
    std::string label = m.states[s];
    bool first = true;
    for (int a = 0; a < ix.natoms; ++a)
      if (ix.val[s][a]) {
        label += (first ? "\\n" : ",") + m.sig.atoms[a];
        first = false;
      }
    return indent + m.states[s] + " [label=\"" + label + "\"];\n";
  };
  std::string out = "graph model {\n  node [shape=box, style=rounded];\n";
  if (!highlight.empty()) {
    out += "  subgraph cluster_carved {\n    style=rounded;\n";
    for (int s = 0; s < ix.nstates; ++s)
      if (highlight.count(m.states[s])) out += node_line(s, "    ");
    out += "  }\n";
    for (int s = 0; s < ix.nstates; ++s)
      if (!highlight.count(m.states[s])) out += node_line(s, "  ");
  } else {
    for (int s = 0; s < ix.nstates; ++s) out += node_line(s, "  ");
  }
  for (int s = 0; s < ix.nstates; ++s)
    for (int t = s + 1; t < ix.nstates; ++t) {
      std::string agents;
      for (int i = 0; i < ix.nagents; ++i)
        if (ix.block_of[i][s] == ix.block_of[i][t])
          agents += (agents.empty() ? "R" : ",R") + std::to_string(i + 1);
      if (!agents.empty())
        out += "  " + m.states[s] + " -- " + m.states[t] + " [label=\"" + agents + "\"];\n";
    }
  out += "}\n";
  return out;
}

// ── Enumeration ─────────────────────────────────────────────────────────────

namespace detail {

/// All partitions of {0..k-1} via restricted growth strings.
inline std::vector<std::vector<std::vector<int>>> all_partitions(int k) {
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<int> rgs(k, 0);
  for (;;) {
    int nblocks = 1 + *std::max_element(rgs.begin(), rgs.end());
    std::vector<std::vector<int>> blocks(nblocks);
    for (int s = 0; s < k; ++s) blocks[rgs[s]].push_back(s);
    out.push_back(std::move(blocks));
    // next restricted growth string
    int i = k - 1;
    for (; i > 0; --i) {
      int cap = 1 + *std::max_element(rgs.begin(), rgs.begin() + i);
      if (rgs[i] < cap) { ++rgs[i]; break; }
      rgs[i] = 0;
    }
    if (i == 0) break;
  }
  return out;
}

}  // namespace detail

/// Streams every model over `sig` with 1..max_states states named s1, s2,
/// ...: all valuations crossed with all per-agent partitions. The callback
/// receives each model and returns true to stop early. The family is closed
/// under state renaming, which callers (notably the satisfiability oracle)
/// rely on.
template <class Fn>
inline void for_each_model(const Signature& sig, int max_states, Fn&& fn) {
  check_signature(sig);
  if (max_states < 1) throw Error("max_states must be at least 1");
  int natoms = static_cast<int>(sig.atoms.size());
  for (int k = 1; k <= max_states; ++k) {
    std::vector<std::string> names;
    for (int s = 1; s <= k; ++s) names.push_back("s" + std::to_string(s));
    auto partitions = detail::all_partitions(k);
    // valuation counter: one subset index per state
    std::vector<int> vcount(k, 0);
    int vmax = 1 << natoms;
    for (;;) {
      Model base;
      base.sig = sig;
      base.states = names;
      for (int s = 0; s < k; ++s) {
        std::set<std::string> atoms;
        for (int a = 0; a < natoms; ++a)
          if (vcount[s] & (1 << a)) atoms.insert(sig.atoms[a]);
        base.valuation[names[s]] = std::move(atoms);
      }
      // partition counter: one partition index per agent
      std::vector<std::size_t> pcount(sig.agents, 0);
      for (;;) {
        Model m = base;
        for (int i = 0; i < sig.agents; ++i) {
          std::vector<std::vector<std::string>> blocks;
          for (const auto& block : partitions[pcount[i]]) {
            std::vector<std::string> bnames;
            for (int s : block) bnames.push_back(names[s]);
            blocks.push_back(std::move(bnames));
          }
          m.partitions[i + 1] = std::move(blocks);
        }
        if (fn(std::as_const(m))) return;
        int i = sig.agents - 1;
        for (; i >= 0; --i) {
          if (++pcount[i] < partitions.size()) break;
          pcount[i] = 0;
        }
        if (i < 0) break;
      }
      int s = k - 1;
      for (; s >= 0; --s) {
        if (++vcount[s] < vmax) break;
        vcount[s] = 0;
      }
      if (s < 0) break;
    }
  }
}

/// Materialized form of for_each_model; meant for exhaustive checks over
/// small signatures (the count grows very fast).
inline std::vector<Model> enumerate_models(const Signature& sig, int max_states) {
  std::vector<Model> out;
  for_each_model(sig, max_states, [&](const Model& m) {
    out.push_back(m);
    return false;
  });
  return out;
}

}  // namespace epistemod::kripke
