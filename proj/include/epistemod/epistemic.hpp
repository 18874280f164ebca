// General epistemic models by scaffolding: carve a subset of a finite
// Kripke model's states and treat each carved state's parent theory as a
// world (a maximal consistent set). Every epistemic model with a finite
// Kripke parent arises this way; the carved set need not be closed under
// the parent's accessibility, which is exactly how non-fully-explanatory
// models appear.
//
// Induced accessibility between worlds is characterized through knowledge:
// x is accessible from w for agent i iff everything agent i knows at w
// holds at x. On finite parents that coincides with "x is parent-bisimilar
// to some member of w's agent-i block", which is what this module computes.

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "epistemod/formula.hpp"
#include "epistemod/kripke.hpp"

namespace epistemod::epistemic {

/// One collapse performed while carving: `kept` stands in for every state
/// in `dropped`, all of which are parent-bisimilar to it.
struct DedupGroup {
  std::string kept;
  std::vector<std::string> dropped;
};

/// An epistemic model presented by a Kripke parent and a carved state set.
/// Worlds are the carved states; each world's theory is its parent theory.
struct EpistemicModel {
  kripke::Model parent;
  std::vector<std::string> carved;   // nonempty; pairwise non-bisimilar
  std::vector<DedupGroup> dedup_log; // collapses performed by carve()
};

namespace detail {

/// Bisimilarity class of every parent state, by state index.
inline std::vector<int> parent_classes(const kripke::Model& m) {
  auto classes = kripke::bisim_classes(m);
  std::vector<int> cls(m.states.size(), -1);
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < m.states.size(); ++i) pos[m.states[i]] = i;
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (const auto& s : classes[c]) cls[pos.at(s)] = static_cast<int>(c);
  return cls;
}

inline std::size_t state_pos(const kripke::Model& m, const std::string& s) {
  auto it = std::find(m.states.begin(), m.states.end(), s);
  if (it == m.states.end()) throw Error("unknown state: " + s);
  return static_cast<std::size_t>(it - m.states.begin());
}

/// Members of the agent's block containing `s`.
inline const std::vector<std::string>& block_of(const kripke::Model& m, int agent,
                                                const std::string& s) {
  auto it = m.partitions.find(agent);
  if (it == m.partitions.end())
    throw Error("agent index out of range: " + std::to_string(agent));
  for (const auto& block : it->second)
    if (std::find(block.begin(), block.end(), s) != block.end()) return block;
  throw Error("state " + s + " is missing from agent " + std::to_string(agent) +
              "'s partition");
}

}  // namespace detail

/// All structural problems with e, empty when none: parent validity, the
/// carved set's membership and nonemptiness, and pairwise non-bisimilarity
/// of carved states.
inline std::vector<std::string> validate(const EpistemicModel& e) {
  std::vector<std::string> problems = kripke::validate(e.parent);
  if (!problems.empty()) return problems;
  if (e.carved.empty()) problems.push_back("carved state set is empty");
  std::set<std::string> seen;
  for (const auto& s : e.carved) {
    if (std::find(e.parent.states.begin(), e.parent.states.end(), s) ==
        e.parent.states.end())
      problems.push_back("carved state is not a parent state: " + s);
    else if (!seen.insert(s).second)
      problems.push_back("carved state listed twice: " + s);
  }
  if (!problems.empty()) return problems;
  auto cls = detail::parent_classes(e.parent);
  std::map<int, std::string> rep;
  for (const auto& s : e.carved) {
    int c = cls[detail::state_pos(e.parent, s)];
    auto [it, fresh] = rep.emplace(c, s);
    if (!fresh)
      problems.push_back("carved states " + it->second + " and " + s +
                         " are parent-bisimilar and denote the same world");
  }
  return problems;
}

inline void require_valid(const EpistemicModel& e) {
  auto problems = validate(e);
  if (problems.empty()) return;
  std::string msg = "invalid epistemic model:";
  for (const auto& p : problems) msg += "\n  - " + p;
  throw Error(msg);
}

/// Carves `subset` out of m. Parent-bisimilar members denote the same
/// world, so all but the first of each group are dropped and the collapse
/// is logged. Order follows the caller's subset order.
inline EpistemicModel carve(const kripke::Model& m,
                            const std::vector<std::string>& subset) {
  kripke::require_valid(m);
  if (subset.empty()) throw Error("cannot carve an empty state set");
  for (const auto& s : subset) detail::state_pos(m, s);  // unknown ids throw
  auto cls = detail::parent_classes(m);
  EpistemicModel e;
  e.parent = m;
  std::map<int, std::size_t> group_at;  // class -> index into carved
  std::map<std::size_t, DedupGroup> groups;
  std::set<std::string> taken;
  for (const auto& s : subset) {
    if (!taken.insert(s).second) continue;  // plain duplicate id, not a collapse
    int c = cls[detail::state_pos(m, s)];
    auto it = group_at.find(c);
    if (it == group_at.end()) {
      group_at.emplace(c, e.carved.size());
      e.carved.push_back(s);
    } else {
      auto& g = groups[it->second];
      g.kept = e.carved[it->second];
      g.dropped.push_back(s);
    }
  }
  for (auto& [pos, group] : groups) e.dedup_log.push_back(std::move(group));
  return e;
}

/// Agent i's induced accessibility: for each carved w (in carved order),
/// the carved x accessible from it — those parent-bisimilar to a member of
/// w's parent block. Always an equivalence relation on the carved states.
inline std::map<std::string, std::vector<std::string>> induced_accessibility(
    const EpistemicModel& e, int agent) {
  require_valid(e);
  if (agent < 1 || agent > e.parent.sig.agents)
    throw Error("agent index out of range: " + std::to_string(agent));
  auto cls = detail::parent_classes(e.parent);
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& w : e.carved) {
    std::set<int> reachable;
    for (const auto& u : detail::block_of(e.parent, agent, w))
      reachable.insert(cls[detail::state_pos(e.parent, u)]);
    std::vector<std::string> row;
    for (const auto& x : e.carved)
      if (reachable.count(cls[detail::state_pos(e.parent, x)])) row.push_back(x);
    out[w] = std::move(row);
  }
  return out;
}

/// One fully-explanatory failure: inside w's agent-i block sits a parent
/// state u whose theory no accessible world accounts for; the witness
/// formula holds at every world accessible from w yet is not known at w —
/// in particular, it fails at u.
struct FEFailure {
  std::string world;
  int agent = 1;
  std::string missing;
  Formula witness = Formula::top();
};

struct FEReport {
  bool overall = true;
  std::vector<FEFailure> failures;  // one per failing (world, agent) pair
};

namespace detail {

/// Literal conjunction pinning down a state's valuation.
inline Formula state_description(const kripke::Model& m, const std::string& s) {
  std::vector<Formula> lits;
  const auto& val = m.valuation.at(s);
  for (const auto& a : m.sig.atoms) {
    Formula lit = Formula::atom(a);
    lits.push_back(val.count(a) ? lit : Formula::neg(lit));
  }
  return conj_all(lits);
}

/// A formula true at every state of `present` but not known at w by agent
/// i (in the parent). Preference: an atom literal, then a disjunction of
/// valuation descriptions, then a disjunction of characteristic formulas,
/// which cannot fail.
inline Formula fe_witness(const kripke::Model& m, const std::string& w, int agent,
                          const std::vector<std::string>& present) {
  auto works = [&](const Formula& f) {
    for (const auto& x : present)
      if (!kripke::model_check(m, x, f)) return false;
    return !kripke::model_check(m, w, Formula::know(agent, f));
  };
  for (const auto& a : m.sig.atoms) {
    Formula lit = Formula::atom(a);
    if (works(lit)) return lit;
    Formula nlit = Formula::neg(lit);
    if (works(nlit)) return nlit;
  }
  std::vector<Formula> descs;
  for (const auto& x : present) descs.push_back(state_description(m, x));
  Formula by_valuation = disj_all(descs);
  if (works(by_valuation)) return by_valuation;
  std::vector<Formula> chis;
  for (const auto& x : present) chis.push_back(kripke::characteristic_formula(m, x));
  Formula by_class = disj_all(chis);
  if (!works(by_class))
    throw Error("internal error: characteristic witness failed verification");
  return by_class;
}

}  // namespace detail

/// Decides whether every parent state inside a carved world's block is
/// accounted for by some accessible world. Failures carry the missing
/// parent state and a verified witness formula.
inline FEReport fully_explanatory(const EpistemicModel& e) {
  require_valid(e);
  auto cls = detail::parent_classes(e.parent);
  FEReport report;
  for (const auto& w : e.carved) {
    for (int agent = 1; agent <= e.parent.sig.agents; ++agent) {
      std::set<int> reachable;
      for (const auto& u : detail::block_of(e.parent, agent, w))
        reachable.insert(cls[detail::state_pos(e.parent, u)]);
      std::vector<std::string> present;  // R_i(w), in carved order
      std::set<int> covered;             // their bisimilarity classes
      for (const auto& x : e.carved)
        if (reachable.count(cls[detail::state_pos(e.parent, x)])) {
          present.push_back(x);
          covered.insert(cls[detail::state_pos(e.parent, x)]);
        }
      bool complete = true;
      for (const auto& u : detail::block_of(e.parent, agent, w))
        complete = complete && covered.count(cls[detail::state_pos(e.parent, u)]);
      if (complete) continue;
      report.overall = false;
      Formula witness = detail::fe_witness(e.parent, w, agent, present);
      // Wherever the witness fails inside the block is necessarily an
      // uncovered state: covered ones share a bisimilarity class with an
      // accessible world, where the witness holds.
      std::optional<std::string> missing;
      for (const auto& u : detail::block_of(e.parent, agent, w))
        if (!kripke::model_check(e.parent, u, witness)) {
          missing = u;
          break;
        }
      if (!missing) throw Error("internal error: witness holds on the whole block");
      report.failures.push_back({w, agent, *missing, witness});
    }
  }
  return report;
}

/// Per-world constancy of knowledge across the induced accessibility
/// class: on R_i(w), either K_i f holds everywhere or ~K_i f does.
struct ConstancyEntry {
  std::string world;
  bool knows = false;  // K_i f throughout R_i(w); otherwise ~K_i f throughout
};

struct ConstancyReport {
  int agent = 1;
  Formula formula = Formula::top();
  std::vector<ConstancyEntry> entries;  // carved order
};

inline ConstancyReport knowledge_constancy_check(const EpistemicModel& e, int agent,
                                                 const Formula& f) {
  require_valid(e);
  check_formula(f, e.parent.sig);
  auto access = induced_accessibility(e, agent);
  ConstancyReport report{agent, f, {}};
  Formula kf = Formula::know(agent, f);
  for (const auto& w : e.carved) {
    int knowing = 0, ignorant = 0;
    for (const auto& x : access.at(w))
      (kripke::model_check(e.parent, x, kf) ? knowing : ignorant)++;
    if (knowing && ignorant)
      throw Error("internal error: knowledge of " + render(f) +
                  " is not constant on the accessibility class of " + w);
    report.entries.push_back({w, knowing > 0});
  }
  return report;
}

/// Constructive embedding of the epistemic model back into its parent:
/// the identity inclusion on carved states, plus the per-agent fact that
/// induced accessibility only relates worlds whose block membership backs
/// it up (up to bisimulation).
struct EmbeddingCertificate {
  kripke::Model parent;
  std::map<std::string, std::string> inclusion;  // world -> parent state
  std::map<int, bool> relation_preserved;        // per agent
  bool ok = true;
};

inline EmbeddingCertificate embedding_certificate(const EpistemicModel& e) {
  require_valid(e);
  EmbeddingCertificate cert;
  cert.parent = e.parent;
  for (const auto& s : e.carved) cert.inclusion[s] = s;
  auto cls = detail::parent_classes(e.parent);
  for (int agent = 1; agent <= e.parent.sig.agents; ++agent) {
    bool preserved = true;
    auto access = induced_accessibility(e, agent);
    for (const auto& w : e.carved) {
      for (const auto& x : access.at(w)) {
        bool backed = false;
        for (const auto& u : detail::block_of(e.parent, agent, w))
          if (cls[detail::state_pos(e.parent, u)] ==
              cls[detail::state_pos(e.parent, x)])
            backed = true;
        preserved = preserved && backed;
      }
    }
    cert.relation_preserved[agent] = preserved;
    cert.ok = cert.ok && preserved;
  }
  return cert;
}

}  // namespace epistemod::epistemic
