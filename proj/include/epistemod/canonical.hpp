// Single-agent canonical worlds over a finite atom signature.
//
// A world is represented finitely as (cluster, designated): the set of
// valuations the agent considers possible plus the valuation that actually
// obtains. Each such pair stands for the maximal consistent set of all
// single-agent formulas true at the designated point of the one-block S5
// model over the cluster; satisfaction is decided by model checking there.
// Over one atom this yields exactly the four worlds
//   A = ({p}, p)    B = ({p,~p}, p)    C = ({p,~p}, ~p)    D = ({~p}, ~p)
// and the module also decides which subsets of the enumeration are fully
// explanatory (closed under complete clusters) with concrete witness
// formulas for the failures.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "epistemod/formula.hpp"
#include "epistemod/kripke.hpp"
#include "epistemod/prover.hpp"

namespace epistemod::canonical {

/// The atoms assigned true; everything else in the signature is false.
using Valuation = std::set<std::string>;

/// Beyond this many atoms the enumeration is no longer desk-scale
/// (the world count is m * 2^(m-1) with m = 2^|atoms|).
inline constexpr std::size_t kAtomCap = 3;

struct CanonicalWorld {
  /// Distinct valuations the agent deems possible, in enumeration order
  /// (all-true valuation first, then descending).
  std::vector<Valuation> cluster;
  Valuation designated;  // must be a member of cluster

  bool operator==(const CanonicalWorld& o) const {
    return cluster == o.cluster && designated == o.designated;
  }
  bool operator!=(const CanonicalWorld& o) const { return !(*this == o); }
  bool operator<(const CanonicalWorld& o) const {
    if (cluster != o.cluster) return cluster < o.cluster;
    return designated < o.designated;
  }
};

inline void require_single_agent(const Signature& sig) {
  check_signature(sig);
  if (sig.agents != 1)
    throw Error("canonical worlds are single-agent; the signature declares " +
                std::to_string(sig.agents) + " agents");
}

namespace detail {

inline Valuation valuation_from_mask(const Signature& sig, unsigned mask) {
  Valuation v;
  for (std::size_t i = 0; i < sig.atoms.size(); ++i)
    if (mask >> i & 1u) v.insert(sig.atoms[i]);
  return v;
}

/// Nonempty subsets of {0..m-1} ordered lexicographically as sorted index
/// sequences: {0} < {0,1} < {0,1,2} < {0,2} < {1} < ...
inline void subsets_lex(unsigned m, std::vector<int>& cur,
                        std::vector<std::vector<int>>& out, int from = 0) {
  if (!cur.empty()) out.push_back(cur);
  for (int i = from; i < static_cast<int>(m); ++i) {
    cur.push_back(i);
    subsets_lex(m, cur, out, i + 1);
    cur.pop_back();
  }
}

}  // namespace detail

/// All canonical worlds, in a fixed order: clusters by lexicographic index
/// subsets of the descending valuation list, designated points in cluster
/// order. For one atom this yields exactly A, B, C, D.
inline std::vector<CanonicalWorld> enumerate_worlds(const Signature& sig) {
  require_single_agent(sig);
  if (sig.atoms.size() > kAtomCap)
    throw Error("canonical enumeration capped at " + std::to_string(kAtomCap) +
                " atoms; got " + std::to_string(sig.atoms.size()));
  unsigned m = 1u << sig.atoms.size();
  std::vector<Valuation> vals;
  for (unsigned i = 0; i < m; ++i)
    vals.push_back(detail::valuation_from_mask(sig, m - 1 - i));
  std::vector<std::vector<int>> clusters;
  std::vector<int> cur;
  detail::subsets_lex(m, cur, clusters);
  std::vector<CanonicalWorld> out;
  for (const auto& idxs : clusters) {
    std::vector<Valuation> cluster;
    for (int i : idxs) cluster.push_back(vals[i]);
    for (int i : idxs) out.push_back({cluster, vals[i]});
  }
  return out;
}

/// Checks the finite-representation invariants of one world.
inline void validate_world(const Signature& sig, const CanonicalWorld& w) {
  if (w.cluster.empty()) throw Error("canonical world has an empty cluster");
  std::set<Valuation> seen;
  for (const auto& v : w.cluster) {
    for (const auto& a : v)
      if (!sig.has_atom(a)) throw Error("cluster valuation uses unknown atom: " + a);
    if (!seen.insert(v).second) throw Error("cluster lists a valuation twice");
  }
  if (!seen.count(w.designated))
    throw Error("designated valuation is not a member of the cluster");
}

/// The one-block S5 model whose states are the cluster's valuations
/// (named u1, u2, ... in cluster order).
inline kripke::Model world_model(const Signature& sig, const CanonicalWorld& w) {
  require_single_agent(sig);
  validate_world(sig, w);
  kripke::Model m;
  m.sig = sig;
  for (std::size_t i = 0; i < w.cluster.size(); ++i) {
    std::string name = "u" + std::to_string(i + 1);
    m.states.push_back(name);
    m.valuation[name] = w.cluster[i];
  }
  m.partitions[1] = {m.states};
  return m;
}

inline std::string designated_state(const CanonicalWorld& w) {
  for (std::size_t i = 0; i < w.cluster.size(); ++i)
    if (w.cluster[i] == w.designated) return "u" + std::to_string(i + 1);
  throw Error("designated valuation is not a member of the cluster");
}

/// Membership of f in the maximal consistent set the world denotes.
inline bool world_satisfies(const Signature& sig, const CanonicalWorld& w,
                            const Formula& f) {
  require_single_agent(sig);
  check_formula(f, sig);  // rejects other agents' modalities and foreign atoms
  kripke::Model m = world_model(sig, w);
  return kripke::model_check(m, designated_state(w), f);
}

/// CM(gamma): every enumerated world containing all hypotheses. An empty
/// result means gamma is unsatisfiable over this signature and is an error.
inline std::vector<CanonicalWorld> canonical_model(const Signature& sig,
                                                   const prover::Hypotheses& gamma) {
  auto worlds = enumerate_worlds(sig);
  for (const auto& g : gamma.formulas) check_formula(g, sig);
  std::vector<CanonicalWorld> out;
  for (const auto& w : worlds) {
    bool all = true;
    for (const auto& g : gamma.formulas)
      if (!world_satisfies(sig, w, g)) { all = false; break; }
    if (all) out.push_back(w);
  }
  if (out.empty())
    throw Error("canonical model is empty: the hypotheses are jointly "
                "unsatisfiable over this signature");
  return out;
}

/// Induced accessibility between canonical worlds: x is accessible from w
/// exactly when they share a cluster (knowing F at w means F holds through
/// w's cluster, and theory inclusion then forces cluster equality).
inline bool related(const CanonicalWorld& a, const CanonicalWorld& b) {
  return a.cluster == b.cluster;
}

/// Equivalence classes of the induced relation, ordered by first member.
inline std::vector<std::vector<CanonicalWorld>> induced_relation(
    const std::vector<CanonicalWorld>& ws) {
  std::vector<std::vector<CanonicalWorld>> classes;
  for (const auto& w : ws) {
    bool placed = false;
    for (auto& cls : classes)
      if (related(cls.front(), w)) {
        if (std::find(cls.begin(), cls.end(), w) == cls.end()) cls.push_back(w);
        placed = true;
        break;
      }
    if (!placed) classes.push_back({w});
  }
  return classes;
}

/// Position of w in the canonical enumeration.
inline std::size_t world_index(const Signature& sig, const CanonicalWorld& w) {
  auto all = enumerate_worlds(sig);
  auto it = std::find(all.begin(), all.end(), w);
  if (it == all.end())
    throw Error("world is not part of the canonical enumeration for this signature");
  return static_cast<std::size_t>(it - all.begin());
}

/// A, B, C, D over one atom; w1, w2, ... otherwise.
inline std::string world_name(const Signature& sig, const CanonicalWorld& w) {
  std::size_t i = world_index(sig, w);
  if (sig.atoms.size() == 1) return std::string(1, static_cast<char>('A' + i));
  return "w" + std::to_string(i + 1);
}

/// Literal conjunction describing a valuation, e.g. "p&~q".
inline std::string render_valuation(const Signature& sig, const Valuation& v) {
  std::string out;
  for (const auto& a : sig.atoms) {
    if (!out.empty()) out += "&";
    if (!v.count(a)) out += "~";
    out += a;
  }
  return out.empty() ? "true" : out;
}

/// "({p, ~p}, p)" style rendering of (cluster, designated).
inline std::string render_world(const Signature& sig, const CanonicalWorld& w) {
  std::string out = "({";
  for (std::size_t i = 0; i < w.cluster.size(); ++i) {
    if (i) out += ", ";
    out += render_valuation(sig, w.cluster[i]);
  }
  out += "}, " + render_valuation(sig, w.designated) + ")";
  return out;
}

/// Evidence that a world set fails to be fully explanatory.
struct FEWitness {
  CanonicalWorld at;       // member whose cluster is incompletely represented
  CanonicalWorld missing;  // absent cluster-mate of `at` falsifying the formula
  /// True throughout the accessible members of the set, yet not known at
  /// `at` because it fails at `missing`.
  Formula formula = Formula::top();
};

struct FEDecision {
  bool fully_explanatory = true;
  std::optional<FEWitness> witness;
};

namespace detail {

/// Finds a formula true at every world of `present` (all sharing one
/// cluster) but not known at `at`. Preference: an atom literal, then the
/// caller's candidate formulas, then a disjunction of characteristic
/// formulas, which always succeeds.
inline Formula witness_formula(const Signature& sig,
                               const std::vector<CanonicalWorld>& present,
                               const CanonicalWorld& at,
                               const std::vector<Formula>& preferred) {
  auto works = [&](const Formula& f) {
    for (const auto& x : present)
      if (!world_satisfies(sig, x, f)) return false;
    return !world_satisfies(sig, at, Formula::know(1, f));
  };
  for (const auto& a : sig.atoms) {
    Formula lit = Formula::atom(a);
    if (works(lit)) return lit;
    Formula nlit = Formula::neg(lit);
    if (works(nlit)) return nlit;
  }
  for (const auto& f : preferred) {
    try {
      if (works(f)) return f;
    } catch (const Error&) {
      // candidate outside the signature or multi-agent; skip it
    }
  }
  kripke::Model shared = world_model(sig, at);
  std::vector<Formula> parts;
  for (const auto& x : present)
    parts.push_back(kripke::characteristic_formula(shared, designated_state(x)));
  Formula f = disj_all(parts);
  if (!works(f))
    throw Error("internal error: characteristic witness failed verification");
  return f;
}

}  // namespace detail

/// Is ws a union of complete cluster-classes of the full enumeration?
/// When not, the decision carries a witness: a member `at`, an absent
/// cluster-mate, and a formula true throughout the accessible part of ws
/// but not known at `at`. Candidate witness formulas in `preferred` (for
/// example the subformula closure of the hypotheses that produced ws) are
/// tried before falling back to characteristic-formula disjunctions.
inline FEDecision fully_explanatory_subset(const Signature& sig,
                                           const std::vector<CanonicalWorld>& ws,
                                           const std::vector<Formula>& preferred = {}) {
  require_single_agent(sig);
  if (ws.empty()) throw Error("world set must be nonempty");
  auto all = enumerate_worlds(sig);
  std::map<CanonicalWorld, std::size_t> index;
  for (std::size_t i = 0; i < all.size(); ++i) index.emplace(all[i], i);
  std::map<std::vector<Valuation>, std::vector<std::size_t>> by_cluster;
  for (std::size_t i = 0; i < all.size(); ++i) by_cluster[all[i].cluster].push_back(i);
  std::set<std::size_t> members;
  for (const auto& w : ws) {
    auto it = index.find(w);
    if (it == index.end())
      throw Error("world set member is not a canonical world over this signature");
    members.insert(it->second);
  }
  for (const auto& w : ws) {
    bool complete = true;
    for (std::size_t u : by_cluster[w.cluster]) complete = complete && members.count(u);
    if (complete) continue;
    std::vector<CanonicalWorld> present;
    for (const auto& x : ws)
      if (related(x, w)) present.push_back(x);
    Formula f = detail::witness_formula(sig, present, w, preferred);
    // The witness fails at some cluster-mate; any such mate is absent from
    // ws, since members of ws sharing the cluster all satisfy it.
    for (std::size_t u : by_cluster[w.cluster]) {
      if (members.count(u) || world_satisfies(sig, all[u], f)) continue;
      FEDecision d;
      d.fully_explanatory = false;
      d.witness = FEWitness{w, all[u], f};
      return d;
    }
    throw Error("internal error: witness holds throughout the cluster");
  }
  return {};
}

struct ClassifyEntry {
  std::vector<CanonicalWorld> subset;
  FEDecision decision;
};

struct ClassifyReport {
  bool exhaustive = true;
  std::size_t fe_count = 0;
  std::vector<ClassifyEntry> entries;
};

/// Classifies subsets of the canonical enumeration. Exhaustive for at most
/// one atom (15 subsets over p); above that, a deterministic sample of
/// distinct nonempty subsets.
inline ClassifyReport classify_subsets(const Signature& sig,
                                       std::size_t sample_cap = 200,
                                       std::uint64_t seed = 2024) {
  auto all = enumerate_worlds(sig);
  ClassifyReport report;
  std::vector<std::vector<std::size_t>> picks;
  if (sig.atoms.size() <= 1) {
    report.exhaustive = true;
    for (unsigned mask = 1; mask < (1u << all.size()); ++mask) {
      std::vector<std::size_t> idxs;
      for (std::size_t i = 0; i < all.size(); ++i)
        if (mask >> i & 1u) idxs.push_back(i);
      picks.push_back(std::move(idxs));
    }
  } else {
    report.exhaustive = false;
    std::mt19937_64 rng(seed);
    std::set<std::vector<std::size_t>> seen;
    std::size_t attempts = 0;
    while (seen.size() < sample_cap && attempts++ < sample_cap * 50) {
      std::size_t k = rng() % all.size() + 1;
      std::vector<std::size_t> pool(all.size());
      for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
      for (std::size_t i = 0; i < k; ++i)
        std::swap(pool[i], pool[i + rng() % (pool.size() - i)]);
      std::vector<std::size_t> idxs(pool.begin(), pool.begin() + k);
      std::sort(idxs.begin(), idxs.end());
      if (seen.insert(idxs).second) picks.push_back(std::move(idxs));
    }
  }
  for (const auto& idxs : picks) {
    ClassifyEntry entry;
    for (std::size_t i : idxs) entry.subset.push_back(all[i]);
    entry.decision = fully_explanatory_subset(sig, entry.subset);
    if (entry.decision.fully_explanatory) ++report.fe_count;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace epistemod::canonical
