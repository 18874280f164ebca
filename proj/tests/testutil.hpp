// Shared helpers for the test suites: a deterministic RNG and random
// generators for formulas and models. Seeds are fixed in each test so
// failures reproduce.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "epistemod/formula.hpp"
#include "epistemod/kripke.hpp"

namespace testutil {

// The coin-toss family used throughout the docs and the corpus: a bare
// two-state model, a one-atom two-state model, the coin with a side
// condition Q and two auxiliary states, and the two-agent variant where
// agent 2 can tell the auxiliary states apart.
inline const char* kCoinDoc =
    "atoms heads, tails\n"
    "agents 1\n"
    "state a : heads\n"
    "state b : tails\n"
    "agent 1 blocks { {a, b} }\n";

inline const char* kPVDoc =
    "atoms p\n"
    "agents 1\n"
    "state w : p\n"
    "state v :\n"
    "agent 1 blocks { {w, v} }\n";

inline const char* kCoinQDoc =
    "atoms heads, tails, Q\n"
    "agents 1\n"
    "state w : heads, Q\n"
    "state v : tails, Q\n"
    "state c : heads\n"
    "state d : tails\n"
    "agent 1 blocks { {w, v, c, d} }\n";

inline const char* kCoinQ2Doc =
    "atoms heads, tails, Q\n"
    "agents 2\n"
    "state w : heads, Q\n"
    "state v : tails, Q\n"
    "state c : heads\n"
    "state d : tails\n"
    "agent 1 blocks { {w, v, c, d} }\n"
    "agent 2 blocks { {w, v} {c} {d} }\n";

inline epistemod::kripke::Model coin() {
  return epistemod::kripke::import_model(kCoinDoc);
}
inline epistemod::kripke::Model pv() {
  return epistemod::kripke::import_model(kPVDoc);
}
inline epistemod::kripke::Model coinq() {
  return epistemod::kripke::import_model(kCoinQDoc);
}
inline epistemod::kripke::Model coinq2() {
  return epistemod::kripke::import_model(kCoinQ2Doc);
}

/// splitmix64: tiny, seedable, stable across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n).
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

  bool chance(double p) { return (next() >> 11) * 0x1.0p-53 < p; }

 private:
  std::uint64_t state_;
};

/// Random formula over `sig` with modal depth at most `depth` and size
/// roughly 2^depth. All connectives are exercised.
inline epistemod::Formula random_formula(Rng& rng, const epistemod::Signature& sig,
                                         int depth) {
  using epistemod::Formula;
  if (depth <= 0 || rng.chance(0.25)) {
    int pick = rng.below(static_cast<int>(sig.atoms.size()) + 2);
    if (pick == 0) return Formula::top();
    if (pick == 1) return Formula::bot();
    return Formula::atom(sig.atoms[pick - 2]);
  }
  switch (rng.below(7)) {
    case 0: return Formula::neg(random_formula(rng, sig, depth - 1));
    case 1:
      return Formula::conj(random_formula(rng, sig, depth - 1),
                           random_formula(rng, sig, depth - 1));
    case 2:
      return Formula::disj(random_formula(rng, sig, depth - 1),
                           random_formula(rng, sig, depth - 1));
    case 3:
      return Formula::implies(random_formula(rng, sig, depth - 1),
                              random_formula(rng, sig, depth - 1));
    case 4:
      return Formula::iff(random_formula(rng, sig, depth - 1),
                          random_formula(rng, sig, depth - 1));
    default:
      return Formula::know(1 + rng.below(sig.agents),
                           random_formula(rng, sig, depth - 1));
  }
}

}  // namespace testutil
