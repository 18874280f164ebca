// Fixture corpus: named models and world sets with their expected
// behaviors stored as data, so any consumer (this library's CLI, a port,
// a grader script) can replay the same checks.
//
// A fixture file is line oriented; '#' starts a comment. Layout:
//
//   fixture <name>
//   model            \
//   atoms p          |  a kripke document (the import_model format),
//   ...              |  verbatim until a line reading "end"
//   end              /
//   keep w, v        # optional: carve these states out of the model
//   atoms p          # alternative to model: a bare signature...
//   agents 2         # ...with an optional agent count (default 1)
//   assume K1 p      # hypothesis, one per line (atoms fixtures only)
//   expect <kind> <args...> [: <payload>]
//
// Expectation kinds (model fixtures):
//   holds <state> : <formula>          model_check is true
//   fails <state> : <formula>          model_check is false
//   classes : {w} {v, u}               bisimilarity classes of the model
//   dot-contains : <substring>         DOT export contains the text
//   full-fe <true|false>               carving every state: fully explanatory?
// With a keep line (the carved epistemic model):
//   access <agent> <world> : w, v      induced accessibility row
//   fe <true|false>                    fully explanatory verdict
//   witness <agent> <world> <missing> : <formula>    one FE failure, exactly
//   constant <agent> <known|unknown> : <formula>     uniform constancy verdict
//   embedding-ok                       identity embedding certificate holds
// Atoms fixtures (canonical worlds of the assumed hypotheses; all worlds
// when nothing is assumed):
//   worlds : A, B                      world names, in enumeration order
//   world <name> : <rendering>         exact (cluster, designated) rendering
//   generator <name> : <formula>       true at that world, false at all others
//   relation-classes : {A} {B, C}      induced accessibility classes
//   fe <true|false>                    fully explanatory verdict
//   cm-witness <at> <missing> : <formula>            FE failure evidence
//   classify : <n> subsets, <k> fully explanatory   subset classification
//   nec-closed <yes|no|unknown>        closure of the hypotheses
//   derive <valid|invalid> [<max-states>] : <formula>  consequence verdict;
//       invalid verifies the countermodel and bounds its state count

#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "epistemod/canonical.hpp"
#include "epistemod/epistemic.hpp"
#include "epistemod/formula.hpp"
#include "epistemod/kripke.hpp"
#include "epistemod/prover.hpp"

namespace epistemod::fixtures {

struct Expectation {
  std::string kind;
  std::vector<std::string> args;
  std::string payload;
  std::size_t line = 0;
};

struct Fixture {
  std::string name;
  std::optional<kripke::Model> model;
  std::vector<std::string> keep;    // model fixtures: carve set (may be empty)
  std::vector<std::string> atoms;   // atoms fixtures: the signature
  int agents = 1;
  std::vector<std::string> assume;  // hypothesis texts, in file order
  std::vector<Expectation> expectations;
};

/// Outcome of one expectation.
struct CheckResult {
  std::string fixture;
  std::string label;
  bool passed = false;
  std::string detail;  // empty when passed
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

inline std::vector<std::string> csv_names(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::exchange(cur, {}));
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

/// Arity table: argument count range and whether a payload is required.
struct Shape {
  std::size_t min_args = 0, max_args = 0;
  bool payload = false;
};

inline const std::map<std::string, Shape>& shapes() {
  static const std::map<std::string, Shape> table = {
      {"holds", {1, 1, true}},        {"fails", {1, 1, true}},
      {"classes", {0, 0, true}},      {"dot-contains", {0, 0, true}},
      {"full-fe", {1, 1, false}},     {"access", {2, 2, true}},
      {"fe", {1, 1, false}},          {"witness", {3, 3, true}},
      {"constant", {2, 2, true}},     {"embedding-ok", {0, 0, false}},
      {"worlds", {0, 0, true}},       {"world", {1, 1, true}},
      {"generator", {1, 1, true}},    {"relation-classes", {0, 0, true}},
      {"cm-witness", {2, 2, true}},   {"classify", {0, 0, true}},
      {"nec-closed", {1, 1, false}},  {"derive", {1, 2, true}},
  };
  return table;
}

}  // namespace detail

/// Parses a fixture document; throws Error with a line number on any
/// structural problem, including an invalid embedded model.
inline Fixture parse_fixture(const std::string& text) {
  Fixture fx;
  bool saw_fixture = false, saw_model = false, saw_atoms = false;
  bool saw_keep = false, saw_agents = false;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) -> Error {
    return Error("fixture line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = detail::trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    std::string rest;
    std::getline(ls, rest);
    rest = detail::trim(rest);
    if (head == "fixture") {
      if (saw_fixture) throw fail("duplicate fixture line");
      if (rest.empty()) throw fail("fixture needs a name");
      saw_fixture = true;
      fx.name = rest;
      continue;
    }
    if (!saw_fixture) throw fail("expected 'fixture <name>' first");
    if (head == "model") {
      if (saw_model) throw fail("duplicate model block");
      if (!rest.empty()) throw fail("unexpected text after 'model'");
      saw_model = true;
      std::string doc;
      bool closed = false;
      while (std::getline(in, raw)) {
        ++lineno;
        if (detail::trim(raw) == "end") { closed = true; break; }
        doc += raw + "\n";
      }
      if (!closed) throw fail("model block missing 'end'");
      try {
        fx.model = kripke::import_model(doc);
      } catch (const Error& e) {
        throw Error("fixture model block: " + std::string(e.what()));
      }
    } else if (head == "keep") {
      if (saw_keep) throw fail("duplicate keep line");
      saw_keep = true;
      fx.keep = detail::csv_names(rest);
      if (fx.keep.empty()) throw fail("keep needs at least one state");
    } else if (head == "atoms") {
      if (saw_atoms) throw fail("duplicate atoms line");
      saw_atoms = true;
      fx.atoms = detail::csv_names(rest);
    } else if (head == "agents") {
      if (saw_agents) throw fail("duplicate agents line");
      saw_agents = true;
      try {
        fx.agents = std::stoi(rest);
      } catch (const std::exception&) {
        throw fail("agents needs a number");
      }
    } else if (head == "assume") {
      if (rest.empty()) throw fail("assume needs a formula");
      fx.assume.push_back(rest);
    } else if (head == "expect") {
      std::size_t colon = rest.find(':');
      Expectation e;
      e.line = lineno;
      std::string headpart = rest;
      if (colon != std::string::npos) {
        headpart = rest.substr(0, colon);
        e.payload = detail::trim(rest.substr(colon + 1));
      }
      auto toks = detail::words(headpart);
      if (toks.empty()) throw fail("expect needs a kind");
      e.kind = toks[0];
      e.args.assign(toks.begin() + 1, toks.end());
      auto it = detail::shapes().find(e.kind);
      if (it == detail::shapes().end())
        throw fail("unknown expectation kind '" + e.kind + "'");
      const auto& shape = it->second;
      if (e.args.size() < shape.min_args || e.args.size() > shape.max_args)
        throw fail("expectation '" + e.kind + "' takes " +
                   std::to_string(shape.min_args) +
                   (shape.max_args != shape.min_args
                        ? ".." + std::to_string(shape.max_args)
                        : "") +
                   " argument(s)");
      if (shape.payload && e.payload.empty())
        throw fail("expectation '" + e.kind + "' needs a ': <payload>' part");
      if (!shape.payload && colon != std::string::npos)
        throw fail("expectation '" + e.kind + "' takes no payload");
      fx.expectations.push_back(std::move(e));
    } else {
      throw fail("unrecognized line '" + head + " ...'");
    }
  }
  if (!saw_fixture) throw Error("fixture document is empty");
  if (saw_model && saw_atoms)
    throw Error("fixture '" + fx.name + "': model and atoms are exclusive");
  if (!saw_model && saw_keep)
    throw Error("fixture '" + fx.name + "': keep needs a model");
  if (saw_model && (saw_agents || !fx.assume.empty()))
    throw Error("fixture '" + fx.name +
                "': agents/assume apply to atoms fixtures only");
  if (fx.expectations.empty())
    throw Error("fixture '" + fx.name + "': no expectations");
  return fx;
}

inline Fixture load_fixture(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot read fixture file: " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_fixture(buf.str());
  } catch (const Error& e) {
    throw Error(file.filename().string() + ": " + e.what());
  }
}

/// All *.fix files under dir, sorted by filename for a stable corpus order.
inline std::vector<std::filesystem::path> corpus_files(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw Error("corpus directory not found: " + dir.string());
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".fix")
      out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

/// Lazily built evaluation contexts shared by one fixture's expectations.
struct Ctx {
  const Fixture& fx;
  prover::Budget budget;
  Signature sig;
  std::vector<Formula> gamma;
  std::optional<epistemic::EpistemicModel> carved_;
  std::optional<std::vector<canonical::CanonicalWorld>> worlds_;

  Ctx(const Fixture& f, const prover::Budget& b) : fx(f), budget(b) {
    if (fx.model) {
      sig = fx.model->sig;
    } else {
      sig.atoms = fx.atoms;
      sig.agents = fx.agents;
      check_signature(sig);
    }
    for (const auto& text : fx.assume) gamma.push_back(parse(text, sig));
  }

  const kripke::Model& model() {
    if (!fx.model) throw Error("expectation needs a model fixture");
    return *fx.model;
  }

  const epistemic::EpistemicModel& carved() {
    if (fx.keep.empty()) throw Error("expectation needs a keep line");
    if (!carved_) carved_ = epistemic::carve(model(), fx.keep);
    return *carved_;
  }

  const std::vector<canonical::CanonicalWorld>& worlds() {
    if (fx.model) throw Error("expectation needs an atoms fixture");
    if (!worlds_) {
      worlds_ = gamma.empty()
                    ? canonical::enumerate_worlds(sig)
                    : canonical::canonical_model(sig, prover::Hypotheses(gamma));
    }
    return *worlds_;
  }

  canonical::CanonicalWorld world_by_name(const std::string& name) {
    for (const auto& w : canonical::enumerate_worlds(sig))
      if (canonical::world_name(sig, w) == name) return w;
    throw Error("no canonical world named '" + name + "'");
  }
};

inline std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + xs[i];
  return out;
}

/// "{a} {b, c}" rendering of grouped names.
inline std::string braces(const std::vector<std::vector<std::string>>& groups) {
  std::string out;
  for (std::size_t i = 0; i < groups.size(); ++i)
    out += (i ? " {" : "{") + join(groups[i]) + "}";
  return out;
}

inline bool want_true(const std::string& arg) {
  if (arg == "true") return true;
  if (arg == "false") return false;
  throw Error("expected true or false, got '" + arg + "'");
}

/// Normalized bisimilarity classes: by first member in state order.
inline std::vector<std::vector<std::string>> ordered_classes(
    const kripke::Model& m) {
  auto classes = kripke::bisim_classes(m);
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < m.states.size(); ++i) pos[m.states[i]] = i;
  for (auto& cls : classes)
    std::sort(cls.begin(), cls.end(),
              [&](const std::string& a, const std::string& b) {
                return pos.at(a) < pos.at(b);
              });
  std::sort(classes.begin(), classes.end(),
            [&](const auto& a, const auto& b) {
              return pos.at(a.front()) < pos.at(b.front());
            });
  return classes;
}

/// Evaluates one expectation; throws Error to signal failure.
inline void eval_expectation(Ctx& ctx, const Expectation& e) {
  auto expect_eq = [](const std::string& got, const std::string& want) {
    if (got != want)
      throw Error("got \"" + got + "\", expected \"" + want + "\"");
  };
  if (e.kind == "holds" || e.kind == "fails") {
    const auto& m = ctx.model();
    Formula f = parse(e.payload, m.sig);
    bool got = kripke::model_check(m, e.args[0], f);
    if (got != (e.kind == "holds"))
      throw Error(render(f) + " is " + (got ? "true" : "false") + " at " +
                  e.args[0]);
  } else if (e.kind == "classes") {
    expect_eq(braces(ordered_classes(ctx.model())), e.payload);
  } else if (e.kind == "dot-contains") {
    if (kripke::export_dot(ctx.model()).find(e.payload) == std::string::npos)
      throw Error("DOT export does not contain \"" + e.payload + "\"");
  } else if (e.kind == "full-fe") {
    auto full = epistemic::carve(
        ctx.model(),
        std::vector<std::string>(ctx.model().states.begin(),
                                 ctx.model().states.end()));
    bool got = epistemic::fully_explanatory(full).overall;
    if (got != want_true(e.args[0]))
      throw Error(std::string("full carve is ") +
                  (got ? "" : "not ") + "fully explanatory");
  } else if (e.kind == "access") {
    int agent = std::stoi(e.args[0]);
    auto rows = epistemic::induced_accessibility(ctx.carved(), agent);
    auto it = rows.find(e.args[1]);
    if (it == rows.end()) throw Error("no carved world named " + e.args[1]);
    expect_eq(join(it->second), join(csv_names(e.payload)));
  } else if (e.kind == "fe" && ctx.fx.model) {
    bool got = epistemic::fully_explanatory(ctx.carved()).overall;
    if (got != want_true(e.args[0]))
      throw Error(std::string("carved model is ") + (got ? "" : "not ") +
                  "fully explanatory");
  } else if (e.kind == "witness") {
    int agent = std::stoi(e.args[0]);
    auto report = epistemic::fully_explanatory(ctx.carved());
    for (const auto& f : report.failures)
      if (f.world == e.args[1] && f.agent == agent) {
        if (f.missing != e.args[2])
          throw Error("missing state is " + f.missing + ", expected " +
                      e.args[2]);
        Formula want = parse(e.payload, ctx.sig);
        if (f.witness != want)
          throw Error("witness is " + render(f.witness) + ", expected " +
                      render(want));
        return;
      }
    throw Error("no failure recorded at (" + e.args[1] + ", agent " +
                e.args[0] + ")");
  } else if (e.kind == "constant") {
    int agent = std::stoi(e.args[0]);
    bool want = [&] {
      if (e.args[1] == "known") return true;
      if (e.args[1] == "unknown") return false;
      throw Error("expected known or unknown, got '" + e.args[1] + "'");
    }();
    Formula f = parse(e.payload, ctx.sig);
    auto report = epistemic::knowledge_constancy_check(ctx.carved(), agent, f);
    for (const auto& entry : report.entries)
      if (entry.knows != want)
        throw Error("at " + entry.world + " the formula is " +
                    (entry.knows ? "known" : "unknown"));
  } else if (e.kind == "embedding-ok") {
    auto cert = epistemic::embedding_certificate(ctx.carved());
    if (!cert.ok) throw Error("certificate reports a broken embedding");
    for (const auto& [agent, preserved] : cert.relation_preserved)
      if (!preserved)
        throw Error("agent " + std::to_string(agent) +
                    " accessibility is not preserved");
    for (const auto& w : ctx.carved().carved)
      if (!cert.inclusion.count(w) || cert.inclusion.at(w) != w)
        throw Error("inclusion does not map " + w + " to itself");
  } else if (e.kind == "worlds") {
    std::vector<std::string> got;
    for (const auto& w : ctx.worlds())
      got.push_back(canonical::world_name(ctx.sig, w));
    expect_eq(join(got), join(csv_names(e.payload)));
  } else if (e.kind == "world") {
    auto w = ctx.world_by_name(e.args[0]);
    const auto& ws = ctx.worlds();
    if (std::find(ws.begin(), ws.end(), w) == ws.end())
      throw Error("world " + e.args[0] + " is not part of this fixture's set");
    expect_eq(canonical::render_world(ctx.sig, w), e.payload);
  } else if (e.kind == "generator") {
    Formula f = parse(e.payload, ctx.sig);
    for (const auto& w : canonical::enumerate_worlds(ctx.sig)) {
      bool sat = canonical::world_satisfies(ctx.sig, w, f);
      bool own = canonical::world_name(ctx.sig, w) == e.args[0];
      if (sat != own)
        throw Error("formula is " + std::string(sat ? "true" : "false") +
                    " at " + canonical::world_name(ctx.sig, w));
    }
  } else if (e.kind == "relation-classes") {
    std::vector<std::vector<std::string>> named;
    for (const auto& cls : canonical::induced_relation(ctx.worlds())) {
      named.emplace_back();
      for (const auto& w : cls)
        named.back().push_back(canonical::world_name(ctx.sig, w));
    }
    expect_eq(braces(named), e.payload);
  } else if (e.kind == "fe") {
    auto decision = canonical::fully_explanatory_subset(ctx.sig, ctx.worlds());
    if (decision.fully_explanatory != want_true(e.args[0]))
      throw Error(std::string("world set is ") +
                  (decision.fully_explanatory ? "" : "not ") +
                  "fully explanatory");
  } else if (e.kind == "cm-witness") {
    auto decision = canonical::fully_explanatory_subset(ctx.sig, ctx.worlds());
    if (decision.fully_explanatory || !decision.witness)
      throw Error("world set is fully explanatory, no witness to compare");
    const auto& w = *decision.witness;
    expect_eq(canonical::world_name(ctx.sig, w.at), e.args[0]);
    expect_eq(canonical::world_name(ctx.sig, w.missing), e.args[1]);
    Formula want = parse(e.payload, ctx.sig);
    if (w.formula != want)
      throw Error("witness formula is " + render(w.formula) + ", expected " +
                  render(want));
  } else if (e.kind == "classify") {
    ctx.worlds();  // enforce the atoms-fixture context
    auto report = canonical::classify_subsets(ctx.sig);
    std::string got = std::to_string(report.entries.size()) + " subsets, " +
                      std::to_string(report.fe_count) + " fully explanatory";
    expect_eq(got, e.payload);
  } else if (e.kind == "nec-closed") {
    if (ctx.fx.model) throw Error("expectation needs an atoms fixture");
    auto report = prover::necessitation_closed(
        ctx.sig, prover::Hypotheses(ctx.gamma), ctx.budget);
    expect_eq(prover::to_string(report.closed), e.args[0]);
  } else if (e.kind == "derive") {
    if (ctx.fx.model) throw Error("expectation needs an atoms fixture");
    Formula f = parse(e.payload, ctx.sig);
    auto result = prover::consequence(ctx.sig, prover::Hypotheses(ctx.gamma),
                                      f, ctx.budget);
    if (e.args[0] == "valid") {
      if (result.verdict != prover::Verdict::Valid)
        throw Error(std::string("verdict is ") +
                    prover::to_string(result.verdict));
    } else if (e.args[0] == "invalid") {
      if (result.verdict != prover::Verdict::Invalid)
        throw Error(std::string("verdict is ") +
                    prover::to_string(result.verdict));
      const auto& cm = *result.countermodel;
      if (e.args.size() == 2 &&
          cm.model.states.size() > static_cast<std::size_t>(std::stoi(e.args[1])))
        throw Error("countermodel has " + std::to_string(cm.model.states.size()) +
                    " states, allowed " + e.args[1]);
      for (const auto& g : ctx.gamma)
        if (!kripke::model_check(cm.model, cm.state, g))
          throw Error("countermodel does not satisfy hypothesis " + render(g));
      if (kripke::model_check(cm.model, cm.state, f))
        throw Error("countermodel satisfies the conclusion");
    } else {
      throw Error("derive expects valid or invalid, got '" + e.args[0] + "'");
    }
  } else {
    throw Error("unknown expectation kind '" + e.kind + "'");
  }
}

inline std::string label_of(const Expectation& e) {
  std::string out = e.kind;
  for (const auto& a : e.args) out += " " + a;
  if (!e.payload.empty()) out += " : " + e.payload;
  return out;
}

}  // namespace detail

/// Replays every expectation of the fixture; one result per expectation,
/// in file order. Expectation failures (and any errors they raise) land in
/// the result rather than escaping.
inline std::vector<CheckResult> run_fixture(const Fixture& fx,
                                            const prover::Budget& budget = {}) {
  std::vector<CheckResult> out;
  detail::Ctx ctx(fx, budget);
  for (const auto& e : fx.expectations) {
    CheckResult r{fx.name, detail::label_of(e), true, {}};
    try {
      detail::eval_expectation(ctx, e);
    } catch (const Error& err) {
      r.passed = false;
      r.detail = err.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace epistemod::fixtures
