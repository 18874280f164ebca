// Command-line front door. Every subcommand builds a Report that can be
// emitted as human text, as structured JSON (byte-stable for scripting),
// or — where a graph exists — as Graphviz DOT.
//
// Exit codes: 0 = valid/true/pass, 1 = invalid/false/fail, 2 = the prover
// gave up within its budget, 64 = usage error (bad flags, unreadable
// input, malformed formulas).
//
// The EPISTEMOD_BUDGET environment variable ("nodes" or "nodes,seconds")
// overrides the prover budget for all commands.

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "epistemod/canonical.hpp"
#include "epistemod/epistemic.hpp"
#include "epistemod/fixtures.hpp"
#include "epistemod/formula.hpp"
#include "epistemod/kripke.hpp"
#include "epistemod/normalform.hpp"
#include "epistemod/prover.hpp"

namespace epistemod::cli {

using ordered_json = nlohmann::ordered_json;

/// What a subcommand produced: text, structured data, optionally a graph.
struct Report {
  std::string text;
  ordered_json data;       // null when the report is empty
  std::string dot;
  bool has_dot = false;
};

inline bool empty_report(const Report& r) {
  return r.text.empty() && r.data.is_null() && !r.has_dot;
}

/// Serializes a report. An empty report yields an empty document in every
/// format; asking for a graph when none exists, or for an unknown format,
/// is an error.
inline std::string export_report(const Report& r, const std::string& format) {
  if (format != "text" && format != "structured" && format != "dot")
    throw Error("unknown format: " + format +
                " (expected text, structured, or dot)");
  if (empty_report(r)) return {};
  if (format == "text") return r.text;
  if (format == "structured") return r.data.dump(2) + "\n";
  if (!r.has_dot) throw Error("this report has no graph form");
  return r.dot;
}

/// Reads the vocabulary off formula text without parsing it: every
/// non-reserved identifier becomes an atom (first-appearance order), and
/// the largest Ki index used becomes the agent count (at least 1).
inline Signature infer_signature(const std::vector<std::string>& texts) {
  Signature sig;
  sig.agents = 1;
  for (const auto& t : texts) {
    std::size_t i = 0;
    while (i < t.size()) {
      if (!std::isalpha(static_cast<unsigned char>(t[i]))) { ++i; continue; }
      std::size_t j = i;
      while (j < t.size() &&
             (std::isalnum(static_cast<unsigned char>(t[j])) || t[j] == '_'))
        ++j;
      std::string w = t.substr(i, j - i);
      i = j;
      if (w == "true" || w == "false") continue;
      if (is_reserved_word(w)) {  // K, K1, K2, ...
        if (w.size() > 1) {
          try {
            sig.agents = std::max(sig.agents, std::stoi(w.substr(1)));
          } catch (const std::exception&) {
            // out-of-range index: leave it to the parser's error message
          }
        }
        continue;
      }
      if (!sig.has_atom(w)) sig.atoms.push_back(w);
    }
  }
  return sig;
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv(const std::string& s) {
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

inline std::string join(const std::vector<std::string>& xs,
                        const std::string& sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Newline-separated formulas; blank lines and '#' comments are skipped.
inline std::vector<std::string> read_formula_lines(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> out;
  std::string raw;
  while (std::getline(in, raw)) {
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
}

inline std::string verdict_word(prover::Verdict v) {
  switch (v) {
    case prover::Verdict::Valid: return "valid";
    case prover::Verdict::Invalid: return "invalid";
    default: return "unknown";
  }
}

inline int verdict_code(prover::Verdict v) {
  switch (v) {
    case prover::Verdict::Valid: return 0;
    case prover::Verdict::Invalid: return 1;
    default: return 2;
  }
}

inline prover::Budget budget_from_env() {
  prover::Budget b;
  const char* env = std::getenv("EPISTEMOD_BUDGET");
  if (!env || !*env) return b;
  std::string s(env);
  auto bad = [&]() -> Error {
    return Error("EPISTEMOD_BUDGET must be 'nodes' or 'nodes,seconds', got '" +
                 s + "'");
  };
  std::size_t comma = s.find(',');
  std::string nodes = trim(comma == std::string::npos ? s : s.substr(0, comma));
  try {
    std::size_t used = 0;
    b.max_nodes = std::stoull(nodes, &used);
    if (used != nodes.size() || nodes.empty()) throw bad();
    if (comma != std::string::npos) {
      std::string secs = trim(s.substr(comma + 1));
      b.max_seconds = std::stod(secs, &used);
      if (used != secs.size() || secs.empty() || b.max_seconds <= 0) throw bad();
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw bad();
  }
  return b;
}

/// A command's result: process exit code, report, optional error line for
/// stderr (the report may still carry partial output beside an error).
struct Outcome {
  int code = 0;
  Report report;
  std::string error;
};

// ── prove / derive ──────────────────────────────────────────────────────────

inline void describe_proof(Report& r, const prover::ProofResult& result) {
  r.data["verdict"] = verdict_word(result.verdict);
  r.data["nodes"] = result.nodes;
  if (result.verdict == prover::Verdict::Unknown) {
    r.text += "verdict: unknown (budget exhausted after " +
              std::to_string(result.nodes) + " nodes)\n";
    return;
  }
  r.text += "verdict: " + verdict_word(result.verdict) + "\n";
  if (result.countermodel) {
    const auto& cm = *result.countermodel;
    std::string doc = kripke::export_model(cm.model);
    r.text += "countermodel state: " + cm.state + "\n" + doc;
    r.data["countermodel"] = {{"state", cm.state}, {"document", doc}};
  }
}

inline Outcome cmd_prove(const std::string& text, const std::string& atoms_csv,
                         int agents_override, const prover::Budget& budget) {
  Signature sig = infer_signature({text});
  if (!atoms_csv.empty()) sig.atoms = split_csv(atoms_csv);
  if (agents_override != 0) sig.agents = agents_override;
  check_signature(sig);
  Formula f = parse(text, sig);
  auto result = prover::decide_validity(sig, f, budget);
  Outcome o;
  o.report.data["command"] = "prove";
  o.report.data["formula"] = render(f);
  o.report.data["atoms"] = sig.atoms;
  o.report.data["agents"] = sig.agents;
  o.report.text = "formula: " + render(f) + "\n";
  describe_proof(o.report, result);
  o.code = verdict_code(result.verdict);
  return o;
}

inline Outcome cmd_derive(const std::string& text, const std::string& gamma_file,
                          int agents_override, const prover::Budget& budget) {
  auto gamma_texts = read_formula_lines(gamma_file);
  auto all_texts = gamma_texts;
  all_texts.push_back(text);
  Signature sig = infer_signature(all_texts);
  if (agents_override != 0) sig.agents = agents_override;
  check_signature(sig);
  std::vector<Formula> gamma;
  for (const auto& g : gamma_texts) gamma.push_back(parse(g, sig));
  Formula f = parse(text, sig);
  auto result = prover::consequence(sig, prover::Hypotheses(gamma), f, budget);
  Outcome o;
  std::vector<std::string> renders;
  for (const auto& g : gamma) renders.push_back(render(g));
  o.report.data["command"] = "derive";
  o.report.data["hypotheses"] = renders;
  o.report.data["formula"] = render(f);
  o.report.data["atoms"] = sig.atoms;
  o.report.data["agents"] = sig.agents;
  o.report.text = "hypotheses: " + join(renders, "; ") + "\n" +
                  "formula: " + render(f) + "\n";
  describe_proof(o.report, result);
  o.code = verdict_code(result.verdict);
  return o;
}

inline Outcome cmd_nec_closed(const std::string& gamma_file,
                              int agents_override,
                              const prover::Budget& budget) {
  auto gamma_texts = read_formula_lines(gamma_file);
  Signature sig = infer_signature(gamma_texts);
  if (agents_override != 0) sig.agents = agents_override;
  check_signature(sig);
  std::vector<Formula> gamma;
  for (const auto& g : gamma_texts) gamma.push_back(parse(g, sig));
  auto report = prover::necessitation_closed(sig, prover::Hypotheses(gamma),
                                             budget);
  Outcome o;
  std::vector<std::string> renders;
  for (const auto& g : gamma) renders.push_back(render(g));
  o.report.data["command"] = "nec-closed";
  o.report.data["hypotheses"] = renders;
  o.report.data["agents"] = sig.agents;
  o.report.text = "hypotheses: " + join(renders, "; ") + "\n";
  o.report.data["entries"] = ordered_json::array();
  for (const auto& e : report.entries) {
    std::string query = render(Formula::know(e.agent, e.g));
    o.report.text += query + ": " + verdict_word(e.result.verdict) + "\n";
    o.report.data["entries"].push_back(
        {{"hypothesis", render(e.g)},
         {"agent", e.agent},
         {"query", query},
         {"verdict", verdict_word(e.result.verdict)}});
  }
  o.report.text += std::string("closed: ") + prover::to_string(report.closed) +
                   "\n";
  o.report.data["closed"] = prover::to_string(report.closed);
  o.code = report.closed == prover::Tri::Yes
               ? 0
               : (report.closed == prover::Tri::No ? 1 : 2);
  return o;
}

// ── normal forms ────────────────────────────────────────────────────────────

inline Outcome cmd_nform(const std::string& text, std::size_t max_disjuncts,
                         const prover::Budget& budget) {
  Signature sig = infer_signature({text});
  check_signature(sig);
  Formula f = parse(text, sig);
  Outcome o;
  o.report.data["command"] = "nform";
  o.report.data["formula"] = render(f);
  o.report.text = "formula: " + render(f) + "\n";
  normalform::NormalForm nf;
  try {
    nf = normalform::to_normal_form(sig, f, max_disjuncts);
  } catch (const Error& e) {
    if (std::string(e.what()).find("budget") == std::string::npos) throw;
    o.code = 2;
    o.error = e.what();
    return o;
  }
  Formula g = normalform::to_formula(nf);
  o.report.data["normal_form"] = render(g);
  o.report.data["disjuncts"] = ordered_json::array();
  o.report.text += "normal form: " + render(g) + "\n" +
                   "disjuncts: " + std::to_string(nf.disjuncts.size()) + "\n";
  for (std::size_t i = 0; i < nf.disjuncts.size(); ++i) {
    const auto& d = nf.disjuncts[i];
    std::vector<std::string> gammas;
    for (const auto& gm : d.gammas) gammas.push_back(render(gm));
    o.report.text += "  " + std::to_string(i + 1) + ": alpha = " +
                     render(d.alpha) + "; beta = " + render(d.beta) +
                     "; gammas = " +
                     (gammas.empty() ? std::string("(none)") : join(gammas)) +
                     "\n";
    o.report.data["disjuncts"].push_back({{"alpha", render(d.alpha)},
                                          {"beta", render(d.beta)},
                                          {"gammas", gammas}});
  }
  auto check = prover::decide_validity(sig, Formula::iff(f, g), budget);
  if (check.verdict == prover::Verdict::Invalid)
    throw Error("internal error: normal form is not equivalent to its input");
  o.report.text += "equivalence: " + verdict_word(check.verdict) + "\n";
  o.report.data["equivalence"] = verdict_word(check.verdict);
  o.code = check.verdict == prover::Verdict::Valid ? 0 : 2;
  return o;
}

// ── canonical worlds ────────────────────────────────────────────────────────

inline std::string worlds_dot(const Signature& sig,
                              const std::vector<canonical::CanonicalWorld>& ws) {
  std::string out = "graph worlds {\n  node [shape=box, style=rounded];\n";
  for (const auto& w : ws)
    out += "  " + canonical::world_name(sig, w) + " [label=\"" +
           canonical::world_name(sig, w) + "\\n" +
           canonical::render_world(sig, w) + "\"];\n";
  // clusters as mutual edges; reflexive loops stay implicit
  for (const auto& cls : canonical::induced_relation(ws))
    for (std::size_t i = 0; i < cls.size(); ++i)
      for (std::size_t j = i + 1; j < cls.size(); ++j)
        out += "  " + canonical::world_name(sig, cls[i]) + " -- " +
               canonical::world_name(sig, cls[j]) + ";\n";
  out += "}\n";
  return out;
}

inline Outcome cmd_canonical(const std::string& atoms_csv,
                             const std::string& gamma_file, bool classify) {
  Signature sig;
  sig.atoms = split_csv(atoms_csv);
  sig.agents = 1;
  check_signature(sig);
  std::vector<Formula> gamma;
  std::vector<std::string> renders;
  if (!gamma_file.empty())
    for (const auto& g : read_formula_lines(gamma_file)) {
      gamma.push_back(parse(g, sig));
      renders.push_back(render(gamma.back()));
    }
  Outcome o;
  std::vector<canonical::CanonicalWorld> ws;
  try {
    ws = gamma.empty()
             ? canonical::enumerate_worlds(sig)
             : canonical::canonical_model(sig, prover::Hypotheses(gamma));
  } catch (const Error& e) {
    std::string msg = e.what();
    if (msg.find("canonical model is empty") == std::string::npos) throw;
    o.code = 1;
    o.error = msg;
    return o;
  }
  o.report.data["command"] = "canonical";
  o.report.data["atoms"] = sig.atoms;
  o.report.data["hypotheses"] = renders;
  o.report.text = "atoms: " + join(sig.atoms) + "\n";
  if (!renders.empty())
    o.report.text += "hypotheses: " + join(renders, "; ") + "\n";
  std::vector<std::string> names;
  o.report.data["worlds"] = ordered_json::array();
  for (const auto& w : ws) {
    names.push_back(canonical::world_name(sig, w));
    std::vector<std::string> cluster;
    for (const auto& v : w.cluster)
      cluster.push_back(canonical::render_valuation(sig, v));
    o.report.data["worlds"].push_back(
        {{"name", names.back()},
         {"cluster", cluster},
         {"designated", canonical::render_valuation(sig, w.designated)},
         {"rendering", canonical::render_world(sig, w)}});
  }
  o.report.text += "worlds: " + join(names) + "\n";
  for (const auto& w : ws)
    o.report.text += "  " + canonical::world_name(sig, w) + " = " +
                     canonical::render_world(sig, w) + "\n";
  std::string classes_text;
  o.report.data["relation_classes"] = ordered_json::array();
  for (const auto& cls : canonical::induced_relation(ws)) {
    std::vector<std::string> members;
    for (const auto& w : cls) members.push_back(canonical::world_name(sig, w));
    classes_text += (classes_text.empty() ? "{" : " {") + join(members) + "}";
    o.report.data["relation_classes"].push_back(members);
  }
  o.report.text += "relation classes: " + classes_text + "\n";
  auto decision = canonical::fully_explanatory_subset(sig, ws);
  o.report.data["fully_explanatory"] = decision.fully_explanatory;
  o.report.text += std::string("fully explanatory: ") +
                   (decision.fully_explanatory ? "yes" : "no") + "\n";
  if (decision.witness) {
    const auto& w = *decision.witness;
    o.report.text += "  witness: " + render(w.formula) + " at " +
                     canonical::world_name(sig, w.at) + ", missing " +
                     canonical::world_name(sig, w.missing) + "\n";
    o.report.data["witness"] = {
        {"formula", render(w.formula)},
        {"at", canonical::world_name(sig, w.at)},
        {"missing", canonical::world_name(sig, w.missing)}};
  }
  if (classify) {
    auto report = canonical::classify_subsets(sig);
    std::string line = std::to_string(report.entries.size()) +
                       (report.exhaustive ? " subsets, " : " subsets sampled, ") +
                       std::to_string(report.fe_count) + " fully explanatory";
    o.report.text += "classification: " + line + "\n";
    o.report.data["classification"] = {{"subsets", report.entries.size()},
                                       {"fully_explanatory", report.fe_count},
                                       {"exhaustive", report.exhaustive}};
  }
  o.report.dot = worlds_dot(sig, ws);
  o.report.has_dot = true;
  return o;
}

// ── carving ─────────────────────────────────────────────────────────────────

inline Outcome cmd_carve(const std::string& model_file,
                         std::vector<std::string> keep, bool check_fe) {
  kripke::Model m = kripke::import_model(read_file(model_file));
  if (keep.empty())
    keep.assign(m.states.begin(), m.states.end());
  auto e = epistemic::carve(m, keep);
  Outcome o;
  o.report.data["command"] = "carve";
  o.report.data["parent_states"] = m.states;
  o.report.data["carved"] = e.carved;
  o.report.text = "parent states: " + join(m.states) + "\n" +
                  "carved worlds: " + join(e.carved) + "\n";
  o.report.data["dedup"] = ordered_json::array();
  for (const auto& g : e.dedup_log) {
    o.report.text += "dedup: kept " + g.kept + " for " + join(g.dropped) + "\n";
    o.report.data["dedup"].push_back({{"kept", g.kept}, {"dropped", g.dropped}});
  }
  o.report.data["accessibility"] = ordered_json::object();
  for (int agent = 1; agent <= m.sig.agents; ++agent) {
    auto rows = epistemic::induced_accessibility(e, agent);
    o.report.text += "agent " + std::to_string(agent) + " accessibility:\n";
    ordered_json agent_rows = ordered_json::object();
    for (const auto& w : e.carved) {
      o.report.text += "  " + w + " : " + join(rows.at(w)) + "\n";
      agent_rows[w] = rows.at(w);
    }
    o.report.data["accessibility"][std::to_string(agent)] = agent_rows;
  }
  if (check_fe) {
    auto fe = epistemic::fully_explanatory(e);
    o.report.data["fully_explanatory"] = fe.overall;
    o.report.text += std::string("fully explanatory: ") +
                     (fe.overall ? "yes" : "no") + "\n";
    o.report.data["failures"] = ordered_json::array();
    for (const auto& f : fe.failures) {
      o.report.text += "  at " + f.world + ", agent " +
                       std::to_string(f.agent) + ": witness " +
                       render(f.witness) + ", missing " + f.missing + "\n";
      o.report.data["failures"].push_back({{"world", f.world},
                                           {"agent", f.agent},
                                           {"witness", render(f.witness)},
                                           {"missing", f.missing}});
    }
    o.code = fe.overall ? 0 : 1;
  }
  o.report.dot = kripke::export_dot(
      m, std::set<std::string>(e.carved.begin(), e.carved.end()));
  o.report.has_dot = true;
  return o;
}

// ── corpus ──────────────────────────────────────────────────────────────────

inline Outcome cmd_corpus(const std::string& dir_opt, const std::string& only,
                          const prover::Budget& budget) {
  std::string dir = dir_opt;
  if (dir.empty())
    if (const char* env = std::getenv("EPISTEMOD_CORPUS_DIR")) dir = env;
  if (dir.empty()) dir = "corpus";
  Outcome o;
  o.report.data["command"] = "corpus";
  o.report.data["fixtures"] = ordered_json::array();
  std::size_t fixtures_run = 0, checks = 0, failures = 0;
  for (const auto& file : fixtures::corpus_files(dir)) {
    fixtures::Fixture fx;
    try {
      fx = fixtures::load_fixture(file);
    } catch (const Error& e) {
      ++fixtures_run;
      ++failures;
      o.report.text += "fixture " + file.filename().string() +
                       ": load error\n  FAIL " + std::string(e.what()) + "\n";
      o.report.data["fixtures"].push_back(
          {{"name", file.filename().string()}, {"error", e.what()}});
      continue;
    }
    if (!only.empty() && fx.name != only) continue;
    ++fixtures_run;
    auto results = fixtures::run_fixture(fx, budget);
    std::size_t failed = 0;
    ordered_json failed_checks = ordered_json::array();
    std::string fail_lines;
    for (const auto& r : results) {
      ++checks;
      if (!r.passed) {
        ++failed;
        ++failures;
        fail_lines += "  FAIL " + r.label + " -- " + r.detail + "\n";
        failed_checks.push_back({{"label", r.label}, {"detail", r.detail}});
      }
    }
    if (failed == 0) {
      o.report.text += "fixture " + fx.name + ": " +
                       std::to_string(results.size()) + " checks pass\n";
    } else {
      o.report.text += "fixture " + fx.name + ": " +
                       std::to_string(results.size() - failed) + " of " +
                       std::to_string(results.size()) + " checks pass\n" +
                       fail_lines;
    }
    o.report.data["fixtures"].push_back({{"name", fx.name},
                                         {"checks", results.size()},
                                         {"failed", failed},
                                         {"failures", failed_checks}});
  }
  if (fixtures_run == 0)
    throw Error(only.empty() ? "no fixtures found in " + dir
                             : "no fixture named '" + only + "' in " + dir);
  o.report.text += "corpus: " + std::to_string(fixtures_run) + " fixtures, " +
                   std::to_string(checks) + " checks, " +
                   (failures == 0 ? "all pass"
                                  : std::to_string(failures) + " failure(s)") +
                   "\n";
  o.report.data["total"] = {{"fixtures", fixtures_run},
                            {"checks", checks},
                            {"failures", failures}};
  o.code = failures == 0 ? 0 : 1;
  return o;
}

// ── export ──────────────────────────────────────────────────────────────────

inline ordered_json model_json(const kripke::Model& m) {
  ordered_json j;
  j["atoms"] = m.sig.atoms;
  j["agents"] = m.sig.agents;
  j["states"] = ordered_json::array();
  for (const auto& s : m.states) {
    std::vector<std::string> truths;
    for (const auto& a : m.sig.atoms)
      if (m.valuation.at(s).count(a)) truths.push_back(a);
    j["states"].push_back({{"id", s}, {"atoms", truths}});
  }
  j["partitions"] = ordered_json::object();
  kripke::Index ix = kripke::make_index(m);
  for (int agent = 1; agent <= m.sig.agents; ++agent) {
    auto blocks = ix.blocks[agent - 1];
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    ordered_json agent_blocks = ordered_json::array();
    for (const auto& block : blocks) {
      std::vector<std::string> names;
      for (int s : block) names.push_back(m.states[s]);
      agent_blocks.push_back(names);
    }
    j["partitions"][std::to_string(agent)] = agent_blocks;
  }
  return j;
}

inline Outcome cmd_export(const std::string& model_file,
                          const std::string& highlight_csv) {
  Outcome o;
  if (model_file.empty()) return o;  // empty report: empty document, exit 0
  kripke::Model m = kripke::import_model(read_file(model_file));
  o.report.text = kripke::export_model(m);
  o.report.data = model_json(m);
  auto names = split_csv(highlight_csv);
  o.report.dot = kripke::export_dot(
      m, std::set<std::string>(names.begin(), names.end()));
  o.report.has_dot = true;
  return o;
}

}  // namespace detail

/// Parses argv (without the program name), runs the chosen subcommand, and
/// writes its report to `out` and any error to `err`. Returns the process
/// exit code.
inline int run_command(std::vector<std::string> args, std::ostream& out,
                       std::ostream& err) {
  CLI::App app{"workbench for multi-agent S5 epistemic models"};
  app.name("epistemod");
  app.require_subcommand(1);

  std::string formula_text, gamma_file, model_file, atoms_csv, keep_csv;
  std::string dot_file, dir_opt, only_name, highlight_csv;
  std::string format = "text";
  bool classify = false, check_fe = false;
  int agents_override = 0;
  std::size_t max_disjuncts = 4096;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format,
                    "output format: text, structured, or dot");
  };

  CLI::App* prove = app.add_subcommand("prove", "decide validity of a formula");
  prove->add_option("formula", formula_text, "modal formula")->required();
  prove->add_option("--atoms", atoms_csv, "override the inferred atoms");
  prove->add_option("--agents", agents_override,
                    "override the inferred agent count");
  add_format(prove);

  CLI::App* derive =
      app.add_subcommand("derive", "decide whether hypotheses entail a formula");
  derive->add_option("formula", formula_text, "conclusion formula")->required();
  derive->add_option("--gamma", gamma_file, "newline-separated hypothesis file")
      ->required();
  derive->add_option("--agents", agents_override,
                     "override the inferred agent count");
  add_format(derive);

  CLI::App* nec = app.add_subcommand(
      "nec-closed", "is the hypothesis set closed under the knowledge rule?");
  nec->add_option("--gamma", gamma_file, "newline-separated hypothesis file")
      ->required();
  nec->add_option("--agents", agents_override,
                  "override the inferred agent count");
  add_format(nec);

  CLI::App* nform =
      app.add_subcommand("nform", "single-agent S5 normal form of a formula");
  nform->add_option("formula", formula_text, "single-agent formula")->required();
  nform->add_option("--max-disjuncts", max_disjuncts,
                    "disjunct budget for the rewrite");
  add_format(nform);

  CLI::App* canonical_cmd = app.add_subcommand(
      "canonical", "canonical worlds over a signature, or of hypotheses");
  canonical_cmd->add_option("--atoms", atoms_csv, "comma-separated atom list")
      ->required();
  canonical_cmd->add_option("--gamma", gamma_file,
                            "newline-separated hypothesis file");
  canonical_cmd->add_flag("--classify", classify,
                          "classify all world subsets as fully explanatory or not");
  canonical_cmd->add_option("--dot", dot_file, "write a DOT drawing here");
  add_format(canonical_cmd);

  CLI::App* carve =
      app.add_subcommand("carve", "carve an epistemic model out of a parent");
  carve->add_option("--model", model_file, "kripke model document")->required();
  carve->add_option("--keep", keep_csv, "states to keep, comma separated")
      ->required();
  carve->add_flag("--check-fe", check_fe,
                  "also decide the fully-explanatory property");
  carve->add_option("--dot", dot_file,
                    "write a DOT drawing (carved states boxed) here");
  add_format(carve);

  CLI::App* checkfe = app.add_subcommand(
      "check-fe", "fully-explanatory report for a carved model");
  checkfe->add_option("--model", model_file, "kripke model document")
      ->required();
  checkfe->add_option("--keep", keep_csv,
                      "states to keep (default: every state)");
  checkfe->add_option("--dot", dot_file,
                      "write a DOT drawing (carved states boxed) here");
  add_format(checkfe);

  CLI::App* corpus =
      app.add_subcommand("corpus", "replay the fixture corpus expectations");
  corpus->add_option("--dir", dir_opt,
                     "fixture directory (default: $EPISTEMOD_CORPUS_DIR, "
                     "then ./corpus)");
  corpus->add_option("--only", only_name, "run a single fixture by name");
  add_format(corpus);

  CLI::App* export_cmd =
      app.add_subcommand("export", "re-emit a model document in any format");
  export_cmd->add_option("--model", model_file, "kripke model document");
  export_cmd->add_option("--highlight", highlight_csv,
                         "states to box in the DOT form");
  add_format(export_cmd);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::Success&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 64;
  }

  try {
    prover::Budget budget = detail::budget_from_env();
    detail::Outcome o;
    if (app.got_subcommand(prove)) {
      o = detail::cmd_prove(formula_text, atoms_csv, agents_override, budget);
    } else if (app.got_subcommand(derive)) {
      o = detail::cmd_derive(formula_text, gamma_file, agents_override, budget);
    } else if (app.got_subcommand(nec)) {
      o = detail::cmd_nec_closed(gamma_file, agents_override, budget);
    } else if (app.got_subcommand(nform)) {
      o = detail::cmd_nform(formula_text, max_disjuncts, budget);
    } else if (app.got_subcommand(canonical_cmd)) {
      o = detail::cmd_canonical(atoms_csv, gamma_file, classify);
    } else if (app.got_subcommand(carve)) {
      o = detail::cmd_carve(model_file, detail::split_csv(keep_csv), check_fe);
    } else if (app.got_subcommand(checkfe)) {
      o = detail::cmd_carve(model_file, detail::split_csv(keep_csv), true);
    } else if (app.got_subcommand(corpus)) {
      o = detail::cmd_corpus(dir_opt, only_name, budget);
    } else if (app.got_subcommand(export_cmd)) {
      o = detail::cmd_export(model_file, highlight_csv);
    } else {
      err << "error: no subcommand chosen\n";
      return 64;
    }
    if (!o.error.empty()) err << "error: " << o.error << "\n";
    out << export_report(o.report, format);
    if (!dot_file.empty()) {
      if (!o.report.has_dot) throw Error("this report has no graph form");
      detail::write_file(dot_file, o.report.dot);
    }
    return o.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 64;
  }
}

}  // namespace epistemod::cli
