// Command-line behavior: the exit-code contract, output formats and their
// byte stability, countermodel round trips, and the fixture-corpus
// machinery the `corpus` subcommand drives.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "epistemod/cli.hpp"
#include "testutil.hpp"

using namespace epistemod;
using Catch::Matchers::ContainsSubstring;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = 0;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run_command(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

/// Scratch directory for input files; wiped once per process.
fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "epistemod_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_scratch(const std::string& name, const std::string& content) {
  fs::path p = scratch() / name;
  std::ofstream out(p);
  out << content;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Sets (or clears) an environment variable for one scope.
class EnvGuard {
 public:
  EnvGuard(const char* name, const char* value) : name_(name) {
    if (const char* old = std::getenv(name)) saved_ = old;
    if (value)
      ::setenv(name, value, 1);
    else
      ::unsetenv(name);
  }
  ~EnvGuard() {
    if (saved_)
      ::setenv(name_, saved_->c_str(), 1);
    else
      ::unsetenv(name_);
  }
  EnvGuard(const EnvGuard&) = delete;
  EnvGuard& operator=(const EnvGuard&) = delete;

 private:
  const char* name_;
  std::optional<std::string> saved_;
};

const std::string corpus_dir = EPISTEMOD_CORPUS_DIR;

/// The model document a `verdict: invalid` text report embeds, i.e.
/// everything from the first "atoms " line on.
std::string embedded_document(const std::string& text) {
  auto at = text.find("\natoms ");
  REQUIRE(at != std::string::npos);
  return text.substr(at + 1);
}

/// The state named on the "countermodel state:" line.
std::string countermodel_state(const std::string& text) {
  const std::string key = "countermodel state: ";
  auto at = text.find(key);
  REQUIRE(at != std::string::npos);
  auto end = text.find('\n', at);
  return text.substr(at + key.size(), end - at - key.size());
}

}  // namespace

TEST_CASE("signature inference reads atoms and agents off raw text") {
  SECTION("atoms in first-appearance order, modalities counted") {
    Signature sig = cli::infer_signature({"K2 p -> K1 q & r"});
    CHECK(sig.atoms == std::vector<std::string>{"p", "q", "r"});
    CHECK(sig.agents == 2);
  }
  SECTION("bare K counts as agent 1; constants are not atoms") {
    Signature sig = cli::infer_signature({"K (p | true) & ~false"});
    CHECK(sig.atoms == std::vector<std::string>{"p"});
    CHECK(sig.agents == 1);
  }
  SECTION("duplicates collapse, order is first appearance") {
    Signature sig = cli::infer_signature({"q & p & q"});
    CHECK(sig.atoms == std::vector<std::string>{"q", "p"});
  }
  SECTION("multiple texts pool their vocabulary") {
    Signature sig = cli::infer_signature({"K1 p", "K3 q"});
    CHECK(sig.atoms == std::vector<std::string>{"p", "q"});
    CHECK(sig.agents == 3);
  }
  SECTION("empty input still declares one agent") {
    Signature sig = cli::infer_signature({});
    CHECK(sig.atoms.empty());
    CHECK(sig.agents == 1);
  }
  SECTION("underscored identifiers are single atoms") {
    Signature sig = cli::infer_signature({"coin_up_1 | p2"});
    CHECK(sig.atoms == std::vector<std::string>{"coin_up_1", "p2"});
  }
}

TEST_CASE("report serialization") {
  cli::Report empty;
  CHECK(cli::export_report(empty, "text").empty());
  CHECK(cli::export_report(empty, "structured").empty());
  CHECK(cli::export_report(empty, "dot").empty());

  cli::Report r;
  r.text = "hello\n";
  r.data["x"] = 1;
  CHECK(cli::export_report(r, "text") == "hello\n");
  CHECK(cli::export_report(r, "structured") == r.data.dump(2) + "\n");
  CHECK_THROWS_WITH(cli::export_report(r, "dot"),
                    ContainsSubstring("no graph form"));
  CHECK_THROWS_WITH(cli::export_report(r, "yaml"),
                    ContainsSubstring("unknown format: yaml"));

  r.dot = "graph g {}\n";
  r.has_dot = true;
  CHECK(cli::export_report(r, "dot") == "graph g {}\n");
}

TEST_CASE("prove: exit codes and countermodel round trip") {
  SECTION("a validity exits 0") {
    auto r = run({"prove", "K1 p -> p"});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("verdict: valid"));
    CHECK(r.err.empty());
  }

  SECTION("an invalidity exits 1 and embeds a re-importable countermodel") {
    auto r = run({"prove", "p -> K1 p"});
    CHECK(r.code == 1);
    CHECK_THAT(r.out, ContainsSubstring("verdict: invalid"));
    // the text after the state line is a model document that really
    // falsifies the formula at the named state
    kripke::Model m = kripke::import_model(embedded_document(r.out));
    std::string s = countermodel_state(r.out);
    Formula f = parse("p -> K1 p", m.sig);
    CHECK_FALSE(kripke::model_check(m, s, f));
  }

  SECTION("structured output carries the same verdict") {
    auto r = run({"prove", "p -> K1 p", "--format", "structured"});
    CHECK(r.code == 1);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["command"] == "prove");
    CHECK(j["verdict"] == "invalid");
    CHECK(j["countermodel"]["state"].is_string());
    kripke::Model m = kripke::import_model(
        j["countermodel"]["document"].get<std::string>());
    CHECK(m.sig.atoms == std::vector<std::string>{"p"});
  }

  SECTION("--atoms widens the signature beyond the formula's text") {
    auto r = run({"prove", "p | ~p", "--atoms", "p,q", "--format",
                  "structured"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["atoms"] == nlohmann::json({"p", "q"}));
  }

  SECTION("--agents overrides the inferred count") {
    auto r = run({"prove", "K1 p -> K2 p", "--agents", "2"});
    CHECK(r.code == 1);
  }
}

TEST_CASE("EPISTEMOD_BUDGET drives the prover budget") {
  SECTION("a tiny node budget turns the verdict unknown, exit 2") {
    EnvGuard env("EPISTEMOD_BUDGET", "1");
    auto r = run({"prove", "K1 p -> p"});
    CHECK(r.code == 2);
    CHECK_THAT(r.out, ContainsSubstring("verdict: unknown (budget exhausted"));
  }
  SECTION("nodes,seconds form parses") {
    EnvGuard env("EPISTEMOD_BUDGET", "100000,5");
    auto r = run({"prove", "K1 p -> p"});
    CHECK(r.code == 0);
  }
  SECTION("malformed values are usage errors") {
    EnvGuard env("EPISTEMOD_BUDGET", "banana");
    auto r = run({"prove", "K1 p -> p"});
    CHECK(r.code == 64);
    CHECK_THAT(r.err, ContainsSubstring("EPISTEMOD_BUDGET"));
  }
  SECTION("non-positive seconds are rejected") {
    EnvGuard env("EPISTEMOD_BUDGET", "100,0");
    auto r = run({"prove", "K1 p -> p"});
    CHECK(r.code == 64);
  }
}

TEST_CASE("derive: hypotheses from a file") {
  std::string gamma = write_scratch("gamma_k1m.txt", "K1 m\n");

  SECTION("an entailed conclusion exits 0") {
    auto r = run({"derive", "m", "--gamma", gamma});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("hypotheses: K1 m"));
    CHECK_THAT(r.out, ContainsSubstring("verdict: valid"));
  }

  SECTION("a non-consequence exits 1; the countermodel satisfies the "
          "hypotheses and falsifies the conclusion") {
    auto r = run({"derive", "K2 m", "--gamma", gamma});
    CHECK(r.code == 1);
    kripke::Model m = kripke::import_model(embedded_document(r.out));
    std::string s = countermodel_state(r.out);
    CHECK(kripke::model_check(m, s, parse("K1 m", m.sig)));
    CHECK_FALSE(kripke::model_check(m, s, parse("K2 m", m.sig)));
  }

  SECTION("comments and blank lines in the gamma file are skipped") {
    std::string g2 = write_scratch("gamma_comments.txt",
                                   "# what the first agent knows\n"
                                   "\n"
                                   "K1 m  # inline note\n");
    auto r = run({"derive", "m", "--gamma", g2});
    CHECK(r.code == 0);
  }

  SECTION("an unreadable gamma file is a usage error") {
    auto r = run({"derive", "m", "--gamma", (scratch() / "absent.txt").string()});
    CHECK(r.code == 64);
    CHECK_THAT(r.err, ContainsSubstring("cannot read file"));
  }
}

TEST_CASE("nec-closed: knowledge-rule closure of a hypothesis file") {
  std::string gamma = write_scratch("gamma_nec.txt", "K1 m\n");

  SECTION("with one agent, {K1 m} is closed") {
    auto r = run({"nec-closed", "--gamma", gamma});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("K1 K1 m: valid"));
    CHECK_THAT(r.out, ContainsSubstring("closed: yes"));
  }

  SECTION("adding a second agent breaks closure") {
    auto r = run({"nec-closed", "--gamma", gamma, "--agents", "2"});
    CHECK(r.code == 1);
    CHECK_THAT(r.out, ContainsSubstring("K2 K1 m: invalid"));
    CHECK_THAT(r.out, ContainsSubstring("closed: no"));
  }

  SECTION("structured form lists one entry per hypothesis-agent pair") {
    auto r = run({"nec-closed", "--gamma", gamma, "--agents", "2", "--format",
                  "structured"});
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["entries"].size() == 2);
    CHECK(j["closed"] == "no");
  }
}

TEST_CASE("nform: normal form with a verified equivalence") {
  SECTION("a modal formula rewrites and proves equivalent") {
    auto r = run({"nform", "~K1 p"});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("normal form: "));
    CHECK_THAT(r.out, ContainsSubstring("alpha = "));
    CHECK_THAT(r.out, ContainsSubstring("equivalence: valid"));
  }
  SECTION("the disjunct budget maps to exit 2") {
    auto r = run({"nform", "p | q", "--max-disjuncts", "1"});
    CHECK(r.code == 2);
    CHECK_THAT(r.err, ContainsSubstring("disjunct budget"));
  }
  SECTION("multi-agent input is a usage error") {
    auto r = run({"nform", "K2 p"});
    CHECK(r.code == 64);
    CHECK_THAT(r.err, ContainsSubstring("single-agent"));
  }
}

TEST_CASE("canonical: worlds over a signature and under hypotheses") {
  SECTION("the full one-atom catalogue") {
    auto r = run({"canonical", "--atoms", "p"});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("worlds: A, B, C, D"));
    CHECK_THAT(r.out, ContainsSubstring("B = ({p, ~p}, p)"));
    CHECK_THAT(r.out, ContainsSubstring("relation classes: {A} {B, C} {D}"));
    CHECK_THAT(r.out, ContainsSubstring("fully explanatory: yes"));
  }

  SECTION("--classify counts the fully explanatory subsets") {
    auto r = run({"canonical", "--atoms", "p", "--classify"});
    CHECK(r.code == 0);
    CHECK_THAT(r.out,
               ContainsSubstring("classification: 15 subsets, 7 fully explanatory"));
  }

  SECTION("hypotheses narrow the worlds and can break explanatoriness") {
    std::string gamma = write_scratch("gamma_p.txt", "p\n");
    auto r = run({"canonical", "--atoms", "p", "--gamma", gamma});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("worlds: A, B"));
    CHECK_THAT(r.out, ContainsSubstring("fully explanatory: no"));
    CHECK_THAT(r.out, ContainsSubstring("witness: p at B, missing C"));
  }

  SECTION("unsatisfiable hypotheses exit 1 with an explanation") {
    std::string gamma = write_scratch("gamma_unsat.txt", "p & ~p\n");
    auto r = run({"canonical", "--atoms", "p", "--gamma", gamma});
    CHECK(r.code == 1);
    CHECK_THAT(r.err, ContainsSubstring("canonical model is empty"));
  }

  SECTION("--dot writes the cluster graph to a file") {
    std::string dotfile = (scratch() / "worlds.dot").string();
    auto r = run({"canonical", "--atoms", "p", "--dot", dotfile});
    CHECK(r.code == 0);
    std::string dot = slurp(dotfile);
    CHECK_THAT(dot, ContainsSubstring("B -- C;"));
    CHECK_THAT(dot, ContainsSubstring("label=\"B\\n({p, ~p}, p)\""));
  }

  SECTION("structured relation classes match the text form") {
    auto r = run({"canonical", "--atoms", "p", "--format", "structured"});
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["relation_classes"] ==
          nlohmann::json({{"A"}, {"B", "C"}, {"D"}}));
  }
}

TEST_CASE("carve and check-fe") {
  std::string model = write_scratch("coinq.km", testutil::kCoinQDoc);
  std::string model2 = write_scratch("coinq2.km", testutil::kCoinQ2Doc);

  SECTION("carving half the coin model fails the explanatory check") {
    auto r = run({"carve", "--model", model, "--keep", "w,v", "--check-fe"});
    CHECK(r.code == 1);
    CHECK_THAT(r.out, ContainsSubstring("carved worlds: w, v"));
    CHECK_THAT(r.out, ContainsSubstring("fully explanatory: no"));
    CHECK_THAT(r.out,
               ContainsSubstring("at w, agent 1: witness Q, missing c"));
  }

  SECTION("without --check-fe the carve itself exits 0") {
    auto r = run({"carve", "--model", model, "--keep", "w,v"});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("agent 1 accessibility:"));
    CHECK_THAT(r.out, ContainsSubstring("w : w, v"));
  }

  SECTION("check-fe defaults to keeping every state, which passes here") {
    auto r = run({"check-fe", "--model", model});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("fully explanatory: yes"));
  }

  SECTION("with two agents only the coarse-sighted one fails") {
    auto r = run({"check-fe", "--model", model2, "--keep", "w,v"});
    CHECK(r.code == 1);
    CHECK_THAT(r.out, ContainsSubstring(", agent 1: witness "));
    CHECK(r.out.find(", agent 2: witness ") == std::string::npos);
  }

  SECTION("--dot boxes the carved states inside the parent drawing") {
    std::string dotfile = (scratch() / "carve.dot").string();
    auto r = run({"carve", "--model", model, "--keep", "w,v", "--dot", dotfile});
    CHECK(r.code == 0);
    std::string dot = slurp(dotfile);
    CHECK_THAT(dot, ContainsSubstring("subgraph cluster_carved"));
    CHECK_THAT(dot, ContainsSubstring("w -- v"));
  }

  SECTION("asking to keep an unknown state is a usage error") {
    auto r = run({"carve", "--model", model, "--keep", "w,nope"});
    CHECK(r.code == 64);
  }
}

TEST_CASE("export: model documents round trip through every format") {
  std::string doc = testutil::kCoinQ2Doc;
  std::string model = write_scratch("export_in.km", doc);

  SECTION("text form is the canonical document, byte for byte") {
    auto r = run({"export", "--model", model});
    CHECK(r.code == 0);
    CHECK(r.out == kripke::export_model(kripke::import_model(doc)));
    // and it re-imports to the same document
    CHECK(kripke::export_model(kripke::import_model(r.out)) == r.out);
  }

  SECTION("structured form carries states, atoms, and partitions") {
    auto r = run({"export", "--model", model, "--format", "structured"});
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["agents"] == 2);
    CHECK(j["states"].size() == 4);
    CHECK(j["partitions"]["2"].size() == 3);
  }

  SECTION("dot form can box a highlight set") {
    auto r = run({"export", "--model", model, "--highlight", "w,v", "--format",
                  "dot"});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("subgraph cluster_carved"));
    CHECK_THAT(r.out, ContainsSubstring("w -- v [label=\"R1,R2\"]"));
  }

  SECTION("no model yields an empty document in every format") {
    for (const char* fmt : {"text", "structured", "dot"}) {
      auto r = run({"export", "--format", fmt});
      CHECK(r.code == 0);
      CHECK(r.out.empty());
    }
  }
}

TEST_CASE("corpus: replaying the shipped fixtures") {
  SECTION("the whole corpus passes") {
    auto r = run({"corpus", "--dir", corpus_dir});
    CHECK(r.code == 0);
    CHECK_THAT(r.out,
               ContainsSubstring("corpus: 12 fixtures, 99 checks, all pass"));
  }

  SECTION("the directory can come from the environment") {
    EnvGuard env("EPISTEMOD_CORPUS_DIR", corpus_dir.c_str());
    auto r = run({"corpus"});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("all pass"));
  }

  SECTION("--only narrows to one fixture by name") {
    auto r = run({"corpus", "--dir", corpus_dir, "--only", "M7"});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("fixture M7:"));
    CHECK_THAT(r.out, ContainsSubstring("corpus: 1 fixtures,"));
  }

  SECTION("--only with an unknown name is a usage error") {
    auto r = run({"corpus", "--dir", corpus_dir, "--only", "nope"});
    CHECK(r.code == 64);
    CHECK_THAT(r.err, ContainsSubstring("no fixture named 'nope'"));
  }

  SECTION("a missing directory is a usage error") {
    auto r = run({"corpus", "--dir", (scratch() / "no_such_dir").string()});
    CHECK(r.code == 64);
    CHECK_THAT(r.err, ContainsSubstring("corpus directory not found"));
  }
}

TEST_CASE("corpus: failures and load errors are reported, exit 1") {
  fs::path dir = scratch() / "bad_corpus";
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "wrong.fix");
    out << "fixture Wrong\n"
        << "model\n"
        << testutil::kPVDoc
        << "end\n"
        << "expect holds v : p\n";   // p is false at v
  }
  {
    std::ofstream out(dir / "broken.fix");
    out << "fixture Broken\n"
        << "expect frobnicate\n";
  }

  auto r = run({"corpus", "--dir", dir.string()});
  CHECK(r.code == 1);
  CHECK_THAT(r.out, ContainsSubstring("load error"));
  CHECK_THAT(r.out, ContainsSubstring("unknown expectation kind 'frobnicate'"));
  CHECK_THAT(r.out, ContainsSubstring("fixture Wrong: 0 of 1 checks pass"));
  CHECK_THAT(r.out, ContainsSubstring("FAIL holds v"));
  CHECK_THAT(r.out, ContainsSubstring("2 failure(s)"));
}

TEST_CASE("structured output is byte stable across runs") {
  auto once = [](std::vector<std::string> args) {
    auto r = run(std::move(args));
    REQUIRE(r.code == 0);
    return r.out;
  };

  SECTION("prove") {
    std::vector<std::string> args = {"prove", "K1 p -> p", "--format",
                                     "structured"};
    CHECK(once(args) == once(args));
  }
  SECTION("canonical with classification") {
    std::vector<std::string> args = {"canonical", "--atoms", "p", "--classify",
                                     "--format", "structured"};
    CHECK(once(args) == once(args));
  }
  SECTION("the whole corpus") {
    std::vector<std::string> args = {"corpus", "--dir", corpus_dir, "--format",
                                     "structured"};
    std::string a = once(args), b = once(args);
    CHECK(a == b);
    // no absolute paths leak into the stable form
    CHECK(a.find(corpus_dir) == std::string::npos);
  }
}

TEST_CASE("usage errors exit 64") {
  SECTION("no subcommand") {
    auto r = run({});
    CHECK(r.code == 64);
    CHECK_THAT(r.err, ContainsSubstring("error:"));
  }
  SECTION("unknown subcommand") {
    CHECK(run({"frobnicate"}).code == 64);
  }
  SECTION("missing required option") {
    CHECK(run({"derive", "m"}).code == 64);
  }
  SECTION("malformed formula") {
    auto r = run({"prove", "p &"});
    CHECK(r.code == 64);
    CHECK_THAT(r.err, ContainsSubstring("error:"));
  }
  SECTION("atom outside the declared signature") {
    CHECK(run({"prove", "q", "--atoms", "p"}).code == 64);
  }
  SECTION("unknown output format") {
    auto r = run({"prove", "p | ~p", "--format", "yaml"});
    CHECK(r.code == 64);
    CHECK_THAT(r.err, ContainsSubstring("unknown format: yaml"));
  }
  SECTION("asking prove for a graph it does not have") {
    auto r = run({"prove", "p | ~p", "--format", "dot"});
    CHECK(r.code == 64);
    CHECK_THAT(r.err, ContainsSubstring("no graph form"));
  }
}

TEST_CASE("--help prints usage and exits 0") {
  SECTION("top level") {
    auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("prove"));
    CHECK_THAT(r.out, ContainsSubstring("corpus"));
  }
  SECTION("per subcommand") {
    auto r = run({"prove", "--help"});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("Usage: epistemod prove"));
  }
}

TEST_CASE("fixture parsing rejects malformed documents") {
  auto reject = [](const std::string& text, const std::string& why) {
    CHECK_THROWS_WITH(fixtures::parse_fixture(text), ContainsSubstring(why));
  };

  reject("", "fixture document is empty");
  reject("expect fe true\n", "expected 'fixture <name>' first");
  reject("fixture X\n", "no expectations");
  reject("fixture X\nfixture Y\n", "duplicate fixture line");
  reject("fixture X\nexpect frobnicate\n", "unknown expectation kind");
  reject("fixture X\nexpect holds w\n", "needs a ': <payload>' part");
  reject("fixture X\nexpect holds : p\n", "takes 1 argument(s)");
  reject("fixture X\nexpect fe true : p\n", "takes no payload");
  reject("fixture X\nkeep w\nexpect fe true\n", "keep needs a model");
  reject("fixture X\nmodel\natoms p\nagents 1\nstate w : p\n"
         "agent 1 blocks { {w} }\nend\natoms p\nexpect fe true\n",
         "model and atoms are exclusive");
  reject("fixture X\nmodel\natoms p\nexpect fe true\n",
         "model block missing 'end'");
  reject("fixture X\nmodel\nnot a model\nend\nexpect fe true\n",
         "fixture model block:");
  reject("fixture X\nmodel\natoms p\nagents 1\nstate w : p\n"
         "agent 1 blocks { {w} }\nend\nassume p\nexpect fe true\n",
         "atoms fixtures only");

  SECTION("a well-formed document parses into data") {
    fixtures::Fixture fx = fixtures::parse_fixture(
        "fixture Coin   # a comment\n"
        "atoms p\n"
        "agents 2\n"
        "assume K1 p\n"
        "expect nec-closed no\n"
        "expect derive invalid 2 : K2 p\n");
    CHECK(fx.name == "Coin");
    CHECK(fx.agents == 2);
    CHECK(fx.assume == std::vector<std::string>{"K1 p"});
    REQUIRE(fx.expectations.size() == 2);
    CHECK(fx.expectations[0].kind == "nec-closed");
    CHECK(fx.expectations[1].args ==
          std::vector<std::string>{"invalid", "2"});
    CHECK(fx.expectations[1].payload == "K2 p");
  }
}

TEST_CASE("fixture expectations really can fail") {
  // a deliberately wrong pin must come back as a failed check, not a pass
  fixtures::Fixture fx = fixtures::parse_fixture(
      std::string("fixture Wrong\nmodel\n") + testutil::kPVDoc +
      "end\nexpect holds w : p\nexpect holds v : p\n");
  auto results = fixtures::run_fixture(fx);
  REQUIRE(results.size() == 2);
  CHECK(results[0].passed);
  CHECK_FALSE(results[1].passed);
  CHECK(!results[1].detail.empty());
  CHECK(results[1].label == "holds v : p");
}
