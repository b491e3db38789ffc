#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "igl/calculus.hpp"
#include "igl/model.hpp"
#include "igl/search.hpp"
#include "igl/semantics.hpp"
#include "igl/syntax.hpp"

namespace {

using nlohmann::json;

// Exit codes: 0 success / valid / accepted, 1 logical negative (violation,
// rejection, countermodel, false), 2 input or usage error.
constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw igl::InputError("cannot read file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct GrammarInput {
  igl::Alphabet alphabet;
  igl::GrammarSpec grammar;
};

std::optional<GrammarInput> load_grammar(const std::string& path) {
  if (path.empty()) return std::nullopt;
  igl::GrammarFile file = igl::parse_grammar_file(read_file(path));
  return GrammarInput{std::move(file.alphabet), std::move(file.grammar)};
}

// Fallback alphabet when no grammar file pins one down: the forward bases of
// the given characters, or {a} when there are none.
igl::Alphabet alphabet_from(const std::set<igl::Character>& chars) {
  std::set<std::string> bases;
  for (const auto& x : chars) bases.insert(x.base);
  if (bases.empty()) bases.insert("a");
  return igl::Alphabet(std::move(bases));
}

void emit(const json& record) { std::cout << record.dump() << "\n"; }

// ---------------------------------------------------------------------------

int run_parse(const std::string& formula_text, const std::string& grammar_path, bool machine) {
  auto grammar = load_grammar(grammar_path);
  igl::Formula f =
      grammar ? igl::parse(formula_text, grammar->alphabet) : igl::parse(formula_text);
  if (machine) {
    emit(json{{"cmd", "parse"}, {"formula", igl::print(f)}, {"depth", igl::formula_depth(f)}});
  } else {
    std::cout << igl::print(f) << "\n";
  }
  return kOk;
}

json violation_record(const igl::Violation& v) {
  json record{{"kind", igl::to_string(v.kind)}, {"witnesses", v.witnesses}};
  if (v.character) record["character"] = v.character->text();
  if (v.production) record["production"] = v.production->text();
  return record;
}

int run_audit(const std::string& model_path, const std::string& grammar_path, bool saturate_first,
              bool machine) {
  auto grammar = load_grammar(grammar_path);
  std::string text = read_file(model_path);
  igl::Model m = grammar ? igl::parse_model(text, grammar->alphabet) : igl::parse_model(text);
  igl::GrammarSpec g = grammar ? grammar->grammar : igl::GrammarSpec{};
  if (saturate_first) m = igl::saturate(std::move(m), g);
  igl::AuditReport report = igl::audit(m, g);
  if (machine) {
    for (const auto& v : report.violations) {
      json record = violation_record(v);
      record["cmd"] = "audit";
      emit(record);
    }
    emit(json{{"cmd", "audit"}, {"ok", report.ok()}, {"violations", report.violations.size()}});
  } else if (report.ok()) {
    std::cout << "ok\n";
  } else {
    for (const auto& v : report.violations) std::cout << v.describe() << "\n";
  }
  return report.ok() ? kOk : kNegative;
}

int run_check(const std::string& model_path, const std::string& world,
              const std::string& formula_text, const std::string& grammar_path, bool machine) {
  auto grammar = load_grammar(grammar_path);
  std::string text = read_file(model_path);
  // Without a grammar file, union the characters of the model and the
  // formula so a formula may mention characters the model leaves empty.
  igl::Alphabet alphabet = grammar ? grammar->alphabet : [&] {
    std::set<igl::Character> chars = igl::characters_of(igl::parse(formula_text));
    igl::Model probe = igl::parse_model(text);
    for (const auto& base : probe.alphabet().forward_names())
      chars.insert(igl::forward_char(base));
    return alphabet_from(chars);
  }();
  igl::Model m = igl::parse_model(text, alphabet);
  igl::Formula f = igl::parse(formula_text, alphabet);
  bool value = igl::satisfies(m, world, f);
  if (machine) {
    emit(json{{"cmd", "check"}, {"world", world}, {"formula", igl::print(f)}, {"value", value}});
  } else {
    std::cout << (value ? "true" : "false") << "\n";
  }
  return value ? kOk : kNegative;
}

int run_prove(const std::string& proof_path, const std::string& grammar_path, bool machine) {
  auto grammar = load_grammar(grammar_path);
  std::string text = read_file(proof_path);
  igl::Proof proof;
  std::optional<igl::AxiomCatalog> catalog;
  if (grammar) {
    proof = igl::parse_proof(text, grammar->alphabet);
    catalog = igl::AxiomCatalog::for_grammar(grammar->alphabet, grammar->grammar);
  } else {
    proof = igl::parse_proof(text);
    std::set<igl::Character> chars;
    for (const auto& line : proof.lines) {
      auto used = igl::characters_of(line.formula);
      chars.insert(used.begin(), used.end());
      if (const auto* nec = std::get_if<igl::NecRef>(&line.justification))
        chars.insert(nec->character);
    }
    catalog = igl::AxiomCatalog::base(alphabet_from(chars));
  }
  igl::ProofCheckResult result = igl::check_proof(proof, *catalog);
  if (machine) {
    json record{{"cmd", "prove"}, {"accepted", result.accepted}};
    if (result.accepted) {
      record["theorem"] = igl::print(*result.theorem);
    } else {
      record["line"] = result.line;
      record["reason"] = result.reason;
    }
    emit(record);
  } else if (result.accepted) {
    std::cout << "accepted: " << igl::print(*result.theorem) << "\n";
  } else {
    std::cout << "rejected at line " << result.line << ": " << result.reason << "\n";
  }
  return result.accepted ? kOk : kNegative;
}

int run_refute(const std::string& formula_text, const std::string& grammar_path, int max_worlds,
               bool machine) {
  auto grammar = load_grammar(grammar_path);
  igl::Formula f =
      grammar ? igl::parse(formula_text, grammar->alphabet) : igl::parse(formula_text);
  igl::Alphabet alphabet = grammar ? grammar->alphabet : alphabet_from(igl::characters_of(f));
  igl::GrammarSpec g = grammar ? grammar->grammar : igl::GrammarSpec{};

  igl::SearchResult result = igl::find_countermodel(f, alphabet, g, max_worlds);
  if (const auto* counter = std::get_if<igl::Countermodel>(&result)) {
    std::string text = igl::print_model(counter->model);
    if (machine) {
      emit(json{{"cmd", "refute"},
                {"result", "countermodel"},
                {"worlds", counter->model.size()},
                {"world", counter->world},
                {"model", text}});
    } else {
      std::cout << "# falsified-world: " << counter->world << "\n" << text;
      std::cerr << "countermodel with " << counter->model.size() << " worlds falsifies '"
                << igl::print(f) << "' at " << counter->world << "\n";
    }
    return kNegative;
  }
  int bound = std::get<igl::ValidUpTo>(result).bound;
  if (machine) {
    emit(json{{"cmd", "refute"}, {"result", "valid-up-to"}, {"bound", bound}});
  } else {
    std::cout << "valid-up-to " << bound << "\n";
  }
  return kOk;
}

int run_harness(const std::string& grammar_path, int max_worlds, int depth, std::uint64_t seed,
                bool machine) {
  auto grammar = load_grammar(grammar_path);
  igl::Alphabet alphabet = grammar ? grammar->alphabet : igl::Alphabet({"a"});
  igl::GrammarSpec g = grammar ? grammar->grammar : igl::GrammarSpec{};
  igl::AxiomCatalog catalog = igl::AxiomCatalog::for_grammar(alphabet, g);

  igl::HarnessConfig config;
  config.max_worlds = max_worlds;
  config.instantiation_depth = depth;
  config.seed = seed;
  igl::HarnessReport report = igl::soundness_harness(catalog, g, config);

  if (machine) {
    for (const auto& failure : report.failures) {
      json binding = json::object();
      for (const auto& [name, value] : failure.binding.formulas) binding[name] = igl::print(value);
      for (const auto& [name, value] : failure.binding.characters) binding[name] = value.text();
      emit(json{{"cmd", "harness"},
                {"schema", failure.schema_name},
                {"binding", binding},
                {"world", failure.world},
                {"model", igl::print_model(failure.model)}});
    }
    emit(json{{"cmd", "harness"},
              {"axioms_checked", report.axioms_checked},
              {"models_checked", report.models_checked},
              {"failures", report.failure_count}});
  } else {
    std::cout << "axioms checked: " << report.axioms_checked << "\n"
              << "models checked: " << report.models_checked << "\n"
              << "failures: " << report.failure_count << "\n";
    for (const auto& failure : report.failures) {
      std::cout << "  " << failure.schema_name << " fails at " << failure.world << " of:\n"
                << igl::print_model(failure.model);
    }
  }
  return report.failure_count == 0 ? kOk : kNegative;
}

int run_saturate(const std::string& model_path, const std::string& grammar_path, bool machine) {
  auto grammar = load_grammar(grammar_path);
  std::string text = read_file(model_path);
  igl::Model m = grammar ? igl::parse_model(text, grammar->alphabet) : igl::parse_model(text);
  igl::GrammarSpec g = grammar ? grammar->grammar : igl::GrammarSpec{};
  std::string saturated = igl::print_model(igl::saturate(std::move(m), g));
  if (machine) {
    emit(json{{"cmd", "saturate"}, {"model", saturated}});
  } else {
    std::cout << saturated;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reasoning toolkit for intuitionistic grammar logics"};
  app.require_subcommand(1);

  std::string grammar_path;
  std::string model_path;
  std::string formula_text;
  std::string proof_path;
  std::string world;
  int refute_worlds = 3;
  int harness_worlds = 2;
  int depth = 1;
  std::uint64_t seed = 0;
  bool machine = false;
  bool saturate_first = false;

  auto* parse_cmd = app.add_subcommand("parse", "parse a formula and print it canonically");
  parse_cmd->add_option("formula", formula_text, "formula text")->required();
  parse_cmd->add_option("--grammar", grammar_path, "grammar file declaring the alphabet");

  auto* audit_cmd = app.add_subcommand("audit", "check the frame and valuation conditions");
  audit_cmd->add_option("--model", model_path, "model file")->required();
  audit_cmd->add_option("--grammar", grammar_path, "grammar file");
  audit_cmd->add_flag("--saturate", saturate_first, "saturate before auditing");

  auto* check_cmd = app.add_subcommand("check", "evaluate a formula at a world");
  check_cmd->add_option("formula", formula_text, "formula text")->required();
  check_cmd->add_option("--model", model_path, "model file")->required();
  check_cmd->add_option("--world", world, "world id")->required();
  check_cmd->add_option("--grammar", grammar_path, "grammar file");

  auto* prove_cmd = app.add_subcommand("prove", "check a Hilbert proof line by line");
  prove_cmd->add_option("proof", proof_path, "proof file")->required();
  prove_cmd->add_option("--grammar", grammar_path, "grammar file");

  auto* refute_cmd = app.add_subcommand("refute", "search for a small countermodel");
  refute_cmd->add_option("formula", formula_text, "formula text")->required();
  refute_cmd->add_option("--grammar", grammar_path, "grammar file");
  refute_cmd->add_option("--max-worlds", refute_worlds, "largest world count to try")
      ->check(CLI::PositiveNumber);

  auto* harness_cmd =
      app.add_subcommand("harness", "validate every axiom schema on every small model");
  harness_cmd->add_option("--grammar", grammar_path, "grammar file");
  harness_cmd->add_option("--max-worlds", harness_worlds, "largest world count to enumerate")
      ->check(CLI::PositiveNumber);
  harness_cmd->add_option("--depth", depth, "instantiation depth for the binding pool")
      ->check(CLI::NonNegativeNumber);
  harness_cmd->add_option("--seed", seed, "seed for the random part of the binding pool");

  auto* saturate_cmd = app.add_subcommand("saturate", "emit the saturated model file");
  saturate_cmd->add_option("--model", model_path, "model file")->required();
  saturate_cmd->add_option("--grammar", grammar_path, "grammar file");

  for (auto* cmd : {parse_cmd, audit_cmd, check_cmd, prove_cmd, refute_cmd, harness_cmd,
                    saturate_cmd})
    cmd->add_flag("--machine", machine, "line-delimited JSON records instead of prose");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (parse_cmd->parsed()) return run_parse(formula_text, grammar_path, machine);
    if (audit_cmd->parsed()) return run_audit(model_path, grammar_path, saturate_first, machine);
    if (check_cmd->parsed())
      return run_check(model_path, world, formula_text, grammar_path, machine);
    if (prove_cmd->parsed()) return run_prove(proof_path, grammar_path, machine);
    if (refute_cmd->parsed()) return run_refute(formula_text, grammar_path, refute_worlds, machine);
    if (harness_cmd->parsed()) return run_harness(grammar_path, harness_worlds, depth, seed, machine);
    if (saturate_cmd->parsed()) return run_saturate(model_path, grammar_path, machine);
  } catch (const igl::ParseError& e) {
    std::cerr << "syntax error at column " << e.column << ": " << e.what() << "\n";
    return kInputError;
  } catch (const igl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
