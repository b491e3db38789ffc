#include "igl/calculus.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace igl {

// ---------------------------------------------------------------------------
// Catalog

namespace {

using S = Schema;

void add_base_schemas(std::vector<AxiomCatalog::Entry>& entries) {
  S A = S::meta("A");
  S B = S::meta("B");
  S C = S::meta("C");
  CharPattern x = CharPattern::var("x");
  CharPattern xc = CharPattern::var("x", true);

  auto put = [&](const char* name, Schema s) { entries.push_back({name, std::move(s)}); };

  put("IPL1", S::impl(A, S::impl(B, A)));
  put("IPL2", S::impl(S::impl(A, S::impl(B, C)), S::impl(S::impl(A, B), S::impl(A, C))));
  put("IPL3", S::impl(S::conj(A, B), A));
  put("IPL4", S::impl(S::conj(A, B), B));
  put("IPL5", S::impl(A, S::impl(B, S::conj(A, B))));
  put("IPL6", S::impl(A, S::disj(A, B)));
  put("IPL7", S::impl(B, S::disj(A, B)));
  put("IPL8", S::impl(S::impl(A, C), S::impl(S::impl(B, C), S::impl(S::disj(A, B), C))));
  put("IPL9", S::impl(S::bottom(), A));

  put("A1", S::impl(S::box(x, S::impl(A, B)), S::impl(S::box(x, A), S::box(x, B))));
  put("A2", S::iff(S::box(x, S::conj(A, B)), S::conj(S::box(x, A), S::box(x, B))));
  put("A3", S::iff(S::dia(x, S::disj(A, B)), S::disj(S::dia(x, A), S::dia(x, B))));
  put("A4", S::impl(S::box(x, S::impl(A, B)), S::impl(S::dia(x, A), S::dia(x, B))));
  put("A5", S::impl(S::conj(S::box(x, A), S::dia(x, B)), S::dia(x, S::conj(A, B))));
  put("A6", S::neg(S::dia(x, S::bottom())));
  put("A7", S::conj(S::impl(A, S::box(x, S::dia(xc, A))), S::impl(S::dia(x, S::box(xc, A)), A)));
  put("A8", S::impl(S::impl(S::dia(x, A), S::box(x, B)), S::box(x, S::impl(A, B))));
  put("A9", S::impl(S::dia(x, S::impl(A, B)), S::impl(S::box(x, A), S::dia(x, B))));
}

}  // namespace

Schema ipa_schema(const Production& p) {
  S A = S::meta("A");
  S d = A;
  S b = A;
  for (auto it = p.rhs.rbegin(); it != p.rhs.rend(); ++it) {
    d = S::dia(*it, d);
    b = S::box(*it, b);
  }
  return S::conj(S::impl(d, S::dia(p.lhs, A)), S::impl(S::box(p.lhs, A), b));
}

Schema seriality_schema(const Character& x) {
  S A = S::meta("A");
  return S::impl(S::box(x, A), S::dia(x, A));
}

AxiomCatalog AxiomCatalog::base(Alphabet alphabet) {
  AxiomCatalog c(std::move(alphabet));
  add_base_schemas(c.entries_);
  return c;
}

AxiomCatalog AxiomCatalog::for_grammar(Alphabet alphabet, const GrammarSpec& g) {
  require_declared(alphabet, g);
  AxiomCatalog c = base(std::move(alphabet));
  for (const auto& x : g.serial) c.add("D_" + x.text(), seriality_schema(x));
  int k = 0;
  for (const auto& p : g.productions) c.add("IPA" + std::to_string(++k), ipa_schema(p));
  return c;
}

void AxiomCatalog::add(std::string name, Schema schema) {
  entries_.push_back({std::move(name), std::move(schema)});
}

const Schema* AxiomCatalog::find(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return &e.schema;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Proof files

namespace {

struct Line {
  int number = 0;  // position in the file, for error messages
  std::string text;
};

std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    std::string_view raw =
        end == std::string_view::npos ? text.substr(pos) : text.substr(pos, end - pos);
    ++number;
    std::string line(raw.substr(0, raw.find('#')));
    auto first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos) {
      auto last = line.find_last_not_of(" \t\r");
      out.push_back({number, line.substr(first, last - first + 1)});
    }
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return out;
}

[[noreturn]] void line_fail(int number, const std::string& message) {
  throw InputError("line " + std::to_string(number) + ": " + message);
}

std::string trimmed(const std::string& s) {
  auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

Character proof_character(int number, const std::string& tok) {
  std::string base = tok;
  bool backward = false;
  if (!base.empty() && base.back() == '-') {
    backward = true;
    base.pop_back();
  }
  if (base.empty() || !(base[0] >= 'a' && base[0] <= 'z'))
    line_fail(number, "bad character token '" + tok + "'");
  return backward ? backward_char(base) : forward_char(base);
}

int proof_index(int number, const std::string& tok) {
  for (char c : tok) {
    if (c < '0' || c > '9') line_fail(number, "bad line reference '" + tok + "'");
  }
  if (tok.empty() || tok.size() > 6) line_fail(number, "bad line reference '" + tok + "'");
  return std::stoi(tok);
}

// "A:=p -> q, x:=a"; uppercase keys bind formulas, lowercase keys characters.
Binding parse_binding(int number, const std::string& text) {
  Binding b;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    std::string item =
        trimmed(end == std::string::npos ? text.substr(pos) : text.substr(pos, end - pos));
    if (item.empty()) line_fail(number, "empty binding item");
    auto sep = item.find(":=");
    if (sep == std::string::npos) line_fail(number, "binding items use 'name:=value'");
    std::string key = trimmed(item.substr(0, sep));
    std::string value = trimmed(item.substr(sep + 2));
    if (key.empty() || value.empty()) line_fail(number, "binding items use 'name:=value'");
    try {
      if (key[0] >= 'A' && key[0] <= 'Z') {
        if (!b.formulas.emplace(key, parse(value)).second)
          line_fail(number, "metavariable '" + key + "' bound twice");
      } else {
        if (!b.characters.emplace(key, proof_character(number, value)).second)
          line_fail(number, "metavariable '" + key + "' bound twice");
      }
    } catch (const ParseError& e) {
      line_fail(number, "bad binding value '" + value + "': " + e.what());
    }
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  return b;
}

Justification parse_justification(int number, const std::string& text) {
  std::string body = trimmed(text);
  std::string binding_text;
  if (!body.empty() && body.back() == ']') {
    // binding values may contain modal brackets, so the block starts at the
    // first '[' (axiom names never contain one)
    auto open = body.find('[');
    if (open == std::string::npos) line_fail(number, "unmatched ']' in justification");
    binding_text = body.substr(open + 1, body.size() - open - 2);
    body = trimmed(body.substr(0, open));
  }
  auto toks = split_tokens(body);
  if (toks.empty()) line_fail(number, "missing justification");

  if (toks[0] == "axiom") {
    if (toks.size() != 2) line_fail(number, "expected 'axiom <name>'");
    AxiomRef ref{toks[1], std::nullopt};
    if (!binding_text.empty()) ref.binding = parse_binding(number, binding_text);
    return ref;
  }
  if (!binding_text.empty()) line_fail(number, "binding blocks only apply to axiom lines");
  if (toks[0] == "mp") {
    if (toks.size() != 3) line_fail(number, "expected 'mp <antecedent line> <implication line>'");
    return MpRef{proof_index(number, toks[1]), proof_index(number, toks[2])};
  }
  if (toks[0] == "nec") {
    if (toks.size() != 3) line_fail(number, "expected 'nec <line> <character>'");
    return NecRef{proof_index(number, toks[1]), proof_character(number, toks[2])};
  }
  line_fail(number, "unknown justification '" + toks[0] + "'");
}

}  // namespace

Proof parse_proof(std::string_view text) {
  Proof proof;
  int expected = 0;
  for (const auto& line : content_lines(text)) {
    ++expected;
    auto dot = line.text.find('.');
    if (dot == std::string::npos) line_fail(line.number, "proof lines start with '<number>.'");
    std::string num = trimmed(line.text.substr(0, dot));
    if (num != std::to_string(expected))
      line_fail(line.number, "expected line number " + std::to_string(expected));
    auto semi = line.text.find(';', dot);
    if (semi == std::string::npos) line_fail(line.number, "missing ';' before the justification");
    std::string formula_text = trimmed(line.text.substr(dot + 1, semi - dot - 1));
    try {
      proof.lines.push_back(
          {parse(formula_text), parse_justification(line.number, line.text.substr(semi + 1))});
    } catch (const ParseError& e) {
      line_fail(line.number,
                "syntax error at column " + std::to_string(e.column) + " of the formula: " + e.what());
    }
  }
  return proof;
}

Proof parse_proof(std::string_view text, const Alphabet& alphabet) {
  Proof proof = parse_proof(text);
  for (std::size_t i = 0; i < proof.lines.size(); ++i) {
    const auto& line = proof.lines[i];
    require_declared(alphabet, line.formula);
    if (const auto* nec = std::get_if<NecRef>(&line.justification)) {
      if (!alphabet.contains(nec->character))
        throw InputError("line " + std::to_string(i + 1) + ": undeclared character '" +
                         nec->character.text() + "'");
    }
  }
  return proof;
}

std::string print_proof(const Proof& p) {
  std::string out;
  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    const auto& line = p.lines[i];
    out += std::to_string(i + 1) + ". " + print(line.formula) + " ; ";
    if (const auto* ax = std::get_if<AxiomRef>(&line.justification)) {
      out += "axiom " + ax->name;
      if (ax->binding) {
        out += " [";
        bool first = true;
        for (const auto& [key, value] : ax->binding->formulas) {
          out += (first ? "" : ", ") + key + ":=" + print(value);
          first = false;
        }
        for (const auto& [key, value] : ax->binding->characters) {
          out += (first ? "" : ", ") + key + ":=" + value.text();
          first = false;
        }
        out += "]";
      }
    } else if (const auto* mp = std::get_if<MpRef>(&line.justification)) {
      out += "mp " + std::to_string(mp->antecedent) + " " + std::to_string(mp->implication);
    } else {
      const auto& nec = std::get<NecRef>(line.justification);
      out += "nec " + std::to_string(nec.from) + " " + nec.character.text();
    }
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checking

namespace {

ProofCheckResult reject(int line, std::string reason) {
  ProofCheckResult r;
  r.accepted = false;
  r.line = line;
  r.reason = std::move(reason);
  return r;
}

}  // namespace

ProofCheckResult check_proof(const Proof& p, const AxiomCatalog& catalog) {
  if (p.lines.empty()) return reject(0, "empty proof");
  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    int number = static_cast<int>(i) + 1;
    const auto& line = p.lines[i];
    try {
      require_declared(catalog.alphabet(), line.formula);
    } catch (const InputError& e) {
      return reject(number, e.what());
    }

    if (const auto* ax = std::get_if<AxiomRef>(&line.justification)) {
      const Schema* schema = catalog.find(ax->name);
      if (!schema) return reject(number, "unknown axiom schema '" + ax->name + "'");
      if (ax->binding) {
        for (const auto& [key, value] : ax->binding->characters) {
          if (!catalog.alphabet().contains(value))
            return reject(number, "undeclared character '" + value.text() + "' in binding");
        }
        auto fvars = formula_metavars(*schema);
        auto cvars = char_metavars(*schema);
        for (const auto& [key, value] : ax->binding->formulas) {
          if (!fvars.count(key)) return reject(number, "binding names unknown metavariable '" + key + "'");
        }
        for (const auto& [key, value] : ax->binding->characters) {
          if (!cvars.count(key)) return reject(number, "binding names unknown metavariable '" + key + "'");
        }
        Formula expect = line.formula;
        try {
          expect = instantiate(*schema, *ax->binding);
        } catch (const InputError& e) {
          return reject(number, e.what());
        }
        if (expect != line.formula)
          return reject(number, "binding instantiates " + ax->name + " to '" + print(expect) +
                                    "', not the stated formula");
      } else if (!match_schema(*schema, line.formula)) {
        return reject(number, "formula is not an instance of " + ax->name);
      }
    } else if (const auto* mp = std::get_if<MpRef>(&line.justification)) {
      if (mp->antecedent < 1 || mp->antecedent >= number)
        return reject(number, "mp references line " + std::to_string(mp->antecedent) +
                                  ", which is not strictly earlier");
      if (mp->implication < 1 || mp->implication >= number)
        return reject(number, "mp references line " + std::to_string(mp->implication) +
                                  ", which is not strictly earlier");
      const Formula& a = p.lines[static_cast<std::size_t>(mp->antecedent - 1)].formula;
      const Formula& ab = p.lines[static_cast<std::size_t>(mp->implication - 1)].formula;
      if (ab.kind() != Formula::Kind::Impl || ab.left() != a || ab.right() != line.formula)
        return reject(number, "line " + std::to_string(mp->implication) +
                                  " is not the implication from line " +
                                  std::to_string(mp->antecedent) + " to this line");
    } else {
      const auto& nec = std::get<NecRef>(line.justification);
      if (nec.from < 1 || nec.from >= number)
        return reject(number, "nec references line " + std::to_string(nec.from) +
                                  ", which is not strictly earlier");
      if (!catalog.alphabet().contains(nec.character))
        return reject(number, "undeclared character '" + nec.character.text() + "'");
      const Formula& a = p.lines[static_cast<std::size_t>(nec.from - 1)].formula;
      if (line.formula.kind() != Formula::Kind::Box || line.formula.modal_char() != nec.character ||
          line.formula.child() != a)
        return reject(number, "formula is not [" + nec.character.text() + "] applied to line " +
                                  std::to_string(nec.from));
    }
  }
  ProofCheckResult r;
  r.accepted = true;
  r.theorem = p.lines.back().formula;
  r.line = static_cast<int>(p.lines.size());
  return r;
}

DerivationCheck derives(const std::vector<Formula>& premises, const Proof& p, const Formula& goal,
                        const AxiomCatalog& catalog) {
  ProofCheckResult checked = check_proof(p, catalog);
  if (!checked.accepted)
    return {false, "proof rejected at line " + std::to_string(checked.line) + ": " + checked.reason};
  const Formula& last = *checked.theorem;
  if (last == goal) return {true, ""};

  if (last.kind() != Formula::Kind::Impl || last.right() != goal)
    return {false, "final line is not the goal or an implication into it"};

  auto is_premise = [&](const Formula& f) {
    return std::find(premises.begin(), premises.end(), f) != premises.end();
  };
  // The antecedent must peel into premises as a right-associated chain.
  Formula chain = last.left();
  while (true) {
    if (is_premise(chain)) return {true, ""};
    if (chain.kind() != Formula::Kind::And || !is_premise(chain.left()))
      return {false, "antecedent '" + print(chain) + "' is not a chain of premises"};
    chain = chain.right();
  }
}

}  // namespace igl
