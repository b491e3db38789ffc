#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "igl/model.hpp"
#include "igl/syntax.hpp"

namespace igl {

// ---------------------------------------------------------------------------
// Axiom schemas.
//
// The base catalog holds a nine-schema intuitionistic propositional basis
// (IPL1..IPL9) plus the modal schemas A1..A9 with formula metavariables
// A, B, C and character metavariable x. A grammar adds one seriality schema
// D_<char> per serial character and one composition schema IPAk per
// production, numbered in grammar order; the reflexive/transitive/symmetric/
// euclidean shapes are IPA instances of the corresponding productions, not
// separate entries. The catalog is not closed under converse productions:
// only productions spelled out in the grammar contribute schemas.

class AxiomCatalog {
 public:
  struct Entry {
    std::string name;
    Schema schema;
  };

  // IPL1..IPL9 and A1..A9.
  static AxiomCatalog base(Alphabet alphabet);
  // Base plus D_<char> and IPA1..IPAn entries for `g`.
  static AxiomCatalog for_grammar(Alphabet alphabet, const GrammarSpec& g);

  const Schema* find(const std::string& name) const;
  const std::vector<Entry>& entries() const { return entries_; }
  const Alphabet& alphabet() const { return alphabet_; }

 private:
  explicit AxiomCatalog(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}
  void add(std::string name, Schema schema);

  Alphabet alphabet_;
  std::vector<Entry> entries_;
};

// (<x1>..<xn>A -> <x>A) & ([x]A -> [x1]..[xn]A) for production x -> x1..xn;
// the empty production yields (A -> <x>A) & ([x]A -> A).
Schema ipa_schema(const Production& p);

// [x]A -> <x>A with the concrete character filled in.
Schema seriality_schema(const Character& x);

// ---------------------------------------------------------------------------
// Hilbert proofs.
//
// A proof is a numbered list of formulas, each justified by an axiom schema
// (optionally with an explicit binding), modus ponens over two earlier
// lines, or necessitation of one earlier line.
//
// File format, one line per step, '#' comments allowed:
//   1. [a](p -> q) -> ([a]p -> [a]q) ; axiom A1
//   2. p -> q ; axiom IPL1 [A:=p, B:=q]
//   3. q ; mp 1 2
//   4. [a]q ; nec 3 a
// Binding keys are metavariable names; uppercase names bind formulas,
// lowercase names bind characters.

struct AxiomRef {
  std::string name;
  std::optional<Binding> binding;
};

// Line `implication` must read Impl(line `antecedent`, this line).
struct MpRef {
  int antecedent = 0;
  int implication = 0;
};

struct NecRef {
  int from = 0;
  Character character;
};

using Justification = std::variant<AxiomRef, MpRef, NecRef>;

struct ProofLine {
  Formula formula;
  Justification justification;
};

struct Proof {
  std::vector<ProofLine> lines;  // numbered 1..n in order
};

Proof parse_proof(std::string_view text);
Proof parse_proof(std::string_view text, const Alphabet& alphabet);
std::string print_proof(const Proof& p);

struct ProofCheckResult {
  bool accepted = false;
  std::optional<Formula> theorem;  // final line when accepted
  int line = 0;                    // offending line when rejected
  std::string reason;
};

// Verifies every line; the first bad line rejects the whole proof.
ProofCheckResult check_proof(const Proof& p, const AxiomCatalog& catalog);

struct DerivationCheck {
  bool derives = false;
  std::string reason;
};

// Premise-based derivability: the proof must be accepted and its final line
// must be the goal itself (empty premise use) or Impl(C, goal) where C is a
// right-associated conjunction chain of premises.
DerivationCheck derives(const std::vector<Formula>& premises, const Proof& p,
                        const Formula& goal, const AxiomCatalog& catalog);

}  // namespace igl
