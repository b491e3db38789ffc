#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "igl/syntax.hpp"

namespace igl {

// Square boolean matrix over world indices, one uint64 row per world.
// Models are capped at 64 worlds so a row always fits one word.
class RelMat {
 public:
  RelMat() = default;
  explicit RelMat(int n);

  int size() const { return n_; }
  bool at(int i, int j) const;
  void set(int i, int j, bool value = true);
  std::uint64_t row(int i) const;
  void or_into_row(int i, std::uint64_t bits);

  bool operator==(const RelMat&) const = default;
  bool subset_of(const RelMat& other) const;
  bool any() const;

  RelMat transposed() const;
  // Boolean product: result(i,j) iff exists k with at(i,k) and other(k,j).
  RelMat composed_with(const RelMat& other) const;
  static RelMat identity(int n);

  void close_reflexive();
  void close_transitive();
  bool reflexive() const;
  bool transitive() const;

 private:
  int n_ = 0;
  std::vector<std::uint64_t> rows_;
};

struct Production {
  Character lhs;
  std::vector<Character> rhs;  // empty allowed

  auto operator<=>(const Production&) const = default;
  std::string text() const;  // "a -> a- a", "a ->" for empty
};

struct GrammarSpec {
  std::set<Character> serial;
  std::vector<Production> productions;

  bool operator==(const GrammarSpec&) const = default;
};

void require_declared(const Alphabet& alphabet, const GrammarSpec& g);

// ---------------------------------------------------------------------------
// Bi-relational models.
//
// Only forward relations are stored; a backward character reads the forward
// matrix transposed, so the converse condition F3 holds by construction.
// World ids are opaque strings. Structural equality compares the world set,
// the leq pair set, the edge sets per forward base, and the valuation;
// the ambient alphabet is not part of equality.

class Model {
 public:
  Model(Alphabet alphabet, std::vector<std::string> worlds);

  int size() const { return static_cast<int>(worlds_.size()); }
  const std::vector<std::string>& worlds() const { return worlds_; }
  const std::string& world_name(int i) const { return worlds_[static_cast<std::size_t>(i)]; }
  int index_of(const std::string& world) const;  // throws InputError
  bool has_world(const std::string& world) const;
  const Alphabet& alphabet() const { return alphabet_; }

  void add_leq(const std::string& from, const std::string& to);
  // Converse aware: adding a backward edge stores the reversed forward pair.
  void add_edge(const Character& x, const std::string& from, const std::string& to);
  void add_atom(const std::string& world, const std::string& atom);

  bool leq(int i, int j) const { return leq_.at(i, j); }
  std::uint64_t leq_row(int i) const { return leq_.row(i); }
  const RelMat& leq_matrix() const { return leq_; }
  void set_leq_matrix(RelMat m);

  // Successors of world i under x; transposed lookup for backward characters.
  // Throws InputError when x is not declared in the ambient alphabet.
  bool edge(const Character& x, int i, int j) const;
  std::uint64_t edge_row(const Character& x, int i) const;
  RelMat edge_matrix(const Character& x) const;
  void set_edge_matrix(const std::string& forward_base, RelMat m);
  // Forward bases with at least one stored edge row (sorted).
  std::vector<std::string> stored_bases() const;

  const std::set<std::string>& atoms_at(int i) const;
  bool atom_at(int i, const std::string& atom) const;
  std::uint64_t atom_mask(const std::string& atom) const;
  std::set<std::string> atom_universe() const;

  bool operator==(const Model& other) const;

 private:
  Alphabet alphabet_;
  std::vector<std::string> worlds_;
  std::map<std::string, int> index_;
  RelMat leq_;
  std::map<std::string, RelMat> rel_;  // forward bases only
  std::vector<std::set<std::string>> val_;
};

// All x-edges as world id pairs; backward characters yield reversed pairs.
std::set<std::pair<std::string, std::string>> edge_lookup(const Model& m, const Character& x);

// Least fixpoint extension: leq closed reflexively and transitively, the
// valuation made monotone along leq, and every production's composition
// chains folded into its left-hand relation. F1, F2, and seriality are audit
// conditions and are never repaired here. Idempotent.
Model saturate(Model m, const GrammarSpec& g);

struct Violation {
  enum class Kind {
    PreorderReflexive,
    PreorderTransitive,
    MonotoneValuation,
    F1,
    F2,
    Seriality,
    Path,
  };

  Kind kind;
  std::optional<Character> character;    // F1, F2, Seriality
  std::optional<Production> production;  // Path
  // World ids; MonotoneValuation appends the atom name.
  std::vector<std::string> witnesses;

  std::string describe() const;
};

std::string to_string(Violation::Kind kind);

struct AuditReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks, in order: preorder reflexivity and transitivity, valuation
// monotonicity, F1 and F2 for every alphabet character of both polarities,
// seriality for the grammar's serial characters, and one path witness per
// production whose closure edge is missing.
AuditReport audit(const Model& m, const GrammarSpec& g);
bool is_birelational(const Model& m, const GrammarSpec& g);

// ---------------------------------------------------------------------------
// Text formats. '#' starts a comment; blank lines are ignored.
//
// Model files:
//   worlds: w0 w1 w2
//   leq: w0 w1, w1 w2
//   rel a: w0 w1, w1 w2
//   val w0: p q
// Only forward characters may appear in rel lines; a backward edge is
// written as the reversed forward pair. "rel a:" with no pairs declares the
// base with an empty relation.
//
// Grammar files:
//   alphabet: a b
//   serial: a b-
//   prod a -> a a
//   prod a ->

Model parse_model(std::string_view text);
Model parse_model(std::string_view text, const Alphabet& alphabet);
std::string print_model(const Model& m);

struct GrammarFile {
  Alphabet alphabet;
  GrammarSpec grammar;
};

GrammarFile parse_grammar_file(std::string_view text);
std::string print_grammar_file(const GrammarFile& g);

}  // namespace igl
