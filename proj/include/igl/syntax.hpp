#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "igl/errors.hpp"

namespace igl {

// ---------------------------------------------------------------------------
// Characters and alphabets.
//
// An alphabet declares a finite nonempty set of forward names. Every forward
// character has a backward twin written with a trailing '-' (e.g. "a-"), and
// the converse map swaps polarity. Converse is involutive.

enum class Polarity { Forward, Backward };

struct Character {
  std::string base;
  Polarity polarity = Polarity::Forward;

  auto operator<=>(const Character&) const = default;

  // Concrete spelling: "a" forward, "a-" backward.
  std::string text() const;
};

Character forward_char(std::string base);
Character backward_char(std::string base);
Character converse(const Character& x);

class Alphabet {
 public:
  // Throws InputError when the name set is empty or a name is not a valid
  // identifier ([a-z][a-zA-Z0-9_]*).
  explicit Alphabet(std::set<std::string> forward_names);

  bool contains(const Character& x) const { return forward_names_.count(x.base) != 0; }
  bool contains_base(const std::string& base) const { return forward_names_.count(base) != 0; }
  const std::set<std::string>& forward_names() const { return forward_names_; }

  // Both polarities, sorted: a, a-, b, b-, ...
  std::vector<Character> characters() const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::set<std::string> forward_names_;
};

// ---------------------------------------------------------------------------
// Formulas.
//
// Immutable trees with structural equality. Negation and biconditional are
// not node kinds; neg(A) builds A -> false and iff(A, B) builds the
// conjunction of both implications.

class Formula {
 public:
  enum class Kind { Atom, Bottom, Or, And, Impl, Dia, Box };

  Kind kind() const;
  const std::string& atom_name() const;  // Atom only
  const Character& modal_char() const;   // Dia/Box only
  Formula left() const;                  // Or/And/Impl
  Formula right() const;                 // Or/And/Impl
  Formula child() const;                 // Dia/Box

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

  // Identity of the shared node, usable as a memoization key.
  const void* id() const { return node_.get(); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;

  friend Formula atom(std::string name);
  friend Formula bottom();
  friend Formula disj(Formula a, Formula b);
  friend Formula conj(Formula a, Formula b);
  friend Formula impl(Formula a, Formula b);
  friend Formula dia(Character x, Formula a);
  friend Formula box(Character x, Formula a);
};

Formula atom(std::string name);  // rejects the reserved word "false"
Formula bottom();
Formula disj(Formula a, Formula b);
Formula conj(Formula a, Formula b);
Formula impl(Formula a, Formula b);
Formula dia(Character x, Formula a);
Formula box(Character x, Formula a);
Formula neg(Formula a);             // a -> false
Formula iff(Formula a, Formula b);  // (a -> b) & (b -> a)

std::set<std::string> atom_names(const Formula& f);
std::set<Character> characters_of(const Formula& f);
int formula_depth(const Formula& f);

// Throws InputError naming the first character of `f` outside `alphabet`.
void require_declared(const Alphabet& alphabet, const Formula& f);

// ---------------------------------------------------------------------------
// Concrete syntax.
//
//   formula := impl ("<->" impl)*          loosest, desugared left to right
//   impl    := or ("->" impl)?             right associative
//   or      := and ("|" and)*              left associative
//   and     := unary ("&" unary)*          left associative
//   unary   := "~" unary | "<" char ">" unary | "[" char "]" unary
//            | atom | "false" | "(" formula ")"
//   char    := ident "-"?
//   atom    := ident                        ident = [a-z][a-zA-Z0-9_]*
//
// "~A" is parsed as A -> false. Printing is canonical with minimal
// parentheses and never reintroduces "~" or "<->".

Formula parse(std::string_view text);                           // any character admitted
Formula parse(std::string_view text, const Alphabet& alphabet); // characters validated
std::string print(const Formula& f);

// Simultaneous substitution of formulas for atoms.
Formula substitute(const Formula& f, const std::map<std::string, Formula>& map);

// ---------------------------------------------------------------------------
// Schemas.
//
// Formula shapes with metavariables: formula metavariables stand for whole
// formulas, character slots are either concrete or a character metavariable,
// optionally converse-marked. Matching a converse-marked occurrence of x
// against a character c binds x to converse(c), so marked and unmarked
// occurrences of the same metavariable resolve consistently.

struct CharPattern {
  std::optional<Character> concrete;
  std::string meta;  // nonempty iff metavariable
  bool conversed = false;

  CharPattern(Character c) : concrete(std::move(c)) {}  // implicit on purpose
  static CharPattern var(std::string name, bool conversed = false);

  bool operator==(const CharPattern&) const = default;

 private:
  CharPattern() = default;
};

class Schema {
 public:
  enum class Kind { Meta, Bottom, Or, And, Impl, Dia, Box };

  Kind kind() const;
  const std::string& meta_name() const;   // Meta only
  const CharPattern& pattern() const;     // Dia/Box only
  Schema left() const;                    // Or/And/Impl
  Schema right() const;                   // Or/And/Impl
  Schema child() const;                   // Dia/Box

  static Schema meta(std::string name);
  static Schema bottom();
  static Schema disj(Schema a, Schema b);
  static Schema conj(Schema a, Schema b);
  static Schema impl(Schema a, Schema b);
  static Schema dia(CharPattern x, Schema a);
  static Schema box(CharPattern x, Schema a);
  static Schema neg(Schema a);
  static Schema iff(Schema a, Schema b);

 private:
  struct Node;
  explicit Schema(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Binding {
  std::map<std::string, Formula> formulas;
  std::map<std::string, Character> characters;

  bool operator==(const Binding&) const = default;
};

// First-match binding, or nullopt when the formula does not fit the shape.
std::optional<Binding> match_schema(const Schema& s, const Formula& f);

// Throws InputError when a metavariable of `s` is missing from `b`.
Formula instantiate(const Schema& s, const Binding& b);

std::set<std::string> formula_metavars(const Schema& s);
std::set<std::string> char_metavars(const Schema& s);

// Diagnostic rendering; metavariables print under their own names.
std::string print(const Schema& s);

}  // namespace igl
