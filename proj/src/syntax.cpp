#include "igl/syntax.hpp"

#include <algorithm>
#include <utility>

namespace igl {

namespace {

bool is_ident_start(char c) { return c >= 'a' && c <= 'z'; }

bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool is_ident(const std::string& s) {
  if (s.empty() || !is_ident_start(s[0])) return false;
  return std::all_of(s.begin(), s.end(), is_ident_char);
}

}  // namespace

// ---------------------------------------------------------------------------
// Characters and alphabets

std::string Character::text() const {
  return polarity == Polarity::Forward ? base : base + "-";
}

Character forward_char(std::string base) { return Character{std::move(base), Polarity::Forward}; }

Character backward_char(std::string base) { return Character{std::move(base), Polarity::Backward}; }

Character converse(const Character& x) {
  return Character{x.base, x.polarity == Polarity::Forward ? Polarity::Backward : Polarity::Forward};
}

Alphabet::Alphabet(std::set<std::string> forward_names) : forward_names_(std::move(forward_names)) {
  if (forward_names_.empty()) throw InputError("alphabet needs at least one forward name");
  for (const auto& name : forward_names_) {
    if (!is_ident(name)) throw InputError("bad character name '" + name + "'");
  }
}

std::vector<Character> Alphabet::characters() const {
  std::vector<Character> out;
  for (const auto& name : forward_names_) {
    out.push_back(forward_char(name));
    out.push_back(backward_char(name));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Formula nodes

struct Formula::Node {
  Kind kind;
  std::string atom;                  // Atom
  Character chr;                     // Dia/Box
  std::shared_ptr<const Node> a, b;  // a: left or modal child, b: right
};

Formula::Kind Formula::kind() const { return node_->kind; }

const std::string& Formula::atom_name() const {
  if (kind() != Kind::Atom) throw Error("atom_name() on a non-atom");
  return node_->atom;
}

const Character& Formula::modal_char() const {
  if (kind() != Kind::Dia && kind() != Kind::Box) throw Error("modal_char() on a non-modal formula");
  return node_->chr;
}

Formula Formula::left() const {
  if (kind() != Kind::Or && kind() != Kind::And && kind() != Kind::Impl)
    throw Error("left() on a non-binary formula");
  return Formula(node_->a);
}

Formula Formula::right() const {
  if (kind() != Kind::Or && kind() != Kind::And && kind() != Kind::Impl)
    throw Error("right() on a non-binary formula");
  return Formula(node_->b);
}

Formula Formula::child() const {
  if (kind() != Kind::Dia && kind() != Kind::Box) throw Error("child() on a non-modal formula");
  return Formula(node_->a);
}

bool Formula::operator==(const Formula& other) const {
  if (node_.get() == other.node_.get()) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::Atom:
      return atom_name() == other.atom_name();
    case Kind::Bottom:
      return true;
    case Kind::Or:
    case Kind::And:
    case Kind::Impl:
      return left() == other.left() && right() == other.right();
    case Kind::Dia:
    case Kind::Box:
      return modal_char() == other.modal_char() && child() == other.child();
  }
  return false;
}

Formula atom(std::string name) {
  if (name == "false") throw InputError("'false' is reserved and cannot name an atom");
  if (!is_ident(name)) throw InputError("bad atom name '" + name + "'");
  return Formula(std::make_shared<const Formula::Node>(
      Formula::Node{Formula::Kind::Atom, std::move(name), {}, nullptr, nullptr}));
}

Formula bottom() {
  return Formula(std::make_shared<const Formula::Node>(
      Formula::Node{Formula::Kind::Bottom, {}, {}, nullptr, nullptr}));
}

Formula disj(Formula a, Formula b) {
  return Formula(std::make_shared<const Formula::Node>(
      Formula::Node{Formula::Kind::Or, {}, {}, std::move(a.node_), std::move(b.node_)}));
}

Formula conj(Formula a, Formula b) {
  return Formula(std::make_shared<const Formula::Node>(
      Formula::Node{Formula::Kind::And, {}, {}, std::move(a.node_), std::move(b.node_)}));
}

Formula impl(Formula a, Formula b) {
  return Formula(std::make_shared<const Formula::Node>(
      Formula::Node{Formula::Kind::Impl, {}, {}, std::move(a.node_), std::move(b.node_)}));
}

Formula dia(Character x, Formula a) {
  return Formula(std::make_shared<const Formula::Node>(
      Formula::Node{Formula::Kind::Dia, {}, std::move(x), std::move(a.node_), nullptr}));
}

Formula box(Character x, Formula a) {
  return Formula(std::make_shared<const Formula::Node>(
      Formula::Node{Formula::Kind::Box, {}, std::move(x), std::move(a.node_), nullptr}));
}

Formula neg(Formula a) { return impl(std::move(a), bottom()); }

Formula iff(Formula a, Formula b) { return conj(impl(a, b), impl(b, a)); }

namespace {

template <typename F>
void walk(const Formula& f, F&& visit) {
  visit(f);
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Bottom:
      return;
    case Formula::Kind::Or:
    case Formula::Kind::And:
    case Formula::Kind::Impl:
      walk(f.left(), visit);
      walk(f.right(), visit);
      return;
    case Formula::Kind::Dia:
    case Formula::Kind::Box:
      walk(f.child(), visit);
      return;
  }
}

}  // namespace

std::set<std::string> atom_names(const Formula& f) {
  std::set<std::string> out;
  walk(f, [&](const Formula& g) {
    if (g.kind() == Formula::Kind::Atom) out.insert(g.atom_name());
  });
  return out;
}

std::set<Character> characters_of(const Formula& f) {
  std::set<Character> out;
  walk(f, [&](const Formula& g) {
    if (g.kind() == Formula::Kind::Dia || g.kind() == Formula::Kind::Box) out.insert(g.modal_char());
  });
  return out;
}

int formula_depth(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Bottom:
      return 0;
    case Formula::Kind::Or:
    case Formula::Kind::And:
    case Formula::Kind::Impl:
      return 1 + std::max(formula_depth(f.left()), formula_depth(f.right()));
    case Formula::Kind::Dia:
    case Formula::Kind::Box:
      return 1 + formula_depth(f.child());
  }
  return 0;
}

void require_declared(const Alphabet& alphabet, const Formula& f) {
  for (const auto& x : characters_of(f)) {
    if (!alphabet.contains(x)) throw InputError("undeclared character '" + x.text() + "'");
  }
}

// ---------------------------------------------------------------------------
// Parser. Single pass over the text; columns in errors are 1-based.

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Formula run() {
    Formula f = parse_formula();
    skip_ws();
    if (!eof()) fail("unexpected trailing input");
    return f;
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;

  [[noreturn]] void fail(const std::string& message) { throw ParseError(message, i_ + 1); }

  bool eof() const { return i_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[i_]; }

  void skip_ws() {
    while (!eof() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
  }

  bool lookahead(std::string_view tok) {
    skip_ws();
    return s_.substr(i_, tok.size()) == tok;
  }

  void expect(char c, const char* what) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "' " + what);
    ++i_;
  }

  std::string ident() {
    skip_ws();
    if (!is_ident_start(peek())) fail("expected an identifier");
    std::size_t start = i_;
    while (!eof() && is_ident_char(s_[i_])) ++i_;
    return std::string(s_.substr(start, i_ - start));
  }

  Character character() {
    std::string base = ident();
    if (peek() == '-') {  // converse mark binds to the identifier, no space
      ++i_;
      return backward_char(std::move(base));
    }
    return forward_char(std::move(base));
  }

  Formula parse_formula() {
    Formula f = parse_impl();
    while (lookahead("<->")) {
      i_ += 3;
      Formula g = parse_impl();
      f = iff(f, g);
    }
    return f;
  }

  Formula parse_impl() {
    Formula l = parse_or();
    if (lookahead("->")) {
      i_ += 2;
      Formula r = parse_impl();
      return impl(l, r);
    }
    return l;
  }

  Formula parse_or() {
    Formula l = parse_and();
    while (lookahead("|")) {
      ++i_;
      l = disj(l, parse_and());
    }
    return l;
  }

  Formula parse_and() {
    Formula l = parse_unary();
    while (lookahead("&")) {
      ++i_;
      l = conj(l, parse_unary());
    }
    return l;
  }

  Formula parse_unary() {
    skip_ws();
    switch (peek()) {
      case '~': {
        ++i_;
        return neg(parse_unary());
      }
      case '<': {
        if (lookahead("<->")) fail("expected a formula");
        ++i_;
        Character x = character();
        expect('>', "after the modal character");
        return dia(std::move(x), parse_unary());
      }
      case '[': {
        ++i_;
        Character x = character();
        expect(']', "after the modal character");
        return box(std::move(x), parse_unary());
      }
      case '(': {
        ++i_;
        Formula f = parse_formula();
        expect(')', "to close the group");
        return f;
      }
      default: {
        if (!is_ident_start(peek())) fail("expected a formula");
        std::string name = ident();
        if (name == "false") return bottom();
        return atom(std::move(name));
      }
    }
  }
};

}  // namespace

Formula parse(std::string_view text) { return Parser(text).run(); }

Formula parse(std::string_view text, const Alphabet& alphabet) {
  Formula f = Parser(text).run();
  require_declared(alphabet, f);
  return f;
}

// ---------------------------------------------------------------------------
// Printer. Precedence: atoms/modalities 4, & 3, | 2, -> 1. A child is
// parenthesized when its precedence falls below the slot's minimum; the
// asymmetric minimums reproduce left associativity for & and | and right
// associativity for ->.

namespace {

int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Atom:
    case Formula::Kind::Bottom:
    case Formula::Kind::Dia:
    case Formula::Kind::Box:
      return 4;
    case Formula::Kind::And:
      return 3;
    case Formula::Kind::Or:
      return 2;
    case Formula::Kind::Impl:
      return 1;
  }
  return 4;
}

void print_into(const Formula& f, int min_prec, std::string& out) {
  bool parens = precedence(f.kind()) < min_prec;
  if (parens) out += '(';
  switch (f.kind()) {
    case Formula::Kind::Atom:
      out += f.atom_name();
      break;
    case Formula::Kind::Bottom:
      out += "false";
      break;
    case Formula::Kind::And:
      print_into(f.left(), 3, out);
      out += " & ";
      print_into(f.right(), 4, out);
      break;
    case Formula::Kind::Or:
      print_into(f.left(), 2, out);
      out += " | ";
      print_into(f.right(), 3, out);
      break;
    case Formula::Kind::Impl:
      print_into(f.left(), 2, out);
      out += " -> ";
      print_into(f.right(), 1, out);
      break;
    case Formula::Kind::Dia:
      out += '<';
      out += f.modal_char().text();
      out += '>';
      print_into(f.child(), 4, out);
      break;
    case Formula::Kind::Box:
      out += '[';
      out += f.modal_char().text();
      out += ']';
      print_into(f.child(), 4, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string print(const Formula& f) {
  std::string out;
  print_into(f, 0, out);
  return out;
}

Formula substitute(const Formula& f, const std::map<std::string, Formula>& map) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      auto it = map.find(f.atom_name());
      return it == map.end() ? f : it->second;
    }
    case Formula::Kind::Bottom:
      return f;
    case Formula::Kind::Or:
    case Formula::Kind::And:
    case Formula::Kind::Impl: {
      Formula l = substitute(f.left(), map);
      Formula r = substitute(f.right(), map);
      if (l.id() == f.left().id() && r.id() == f.right().id()) return f;
      if (f.kind() == Formula::Kind::Or) return disj(l, r);
      if (f.kind() == Formula::Kind::And) return conj(l, r);
      return impl(l, r);
    }
    case Formula::Kind::Dia:
    case Formula::Kind::Box: {
      Formula c = substitute(f.child(), map);
      if (c.id() == f.child().id()) return f;
      return f.kind() == Formula::Kind::Dia ? dia(f.modal_char(), c) : box(f.modal_char(), c);
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Schemas

CharPattern CharPattern::var(std::string name, bool conversed) {
  CharPattern p;
  p.meta = std::move(name);
  p.conversed = conversed;
  return p;
}

struct Schema::Node {
  Kind kind;
  std::string meta;                  // Meta
  std::optional<CharPattern> pat;    // Dia/Box
  std::shared_ptr<const Node> a, b;  // a: left or modal child, b: right
};

Schema::Kind Schema::kind() const { return node_->kind; }

const std::string& Schema::meta_name() const {
  if (kind() != Kind::Meta) throw Error("meta_name() on a non-metavariable schema");
  return node_->meta;
}

const CharPattern& Schema::pattern() const {
  if (kind() != Kind::Dia && kind() != Kind::Box) throw Error("pattern() on a non-modal schema");
  return *node_->pat;
}

Schema Schema::left() const {
  if (kind() != Kind::Or && kind() != Kind::And && kind() != Kind::Impl)
    throw Error("left() on a non-binary schema");
  return Schema(node_->a);
}

Schema Schema::right() const {
  if (kind() != Kind::Or && kind() != Kind::And && kind() != Kind::Impl)
    throw Error("right() on a non-binary schema");
  return Schema(node_->b);
}

Schema Schema::child() const {
  if (kind() != Kind::Dia && kind() != Kind::Box) throw Error("child() on a non-modal schema");
  return Schema(node_->a);
}

Schema Schema::meta(std::string name) {
  return Schema(std::make_shared<const Node>(Node{Kind::Meta, std::move(name), std::nullopt, nullptr, nullptr}));
}

Schema Schema::bottom() {
  return Schema(std::make_shared<const Node>(Node{Kind::Bottom, {}, std::nullopt, nullptr, nullptr}));
}

Schema Schema::disj(Schema a, Schema b) {
  return Schema(std::make_shared<const Node>(
      Node{Kind::Or, {}, std::nullopt, std::move(a.node_), std::move(b.node_)}));
}

Schema Schema::conj(Schema a, Schema b) {
  return Schema(std::make_shared<const Node>(
      Node{Kind::And, {}, std::nullopt, std::move(a.node_), std::move(b.node_)}));
}

Schema Schema::impl(Schema a, Schema b) {
  return Schema(std::make_shared<const Node>(
      Node{Kind::Impl, {}, std::nullopt, std::move(a.node_), std::move(b.node_)}));
}

Schema Schema::dia(CharPattern x, Schema a) {
  return Schema(std::make_shared<const Node>(
      Node{Kind::Dia, {}, std::move(x), std::move(a.node_), nullptr}));
}

Schema Schema::box(CharPattern x, Schema a) {
  return Schema(std::make_shared<const Node>(
      Node{Kind::Box, {}, std::move(x), std::move(a.node_), nullptr}));
}

Schema Schema::neg(Schema a) { return impl(std::move(a), bottom()); }

Schema Schema::iff(Schema a, Schema b) { return conj(impl(a, b), impl(b, a)); }

namespace {

bool match_char(const CharPattern& p, const Character& x, Binding& b) {
  if (p.concrete) return *p.concrete == x;
  // A converse-marked pattern occurrence matches c by binding the
  // metavariable to converse(c).
  Character want = p.conversed ? converse(x) : x;
  auto it = b.characters.find(p.meta);
  if (it != b.characters.end()) return it->second == want;
  b.characters.emplace(p.meta, want);
  return true;
}

bool match_into(const Schema& s, const Formula& f, Binding& b) {
  switch (s.kind()) {
    case Schema::Kind::Meta: {
      auto it = b.formulas.find(s.meta_name());
      if (it != b.formulas.end()) return it->second == f;
      b.formulas.emplace(s.meta_name(), f);
      return true;
    }
    case Schema::Kind::Bottom:
      return f.kind() == Formula::Kind::Bottom;
    case Schema::Kind::Or:
      return f.kind() == Formula::Kind::Or && match_into(s.left(), f.left(), b) &&
             match_into(s.right(), f.right(), b);
    case Schema::Kind::And:
      return f.kind() == Formula::Kind::And && match_into(s.left(), f.left(), b) &&
             match_into(s.right(), f.right(), b);
    case Schema::Kind::Impl:
      return f.kind() == Formula::Kind::Impl && match_into(s.left(), f.left(), b) &&
             match_into(s.right(), f.right(), b);
    case Schema::Kind::Dia:
      return f.kind() == Formula::Kind::Dia && match_char(s.pattern(), f.modal_char(), b) &&
             match_into(s.child(), f.child(), b);
    case Schema::Kind::Box:
      return f.kind() == Formula::Kind::Box && match_char(s.pattern(), f.modal_char(), b) &&
             match_into(s.child(), f.child(), b);
  }
  return false;
}

}  // namespace

std::optional<Binding> match_schema(const Schema& s, const Formula& f) {
  Binding b;
  if (match_into(s, f, b)) return b;
  return std::nullopt;
}

Formula instantiate(const Schema& s, const Binding& b) {
  switch (s.kind()) {
    case Schema::Kind::Meta: {
      auto it = b.formulas.find(s.meta_name());
      if (it == b.formulas.end())
        throw InputError("unbound formula metavariable '" + s.meta_name() + "'");
      return it->second;
    }
    case Schema::Kind::Bottom:
      return bottom();
    case Schema::Kind::Or:
      return disj(instantiate(s.left(), b), instantiate(s.right(), b));
    case Schema::Kind::And:
      return conj(instantiate(s.left(), b), instantiate(s.right(), b));
    case Schema::Kind::Impl:
      return impl(instantiate(s.left(), b), instantiate(s.right(), b));
    case Schema::Kind::Dia:
    case Schema::Kind::Box: {
      const CharPattern& p = s.pattern();
      Character x;
      if (p.concrete) {
        x = *p.concrete;
      } else {
        auto it = b.characters.find(p.meta);
        if (it == b.characters.end())
          throw InputError("unbound character metavariable '" + p.meta + "'");
        x = p.conversed ? converse(it->second) : it->second;
      }
      Formula c = instantiate(s.child(), b);
      return s.kind() == Schema::Kind::Dia ? dia(std::move(x), std::move(c))
                                           : box(std::move(x), std::move(c));
    }
  }
  throw Error("unreachable schema kind");
}

namespace {

template <typename F>
void walk_schema(const Schema& s, F&& visit) {
  visit(s);
  switch (s.kind()) {
    case Schema::Kind::Meta:
    case Schema::Kind::Bottom:
      return;
    case Schema::Kind::Or:
    case Schema::Kind::And:
    case Schema::Kind::Impl:
      walk_schema(s.left(), visit);
      walk_schema(s.right(), visit);
      return;
    case Schema::Kind::Dia:
    case Schema::Kind::Box:
      walk_schema(s.child(), visit);
      return;
  }
}

}  // namespace

std::set<std::string> formula_metavars(const Schema& s) {
  std::set<std::string> out;
  walk_schema(s, [&](const Schema& t) {
    if (t.kind() == Schema::Kind::Meta) out.insert(t.meta_name());
  });
  return out;
}

std::set<std::string> char_metavars(const Schema& s) {
  std::set<std::string> out;
  walk_schema(s, [&](const Schema& t) {
    if ((t.kind() == Schema::Kind::Dia || t.kind() == Schema::Kind::Box) && !t.pattern().concrete)
      out.insert(t.pattern().meta);
  });
  return out;
}

namespace {

int schema_precedence(Schema::Kind k) {
  switch (k) {
    case Schema::Kind::Meta:
    case Schema::Kind::Bottom:
    case Schema::Kind::Dia:
    case Schema::Kind::Box:
      return 4;
    case Schema::Kind::And:
      return 3;
    case Schema::Kind::Or:
      return 2;
    case Schema::Kind::Impl:
      return 1;
  }
  return 4;
}

std::string pattern_text(const CharPattern& p) {
  if (p.concrete) return p.concrete->text();
  return p.conversed ? p.meta + "-" : p.meta;
}

void print_schema_into(const Schema& s, int min_prec, std::string& out) {
  bool parens = schema_precedence(s.kind()) < min_prec;
  if (parens) out += '(';
  switch (s.kind()) {
    case Schema::Kind::Meta:
      out += s.meta_name();
      break;
    case Schema::Kind::Bottom:
      out += "false";
      break;
    case Schema::Kind::And:
      print_schema_into(s.left(), 3, out);
      out += " & ";
      print_schema_into(s.right(), 4, out);
      break;
    case Schema::Kind::Or:
      print_schema_into(s.left(), 2, out);
      out += " | ";
      print_schema_into(s.right(), 3, out);
      break;
    case Schema::Kind::Impl:
      print_schema_into(s.left(), 2, out);
      out += " -> ";
      print_schema_into(s.right(), 1, out);
      break;
    case Schema::Kind::Dia:
      out += '<';
      out += pattern_text(s.pattern());
      out += '>';
      print_schema_into(s.child(), 4, out);
      break;
    case Schema::Kind::Box:
      out += '[';
      out += pattern_text(s.pattern());
      out += ']';
      print_schema_into(s.child(), 4, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string print(const Schema& s) {
  std::string out;
  print_schema_into(s, 0, out);
  return out;
}

}  // namespace igl
