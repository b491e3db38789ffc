#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>
#include <string>
#include <vector>

#include "igl/model.hpp"
#include "igl/syntax.hpp"
#include "oracles.hpp"

using namespace igl;

namespace {

Model two_chain() {
  Model m(Alphabet({"a"}), {"w0", "w1"});
  m.add_leq("w0", "w0");
  m.add_leq("w1", "w1");
  m.add_leq("w0", "w1");
  return m;
}

// Pseudo-random pre-model over up to 4 worlds and up to 2 forward bases;
// deliberately unclosed and possibly ill-formed.
Model random_pre_model(std::mt19937_64& rng, const Alphabet& alphabet) {
  int n = 1 + static_cast<int>(rng() % 4);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("w" + std::to_string(i));
  Model m(alphabet, names);
  auto coin = [&](int denom) { return rng() % static_cast<std::uint64_t>(denom) == 0; };
  for (const auto& w : names) {
    for (const auto& u : names) {
      if (coin(4)) m.add_leq(w, u);
      for (const auto& base : alphabet.forward_names()) {
        if (coin(3)) m.add_edge(forward_char(base), w, u);
      }
    }
    for (const char* atom : {"p", "q"}) {
      if (coin(2)) m.add_atom(w, atom);
    }
  }
  return m;
}

GrammarSpec random_grammar(std::mt19937_64& rng, const Alphabet& alphabet) {
  std::vector<Character> chars = alphabet.characters();
  GrammarSpec g;
  int count = static_cast<int>(rng() % 4);  // up to 3 productions
  for (int i = 0; i < count; ++i) {
    Production p;
    p.lhs = chars[rng() % chars.size()];
    int len = static_cast<int>(rng() % 3);
    for (int k = 0; k < len; ++k) p.rhs.push_back(chars[rng() % chars.size()]);
    g.productions.push_back(std::move(p));
  }
  return g;
}

}  // namespace

TEST_CASE("model construction enforces world validity") {
  Alphabet ab({"a"});
  CHECK_THROWS_AS(Model(ab, {}), InputError);
  CHECK_THROWS_AS(Model(ab, {"w0", "w0"}), InputError);
  CHECK_THROWS_AS(Model(ab, {"bad name"}), InputError);
  Model m(ab, {"w0"});
  CHECK(m.size() == 1);
  CHECK(m.index_of("w0") == 0);
  CHECK_THROWS_AS(m.index_of("w1"), InputError);
  CHECK(!m.has_world("w1"));
}

TEST_CASE("edges respect polarity on write and read") {
  Model m(Alphabet({"a"}), {"w0", "w1"});
  m.add_edge(forward_char("a"), "w0", "w1");
  CHECK(edge_lookup(m, forward_char("a")) == oracle::PairSet{{"w0", "w1"}});
  CHECK(edge_lookup(m, backward_char("a")) == oracle::PairSet{{"w1", "w0"}});

  // a backward write lands in the forward store reversed
  m.add_edge(backward_char("a"), "w0", "w1");
  CHECK(edge_lookup(m, forward_char("a")) == oracle::PairSet{{"w0", "w1"}, {"w1", "w0"}});

  CHECK_THROWS_AS(m.add_edge(forward_char("b"), "w0", "w1"), InputError);
  CHECK_THROWS_AS(edge_lookup(m, forward_char("b")), InputError);
}

TEST_CASE("edge lookup is empty for untouched characters") {
  Model m(Alphabet({"a", "b"}), {"w0"});
  CHECK(edge_lookup(m, forward_char("b")).empty());
  CHECK(edge_lookup(m, backward_char("b")).empty());
}

TEST_CASE("edge lookup symmetry under converse") {
  std::mt19937_64 rng(13);
  Alphabet ab({"a", "b"});
  for (int trial = 0; trial < 50; ++trial) {
    Model m = random_pre_model(rng, ab);
    for (const auto& x : ab.characters()) {
      auto fwd = edge_lookup(m, x);
      auto bwd = edge_lookup(m, converse(x));
      oracle::PairSet swapped;
      for (const auto& [w, u] : fwd) swapped.insert({u, w});
      CHECK(bwd == swapped);
    }
  }
}

TEST_CASE("saturation closes composition chains") {
  Model m(Alphabet({"a"}), {"w0", "w1", "w2"});
  m.add_edge(forward_char("a"), "w0", "w1");
  m.add_edge(forward_char("a"), "w1", "w2");
  GrammarSpec g;
  g.productions.push_back({forward_char("a"), {forward_char("a"), forward_char("a")}});
  Model s = saturate(m, g);
  CHECK(edge_lookup(s, forward_char("a")) ==
        oracle::PairSet{{"w0", "w1"}, {"w1", "w2"}, {"w0", "w2"}});
}

TEST_CASE("empty production forces the diagonal") {
  Model m(Alphabet({"a"}), {"w0", "w1", "w2"});
  GrammarSpec g;
  g.productions.push_back({forward_char("a"), {}});
  Model s = saturate(m, g);
  CHECK(edge_lookup(s, forward_char("a")) ==
        oracle::PairSet{{"w0", "w0"}, {"w1", "w1"}, {"w2", "w2"}});
}

TEST_CASE("saturation closes the preorder and the valuation") {
  Model m(Alphabet({"a"}), {"w0", "w1"});
  m.add_leq("w0", "w1");
  m.add_atom("w0", "p");
  Model s = saturate(m, GrammarSpec{});
  CHECK(s.leq(0, 0));
  CHECK(s.leq(1, 1));
  CHECK(s.leq(0, 1));
  CHECK(!s.leq(1, 0));
  CHECK(s.atom_at(1, "p"));
}

TEST_CASE("backward characters participate in closure on both sides") {
  // a -> b-  : every reversed b edge induces an a edge
  Model m(Alphabet({"a", "b"}), {"w0", "w1"});
  m.add_edge(forward_char("b"), "w1", "w0");
  GrammarSpec g;
  g.productions.push_back({forward_char("a"), {backward_char("b")}});
  Model s = saturate(m, g);
  CHECK(edge_lookup(s, forward_char("a")) == oracle::PairSet{{"w0", "w1"}});

  // a- -> b : a backward lhs stores its conclusions reversed into rel(a)
  Model m2(Alphabet({"a", "b"}), {"w0", "w1"});
  m2.add_edge(forward_char("b"), "w0", "w1");
  GrammarSpec g2;
  g2.productions.push_back({backward_char("a"), {forward_char("b")}});
  Model s2 = saturate(m2, g2);
  CHECK(edge_lookup(s2, backward_char("a")) == oracle::PairSet{{"w0", "w1"}});
  CHECK(edge_lookup(s2, forward_char("a")) == oracle::PairSet{{"w1", "w0"}});
}

TEST_CASE("saturation is idempotent and matches the chaotic oracle") {
  std::mt19937_64 rng(99);
  Alphabet ab({"a", "b"});
  for (int trial = 0; trial < 120; ++trial) {
    Model m = random_pre_model(rng, ab);
    GrammarSpec g = random_grammar(rng, ab);
    Model s = saturate(m, g);
    CHECK(saturate(s, g) == s);
    CHECK(s == oracle::saturate_naive(m, g));
  }
}

TEST_CASE("audit accepts the lone serial reflexive world") {
  Model m(Alphabet({"a"}), {"w"});
  m.add_leq("w", "w");
  m.add_edge(forward_char("a"), "w", "w");
  GrammarSpec g;
  g.serial.insert(forward_char("a"));
  CHECK(audit(m, g).ok());
  CHECK(is_birelational(m, g));
}

TEST_CASE("audit pinpoints a missing forward-confluence witness") {
  // v climbs to v1 but w has no matching climb
  Model m(Alphabet({"a"}), {"w", "v", "v1"});
  for (const auto& w : m.worlds()) m.add_leq(w, w);
  m.add_leq("v", "v1");
  m.add_edge(forward_char("a"), "w", "v");
  AuditReport report = audit(m, GrammarSpec{});
  REQUIRE(!report.ok());
  bool found = false;
  for (const auto& v : report.violations) {
    if (v.kind == Violation::Kind::F1 && v.character == forward_char("a")) {
      CHECK(v.witnesses == std::vector<std::string>{"w", "v", "v1"});
      found = true;
    }
  }
  CHECK(found);
  CHECK(!is_birelational(m, GrammarSpec{}));
}

TEST_CASE("audit pinpoints a missing rising-edge witness") {
  // w climbs to w1 but w1 has no a-successor above v
  Model m(Alphabet({"a"}), {"w", "w1", "v"});
  for (const auto& w : m.worlds()) m.add_leq(w, w);
  m.add_leq("w", "w1");
  m.add_edge(forward_char("a"), "w", "v");
  AuditReport report = audit(m, GrammarSpec{});
  REQUIRE(!report.ok());
  bool found = false;
  for (const auto& v : report.violations) {
    if (v.kind == Violation::Kind::F2 && v.character == forward_char("a")) {
      CHECK(v.witnesses == std::vector<std::string>{"w", "w1", "v"});
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("audit flags preorder and monotonicity defects") {
  Model m(Alphabet({"a"}), {"w0", "w1"});
  m.add_leq("w0", "w1");
  m.add_atom("w0", "p");
  AuditReport report = audit(m, GrammarSpec{});
  std::set<Violation::Kind> kinds;
  for (const auto& v : report.violations) kinds.insert(v.kind);
  CHECK(kinds.count(Violation::Kind::PreorderReflexive));
  CHECK(kinds.count(Violation::Kind::MonotoneValuation));

  Model t(Alphabet({"a"}), {"w0", "w1", "w2"});
  for (const auto& w : t.worlds()) t.add_leq(w, w);
  t.add_leq("w0", "w1");
  t.add_leq("w1", "w2");
  AuditReport rt = audit(t, GrammarSpec{});
  REQUIRE(rt.violations.size() == 1);
  CHECK(rt.violations[0].kind == Violation::Kind::PreorderTransitive);
  CHECK(rt.violations[0].witnesses == std::vector<std::string>{"w0", "w1", "w2"});
}

TEST_CASE("audit flags missing seriality and unclosed paths") {
  Model m(Alphabet({"a"}), {"w0", "w1", "w2"});
  for (const auto& w : m.worlds()) m.add_leq(w, w);
  m.add_edge(forward_char("a"), "w0", "w1");
  m.add_edge(forward_char("a"), "w1", "w2");

  GrammarSpec g;
  g.serial.insert(forward_char("a"));
  g.productions.push_back({forward_char("a"), {forward_char("a"), forward_char("a")}});

  AuditReport report = audit(m, g);
  bool serial_missing = false;
  bool path_missing = false;
  for (const auto& v : report.violations) {
    if (v.kind == Violation::Kind::Seriality && v.witnesses == std::vector<std::string>{"w2"})
      serial_missing = true;
    if (v.kind == Violation::Kind::Path &&
        v.witnesses == std::vector<std::string>{"w0", "w1", "w2"})
      path_missing = true;
  }
  CHECK(serial_missing);
  CHECK(path_missing);

  // violation text mentions the production so diagnostics stay readable
  for (const auto& v : report.violations) {
    if (v.kind == Violation::Kind::Path) {
      CHECK(v.production == g.productions[0]);
      CHECK(v.describe().find("a -> a a") != std::string::npos);
    }
  }
}

TEST_CASE("saturation never repairs existential frame conditions") {
  Model m(Alphabet({"a"}), {"w", "v", "v1"});
  m.add_leq("v", "v1");
  m.add_edge(forward_char("a"), "w", "v");
  GrammarSpec g;
  g.serial.insert(forward_char("a"));
  Model s = saturate(m, g);
  AuditReport report = audit(s, g);
  std::set<Violation::Kind> kinds;
  for (const auto& v : report.violations) kinds.insert(v.kind);
  CHECK(kinds.count(Violation::Kind::F1));
  CHECK(kinds.count(Violation::Kind::Seriality));
  CHECK(!kinds.count(Violation::Kind::PreorderReflexive));
  CHECK(!kinds.count(Violation::Kind::PreorderTransitive));
}

TEST_CASE("model equality is componentwise and ignores the ambient alphabet") {
  Model a(Alphabet({"a"}), {"w0"});
  Model b(Alphabet({"a", "b"}), {"w0"});
  CHECK(a == b);  // no b edges stored anywhere
  b.add_edge(forward_char("b"), "w0", "w0");
  CHECK(!(a == b));

  Model c = two_chain();
  Model d = two_chain();
  CHECK(c == d);
  d.add_atom("w1", "p");
  CHECK(!(c == d));
  Model e(Alphabet({"a"}), {"w1", "w0"});
  CHECK(!(two_chain() == e));
}

TEST_CASE("model files round-trip through print and parse") {
  Model m(Alphabet({"a", "b"}), {"w0", "w1"});
  m.add_leq("w0", "w0");
  m.add_leq("w1", "w1");
  m.add_leq("w0", "w1");
  m.add_edge(forward_char("a"), "w0", "w1");
  m.add_atom("w1", "p");
  m.add_atom("w1", "q2");

  std::string text = print_model(m);
  Model back = parse_model(text);
  CHECK(back == m);
  // the empty rel line keeps b in the inferred alphabet
  CHECK(back.alphabet() == m.alphabet());
  CHECK(print_model(back) == text);
}

TEST_CASE("model parsing accepts comments and infers a default alphabet") {
  Model m = parse_model("# comment\nworlds: u v\n\nleq: u v # trailing\nval u: p\n");
  CHECK(m.size() == 2);
  CHECK(m.leq(m.index_of("u"), m.index_of("v")));
  CHECK(m.atom_at(m.index_of("u"), "p"));
  CHECK(m.alphabet() == Alphabet({"a"}));

  Model with_rel = parse_model("worlds: u\nrel c: u u\n");
  CHECK(with_rel.alphabet() == Alphabet({"c"}));
}

TEST_CASE("model parsing reports line numbers on bad input") {
  auto message_of = [](std::string_view text) {
    try {
      parse_model(text);
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message_of("leq: w0 w0\n") == "model text declares no worlds");
  CHECK(message_of("worlds: w0 w0\n").find("line 1") == 0);
  CHECK(message_of("worlds: w0\nleq: w0\n") ==
        "line 2: expected 'from to' pairs separated by commas");
  CHECK(message_of("worlds: w0\nleq: w0 w1\n").find("unknown world 'w1'") != std::string::npos);
  CHECK(message_of("worlds: w0\nrel a-: w0 w0\n").find("backward character") !=
        std::string::npos);
  CHECK(message_of("worlds: w0\nwhat: x\n").find("line 2") == 0);
  CHECK(message_of("worlds: w0\nval w1: p\n").find("unknown world 'w1'") != std::string::npos);
  CHECK(message_of("worlds: w0\nval w0: False\n").find("line 2") == 0);

  Alphabet ab({"a"});
  CHECK_THROWS_AS(parse_model("worlds: w0\nrel b: w0 w0\n", ab), InputError);
}

TEST_CASE("grammar files round-trip") {
  GrammarFile g = parse_grammar_file(
      "# converse-heavy grammar\nalphabet: a b\nserial: a b-\nprod a -> a b\nprod b ->\nprod a "
      "-> b-\n");
  CHECK(g.alphabet == Alphabet({"a", "b"}));
  CHECK(g.grammar.serial == std::set<Character>{forward_char("a"), backward_char("b")});
  REQUIRE(g.grammar.productions.size() == 3);
  CHECK(g.grammar.productions[0].text() == "a -> a b");
  CHECK(g.grammar.productions[1].text() == "b ->");
  CHECK(g.grammar.productions[2].text() == "a -> b-");

  GrammarFile back = parse_grammar_file(print_grammar_file(g));
  CHECK(back.alphabet == g.alphabet);
  CHECK(back.grammar == g.grammar);
}

TEST_CASE("grammar parsing validates characters and shape") {
  CHECK_THROWS_AS(parse_grammar_file("serial: a\n"), InputError);
  CHECK_THROWS_AS(parse_grammar_file("alphabet: a-\n"), InputError);
  CHECK_THROWS_AS(parse_grammar_file("alphabet: a\nserial: b\n"), InputError);
  CHECK_THROWS_AS(parse_grammar_file("alphabet: a\nprod b -> a\n"), InputError);
  CHECK_THROWS_AS(parse_grammar_file("alphabet: a\nprod a a a\n"), InputError);
  CHECK_THROWS_AS(parse_grammar_file("alphabet: a\nnonsense\n"), InputError);

  GrammarSpec g;
  g.serial.insert(forward_char("b"));
  CHECK_THROWS_AS(require_declared(Alphabet({"a"}), g), InputError);
}

TEST_CASE("relation matrices compose and close") {
  RelMat r(3);
  r.set(0, 1);
  r.set(1, 2);
  RelMat sq = r.composed_with(r);
  CHECK(sq.at(0, 2));
  CHECK(!sq.at(0, 1));

  RelMat t = r;
  t.close_transitive();
  CHECK(t.at(0, 2));
  CHECK(!t.reflexive());
  t.close_reflexive();
  CHECK(t.reflexive());
  CHECK(t.transitive());

  CHECK(r.transposed().at(1, 0));
  CHECK(r.subset_of(t));
  CHECK(!t.subset_of(r));
  CHECK(RelMat(2).any() == false);
  CHECK(RelMat::identity(2).any());
}
