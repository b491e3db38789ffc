#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>
#include <string>
#include <vector>

#include "igl/model.hpp"
#include "igl/search.hpp"
#include "igl/semantics.hpp"
#include "igl/syntax.hpp"
#include "oracles.hpp"

using namespace igl;

namespace {

Model point_model() {
  Model m(Alphabet({"a"}), {"w"});
  m.add_leq("w", "w");
  m.add_atom("w", "p");
  return m;
}

// w0 <= w1, only w1 has an a-edge (to v1, which carries p).
Model step_model() {
  Model m(Alphabet({"a"}), {"w0", "w1", "v1"});
  for (const auto& w : m.worlds()) m.add_leq(w, w);
  m.add_leq("w0", "w1");
  m.add_edge(forward_char("a"), "w1", "v1");
  m.add_atom("v1", "p");
  return m;
}

Model random_pre_model(std::mt19937_64& rng, const Alphabet& alphabet) {
  int n = 1 + static_cast<int>(rng() % 3);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("w" + std::to_string(i));
  Model m(alphabet, names);
  for (const auto& w : names) {
    for (const auto& u : names) {
      if (rng() % 3 == 0) m.add_leq(w, u);
      for (const auto& base : alphabet.forward_names()) {
        if (rng() % 3 == 0) m.add_edge(forward_char(base), w, u);
      }
    }
    for (const char* atom : {"p", "q"}) {
      if (rng() % 2 == 0) m.add_atom(w, atom);
    }
  }
  return m;
}

}  // namespace

TEST_CASE("bottom holds nowhere") {
  Model m = step_model();
  for (const auto& w : m.worlds()) CHECK(!satisfies(m, w, bottom()));
}

TEST_CASE("atoms read the valuation directly") {
  Model m = step_model();
  CHECK(!satisfies(m, "w0", atom("p")));
  CHECK(!satisfies(m, "w1", atom("p")));
  CHECK(satisfies(m, "v1", atom("p")));
}

TEST_CASE("self implication holds everywhere") {
  Model m = point_model();
  CHECK(satisfies(m, "w", parse("p -> p")));
  CHECK(globally_true(step_model(), parse("p -> p")));
}

TEST_CASE("box consults a-edges of every leq successor") {
  Model m = step_model();
  // w0 itself has no a-edge; the edge hangs off its leq successor w1
  CHECK(satisfies(m, "w0", parse("[a]p")));
  CHECK(satisfies(m, "w1", parse("[a]p")));
  CHECK(satisfies(m, "v1", parse("[a]p")));
  CHECK(!satisfies(m, "w0", parse("<a>p")));
  CHECK(satisfies(m, "w1", parse("<a>p")));
}

TEST_CASE("implication quantifies over leq successors") {
  Model m(Alphabet({"a"}), {"w0", "w1"});
  m.add_leq("w0", "w0");
  m.add_leq("w1", "w1");
  m.add_leq("w0", "w1");
  m.add_atom("w1", "p");
  // p fails at w0 but its successor w1 satisfies p and not q
  CHECK(!satisfies(m, "w0", parse("p -> q")));
  CHECK(satisfies(m, "w0", parse("q -> p")));
  CHECK(!satisfies(m, "w0", parse("p | (p -> false)")));
}

TEST_CASE("evaluation agrees with the pair-set reference on random structures") {
  std::mt19937_64 rng(17);
  Alphabet ab({"a", "b"});
  FormulaGenerator gen(ab, {"p", "q"}, 23);
  for (int trial = 0; trial < 150; ++trial) {
    Model m = random_pre_model(rng, ab);
    Formula f = gen.next(3);
    for (const auto& w : m.worlds()) {
      CAPTURE(print(f));
      CHECK(satisfies(m, w, f) == oracle::holds(m, w, f));
    }
  }
}

TEST_CASE("evaluation agrees with the reference on every small audited model") {
  auto models = enumerate_models(Alphabet({"a"}), GrammarSpec{}, {"p"}, 2);
  FormulaGenerator gen(Alphabet({"a"}), {"p"}, 5);
  std::vector<Formula> sample;
  for (int i = 0; i < 40; ++i) sample.push_back(gen.next(3));
  for (const auto& m : models) {
    for (const auto& f : sample) {
      for (const auto& w : m.worlds()) {
        CHECK(satisfies(m, w, f) == oracle::holds(m, w, f));
      }
    }
  }
}

TEST_CASE("satisfaction persists along leq on audited models") {
  auto models = enumerate_models(Alphabet({"a"}), GrammarSpec{}, {"p"}, 3);
  FormulaGenerator gen(Alphabet({"a"}), {"p"}, 41);
  std::vector<Formula> sample;
  for (int i = 0; i < 50; ++i) sample.push_back(gen.next(4));
  for (const auto& m : models) {
    for (const auto& f : sample) {
      std::uint64_t mask = truth_mask(m, f);
      for (int w = 0; w < m.size(); ++w) {
        if (!((mask >> w) & 1u)) continue;
        // every leq successor of a holding world holds too
        CHECK((m.leq_row(w) & ~mask & ((1ull << m.size()) - 1)) == 0);
      }
    }
  }
}

TEST_CASE("diamond is the converse-edge existential") {
  std::mt19937_64 rng(29);
  Alphabet ab({"a"});
  FormulaGenerator gen(ab, {"p"}, 31);
  for (int trial = 0; trial < 60; ++trial) {
    Model m = random_pre_model(rng, ab);
    Formula body = gen.next(2);
    for (const auto& x : ab.characters()) {
      auto swapped = edge_lookup(m, converse(x));
      for (const auto& w : m.worlds()) {
        bool direct = satisfies(m, w, dia(x, body));
        bool via_converse = false;
        for (const auto& u : m.worlds()) {
          if (swapped.count({u, w}) && satisfies(m, u, body)) via_converse = true;
        }
        CHECK(direct == via_converse);
      }
    }
  }
}

TEST_CASE("global truth quantifies over all worlds") {
  Model m = step_model();
  CHECK(globally_true(m, parse("p -> p")));
  CHECK(!globally_true(m, parse("p")));
  auto models = enumerate_models(Alphabet({"a"}), GrammarSpec{}, {"p"}, 2);
  for (const auto& audited : models) CHECK(globally_true(audited, parse("~<a>false")));
}

TEST_CASE("pointwise implication checks premises then the conclusion") {
  Model m = step_model();
  std::vector<Formula> premises{parse("p"), parse("p -> q")};
  CHECK(implies_at(m, "w0", premises, parse("q")));       // premise p fails: vacuous
  CHECK(implies_at(m, "v1", {parse("p")}, parse("p")));   // conclusion among premises
  CHECK(implies_at(m, "w0", {}, parse("p -> p")));        // empty premises: plain satisfaction
  CHECK(!implies_at(m, "w0", {}, parse("p")));
  CHECK(!implies_at(m, "v1", {parse("p")}, parse("q")));
}

TEST_CASE("evaluation validates worlds and characters") {
  Model m = point_model();
  CHECK_THROWS_AS(satisfies(m, "nope", parse("p")), InputError);
  CHECK_THROWS_AS(satisfies(m, "w", parse("<b>p")), InputError);
  CHECK_THROWS_AS(truth_mask(m, parse("[b-]p")), InputError);
  CHECK_THROWS_AS(globally_true(m, parse("<b>p")), InputError);
}

TEST_CASE("truth masks index worlds by position") {
  Model m = step_model();
  CHECK(truth_mask(m, atom("p")) == 0b100);
  CHECK(truth_mask(m, parse("[a]p")) == 0b111);
  CHECK(truth_mask(m, parse("<a>p")) == 0b010);
  CHECK(truth_mask(m, bottom()) == 0);
  CHECK(truth_mask(m, parse("false -> false")) == 0b111);
}
