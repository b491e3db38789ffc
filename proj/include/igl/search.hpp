#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "igl/calculus.hpp"
#include "igl/model.hpp"
#include "igl/semantics.hpp"
#include "igl/syntax.hpp"

namespace igl {

// Cap on raw candidate structures examined per enumeration call; exceeding
// it throws ResourceLimitError. The default comfortably covers every model
// space up to 3 worlds with one forward character and a couple of atoms.
struct SearchLimits {
  std::uint64_t max_candidates = 50'000'000;
};

// Every saturated model over 1..max_worlds worlds that passes audit under g,
// with valuations drawn from `atoms`, deduplicated up to world renaming.
// Candidates are generated closed (preorder leq, monotone valuation,
// production-closed relations), filtered by audit, and canonically labeled,
// so the yield is deterministic for a fixed configuration.
std::vector<Model> enumerate_models(const Alphabet& alphabet, const GrammarSpec& g,
                                    const std::set<std::string>& atoms, int max_worlds,
                                    const SearchLimits& limits = {});

struct Countermodel {
  Model model;
  std::string world;
};

struct ValidUpTo {
  int bound = 0;
};

using SearchResult = std::variant<Countermodel, ValidUpTo>;

// Searches world counts in increasing order and returns the first audited
// model falsifying f, re-verified against the forcing relation before
// return; otherwise ValidUpTo{max_worlds}. Valuations range over the atoms
// of f only, which preserves completeness of the bounded search.
SearchResult find_countermodel(const Formula& f, const Alphabet& alphabet,
                               const GrammarSpec& g, int max_worlds,
                               const SearchLimits& limits = {});

// ---------------------------------------------------------------------------
// Formula pools.

// All formulas of depth 0 (atoms and bottom) and, for depth >= 1, every
// binary and modal combination over the depth-0 layer, in a fixed order.
std::vector<Formula> exhaustive_pool(const Alphabet& alphabet,
                                     const std::vector<std::string>& atoms, int depth);

// Seeded pseudo-random formulas; identical seeds reproduce the sequence.
class FormulaGenerator {
 public:
  FormulaGenerator(Alphabet alphabet, std::vector<std::string> atoms, std::uint64_t seed);
  Formula next(int max_depth);

 private:
  std::vector<std::string> atoms_;
  std::vector<Character> characters_;
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Soundness harness.
//
// Instantiates every catalog schema over a binding pool (exhaustive at
// depth 1, extended with seeded random formulas above) and evaluates each
// instance on every enumerated audited model. Character metavariables range
// over both polarities of the whole alphabet.

struct HarnessConfig {
  int max_worlds = 2;
  int instantiation_depth = 1;
  std::uint64_t seed = 0;
  std::vector<std::string> atoms = {"p", "q"};
  int random_pool_size = 32;  // extra formulas per pool when depth > 1
  std::size_t max_recorded_failures = 64;
  SearchLimits limits{};
};

struct HarnessFailure {
  std::string schema_name;
  Binding binding;
  Model model;
  std::string world;
};

struct HarnessReport {
  std::uint64_t axioms_checked = 0;
  std::uint64_t models_checked = 0;
  std::uint64_t failure_count = 0;
  std::vector<HarnessFailure> failures;  // capped at max_recorded_failures
};

HarnessReport soundness_harness(const AxiomCatalog& catalog, const GrammarSpec& g,
                                const HarnessConfig& config = {});

// Rule preservation over the enumerated model class: necessitation lifts
// formulas globally true on every model to boxed formulas globally true on
// every model, for each character of both polarities; modus ponens is
// checked per model.
struct PreservationReport {
  std::uint64_t nec_checks = 0;
  std::uint64_t mp_checks = 0;
  std::vector<std::string> violations;
};

PreservationReport rule_preservation_check(const Alphabet& alphabet, const GrammarSpec& g,
                                           int max_worlds, const std::vector<Formula>& sample,
                                           const SearchLimits& limits = {});

}  // namespace igl
