#include "igl/search.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <utility>

namespace igl {

namespace {

struct Budget {
  std::uint64_t cap = 0;
  std::uint64_t used = 0;

  void tick() {
    if (++used > cap)
      throw ResourceLimitError("model enumeration exceeded the candidate budget (" +
                               std::to_string(cap) + " structures)");
  }
};

std::uint64_t full_mask(int n) { return n == 64 ? ~0ull : (1ull << n) - 1; }

// Advances the matrix to the lexicographically next bit pattern, cell (0,0)
// least significant; returns false once the all-set pattern wraps around.
// With skip_diagonal the diagonal is left untouched.
bool advance(RelMat& m, bool skip_diagonal) {
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) {
      if (skip_diagonal && i == j) continue;
      if (!m.at(i, j)) {
        m.set(i, j, true);
        return true;
      }
      m.set(i, j, false);
    }
  }
  return false;
}

bool advance(std::vector<RelMat>& rels) {
  for (auto& r : rels) {
    if (advance(r, false)) return true;
  }
  return false;
}

// All valuation masks closed upward along leq, ascending.
std::vector<std::uint64_t> monotone_masks(const RelMat& leq, Budget& budget) {
  int n = leq.size();
  std::uint64_t full = full_mask(n);
  std::vector<std::uint64_t> out;
  for (std::uint64_t mask = 0;; ++mask) {
    budget.tick();
    bool monotone = true;
    for (int w = 0; w < n && monotone; ++w) {
      if ((mask >> w) & 1u) monotone = (leq.row(w) & ~mask & full) == 0;
    }
    if (monotone) out.push_back(mask);
    if (mask == full) break;
  }
  return out;
}

// Lexicographically minimal bit encoding of (leq, relations, valuation)
// over all relabelings of the worlds; equal keys mean isomorphic models.
std::string canonical_key(const Model& m, const std::vector<std::string>& bases,
                          const std::vector<std::string>& atoms) {
  int n = m.size();
  std::vector<RelMat> rels;
  rels.push_back(m.leq_matrix());
  for (const auto& b : bases) rels.push_back(m.edge_matrix(forward_char(b)));
  std::vector<std::uint64_t> masks;
  for (const auto& a : atoms) masks.push_back(m.atom_mask(a));

  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::string best;
  std::string key;
  do {
    key.clear();
    for (const auto& r : rels) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
          key.push_back(r.at(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)])
                            ? '1'
                            : '0');
      }
    }
    for (auto mask : masks) {
      for (int i = 0; i < n; ++i)
        key.push_back((mask >> perm[static_cast<std::size_t>(i)]) & 1u ? '1' : '0');
    }
    if (best.empty() || key < best) best = key;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Every audited model with exactly n worlds, one representative per
// isomorphism class, in generation order. Candidates are built closed by
// construction for leq and the valuation; the audit filters the rest.
void enumerate_size(const Alphabet& alphabet, const GrammarSpec& g,
                    const std::vector<std::string>& atoms, int n, Budget& budget,
                    std::vector<Model>& out) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) names.push_back("w" + std::to_string(i));
  std::vector<std::string> bases(alphabet.forward_names().begin(),
                                 alphabet.forward_names().end());

  std::set<std::string> seen;
  RelMat leq(n);
  leq.close_reflexive();
  while (true) {
    budget.tick();
    if (leq.transitive()) {
      auto vals = monotone_masks(leq, budget);
      Model frame(alphabet, names);
      frame.set_leq_matrix(leq);
      std::vector<RelMat> rels(bases.size(), RelMat(n));
      while (true) {
        budget.tick();
        for (std::size_t k = 0; k < bases.size(); ++k) frame.set_edge_matrix(bases[k], rels[k]);
        if (audit(frame, g).ok()) {
          std::vector<std::size_t> idx(atoms.size(), 0);
          while (true) {
            budget.tick();
            Model candidate = frame;
            for (std::size_t k = 0; k < atoms.size(); ++k) {
              for (int w = 0; w < n; ++w) {
                if ((vals[idx[k]] >> w) & 1u)
                  candidate.add_atom(names[static_cast<std::size_t>(w)], atoms[k]);
              }
            }
            if (seen.insert(canonical_key(candidate, bases, atoms)).second)
              out.push_back(std::move(candidate));
            std::size_t k = 0;
            for (; k < idx.size(); ++k) {
              if (++idx[k] < vals.size()) break;
              idx[k] = 0;
            }
            if (k == idx.size()) break;
          }
        }
        if (!advance(rels)) break;
      }
    }
    if (!advance(leq, true)) break;
  }
}

}  // namespace

std::vector<Model> enumerate_models(const Alphabet& alphabet, const GrammarSpec& g,
                                    const std::set<std::string>& atoms, int max_worlds,
                                    const SearchLimits& limits) {
  if (max_worlds < 1) throw InputError("max_worlds must be at least 1");
  if (max_worlds > 64) throw InputError("models are capped at 64 worlds");
  require_declared(alphabet, g);
  std::vector<std::string> atom_list(atoms.begin(), atoms.end());
  Budget budget{limits.max_candidates};
  std::vector<Model> out;
  for (int n = 1; n <= max_worlds; ++n) enumerate_size(alphabet, g, atom_list, n, budget, out);
  return out;
}

SearchResult find_countermodel(const Formula& f, const Alphabet& alphabet, const GrammarSpec& g,
                               int max_worlds, const SearchLimits& limits) {
  if (max_worlds < 1) throw InputError("max_worlds must be at least 1");
  if (max_worlds > 64) throw InputError("models are capped at 64 worlds");
  require_declared(alphabet, f);
  require_declared(alphabet, g);

  auto atom_set = atom_names(f);
  std::vector<std::string> atom_list(atom_set.begin(), atom_set.end());
  Budget budget{limits.max_candidates};
  for (int n = 1; n <= max_worlds; ++n) {
    std::vector<Model> models;
    enumerate_size(alphabet, g, atom_list, n, budget, models);
    for (const auto& m : models) {
      std::uint64_t mask = truth_mask(m, f);
      if (mask == full_mask(m.size())) continue;
      const std::string& world = m.world_name(std::countr_one(mask));
      if (!audit(m, g).ok() || satisfies(m, world, f))
        throw Error("countermodel failed re-verification");
      return Countermodel{m, world};
    }
  }
  return ValidUpTo{max_worlds};
}

// ---------------------------------------------------------------------------
// Formula pools.

std::vector<Formula> exhaustive_pool(const Alphabet& alphabet,
                                     const std::vector<std::string>& atoms, int depth) {
  if (depth < 0) throw InputError("pool depth must be nonnegative");
  std::vector<Formula> layer0;
  for (const auto& a : atoms) layer0.push_back(atom(a));
  layer0.push_back(bottom());
  if (depth == 0) return layer0;

  std::vector<Formula> out = layer0;
  for (const auto& l : layer0) {
    for (const auto& r : layer0) {
      out.push_back(disj(l, r));
      out.push_back(conj(l, r));
      out.push_back(impl(l, r));
    }
  }
  for (const auto& x : alphabet.characters()) {
    for (const auto& c : layer0) {
      out.push_back(dia(x, c));
      out.push_back(box(x, c));
    }
  }
  return out;
}

FormulaGenerator::FormulaGenerator(Alphabet alphabet, std::vector<std::string> atoms,
                                   std::uint64_t seed)
    : atoms_(std::move(atoms)), characters_(alphabet.characters()), rng_(seed) {}

Formula FormulaGenerator::next(int max_depth) {
  // Leaves at the depth floor and with probability 1/8 above it; draws are
  // sequenced through named locals so the formula shape depends only on the
  // seed, not on argument evaluation order.
  if (max_depth <= 0 || rng_() % 8 == 0) {
    std::size_t pick = rng_() % (atoms_.size() + 1);
    return pick < atoms_.size() ? atom(atoms_[pick]) : bottom();
  }
  switch (rng_() % 5) {
    case 0: {
      Formula l = next(max_depth - 1);
      Formula r = next(max_depth - 1);
      return disj(l, r);
    }
    case 1: {
      Formula l = next(max_depth - 1);
      Formula r = next(max_depth - 1);
      return conj(l, r);
    }
    case 2: {
      Formula l = next(max_depth - 1);
      Formula r = next(max_depth - 1);
      return impl(l, r);
    }
    case 3: {
      Character x = characters_[rng_() % characters_.size()];
      return dia(x, next(max_depth - 1));
    }
    default: {
      Character x = characters_[rng_() % characters_.size()];
      return box(x, next(max_depth - 1));
    }
  }
}

// ---------------------------------------------------------------------------
// Soundness harness.

HarnessReport soundness_harness(const AxiomCatalog& catalog, const GrammarSpec& g,
                                const HarnessConfig& config) {
  if (config.max_worlds < 1) throw InputError("max_worlds must be at least 1");
  if (config.instantiation_depth < 0) throw InputError("instantiation depth must be nonnegative");
  const Alphabet& alphabet = catalog.alphabet();
  require_declared(alphabet, g);

  std::set<std::string> atom_set(config.atoms.begin(), config.atoms.end());
  std::vector<Model> models =
      enumerate_models(alphabet, g, atom_set, config.max_worlds, config.limits);
  std::vector<std::uint64_t> fulls;
  for (const auto& m : models) fulls.push_back(full_mask(m.size()));

  std::vector<Formula> pool =
      exhaustive_pool(alphabet, config.atoms, std::min(config.instantiation_depth, 1));
  if (config.instantiation_depth > 1) {
    FormulaGenerator gen(alphabet, config.atoms, config.seed);
    for (int i = 0; i < config.random_pool_size; ++i)
      pool.push_back(gen.next(config.instantiation_depth));
  }
  std::vector<Character> chars = alphabet.characters();

  HarnessReport report;
  report.models_checked = models.size();

  for (const auto& entry : catalog.entries()) {
    auto fset = formula_metavars(entry.schema);
    auto cset = char_metavars(entry.schema);
    std::vector<std::string> fvars(fset.begin(), fset.end());
    std::vector<std::string> cvars(cset.begin(), cset.end());
    std::vector<std::size_t> fidx(fvars.size(), 0);
    std::vector<std::size_t> cidx(cvars.size(), 0);
    while (true) {
      Binding binding;
      for (std::size_t k = 0; k < fvars.size(); ++k) binding.formulas.emplace(fvars[k], pool[fidx[k]]);
      for (std::size_t k = 0; k < cvars.size(); ++k)
        binding.characters.emplace(cvars[k], chars[cidx[k]]);
      Formula instance = instantiate(entry.schema, binding);
      ++report.axioms_checked;
      for (std::size_t mi = 0; mi < models.size(); ++mi) {
        std::uint64_t mask = truth_mask(models[mi], instance);
        if (mask == fulls[mi]) continue;
        ++report.failure_count;
        if (report.failures.size() < config.max_recorded_failures) {
          report.failures.push_back({entry.name, binding, models[mi],
                                     models[mi].world_name(std::countr_one(mask))});
        }
      }
      std::size_t k = 0;
      for (; k < cidx.size(); ++k) {
        if (++cidx[k] < chars.size()) break;
        cidx[k] = 0;
      }
      if (k < cidx.size()) continue;
      for (k = 0; k < fidx.size(); ++k) {
        if (++fidx[k] < pool.size()) break;
        fidx[k] = 0;
      }
      if (k == fidx.size()) break;
    }
  }
  return report;
}

PreservationReport rule_preservation_check(const Alphabet& alphabet, const GrammarSpec& g,
                                           int max_worlds, const std::vector<Formula>& sample,
                                           const SearchLimits& limits) {
  std::set<std::string> atoms;
  for (const auto& f : sample) {
    auto names = atom_names(f);
    atoms.insert(names.begin(), names.end());
  }
  std::vector<Model> models = enumerate_models(alphabet, g, atoms, max_worlds, limits);
  PreservationReport report;

  // Necessitation: a formula globally true on every enumerated model must
  // stay globally true under every box.
  for (const auto& f : sample) {
    bool valid = std::all_of(models.begin(), models.end(),
                             [&](const Model& m) { return globally_true(m, f); });
    if (!valid) continue;
    for (const auto& x : alphabet.characters()) {
      ++report.nec_checks;
      Formula boxed = box(x, f);
      for (std::size_t mi = 0; mi < models.size(); ++mi) {
        if (!globally_true(models[mi], boxed))
          report.violations.push_back("necessitation: " + print(boxed) + " fails on model " +
                                      std::to_string(mi));
      }
    }
  }

  // Modus ponens is exact per model: when a premise and its implication are
  // globally true on a model, the conclusion must be too.
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const Model& m = models[mi];
    for (const auto& a : sample) {
      if (!globally_true(m, a)) continue;
      for (const auto& b : sample) {
        ++report.mp_checks;
        if (globally_true(m, impl(a, b)) && !globally_true(m, b))
          report.violations.push_back("modus ponens: " + print(b) + " fails on model " +
                                      std::to_string(mi));
      }
    }
  }
  return report;
}

}  // namespace igl
