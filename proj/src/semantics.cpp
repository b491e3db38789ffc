#include "igl/semantics.hpp"

#include <utility>

namespace igl {

namespace {

// Truth sets as world bitmasks, bottom up. Instantiated formulas share
// subtrees, so results are memoized per node within one evaluation.
class Evaluator {
 public:
  explicit Evaluator(const Model& m)
      : m_(m), full_(m.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m.size()) - 1) {}

  std::uint64_t eval(const Formula& f) {
    for (const auto& [id, mask] : memo_) {
      if (id == f.id()) return mask;
    }
    std::uint64_t out = 0;
    switch (f.kind()) {
      case Formula::Kind::Atom:
        out = m_.atom_mask(f.atom_name());
        break;
      case Formula::Kind::Bottom:
        out = 0;
        break;
      case Formula::Kind::Or:
        out = eval(f.left()) | eval(f.right());
        break;
      case Formula::Kind::And:
        out = eval(f.left()) & eval(f.right());
        break;
      case Formula::Kind::Impl: {
        // Fails at w iff some leq-successor forces the antecedent only.
        std::uint64_t bad = eval(f.left()) & ~eval(f.right()) & full_;
        for (int w = 0; w < m_.size(); ++w) {
          if ((m_.leq_row(w) & bad) == 0) out |= std::uint64_t{1} << w;
        }
        break;
      }
      case Formula::Kind::Dia: {
        std::uint64_t child = eval(f.child());
        for (int w = 0; w < m_.size(); ++w) {
          if (m_.edge_row(f.modal_char(), w) & child) out |= std::uint64_t{1} << w;
        }
        break;
      }
      case Formula::Kind::Box: {
        std::uint64_t child = eval(f.child());
        // ok marks worlds whose x-successors all force the operand.
        std::uint64_t ok = 0;
        for (int w = 0; w < m_.size(); ++w) {
          if ((m_.edge_row(f.modal_char(), w) & ~child & full_) == 0)
            ok |= std::uint64_t{1} << w;
        }
        for (int w = 0; w < m_.size(); ++w) {
          if ((m_.leq_row(w) & ~ok & full_) == 0) out |= std::uint64_t{1} << w;
        }
        break;
      }
    }
    memo_.emplace_back(f.id(), out);
    return out;
  }

 private:
  const Model& m_;
  std::uint64_t full_;
  std::vector<std::pair<const void*, std::uint64_t>> memo_;
};

}  // namespace

std::uint64_t truth_mask(const Model& m, const Formula& f) {
  require_declared(m.alphabet(), f);
  return Evaluator(m).eval(f);
}

bool satisfies(const Model& m, const std::string& world, const Formula& f) {
  int w = m.index_of(world);
  return (truth_mask(m, f) >> w) & 1u;
}

bool globally_true(const Model& m, const Formula& f) {
  std::uint64_t full = m.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m.size()) - 1;
  return truth_mask(m, f) == full;
}

bool implies_at(const Model& m, const std::string& world, const std::vector<Formula>& premises,
                const Formula& conclusion) {
  for (const auto& p : premises) {
    if (!satisfies(m, world, p)) return true;
  }
  return satisfies(m, world, conclusion);
}

}  // namespace igl
