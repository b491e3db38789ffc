#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "igl/model.hpp"
#include "igl/syntax.hpp"

namespace igl {

// Forcing relation over a saturated, audited model. The clauses:
//   atoms from the valuation; bottom nowhere; disjunction and conjunction
//   pointwise; A -> B at w iff every leq-successor forcing A forces B;
//   <x>A at w iff some x-successor forces A; [x]A at w iff every x-successor
//   of every leq-successor forces A.
// Audit status is not rechecked here; on a model that fails audit the
// results carry no guarantees (in particular no monotonicity).

// Bit w is set iff the formula holds at world index w.
std::uint64_t truth_mask(const Model& m, const Formula& f);

bool satisfies(const Model& m, const std::string& world, const Formula& f);
bool globally_true(const Model& m, const Formula& f);

// True when some premise fails at the world or the conclusion holds there.
bool implies_at(const Model& m, const std::string& world,
                const std::vector<Formula>& premises, const Formula& conclusion);

}  // namespace igl
