#pragma once

#include <cstdint>

#include "placeq/eval.hpp"
#include "placeq/formula.hpp"

namespace placeq {

/** Definability artifacts at the real place. Each emits a fixed schema:
 * OrderFromL captures x <= y with a single L atom, NonNeg captures 0 <= x,
 * and MultiplicationFromM captures x*y = z, which is exactly why the
 * decision pipeline refuses M there. */
enum class GadgetKind { OrderFromL, NonNeg, MultiplicationFromM };

/** The schema over variables x (NonNeg), x, y (OrderFromL) or x, y, z. */
Formula emit_gadget(GadgetKind kind);

/** Compares the gadget against its ground-truth relation: a deterministic
 * sign-and-zero grid first, then seeded random rationals up to the sample
 * count. The report carries the first counterexample, if any. */
EquivReport verify_gadget(GadgetKind kind, int samples, std::uint64_t seed);

}  // namespace placeq
