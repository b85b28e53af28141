#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "placeq/formula.hpp"

namespace placeq {

struct Assignment {
  std::map<Var, Rat> vec;
  std::map<Var, ValInt> val;
};

/** Exact truth of a quantifier-free formula under a total assignment of its
 * free variables. Implemented by substitution: every ground atom folds to a
 * truth value at construction, so this shares one evaluation path with the
 * rest of the engine. */
bool eval_qf(const Formula& f, const Assignment& asg);

/** Substitutes the assignment; remaining variables stay symbolic. */
Formula plug(const Formula& f, const Assignment& asg);

/** Deterministic sample stream for differential testing: small rationals,
 * the constants of the formula, and points p-adically or archimedeanly
 * close to them. */
class Sampler {
 public:
  Sampler(const Formula& f, std::uint64_t seed);

  Rat next_rat();
  ValInt next_val();
  /** Assignment for the given variables (sorts from the formula's usage). */
  Assignment next_assignment(const std::map<Var, Sort>& vars);

  const std::vector<Rat>& specials() const { return specials_; }
  const std::vector<Int>& val_specials() const { return val_specials_; }

 private:
  std::vector<Rat> specials_;
  std::vector<Int> val_specials_;
  std::uint64_t state_;
  std::uint64_t rnd();
};

struct EquivReport {
  bool equivalent = true;
  int samples = 0;
  std::optional<Assignment> counterexample;
};

/** Compares two quantifier-free formulas on sampled assignments of the union
 * of their free variables. */
EquivReport check_equiv_sampled(const Formula& f, const Formula& g,
                                int samples, std::uint64_t seed);

/** Bounded deterministic search for a satisfying assignment: candidate grids
 * per variable (specials plus fractions of height <= bound), capped product
 * enumeration, then random samples. */
std::optional<Assignment> search_witness(const Formula& f, int bound,
                                         std::uint64_t seed, int cap = 20000);

}  // namespace placeq
