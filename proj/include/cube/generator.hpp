#pragma once

#include <random>

#include "cube/typing.hpp"

namespace cube {

// Deterministic, seeded generator of well-typed terms. Works bottom-up by
// rule application: rejection sampling over raw terms almost never finds
// well-typed dependent terms.
class TermGen {
 public:
  struct Sample {
    Context ctx;
    TermPtr term;
    TermPtr type;
  };

  TermGen(SystemSpec sys, std::uint64_t seed, std::uint64_t fuel = kDefaultFuel);

  // A well-typed subject; beta and eta redexes are injected on purpose.
  Sample well_typed(int budget = 6);

  // A beta-eta-normal subject over a normal context.
  Sample normal(int budget = 6);

  const SystemSpec& system() const { return sys_; }

 private:
  std::size_t pick(std::size_t n);
  bool chance(unsigned percent);

  Context gen_context(int max_entries, int budget);
  std::optional<TermPtr> gen_type(const Context& ctx, SortKind s, int budget);
  std::optional<TermPtr> gen_of_type(const Context& ctx, const TermPtr& type, int budget);
  std::optional<TermPtr> gen_spine_of_type(const Context& ctx, const TermPtr& type, int budget);
  std::optional<std::pair<TermPtr, TermPtr>> gen_any(const Context& ctx, int budget);

  SystemSpec sys_;
  std::mt19937_64 rng_;
  std::uint64_t fuel_;
};

}  // namespace cube
